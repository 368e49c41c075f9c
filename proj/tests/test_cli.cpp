#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace {

std::string g_binary;

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    RunResult r;
    std::string cmd = g_binary + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
    int rc = pclose(p);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

} // namespace

TEST_CASE("theory fiber emits the exact law") {
    auto r = run("theory fiber --q 5");
    CHECK(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["q"] == 5);
    CHECK(j["law"]["0"] == "25/93");
    CHECK(j["law"]["1"] == "27/62");
    CHECK(j["law"]["2"] == "5/31");
    CHECK(j["law"]["3"] == "25/186");
    CHECK(j["mean"] == "36/31");
}

TEST_CASE("theory mean with default and explicit base points") {
    auto r = run("theory mean --q 5");
    CHECK(r.status == 0);
    CHECK(nlohmann::json::parse(r.out)["mean"] == "216/31");
    auto r1 = run("theory mean --q 5 --base-points 1");
    CHECK(nlohmann::json::parse(r1.out)["mean"] == "36/31");
}

TEST_CASE("csv and json renderings carry identical numeric content") {
    auto j = nlohmann::json::parse(run("theory fiber --q 7").out);
    auto csv = run("theory fiber --q 7 --format csv").out;
    for (auto& [k, v] : j["law"].items()) {
        std::string line = "7," + k + "," + v.get<std::string>();
        CHECK(csv.find(line) != std::string::npos);
    }
    CHECK(csv.find("7,mean," + j["mean"].get<std::string>()) != std::string::npos);
}

TEST_CASE("conjecture agrees with the closed form and matches theory at n = 3") {
    auto r = run("conjecture --n 4 --q 5");
    CHECK(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["mean_mass_model"] == "191/161");
    CHECK(j["mean_closed_form"] == "191/161");
    CHECK(j["agree"] == true);
    CHECK(j["status"] == "conjectural");

    // wild for the mass model (char = n), but the closed form stands
    auto n5 = nlohmann::json::parse(run("conjecture --n 5 --q 5").out);
    CHECK(n5["mean_closed_form"] == "996/811");
    CHECK_FALSE(n5.contains("law"));
    auto n5t = nlohmann::json::parse(run("conjecture --n 5 --q 7").out);
    CHECK(n5t["agree"] == true);

    auto theory = nlohmann::json::parse(run("theory fiber --q 5").out);
    auto n3 = nlohmann::json::parse(run("conjecture --n 3 --q 5").out);
    CHECK(n3["law"].dump() == theory["law"].dump()); // byte-for-byte
    CHECK(n3["status"] == "proven");
}

TEST_CASE("invalid conjecture parameters are refused") {
    CHECK(run("conjecture --n 3 --q 12").status != 0); // not a prime power
    CHECK(run("conjecture --n 9 --q 11").status != 0); // n out of range
}

TEST_CASE("verify passes on a fresh build") {
    auto r = run("verify");
    CHECK(r.status == 0);
    CHECK(r.out.find("[PASS]") != std::string::npos);
    CHECK(r.out.find("[FAIL]") == std::string::npos);
}

TEST_CASE("sample reports are byte-identical across worker counts and runs") {
    std::string base = "sample --q 5 --m 2 --count 400 --seed 31337 --ensemble squarefree-disc";
    auto a = run(base + " --workers 1");
    auto b = run(base + " --workers 8");
    auto c = run(base + " --workers 1");
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    auto j = nlohmann::json::parse(a.out);
    CHECK(j["models"] == 400);
    CHECK(j["weil_violations"] == 0);
    CHECK(j["config"].contains("seed"));
    CHECK_FALSE(j["config"].contains("workers"));
}

TEST_CASE("enumerate emits the locked model count") {
    auto r = run("enumerate --q 5 --m 1 --ensemble squarefree-disc");
    CHECK(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["models"] == 49920);
    CHECK(j["weil_violations"] == 0);
    CHECK(j["genus_undetermined"] == 0);
}

TEST_CASE("local-density census") {
    auto r = run("local-density --q 5 --precision 1");
    CHECK(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["total"] == 25);
    CHECK(j["types"]["split"]["density"] == "2/25");
    CHECK(j["undetermined"] == "1/5");
}

TEST_CASE("usage errors exit nonzero") {
    CHECK(run("theory fiber").status != 0);          // missing --q
    CHECK(run("sample --q 5 --m 2").status != 0);    // missing count/seed
    CHECK(run("theory fiber --q 6").status != 0);    // invalid q
    CHECK(run("nonsense").status != 0);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-trigstat-binary>\n");
        return 2;
    }
    g_binary = argv[1];
    doctest::Context ctx;
    ctx.applyCommandLine(argc - 1, argv + 1);
    return ctx.run();
}
