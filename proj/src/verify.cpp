#include "trigstat/verify.hpp"

#include <sstream>

#include "trigstat/dist.hpp"
#include "trigstat/local_classifier.hpp"
#include "trigstat/sn_mass.hpp"
#include "trigstat/trigonal_family.hpp"

namespace trigstat {

namespace {

struct Suite {
    std::vector<CheckResult> results;

    void check(const std::string& name, bool pass, const std::string& detail = "") {
        results.push_back({name, pass, pass ? "" : detail});
    }
};

std::string rs(const Rat& r) { return rat_str(r); }

} // namespace

std::vector<CheckResult> run_verification() {
    Suite s;

    {
        auto d5 = fiber_law(5);
        bool ok = d5.mass(0) == rat(25, 93) && d5.mass(1) == rat(27, 62) &&
                  d5.mass(2) == rat(5, 31) && d5.mass(3) == rat(25, 186);
        auto d7 = fiber_law(7);
        ok = ok && d7.mass(0) == rat(49, 171) && d7.mass(1) == rat(17, 38) &&
             d7.mass(2) == rat(7, 57) && d7.mass(3) == rat(49, 342);
        s.check("fiber law exact values (q = 5, 7)", ok);
    }

    {
        bool ok = true;
        std::ostringstream d;
        for (u64 q : {5ull, 7ull, 11ull, 13ull, 17ull}) {
            Rat qq = rat_u(q);
            Rat want = qq + 2 - 1 / (qq * qq + qq + 1);
            Rat got = sum_law(q, static_cast<long>(q) + 1).mean();
            if (got != want) { ok = false; d << "q=" << q << ": " << rs(got) << " != " << rs(want) << " "; }
            if (mean_total_base(q, static_cast<long>(q) + 1) != want) ok = false;
        }
        s.check("total point count mean = q + 2 - 1/(q^2+q+1)", ok, d.str());
    }

    {
        bool ok = true;
        for (u64 q : {5ull, 7ull, 11ull})
            ok = ok && fiber_law_conditional_squarefree(q).mean() == rat_u(q + 2, q + 1);
        s.check("conditional squarefree law mean = (q+2)/(q+1)", ok);
    }

    {
        bool ok = true;
        std::ostringstream d;
        for (u64 q : {5ull, 7ull, 11ull, 13ull}) {
            if (chart_total_mass(q) != rat_u(q * q + q + 1, q * q)) { ok = false; d << "total mass q=" << q << " "; }
            auto cmp = chart_masses_n3(q);
            if (!cmp.all_match) { ok = false; d << "chart mismatch at q=" << q << ": " << cmp.diagnostics; }
        }
        s.check("chart reproduction from S_3 pair classes (both residues mod 3)", ok, d.str());
    }

    {
        bool ok = true;
        for (u64 q : {5ull, 7ull, 11ull, 13ull}) ok = ok && conjectural_fiber_law(3, q) == fiber_law(q);
        s.check("n = 3 mass model law equals the fiber law", ok);
    }

    {
        bool ok = true;
        for (u64 q : {5ull, 7ull, 11ull}) {
            Rat qq = rat_u(q);
            ok = ok && expected_fiber_partition_formula(4, q) ==
                           1 + (qq * qq + qq) / (qq * qq * qq + qq * qq + 2 * qq + 1);
            Rat q2 = qq * qq, q3 = q2 * qq, q4 = q3 * qq;
            ok = ok && expected_fiber_partition_formula(5, q) ==
                           1 + (q3 + 2 * q2 + 2 * qq) / (q4 + q3 + 2 * q2 + 2 * qq + 1);
        }
        s.check("partition-formula closed forms at n = 4, 5", ok);
    }

    {
        bool ok = true;
        for (int n : {2, 3, 4, 5}) {
            u64 q = 7;
            if (q <= static_cast<u64>(n)) continue;
            ok = ok && conjectural_fiber_law(n, q).mean() == expected_fiber_partition_formula(n, q);
        }
        s.check("mass-model mean equals partition-formula mean (n <= 5)", ok);
    }

    {
        bool ok = true;
        for (int n : {2, 3, 4, 5})
            for (const Perm& y : symmetric_group(n))
                for (u64 q : {5ull, 7ull}) {
                    if (q <= static_cast<u64>(n)) continue;
                    if (count_conjugators(y, q) != centralizer_size(y.cycle_type())) ok = false;
                }
        s.check("conjugator counts equal centralizer sizes (n <= 5)", ok);
    }

    {
        u64 q = 5;
        Place z0 = Place::finite(Fp(0, q)), z1 = Place::finite(Fp(1, q));
        LocalConditions sigma{{z0, SplittingType::split}, {z1, SplittingType::inert}};
        bool ok = c_sigma(sigma, q) == rat(1, 18);
        LocalConditions a{{z0, SplittingType::ramified}};
        LocalConditions b{{z1, SplittingType::totally_ramified}};
        LocalConditions ab = a;
        ab.insert(b.begin(), b.end());
        ok = ok && c_sigma(ab, q) == c_sigma(a, q) * c_sigma(b, q);
        ok = ok && relative_density(a, LocalConditions{{z0, SplittingType::split}}, q) == rat(6, 5);
        s.check("chart mass products and relative densities", ok);
    }

    {
        auto d = local_type_density(5, 1);
        bool ok = d.total == 25 && d.density(SplittingType::split) == rat(2, 25) &&
                  d.density(SplittingType::semisplit) == rat(2, 5) &&
                  d.density(SplittingType::inert) == rat(8, 25) && d.undetermined() == rat(1, 5);
        s.check("local type census at precision 1 (q = 5)", ok);
    }

    {
        TrigonalModel M(5, 1, Poly::from_ints(5, {0, 1}), Poly::from_ints(5, {1}));
        auto sum = point_count(M);
        bool ok = sum.fibers == std::vector<int>({1, 0, 0, 2, 1, 2}) && sum.total == 6 &&
                  sum.genus && *sum.genus == 0 && sum.weil_bound_holds(5);
        s.check("worked curve y^3 + t y + 1 over F_5", ok);
    }

    return s.results;
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (auto& r : results)
        if (!r.pass) return false;
    return true;
}

} // namespace trigstat
