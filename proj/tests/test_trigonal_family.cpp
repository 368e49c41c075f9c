#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "trigstat/trigonal_family.hpp"

#include <cmath>
#include <map>
#include <numeric>

using namespace trigstat;

namespace {

TrigonalModel model(u64 q, int m, std::initializer_list<long long> a, std::initializer_list<long long> b) {
    return TrigonalModel(q, m, Poly::from_ints(q, a), Poly::from_ints(q, b));
}

} // namespace

TEST_CASE("discriminant examples") {
    CHECK(discriminant(model(5, 1, {0, 1}, {1})) == Poly::from_ints(5, {3, 0, 0, 1})); // t^3 + 3
    CHECK(discriminant(model(5, 1, {}, {0, 1})) == Poly::from_ints(5, {0, 0, 3}));     // 3 t^2
    CHECK(discriminant(model(5, 1, {}, {})).is_zero());
}

TEST_CASE("global irreducibility") {
    CHECK(is_irreducible_global(model(5, 1, {0, 1}, {1})));
    CHECK_FALSE(is_irreducible_global(model(5, 1, {0, -1}, {}))); // root y = 0
    // B = -(t+1)^3: root y = t + 1
    CHECK_FALSE(is_irreducible_global(model(5, 1, {}, {-1, -3, -3, -1})));
    // degree bound requires m + 1 sample points
    CHECK_THROWS(is_irreducible_global(model(5, 5, {0, 1}, {1})));
}

TEST_CASE("constant cubic extension detection") {
    // constant coefficients: the extension is constant exactly when the
    // residue cubic is irreducible over F_q
    u64 q = 5;
    for (u64 a = 0; a < q; ++a)
        for (u64 b = 0; b < q; ++b) {
            TrigonalModel M(q, 1, Poly(q, {a}), Poly(q, {b}));
            if (discriminant(M).is_zero()) continue;
            bool want = residue_cubic_type(Fp(a, q), Fp(b, q)) == ResidueCubicType::irreducible_cubic;
            CHECK(is_constant_field_extension(M) == want);
        }

    // whole m = 1 box: (q^4 - 1)/3 models define the constant extension
    u64 constants = 0;
    std::vector<u64> ac(3, 0), bc(4, 0);
    for (;;) {
        TrigonalModel M(q, 1, Poly(q, ac), Poly(q, bc));
        if (!discriminant(M).is_zero() && is_irreducible_global(M) && is_constant_field_extension(M))
            ++constants;
        std::size_t d = 0;
        bool done = false;
        for (;;) {
            u64* s = d < ac.size() ? &ac[d] : &bc[d - ac.size()];
            if (++*s < q) break;
            *s = 0;
            if (++d == 7) { done = true; break; }
        }
        if (done) break;
    }
    CHECK(constants == (q * q * q * q - 1) / 3);
}

TEST_CASE("model check on the worked example") {
    auto c = check_model(model(5, 1, {0, 1}, {1}));
    CHECK(c.valid());
    CHECK_FALSE(check_model(model(5, 1, {0, -1}, {})).valid());  // reducible
    CHECK_FALSE(check_model(model(5, 1, {}, {})).disc_nonzero);  // degenerate
    CHECK_FALSE(check_model(model(5, 1, {1}, {1})).valid());     // constant extension
}

TEST_CASE("fiber counts of y^3 + t y + 1 over F_5") {
    auto M = model(5, 1, {0, 1}, {1});
    CHECK(fiber_count(M, Place::finite(Fp(1, 5))) == 0);
    CHECK(fiber_count(M, Place::finite(Fp(3, 5))) == 2);
    CHECK(fiber_count(M, Place::at_infinity(5)) == 2);

    auto s = point_count(M);
    CHECK(s.fibers == std::vector<int>({1, 0, 0, 2, 1, 2}));
    CHECK(s.total == 6);
    REQUIRE(s.genus.has_value());
    CHECK(*s.genus == 0);
    CHECK(s.disc_degree_exact);
    CHECK(s.disc_divisor_degree == 4);
    CHECK(s.weil_bound_holds(5));
}

TEST_CASE("fiber counts of y^3 = t over F_5") {
    // y^3 + t = 0: cube map is a bijection for q = 2 mod 3
    auto M = model(5, 1, {}, {0, 1});
    auto s = point_count(M);
    CHECK(s.fibers == std::vector<int>({1, 1, 1, 1, 1, 1}));
    CHECK(s.total == 6);
    REQUIRE(s.genus.has_value());
    CHECK(*s.genus == 0); // rational curve, nonsquarefree disc 3t^2
    CHECK(s.weil_bound_holds(5));
}

TEST_CASE("genus determination") {
    CHECK(genus(model(5, 1, {0, 1}, {1})) == 0);
    CHECK(genus(model(5, 1, {}, {0, 1})) == 0);
    // y^3 = t^2 (t+1): disc 3t^4(t+1)^2, cusp at 0 contributes 2,
    // node-free elliptic-type cover
    auto g = genus(model(5, 1, {}, {0, 0, -1, -1}));
    REQUIRE(g.has_value());
    CHECK(*g >= 0);
}

TEST_CASE("fiber counts invariant under y-rescaling") {
    // (A, B) -> (c^4 A, c^6 B) presents the same cover
    u64 q = 7;
    auto M = model(q, 1, {3, 2, 1}, {1, 0, 5, 2});
    REQUIRE(check_model(M).valid());
    auto base = point_count(M);
    for (u64 c = 2; c < q; ++c) {
        Fp c4 = Fp(c, q).pow(4), c6 = Fp(c, q).pow(6);
        TrigonalModel M2(q, 1, M.A * c4, M.B * c6);
        auto s = point_count(M2);
        CHECK(s.fibers == base.fibers);
        CHECK(s.genus == base.genus);
    }
}

TEST_CASE("exhaustive enumeration counts are locked (q = 5, m = 1)") {
    // regression values from the first exhaustive run
    CHECK(enumerate_models(5, 1, Ensemble::all, nullptr) == 75000);
    CHECK(enumerate_models(5, 1, Ensemble::squarefree_disc, nullptr) == 49920);
    // every y-rescaling orbit has size 2 at q = 5 (c^4 = 1, c^6 in {1, 4})
    CHECK(enumerate_models(5, 1, Ensemble::all, nullptr, true) == 37500);
    CHECK(enumerate_models(5, 1, Ensemble::squarefree_disc, nullptr, true) == 24960);
    // feasibility guard
    CHECK_THROWS(enumerate_models(5, 3, Ensemble::all, nullptr));
}

TEST_CASE("enumerated models satisfy the family invariants") {
    u64 n = 0;
    enumerate_models(5, 1, Ensemble::squarefree_disc, [&](const TrigonalModel& M) {
        if (++n % 37 != 0) return; // spot-check a deterministic slice
        Poly D = discriminant(M);
        CHECK(!D.is_zero());
        CHECK(is_squarefree(D));
        auto info = disc_divisor_info(M);
        CHECK(info.exact);
        CHECK(info.d_infinity <= 1);
        CHECK((info.degree % 2) == 0); // deg disc + d_inf is even
        auto s = point_count(M);
        CHECK(s.total == std::accumulate(s.fibers.begin(), s.fibers.end(), 0));
        CHECK(s.weil_bound_holds(5));
    });
    CHECK(n == 49920);
}

TEST_CASE("sampling is deterministic and worker-independent") {
    auto r1 = sample_models(5, 2, 60, 42, Ensemble::squarefree_disc, 1);
    auto r2 = sample_models(5, 2, 60, 42, Ensemble::squarefree_disc, 4);
    auto r3 = sample_models(5, 2, 60, 42, Ensemble::squarefree_disc, 0);
    REQUIRE(r1.size() == 60);
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK(r1[i].model.A == r2[i].model.A);
        CHECK(r1[i].model.B == r2[i].model.B);
        CHECK(r1[i].model.A == r3[i].model.A);
        CHECK(r1[i].summary.fibers == r2[i].summary.fibers);
        CHECK(r1[i].summary.total == r3[i].summary.total);
    }
    // a different seed gives a different stream
    auto r4 = sample_models(5, 2, 60, 43, Ensemble::squarefree_disc, 2);
    bool same = true;
    for (std::size_t i = 0; i < r1.size(); ++i)
        if (!(r1[i].model.A == r4[i].model.A && r1[i].model.B == r4[i].model.B)) same = false;
    CHECK_FALSE(same);
}

TEST_CASE("sampled models are valid and satisfy Weil") {
    auto rs = sample_models(5, 2, 200, 7, Ensemble::squarefree_disc);
    for (auto& s : rs) {
        CHECK(check_model(s.model).valid());
        REQUIRE(s.summary.genus.has_value());
        CHECK(s.summary.weil_bound_holds(5));
        CHECK(s.summary.total <= 18);
    }
}

TEST_CASE("sampled fiber histogram matches exhaustive frequencies (3 sigma)") {
    u64 q = 5;
    // exhaustive fiber-at-0 frequencies over the squarefree ensemble
    std::map<int, u64> exact;
    u64 total = 0;
    enumerate_models(q, 1, Ensemble::squarefree_disc, [&](const TrigonalModel& M) {
        exact[fiber_count(M, Place::finite(Fp(0, q)))]++;
        ++total;
    });
    REQUIRE(total == 49920);

    u64 n = 12000;
    std::map<int, u64> hist;
    for (auto& s : sample_models(q, 1, n, 20240817, Ensemble::squarefree_disc))
        hist[s.summary.fibers[0]]++;
    for (int k = 0; k <= 3; ++k) {
        double p = static_cast<double>(exact[k]) / static_cast<double>(total);
        double ph = static_cast<double>(hist[k]) / static_cast<double>(n);
        double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
        CHECK(std::abs(ph - p) <= 3 * sigma + 1e-12);
    }
}

TEST_CASE("relative density matching") {
    u64 q = 5;
    auto M = model(q, 1, {0, 1}, {1}); // fibers (1,0,0,2,1,2)
    LocalConditions semisplit_at0{{Place::finite(Fp(0, q)), SplittingType::semisplit}};
    LocalConditions inert_at1{{Place::finite(Fp(1, q)), SplittingType::inert}};
    LocalConditions both = semisplit_at0;
    both.insert(inert_at1.begin(), inert_at1.end());
    CHECK(matches_conditions(M, semisplit_at0));
    CHECK(matches_conditions(M, both));
    CHECK_FALSE(matches_conditions(M, {{Place::finite(Fp(0, q)), SplittingType::split}}));

    auto est = empirical_relative_density(q, 1, semisplit_at0, semisplit_at0, Ensemble::all, 500, 99, 2);
    CHECK(est.sigma_count == est.sigma_prime_count);
    REQUIRE(est.ratio().has_value());
    CHECK(*est.ratio() == Rat(1));
    auto est2 = empirical_relative_density(q, 1, semisplit_at0, semisplit_at0, Ensemble::all, 500, 99, 1);
    CHECK(est2.sigma_count == est.sigma_count); // worker-independent
}
