#ifndef TRIGSTAT_TRIGONAL_FAMILY_HPP
#define TRIGSTAT_TRIGONAL_FAMILY_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "trigstat/field_poly.hpp"
#include "trigstat/local_classifier.hpp"
#include "trigstat/rational.hpp"

namespace trigstat {

// A trigonal curve model y^3 + A(t) y + B(t) over F_q with the
// balanced height bounds deg A <= 2m, deg B <= 3m.
struct TrigonalModel {
    u64 q = 0;
    int m = 0;
    Poly A, B;

    TrigonalModel(u64 q_, int m_, Poly A_, Poly B_);
};

// finitely many local splitting conditions at distinct rational places
using LocalConditions = std::map<Place, SplittingType>;

enum class Ensemble { all, squarefree_disc };
const char* to_string(Ensemble);
std::optional<Ensemble> ensemble_from_string(const std::string&);

// -4 A^3 - 27 B^2
Poly discriminant(const Poly& A, const Poly& B);
inline Poly discriminant(const TrigonalModel& M) { return discriminant(M.A, M.B); }

// true iff y^3 + A y + B has no root in F_q[t]. Any such root is a
// polynomial of degree <= m, reconstructed by interpolation through
// m + 1 sample points and verified exactly. Requires m + 1 <= q.
bool is_irreducible_global(const TrigonalModel& M);

// true iff the extension is the constant cubic extension F_{q^3}(t),
// i.e. y^3 + A y + B has a root in F_{q^3}[t] \ F_q[t]. Such models
// are everywhere unramified and are excluded from the family.
bool is_constant_field_extension(const TrigonalModel& M);

struct ModelCheck {
    bool disc_nonzero = false;
    bool irreducible = false;
    bool geometrically_integral = false;
    bool valid() const { return disc_nonzero && irreducible && geometrically_integral; }
};
ModelCheck check_model(const TrigonalModel& M);

// splitting type of the completion at a degree-1 place, with automatic
// precision escalation up to the cap; throws past the cap
SplittingType model_splitting_type(const TrigonalModel& M, const Place& v, int precision_cap = 64);
// number of F_q-points of the smooth model in the fiber over v
int fiber_count(const TrigonalModel& M, const Place& v, int precision_cap = 64);

// Exact degree bookkeeping for the discriminant divisor. The finite
// contribution of a place with odd multiplicity is its residue degree
// (tame exponents are 1 there); even-multiplicity places are classified
// when rational and otherwise leave the total a lower bound.
struct DiscDivisorInfo {
    int d_infinity = 0;
    bool finite_squarefree = false;
    long degree = 0; // exact if `exact`, otherwise a lower bound
    bool exact = false;
};
DiscDivisorInfo disc_divisor_info(const TrigonalModel& M, int precision_cap = 64);

// genus via 2g - 2 = -6 + deg(disc divisor); nullopt when the divisor
// degree is not exactly computable (even-multiplicity irrational part)
std::optional<long> genus(const TrigonalModel& M, int precision_cap = 64);

struct CurveSummary {
    std::vector<int> fibers; // q + 1 entries: z = 0..q-1, then infinity
    long total = 0;
    std::optional<long> genus;
    long disc_divisor_degree = 0;
    bool disc_degree_exact = false;

    bool weil_bound_holds(u64 q) const;
};
CurveSummary point_count(const TrigonalModel& M, int precision_cap = 64);

// all valid models with deg A <= 2m, deg B <= 3m, streamed to the
// callback in lexicographic coefficient order; returns the number
// emitted. dedup_rescale keeps one representative per y-rescaling
// orbit (A, B) ~ (c^4 A, c^6 B).
u64 enumerate_models(u64 q, int m, Ensemble ensemble,
                     const std::function<void(const TrigonalModel&)>& fn,
                     bool dedup_rescale = false, u64 enumeration_limit = 200000000ull);

struct SampledModel {
    u64 index = 0;
    TrigonalModel model;
    CurveSummary summary;
};

// `count` valid models drawn uniformly from the coefficient box by
// per-index rejection sampling. The stream is a pure function of
// (q, m, count, seed, ensemble): sample i is derived from (seed, i)
// alone, so the output is identical for any worker count.
std::vector<SampledModel> sample_models(u64 q, int m, u64 count, u64 seed, Ensemble ensemble,
                                        unsigned workers = 0, int precision_cap = 64);

struct DensityEstimate {
    u64 sigma_count = 0;
    u64 sigma_prime_count = 0;
    u64 total_models = 0;
    // nullopt when the denominator count is zero
    std::optional<Rat> ratio() const {
        if (sigma_prime_count == 0) return std::nullopt;
        return rat_u(sigma_count, sigma_prime_count);
    }
};

bool matches_conditions(const TrigonalModel& M, const LocalConditions& sigma, int precision_cap = 64);

// ratio of sampled models matching sigma versus sigma'
DensityEstimate empirical_relative_density(u64 q, int m, const LocalConditions& sigma,
                                           const LocalConditions& sigma_prime, Ensemble ensemble,
                                           u64 count, u64 seed, unsigned workers = 0);

} // namespace trigstat

#endif
