#ifndef TRIGSTAT_LOCAL_CLASSIFIER_HPP
#define TRIGSTAT_LOCAL_CLASSIFIER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trigstat/field_poly.hpp"
#include "trigstat/rational.hpp"

namespace trigstat {

// q = base^exp with base prime; nullopt if q is not a prime power
std::optional<std::pair<u64, int>> prime_power_base(u64 q);

// A degree-1 place of P^1 over F_q: a rational point z, or infinity.
class Place {
  public:
    static Place finite(Fp z) { return Place(z.value(), z.modulus(), false); }
    static Place at_infinity(u64 p) { require_prime_field(p); return Place(0, p, true); }
    static std::optional<Place> parse(const std::string& s, u64 p);

    bool is_infinity() const { return inf_; }
    Fp z() const { return Fp(z_, p_); }
    u64 modulus() const { return p_; }
    std::string to_string() const { return inf_ ? "inf" : std::to_string(z_); }

    bool operator==(const Place& o) const { return p_ == o.p_ && inf_ == o.inf_ && (inf_ || z_ == o.z_); }
    bool operator!=(const Place& o) const { return !(*this == o); }
    // finite places in value order, infinity last
    bool operator<(const Place& o) const {
        if (inf_ != o.inf_) return !inf_;
        return z_ < o.z_;
    }

  private:
    Place(u64 z, u64 p, bool inf) : z_(z), p_(p), inf_(inf) {}
    u64 z_;
    u64 p_;
    bool inf_;
};

// y^3 + a(u) y + b(u) over F_q[[u]], coefficients known to the stated
// precision (a, b each hold exactly `precision` coefficients, low order
// first).
struct LocalModel {
    u64 q = 0;
    int precision = 0;
    std::vector<u64> a, b;
};

// Splitting type of a cubic etale algebra over F_q((u)) in the tame
// case: the multiset of (ramification index e, residue degree f) with
// sum e*f = 3. Five multisets are realizable.
enum class SplittingType {
    split,            // (1,1) (1,1) (1,1)
    semisplit,        // (1,1) (1,2)
    inert,            // (1,3)
    ramified,         // (1,1) (2,1)
    totally_ramified, // (3,1)
};

constexpr SplittingType kAllSplittingTypes[] = {
    SplittingType::split, SplittingType::semisplit, SplittingType::inert,
    SplittingType::ramified, SplittingType::totally_ramified,
};

const char* to_string(SplittingType);
std::optional<SplittingType> splitting_type_from_string(const std::string&);
// the (e, f) multiset, sorted
std::vector<std::pair<int, int>> splitting_factors(SplittingType);
// number of F_q-points in the fiber: #{i : f_i = 1}
int fiber_points(SplittingType);
// tame local discriminant exponent: sum of (e_i - 1)
int disc_exponent(SplittingType);

// completion of the model y^3 + A y + B at a degree-1 place, truncated
// to `precision` coefficients. At infinity the substitution t = 1/s,
// y -> y / s^m with m = max(ceil(deg A / 2), ceil(deg B / 3)) makes the
// model integral.
LocalModel localize(const Poly& A, const Poly& B, const Place& v, int precision);

// Splitting type of the local model; nullopt when the precision is
// exhausted before the type is determined (callers retry with a larger
// precision). Determined whenever v(disc) < precision.
std::optional<SplittingType> splitting_type(const LocalModel& L);

// One row of the classification of cubic etale algebras over F_q((u)):
// the splitting type, the images of Frobenius x and an inertia
// generator y in S_3, the mass constant c = 1/(|Aut||disc|), and the
// congruence class of q mod 3 the row requires (0 = both).
struct ChartRow {
    SplittingType type;
    std::string frobenius;
    std::string inertia;
    Rat c;
    int q_mod_3 = 0;
};

// Rows with nonzero mass for the given q (prime power, coprime to 6).
// The totally ramified block depends on q mod 3: three rows of 1/(3q^2)
// when q = 1 mod 3, one row of 1/q^2 when q = 2 mod 3. The rows always
// sum to (q^2 + q + 1) / q^2.
std::vector<ChartRow> chart_c_constants(u64 q);
// mass aggregated over rows with the given splitting type
Rat chart_mass(SplittingType t, u64 q);
// sum over all rows, (q^2 + q + 1) / q^2
Rat chart_total_mass(u64 q);

// Exact classification census at finite precision: classify
// y^3 + a y + b for every pair (a, b) of coefficient vectors of length
// `precision` over F_q and report the fraction per determined type plus
// the undetermined fraction. Exact rationals; deterministic for any
// worker count.
struct LocalTypeDensity {
    u64 q = 0;
    int precision = 0;
    u64 total = 0;
    std::map<SplittingType, u64> counts;
    u64 undetermined_count = 0;

    Rat density(SplittingType t) const;
    Rat undetermined() const;
    // determined counts renormalized to a probability distribution
    std::map<SplittingType, Rat> determined_distribution() const;
};

LocalTypeDensity local_type_density(u64 q, int precision, unsigned workers = 0,
                                    u64 enumeration_limit = 1000000000ull);

} // namespace trigstat

#endif
