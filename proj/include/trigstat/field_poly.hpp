#ifndef TRIGSTAT_FIELD_POLY_HPP
#define TRIGSTAT_FIELD_POLY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace trigstat {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

bool is_prime_u64(u64 n);

// Modulus must be a prime >= 5 (tame characteristic for cubics).
// Throws std::invalid_argument otherwise.
void require_prime_field(u64 p);

inline u64 mulmod(u64 a, u64 b, u64 p) {
    return static_cast<u64>(static_cast<u128>(a) * b % p);
}
u64 powmod(u64 a, u64 e, u64 p);
u64 invmod(u64 a, u64 p); // a != 0

// Element of F_p, always in canonical form 0 <= value < p.
class Fp {
  public:
    Fp(u64 value, u64 p) : p_(p) {
        require_prime_field(p);
        v_ = value % p;
    }
    static Fp from_int(long long value, u64 p);

    u64 value() const { return v_; }
    u64 modulus() const { return p_; }
    bool is_zero() const { return v_ == 0; }

    Fp operator+(Fp o) const { same(o); return raw(v_ + o.v_ >= p_ ? v_ + o.v_ - p_ : v_ + o.v_, p_); }
    Fp operator-(Fp o) const { same(o); return raw(v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_, p_); }
    Fp operator-() const { return raw(v_ == 0 ? 0 : p_ - v_, p_); }
    Fp operator*(Fp o) const { same(o); return raw(mulmod(v_, o.v_, p_), p_); }
    Fp operator/(Fp o) const { same(o); return raw(mulmod(v_, invmod(o.v_, p_), p_), p_); }
    Fp inv() const { return raw(invmod(v_, p_), p_); }
    Fp pow(u64 e) const { return raw(powmod(v_, e, p_), p_); }
    bool is_square() const; // 0 counts as a square

    bool operator==(Fp o) const { return p_ == o.p_ && v_ == o.v_; }
    bool operator!=(Fp o) const { return !(*this == o); }

  private:
    Fp() = default;
    static Fp raw(u64 v, u64 p) { Fp e; e.v_ = v; e.p_ = p; return e; }
    void same(Fp o) const;
    u64 v_ = 0;
    u64 p_ = 0;
};

std::ostream& operator<<(std::ostream&, Fp);

// Univariate polynomial over F_p, coefficients low to high, canonical
// form (no trailing zeros; the zero polynomial has an empty coefficient
// vector). degree() of the zero polynomial is nullopt, which orders
// below every integer.
class Poly {
  public:
    explicit Poly(u64 p) : p_(p) { require_prime_field(p); }
    Poly(u64 p, std::vector<u64> coeffs);
    static Poly constant(Fp c);
    static Poly from_ints(u64 p, std::initializer_list<long long> coeffs);
    static Poly x(u64 p); // the variable t

    u64 modulus() const { return p_; }
    bool is_zero() const { return c_.empty(); }
    std::optional<int> degree() const {
        if (c_.empty()) return std::nullopt;
        return static_cast<int>(c_.size()) - 1;
    }
    // degree as an int with zero treated as degree 0; for degree-bound
    // arithmetic where the zero polynomial is harmless
    int degree_or0() const { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
    Fp coeff(std::size_t i) const;
    Fp leading() const; // requires nonzero
    const std::vector<u64>& coeffs() const { return c_; }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    Poly operator+(const Poly&) const;
    Poly operator-(const Poly&) const;
    Poly operator-() const;
    Poly operator*(const Poly&) const;
    Poly operator*(Fp s) const;
    bool operator==(const Poly&) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // quotient and remainder; divisor must be nonzero
    std::pair<Poly, Poly> divrem(const Poly& divisor) const;
    Poly operator%(const Poly& d) const { return divrem(d).second; }
    Poly monic() const; // requires nonzero

    Poly derivative() const;
    Fp evaluate(Fp z) const;
    // coefficients of f(z + t)
    Poly taylor_shift(Fp z) const;
    // coefficients reversed against an upper degree bound d >= deg:
    // returns t^d * f(1/t)
    Poly reverse(int d) const;

    std::string to_string(const std::string& var = "t") const;

  private:
    void prune();
    u64 p_;
    std::vector<u64> c_;
};

std::ostream& operator<<(std::ostream&, const Poly&);

// gcd, returned monic; gcd(0,0) is an error
Poly poly_gcd(Poly a, Poly b);
// t^e mod f by square and multiply; f nonconstant
Poly x_pow_mod(u64 e, const Poly& f);

// number of distinct roots in F_p, as deg gcd(f, t^p - t) with t^p
// reduced mod f. f must be nonzero.
int count_roots_in_field(const Poly& f);
// the distinct roots themselves (exhaustive-free; via gcd then scan of
// candidates only when needed). Used by small-q callers.
std::vector<Fp> roots_in_field(const Poly& f);

// true iff gcd(f, f') is constant; f must be nonzero. Nonconstant
// polynomials with vanishing derivative are p-th powers, hence not
// squarefree.
bool is_squarefree(const Poly& f);

// f = lc * prod_j S_j^j with the S_j monic, squarefree and pairwise
// coprime. Returns the nonconstant S_j keyed by multiplicity j.
std::map<int, Poly> squarefree_decomposition(const Poly& f);

// Factor shape of a monic depressed cubic y^3 + a y + b over F_p.
enum class ResidueCubicType {
    split_three_distinct,
    linear_plus_irreducible_quadratic,
    irreducible_cubic,
    double_root_plus_simple,
    triple_root,
};

const char* to_string(ResidueCubicType);

// Total over all (a, b); the first three tags have nonzero cubic
// discriminant -4a^3 - 27b^2, the last two have zero discriminant.
ResidueCubicType residue_cubic_type(Fp a, Fp b);

} // namespace trigstat

#endif
