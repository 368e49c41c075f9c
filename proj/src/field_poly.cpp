#include "trigstat/field_poly.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <sstream>
#include <stdexcept>

namespace trigstat {

namespace {

u64 mulmod_u128(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

bool miller_rabin(u64 n, u64 a) {
    if (a % n == 0) return true;
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) { d >>= 1; ++r; }
    u64 x = powmod(a % n, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < r; ++i) {
        x = mulmod_u128(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace

u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod_u128(r, a, p);
        a = mulmod_u128(a, a, p);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 p) {
    a %= p;
    if (a == 0) throw std::domain_error("invmod: inverse of zero");
    return powmod(a, p - 2, p);
}

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 sp : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == sp) return true;
        if (n % sp == 0) return false;
    }
    // deterministic witness set for 64-bit inputs
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
        if (!miller_rabin(n, a)) return false;
    return true;
}

void require_prime_field(u64 p) {
    // memoize the last few validated moduli; the library typically works
    // over one or two fields at a time
    static std::atomic<u64> cache[4] = {};
    for (auto& c : cache)
        if (c.load(std::memory_order_relaxed) == p) return;
    if (p < 5 || !is_prime_u64(p))
        throw std::invalid_argument("field modulus must be a prime >= 5, got " + std::to_string(p));
    static std::atomic<unsigned> next{0};
    cache[next.fetch_add(1, std::memory_order_relaxed) % 4].store(p, std::memory_order_relaxed);
}

Fp Fp::from_int(long long value, u64 p) {
    require_prime_field(p);
    long long r = value % static_cast<long long>(p);
    if (r < 0) r += static_cast<long long>(p);
    return Fp(static_cast<u64>(r), p);
}

void Fp::same(Fp o) const {
    if (p_ != o.p_) throw std::invalid_argument("mixed field moduli in Fp arithmetic");
}

bool Fp::is_square() const {
    if (v_ == 0) return true;
    return powmod(v_, (p_ - 1) / 2, p_) == 1;
}

std::ostream& operator<<(std::ostream& os, Fp e) { return os << e.value(); }

Poly::Poly(u64 p, std::vector<u64> coeffs) : p_(p), c_(std::move(coeffs)) {
    require_prime_field(p);
    for (auto& c : c_) c %= p_;
    prune();
}

Poly Poly::constant(Fp c) {
    Poly f(c.modulus());
    if (!c.is_zero()) f.c_ = {c.value()};
    return f;
}

Poly Poly::from_ints(u64 p, std::initializer_list<long long> coeffs) {
    require_prime_field(p);
    std::vector<u64> v;
    v.reserve(coeffs.size());
    for (long long c : coeffs) {
        long long r = c % static_cast<long long>(p);
        if (r < 0) r += static_cast<long long>(p);
        v.push_back(static_cast<u64>(r));
    }
    return Poly(p, std::move(v));
}

Poly Poly::x(u64 p) { return Poly(p, {0, 1}); }

void Poly::prune() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Fp Poly::coeff(std::size_t i) const {
    return Fp(i < c_.size() ? c_[i] : 0, p_);
}

Fp Poly::leading() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
    return Fp(c_.back(), p_);
}

Poly Poly::operator+(const Poly& o) const {
    if (p_ != o.p_) throw std::invalid_argument("mixed field moduli in Poly arithmetic");
    Poly r(p_);
    r.c_.resize(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.c_.size(); ++i) {
        u64 s = (i < c_.size() ? c_[i] : 0) + (i < o.c_.size() ? o.c_[i] : 0);
        r.c_[i] = s >= p_ ? s - p_ : s;
    }
    r.prune();
    return r;
}

Poly Poly::operator-() const {
    Poly r(p_);
    r.c_.resize(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] == 0 ? 0 : p_ - c_[i];
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    if (p_ != o.p_) throw std::invalid_argument("mixed field moduli in Poly arithmetic");
    if (c_.empty() || o.c_.empty()) return Poly(p_);
    Poly r(p_);
    r.c_.assign(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) {
            u64 t = r.c_[i + j] + mulmod(c_[i], o.c_[j], p_);
            r.c_[i + j] = t >= p_ ? t - p_ : t;
        }
    }
    r.prune();
    return r;
}

Poly Poly::operator*(Fp s) const {
    if (p_ != s.modulus()) throw std::invalid_argument("mixed field moduli in Poly arithmetic");
    Poly r(p_);
    if (s.is_zero()) return r;
    r.c_.resize(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = mulmod(c_[i], s.value(), p_);
    r.prune();
    return r;
}

bool Poly::operator==(const Poly& o) const { return p_ == o.p_ && c_ == o.c_; }

std::pair<Poly, Poly> Poly::divrem(const Poly& d) const {
    if (p_ != d.p_) throw std::invalid_argument("mixed field moduli in Poly arithmetic");
    if (d.is_zero()) throw std::domain_error("division by zero polynomial");
    std::size_t dn = d.c_.size();
    if (c_.size() < dn) return {Poly(p_), *this};
    std::vector<u64> r = c_;
    std::vector<u64> q(r.size() - dn + 1, 0);
    u64 lcinv = invmod(d.c_.back(), p_);
    for (std::size_t k = q.size(); k-- > 0;) {
        u64 top = r[k + dn - 1];
        if (top == 0) continue;
        u64 f = mulmod(top, lcinv, p_);
        q[k] = f;
        for (std::size_t j = 0; j < dn; ++j) {
            u64 sub = mulmod(f, d.c_[j], p_);
            u64& tgt = r[k + j];
            tgt = tgt >= sub ? tgt - sub : tgt + p_ - sub;
        }
    }
    r.resize(dn - 1);
    return {Poly(p_, std::move(q)), Poly(p_, std::move(r))};
}

Poly Poly::monic() const {
    if (is_zero()) throw std::domain_error("monic of zero polynomial");
    return *this * leading().inv();
}

Poly Poly::derivative() const {
    Poly r(p_);
    if (c_.size() <= 1) return r;
    r.c_.resize(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r.c_[i - 1] = mulmod(c_[i], i % p_, p_);
    r.prune();
    return r;
}

Fp Poly::evaluate(Fp z) const {
    if (p_ != z.modulus()) throw std::invalid_argument("mixed field moduli in Poly arithmetic");
    u64 acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) {
        acc = mulmod(acc, z.value(), p_) + c_[i];
        if (acc >= p_) acc -= p_;
        if (i == 0) break;
    }
    return Fp(acc, p_);
}

Poly Poly::taylor_shift(Fp z) const {
    // in-place iterated synthetic division by (t - z)
    if (p_ != z.modulus()) throw std::invalid_argument("mixed field moduli in Poly arithmetic");
    std::vector<u64> c = c_;
    std::size_t n = c.size();
    if (n >= 2) {
        for (std::size_t k = 0; k < n - 1; ++k) {
            for (std::size_t i = n - 1; i-- > k;) {
                u64 t = c[i] + mulmod(z.value(), c[i + 1], p_);
                c[i] = t >= p_ ? t - p_ : t;
            }
        }
    }
    return Poly(p_, std::move(c));
}

Poly Poly::reverse(int d) const {
    if (d < 0 || static_cast<std::size_t>(d) + 1 < c_.size())
        throw std::invalid_argument("reverse: bound below degree");
    std::vector<u64> out(static_cast<std::size_t>(d) + 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) out[d - i] = c_[i];
    return Poly(p_, std::move(out));
}

std::string Poly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0 || c_[i] != 1) os << c_[i];
        if (i >= 1) {
            if (c_[i] != 1) os << "*";
            os << var;
            if (i >= 2) os << "^" << i;
        }
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Poly& f) { return os << f.to_string(); }

Poly poly_gcd(Poly a, Poly b) {
    if (a.is_zero() && b.is_zero()) throw std::domain_error("gcd(0, 0)");
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

Poly x_pow_mod(u64 e, const Poly& f) {
    if (f.degree_or0() < 1 || f.is_zero())
        throw std::invalid_argument("x_pow_mod: modulus must be nonconstant");
    u64 p = f.modulus();
    Poly result = Poly::from_ints(p, {1});
    Poly base = Poly::x(p) % f;
    while (e) {
        if (e & 1) result = (result * base) % f;
        base = (base * base) % f;
        e >>= 1;
    }
    return result;
}

int count_roots_in_field(const Poly& f) {
    if (f.is_zero()) throw std::domain_error("count_roots_in_field: zero polynomial");
    if (f.degree_or0() == 0) return 0;
    u64 p = f.modulus();
    Poly fm = f.monic();
    // gcd(f, t^p - t)
    Poly tp = x_pow_mod(p, fm);
    Poly g = tp - (Poly::x(p) % fm);
    // g == 0 means f | t^p - t, so f is a product of distinct linear factors
    if (g.is_zero()) return f.degree_or0();
    return poly_gcd(fm, g).degree_or0();
}

std::vector<Fp> roots_in_field(const Poly& f) {
    if (f.is_zero()) throw std::domain_error("roots_in_field: zero polynomial");
    u64 p = f.modulus();
    std::vector<Fp> out;
    if (f.degree_or0() == 0) return out;
    // small moduli: a direct scan is both the simplest and the fastest
    for (u64 v = 0; v < p; ++v) {
        Fp z(v, p);
        if (f.evaluate(z).is_zero()) out.push_back(z);
    }
    return out;
}

bool is_squarefree(const Poly& f) {
    if (f.is_zero()) throw std::domain_error("is_squarefree: zero polynomial");
    if (f.degree_or0() == 0) return true;
    Poly d = f.derivative();
    if (d.is_zero()) return false; // p-th power
    return poly_gcd(f, d).degree_or0() == 0;
}

std::map<int, Poly> squarefree_decomposition(const Poly& f) {
    if (f.is_zero()) throw std::domain_error("squarefree_decomposition: zero polynomial");
    u64 p = f.modulus();
    std::map<int, Poly> out;
    Poly g = f.degree_or0() == 0 ? f : f.monic();
    if (g.degree_or0() == 0) return out;

    Poly d = g.derivative();
    if (d.is_zero()) {
        // g = h(t^p) = h1(t)^p over F_p (coefficient values are Frobenius-fixed)
        std::vector<u64> hc;
        for (int i = 0; i * static_cast<int>(p) <= g.degree_or0(); ++i)
            hc.push_back(g.coeff(static_cast<std::size_t>(i) * p).value());
        Poly h(p, std::move(hc));
        for (auto& [j, s] : squarefree_decomposition(h)) out.insert_or_assign(j * static_cast<int>(p), s);
        return out;
    }

    Poly c = poly_gcd(g, d);
    Poly w = g.divrem(c).first;
    int j = 1;
    while (w.degree_or0() > 0) {
        Poly y = poly_gcd(w, c);
        Poly z = w.divrem(y).first;
        if (z.degree_or0() > 0) out.insert_or_assign(j, z.monic());
        w = std::move(y);
        c = c.divrem(w).first;
        ++j;
    }
    if (c.degree_or0() > 0) {
        for (auto& [jj, s] : squarefree_decomposition(c)) {
            int key = jj * static_cast<int>(p);
            if (auto it = out.find(key); it != out.end())
                it->second = (it->second * s).monic();
            else
                out.insert_or_assign(key, s);
        }
    }
    return out;
}

const char* to_string(ResidueCubicType t) {
    switch (t) {
        case ResidueCubicType::split_three_distinct: return "split-three-distinct";
        case ResidueCubicType::linear_plus_irreducible_quadratic: return "linear-plus-irreducible-quadratic";
        case ResidueCubicType::irreducible_cubic: return "irreducible-cubic";
        case ResidueCubicType::double_root_plus_simple: return "double-root-plus-simple";
        case ResidueCubicType::triple_root: return "triple-root";
    }
    return "?";
}

ResidueCubicType residue_cubic_type(Fp a, Fp b) {
    if (a.modulus() != b.modulus()) throw std::invalid_argument("mixed field moduli");
    u64 p = a.modulus();
    Fp four(4, p), twentyseven(27, p);
    Fp disc = -(four * a * a * a) - twentyseven * b * b;
    Poly cubic(p, {b.value(), a.value(), 0, 1});
    int roots = count_roots_in_field(cubic);
    if (!disc.is_zero()) {
        switch (roots) {
            case 3: return ResidueCubicType::split_three_distinct;
            case 1: return ResidueCubicType::linear_plus_irreducible_quadratic;
            case 0: return ResidueCubicType::irreducible_cubic;
        }
        throw std::logic_error("residue cubic with nonzero discriminant and 2 roots");
    }
    // char >= 5: a triple root r forces 3r = 0, so r = 0, so a = b = 0
    if (a.is_zero() && b.is_zero()) return ResidueCubicType::triple_root;
    return ResidueCubicType::double_root_plus_simple;
}

} // namespace trigstat
