#include "trigstat/local_classifier.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace trigstat {

std::optional<std::pair<u64, int>> prime_power_base(u64 q) {
    if (q < 2) return std::nullopt;
    u64 base = 0;
    if (q % 2 == 0) base = 2;
    else if (q % 3 == 0) base = 3;
    else {
        for (u64 d = 5; d * d <= q; d += 6) {
            if (q % d == 0) { base = d; break; }
            if (q % (d + 2) == 0) { base = d + 2; break; }
        }
    }
    if (base == 0) return std::make_pair(q, 1); // q itself prime
    int e = 0;
    u64 r = q;
    while (r % base == 0) { r /= base; ++e; }
    if (r != 1) return std::nullopt;
    return std::make_pair(base, e);
}

std::optional<Place> Place::parse(const std::string& s, u64 p) {
    if (s == "inf" || s == "infinity" || s == "oo") return Place::at_infinity(p);
    if (s.empty()) return std::nullopt;
    u64 v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return std::nullopt;
        v = v * 10 + static_cast<u64>(c - '0');
        if (v >= p) return std::nullopt;
    }
    return Place::finite(Fp(v, p));
}

const char* to_string(SplittingType t) {
    switch (t) {
        case SplittingType::split: return "split";
        case SplittingType::semisplit: return "semisplit";
        case SplittingType::inert: return "inert";
        case SplittingType::ramified: return "ramified";
        case SplittingType::totally_ramified: return "totally-ramified";
    }
    return "?";
}

std::optional<SplittingType> splitting_type_from_string(const std::string& s) {
    for (auto t : kAllSplittingTypes)
        if (s == to_string(t)) return t;
    if (s == "111") return SplittingType::split;
    if (s == "12") return SplittingType::semisplit;
    if (s == "3") return SplittingType::inert;
    if (s == "21") return SplittingType::ramified;
    if (s == "3r" || s == "totram") return SplittingType::totally_ramified;
    return std::nullopt;
}

std::vector<std::pair<int, int>> splitting_factors(SplittingType t) {
    switch (t) {
        case SplittingType::split: return {{1, 1}, {1, 1}, {1, 1}};
        case SplittingType::semisplit: return {{1, 1}, {1, 2}};
        case SplittingType::inert: return {{1, 3}};
        case SplittingType::ramified: return {{1, 1}, {2, 1}};
        case SplittingType::totally_ramified: return {{3, 1}};
    }
    return {};
}

int fiber_points(SplittingType t) {
    int n = 0;
    for (auto [e, f] : splitting_factors(t))
        if (f == 1) ++n;
    return n;
}

int disc_exponent(SplittingType t) {
    int d = 0;
    for (auto [e, f] : splitting_factors(t)) d += e - 1;
    return d;
}

LocalModel localize(const Poly& A, const Poly& B, const Place& v, int precision) {
    if (A.modulus() != B.modulus()) throw std::invalid_argument("localize: mixed moduli");
    if (v.modulus() != A.modulus()) throw std::invalid_argument("localize: place over wrong field");
    if (precision < 1) throw std::invalid_argument("localize: precision must be >= 1");
    u64 p = A.modulus();
    LocalModel L;
    L.q = p;
    L.precision = precision;
    L.a.assign(precision, 0);
    L.b.assign(precision, 0);
    if (!v.is_infinity()) {
        Poly a = A.taylor_shift(v.z());
        Poly b = B.taylor_shift(v.z());
        for (int i = 0; i < precision; ++i) {
            L.a[i] = a.coeff(i).value();
            L.b[i] = b.coeff(i).value();
        }
        return L;
    }
    // t = 1/s, y -> y / s^m: a(s) = s^{2m} A(1/s), b(s) = s^{3m} B(1/s)
    int da = A.degree_or0(), db = B.degree_or0();
    int m = std::max((da + 1) / 2, (db + 2) / 3);
    for (int j = 0; j < precision; ++j) {
        int ia = 2 * m - j;
        if (ia >= 0) L.a[j] = A.coeff(ia).value();
        int ib = 3 * m - j;
        if (ib >= 0) L.b[j] = B.coeff(ib).value();
    }
    return L;
}

namespace {

// residue classification over (a0, b0) in F_q^2, tabulated for small q
class ResidueTable {
  public:
    explicit ResidueTable(u64 q) : q_(q) {
        if (q <= 4096) {
            t_.resize(q * q);
            for (u64 a = 0; a < q; ++a)
                for (u64 b = 0; b < q; ++b)
                    t_[a * q + b] = residue_cubic_type(Fp(a, q), Fp(b, q));
        }
    }
    ResidueCubicType type(u64 a0, u64 b0) const {
        if (!t_.empty()) return t_[a0 * q_ + b0];
        return residue_cubic_type(Fp(a0, q_), Fp(b0, q_));
    }

  private:
    u64 q_;
    std::vector<ResidueCubicType> t_;
};

const ResidueTable& residue_table(u64 q) {
    static std::mutex mu;
    static std::map<u64, std::unique_ptr<ResidueTable>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = cache[q];
    if (!slot) slot = std::make_unique<ResidueTable>(q);
    return *slot;
}

struct View {
    const u64* c;
    int n; // known coefficients c[0..n)
};

int valuation(View v) {
    for (int i = 0; i < v.n; ++i)
        if (v.c[i]) return i;
    return -1;
}

SplittingType unramified_type(ResidueCubicType t) {
    switch (t) {
        case ResidueCubicType::split_three_distinct: return SplittingType::split;
        case ResidueCubicType::linear_plus_irreducible_quadratic: return SplittingType::semisplit;
        case ResidueCubicType::irreducible_cubic: return SplittingType::inert;
        default: throw std::logic_error("unramified_type: residue discriminant vanishes");
    }
}

bool is_square_mod(u64 v, u64 p) { return v == 0 || powmod(v, (p - 1) / 2, p) == 1; }

// Classification of y^3 + a y + b over F_q((u)) from truncated series.
//
// Branches:
//  - unit residue discriminant: unramified, read off the residue cubic.
//  - residue double root + simple root: the simple root lifts to a unit
//    (1,1) factor and the residual quadratic is governed by
//    D = -4a^3 - 27b^2, whose valuation and leading coefficient agree
//    with the quadratic's discriminant up to a unit square. Odd v(D)
//    gives (2,1); even v(D) gives two unit roots or an inert quadratic
//    by the quadratic character of the leading coefficient.
//  - residue triple root (a0 = b0 = 0 in char >= 5): Newton polygon on
//    (0, v(b)), (1, v(a)), (3, 0); fractional slopes give ramification,
//    integral slopes rescale y by u^k and recurse.
std::optional<SplittingType> classify(View a, View b, u64 p, const ResidueTable& tab) {
    int N = std::min(a.n, b.n);
    if (N < 1) return std::nullopt;
    u64 a0 = a.c[0], b0 = b.c[0];
    ResidueCubicType rt = tab.type(a0, b0);
    if (rt == ResidueCubicType::split_three_distinct ||
        rt == ResidueCubicType::linear_plus_irreducible_quadratic ||
        rt == ResidueCubicType::irreducible_cubic)
        return unramified_type(rt);

    if (rt == ResidueCubicType::double_root_plus_simple) {
        u64 c4 = p - 4 % p;   // -4 mod p
        u64 c27 = p - 27 % p; // -27 mod p, p >= 5 so both nonzero
        std::vector<u64> a2(N, 0);
        a2[0] = mulmod(a0, a0, p);
        for (int k = 1; k < N; ++k) {
            u128 s = 0;
            for (int i = 0; i <= k; ++i)
                s += mulmod(i < a.n ? a.c[i] : 0, k - i < a.n ? a.c[k - i] : 0, p);
            a2[k] = static_cast<u64>(s % p);
            u128 s3 = 0, s2 = 0;
            for (int i = 0; i <= k; ++i) {
                s3 += mulmod(i < a.n ? a.c[i] : 0, a2[k - i], p);
                s2 += mulmod(i < b.n ? b.c[i] : 0, k - i < b.n ? b.c[k - i] : 0, p);
            }
            u64 dk = (mulmod(static_cast<u64>(s3 % p), c4, p) + mulmod(static_cast<u64>(s2 % p), c27, p)) % p;
            if (dk != 0) {
                if (k % 2 == 1) return SplittingType::ramified;
                return is_square_mod(dk, p) ? SplittingType::split : SplittingType::semisplit;
            }
        }
        return std::nullopt;
    }

    // triple residue root: v(a) >= 1, v(b) >= 1
    int alpha = valuation(a);
    int beta = valuation(b);
    bool a_known = alpha >= 0, b_known = beta >= 0;
    bool three_equal_slopes =
        b_known && (a_known ? 3 * alpha >= 2 * beta : 3 * a.n >= 2 * beta);
    bool split_segments =
        a_known && (b_known ? 3 * alpha < 2 * beta : 3 * alpha < 2 * b.n);
    if (three_equal_slopes) {
        // single segment of slope -beta/3: three roots of valuation beta/3
        if (beta % 3 != 0) return SplittingType::totally_ramified;
        int k = beta / 3;
        return classify({a.c + 2 * k, a.n - 2 * k}, {b.c + 3 * k, b.n - 3 * k}, p, tab);
    }
    if (split_segments) {
        // length-1 segment (one unit-direction root of valuation
        // beta - alpha) plus length-2 segment of slope -alpha/2
        if (alpha % 2 == 1) return SplittingType::ramified;
        int k = alpha / 2;
        // v(D) = 3 alpha exactly, so the rescaled residue discriminant
        // is a unit and b is known at index 3k
        if (b.n - 3 * k < 1) return std::nullopt;
        return unramified_type(tab.type(a.c[2 * k], b.c[3 * k]));
    }
    return std::nullopt;
}

} // namespace

std::optional<SplittingType> splitting_type(const LocalModel& L) {
    require_prime_field(L.q);
    if (L.precision < 1 || L.a.size() != static_cast<std::size_t>(L.precision) ||
        L.b.size() != static_cast<std::size_t>(L.precision))
        throw std::invalid_argument("splitting_type: malformed local model");
    for (u64 c : L.a)
        if (c >= L.q) throw std::invalid_argument("splitting_type: coefficient out of range");
    for (u64 c : L.b)
        if (c >= L.q) throw std::invalid_argument("splitting_type: coefficient out of range");
    const ResidueTable& tab = residue_table(L.q);
    return classify({L.a.data(), L.precision}, {L.b.data(), L.precision}, L.q, tab);
}

std::vector<ChartRow> chart_c_constants(u64 q) {
    auto pp = prime_power_base(q);
    if (!pp || q % 2 == 0 || q % 3 == 0 || q < 5)
        throw std::invalid_argument("chart_c_constants: q must be a prime power coprime to 6");
    Rat q1 = rat_u(q);
    Rat q2 = q1 * q1;
    std::vector<ChartRow> rows;
    rows.push_back({SplittingType::split, "()", "()", rat(1, 6), 0});
    rows.push_back({SplittingType::semisplit, "(12)", "()", rat(1, 2), 0});
    rows.push_back({SplittingType::inert, "(123)", "()", rat(1, 3), 0});
    rows.push_back({SplittingType::ramified, "()", "(12)", rat(1, 2) / q1, 0});
    rows.push_back({SplittingType::ramified, "(12)", "(12)", rat(1, 2) / q1, 0});
    if (q % 3 == 1) {
        rows.push_back({SplittingType::totally_ramified, "(123)", "(123)", rat(1, 3) / q2, 1});
        rows.push_back({SplittingType::totally_ramified, "(132)", "(123)", rat(1, 3) / q2, 1});
        rows.push_back({SplittingType::totally_ramified, "()", "(123)", rat(1, 3) / q2, 1});
    } else {
        rows.push_back({SplittingType::totally_ramified, "(12)", "(123)", Rat(1) / q2, 2});
    }
    return rows;
}

Rat chart_mass(SplittingType t, u64 q) {
    Rat m(0);
    for (const auto& row : chart_c_constants(q))
        if (row.type == t) m += row.c;
    return m;
}

Rat chart_total_mass(u64 q) {
    Rat m(0);
    for (const auto& row : chart_c_constants(q)) m += row.c;
    return m;
}

Rat LocalTypeDensity::density(SplittingType t) const {
    auto it = counts.find(t);
    u64 c = it == counts.end() ? 0 : it->second;
    return rat_u(c, total);
}

Rat LocalTypeDensity::undetermined() const { return rat_u(undetermined_count, total); }

std::map<SplittingType, Rat> LocalTypeDensity::determined_distribution() const {
    u64 det = total - undetermined_count;
    std::map<SplittingType, Rat> out;
    for (auto& [t, c] : counts) out.insert_or_assign(t, rat_u(c, det));
    return out;
}

namespace {

u64 checked_pow(u64 base, int e, u64 limit) {
    u64 r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > limit / base)
            throw std::invalid_argument("local_type_density: q^(2 precision) exceeds the enumeration limit");
        r *= base;
    }
    return r;
}

struct Counts {
    std::array<u64, 5> by_type{};
    u64 undetermined = 0;
    void add(std::optional<SplittingType> t, u64 w) {
        if (t) by_type[static_cast<int>(*t)] += w;
        else undetermined += w;
    }
    void merge(const Counts& o) {
        for (int i = 0; i < 5; ++i) by_type[i] += o.by_type[i];
        undetermined += o.undetermined;
    }
};

} // namespace

LocalTypeDensity local_type_density(u64 q, int precision, unsigned workers, u64 enumeration_limit) {
    require_prime_field(q);
    if (precision < 1) throw std::invalid_argument("local_type_density: precision must be >= 1");
    u64 total = checked_pow(q, 2 * precision, enumeration_limit);
    const ResidueTable& tab = residue_table(q);

    Counts counts;
    u64 deep_weight = total / (q * q); // completions per residue pair

    // residue pairs with unit discriminant classify at precision 1; the
    // pairs on the degenerate locus are enumerated in depth below
    std::vector<std::pair<u64, u64>> degenerate;
    for (u64 a0 = 0; a0 < q; ++a0)
        for (u64 b0 = 0; b0 < q; ++b0) {
            ResidueCubicType rt = tab.type(a0, b0);
            if (rt == ResidueCubicType::double_root_plus_simple || rt == ResidueCubicType::triple_root)
                degenerate.emplace_back(a0, b0);
            else
                counts.add(unramified_type(rt), deep_weight);
        }

    if (precision == 1) {
        counts.undetermined += degenerate.size();
    } else {
        int digits = 2 * (precision - 1);
        u64 per_stratum = deep_weight;
        u64 work = per_stratum * degenerate.size();
        if (workers == 0) {
            unsigned hc = std::thread::hardware_concurrency();
            workers = hc == 0 ? 1 : hc;
        }
        u64 nblocks = std::min<u64>(work, static_cast<u64>(workers) * 8);
        std::atomic<u64> next_block{0};
        std::vector<Counts> partial(workers);

        auto run = [&](unsigned w) {
            std::vector<u64> av(precision), bv(precision), digit(digits);
            Counts& local = partial[w];
            for (;;) {
                u64 blk = next_block.fetch_add(1);
                if (blk >= nblocks) break;
                u64 lo = work / nblocks * blk + std::min<u64>(work % nblocks, blk);
                u64 hi = work / nblocks * (blk + 1) + std::min<u64>(work % nblocks, blk + 1);
                if (lo >= hi) continue;
                u64 stratum = lo / per_stratum;
                u64 rem = lo % per_stratum;
                for (int d = 0; d < digits; ++d) { digit[d] = rem % q; rem /= q; }
                for (u64 g = lo; g < hi; ++g) {
                    if (g > lo) {
                        // odometer step; rolls into the next stratum on wrap
                        int d = 0;
                        while (d < digits && ++digit[d] == q) { digit[d] = 0; ++d; }
                        if (d == digits) ++stratum;
                    }
                    av[0] = degenerate[stratum].first;
                    bv[0] = degenerate[stratum].second;
                    for (int i = 1; i < precision; ++i) {
                        av[i] = digit[i - 1];
                        bv[i] = digit[(precision - 1) + i - 1];
                    }
                    local.add(classify({av.data(), precision}, {bv.data(), precision}, q, tab), 1);
                }
            }
        };

        std::vector<std::thread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
        run(0);
        for (auto& th : pool) th.join();
        for (auto& pc : partial) counts.merge(pc);
    }

    LocalTypeDensity out;
    out.q = q;
    out.precision = precision;
    out.total = total;
    out.undetermined_count = counts.undetermined;
    for (auto t : kAllSplittingTypes) {
        u64 c = counts.by_type[static_cast<int>(t)];
        if (c) out.counts.insert_or_assign(t, c);
    }
    return out;
}

} // namespace trigstat
