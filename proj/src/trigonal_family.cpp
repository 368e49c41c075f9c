#include "trigstat/trigonal_family.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace trigstat {

TrigonalModel::TrigonalModel(u64 q_, int m_, Poly A_, Poly B_)
    : q(q_), m(m_), A(std::move(A_)), B(std::move(B_)) {
    require_prime_field(q);
    if (m < 1) throw std::invalid_argument("TrigonalModel: m must be >= 1");
    if (A.modulus() != q || B.modulus() != q)
        throw std::invalid_argument("TrigonalModel: coefficient field mismatch");
    if (A.degree_or0() > 2 * m || B.degree_or0() > 3 * m)
        throw std::invalid_argument("TrigonalModel: degree bounds violated");
}

const char* to_string(Ensemble e) {
    return e == Ensemble::all ? "all" : "squarefree-disc";
}

std::optional<Ensemble> ensemble_from_string(const std::string& s) {
    if (s == "all") return Ensemble::all;
    if (s == "squarefree-disc" || s == "squarefree_disc" || s == "squarefree")
        return Ensemble::squarefree_disc;
    return std::nullopt;
}

Poly discriminant(const Poly& A, const Poly& B) {
    u64 p = A.modulus();
    return -(Poly::from_ints(p, {4}) * A * A * A) - Poly::from_ints(p, {27}) * B * B;
}

namespace {

// Lagrange interpolation through (x_j, y_j), x_j distinct
Poly interpolate(u64 p, const std::vector<u64>& xs, const std::vector<u64>& ys) {
    Poly acc(p);
    for (std::size_t j = 0; j < xs.size(); ++j) {
        Poly basis = Poly::from_ints(p, {1});
        u64 denom = 1;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i == j) continue;
            basis = basis * Poly(p, {(p - xs[i]) % p, 1});
            denom = mulmod(denom, (xs[j] + p - xs[i]) % p, p);
        }
        acc = acc + basis * Fp(mulmod(ys[j], invmod(denom, p), p), p);
    }
    return acc;
}

// Arithmetic in F_{q^3} = F_q[x]/(x^3 + c1 x + c0), for the constant
// extension certificate. Only element-level operations are needed.
class CubicExtension {
  public:
    using El = std::array<u64, 3>;

    explicit CubicExtension(u64 q) : q_(q) {
        for (u64 c1 = 0; c1 < q && !found_; ++c1)
            for (u64 c0 = 1; c0 < q; ++c0) {
                Poly h(q, {c0, c1, 0, 1});
                if (count_roots_in_field(h) == 0) {
                    // a cubic with no rational root is irreducible
                    r0_ = (q - c0) % q;
                    r1_ = (q - c1) % q;
                    Poly xq = x_pow_mod(q, h);
                    for (int i = 0; i < 3; ++i) xq_[i] = xq.coeff(i).value();
                    x2q_ = mul(xq_, xq_);
                    found_ = true;
                    break;
                }
            }
        if (!found_) throw std::logic_error("no irreducible cubic found");
    }

    u64 q() const { return q_; }
    El from_base(u64 v) const { return {v % q_, 0, 0}; }
    static bool in_base(const El& e) { return e[1] == 0 && e[2] == 0; }
    static bool is_zero(const El& e) { return e[0] == 0 && e[1] == 0 && e[2] == 0; }

    El add(const El& a, const El& b) const {
        El r;
        for (int i = 0; i < 3; ++i) { u64 s = a[i] + b[i]; r[i] = s >= q_ ? s - q_ : s; }
        return r;
    }
    El scale(const El& a, u64 s) const {
        El r;
        for (int i = 0; i < 3; ++i) r[i] = mulmod(a[i], s % q_, q_);
        return r;
    }
    El mul(const El& a, const El& b) const {
        u64 e[5] = {};
        for (int i = 0; i < 3; ++i) {
            if (!a[i]) continue;
            for (int j = 0; j < 3; ++j)
                e[i + j] = (e[i + j] + mulmod(a[i], b[j], q_)) % q_;
        }
        // x^3 = r1 x + r0, x^4 = r1 x^2 + r0 x
        e[0] = (e[0] + mulmod(e[3], r0_, q_)) % q_;
        e[1] = (e[1] + mulmod(e[3], r1_, q_) + mulmod(e[4], r0_, q_)) % q_;
        e[2] = (e[2] + mulmod(e[4], r1_, q_)) % q_;
        return {e[0], e[1], e[2]};
    }
    El frobenius(const El& a) const {
        El r = from_base(a[0]);
        r = add(r, scale(xq_, a[1]));
        r = add(r, scale(x2q_, a[2]));
        return r;
    }

    // roots of y^3 + a y + b with a, b in F_q, by exhaustive scan
    std::vector<El> cubic_roots(u64 a, u64 b) const {
        std::vector<El> out;
        El e;
        for (e[2] = 0; e[2] < q_; ++e[2])
            for (e[1] = 0; e[1] < q_; ++e[1])
                for (e[0] = 0; e[0] < q_; ++e[0]) {
                    El v = add(mul(mul(e, e), e), add(scale(e, a), from_base(b)));
                    if (is_zero(v)) out.push_back(e);
                }
        return out;
    }

  private:
    u64 q_;
    u64 r0_ = 0, r1_ = 0;
    El xq_{}, x2q_{};
    bool found_ = false;
};

std::vector<CubicExtension::El> ext_poly_mul(const CubicExtension& K,
                                             const std::vector<CubicExtension::El>& X,
                                             const std::vector<CubicExtension::El>& Y) {
    std::vector<CubicExtension::El> r(X.size() + Y.size() - 1, K.from_base(0));
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t j = 0; j < Y.size(); ++j)
            r[i + j] = K.add(r[i + j], K.mul(X[i], Y[j]));
    return r;
}

const CubicExtension& cubic_extension(u64 q) {
    static std::mutex mu;
    static std::map<u64, std::unique_ptr<CubicExtension>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = cache[q];
    if (!slot) slot = std::make_unique<CubicExtension>(q);
    return *slot;
}

void require_sample_points(const TrigonalModel& M) {
    if (static_cast<u64>(M.m) + 1 > M.q)
        throw std::invalid_argument("model height m too large for interpolation over F_q (need m + 1 <= q)");
}

} // namespace

bool is_irreducible_global(const TrigonalModel& M) {
    require_sample_points(M);
    u64 q = M.q;
    int n = M.m + 1; // a polynomial root has degree <= m
    std::vector<std::vector<u64>> cands(n);
    for (int j = 0; j < n; ++j) {
        Fp z(static_cast<u64>(j), q);
        Poly cubic(q, {M.B.evaluate(z).value(), M.A.evaluate(z).value(), 0, 1});
        for (Fp r : roots_in_field(cubic)) cands[j].push_back(r.value());
        if (cands[j].empty()) return true; // no candidate value at this point
    }
    std::vector<u64> xs(n), pick(n, 0), ys(n);
    for (int j = 0; j < n; ++j) xs[j] = static_cast<u64>(j);
    for (;;) {
        for (int j = 0; j < n; ++j) ys[j] = cands[j][pick[j]];
        Poly P = interpolate(q, xs, ys);
        if ((P * P * P + M.A * P + M.B).is_zero()) return false;
        int d = 0;
        while (d < n && ++pick[d] == cands[d].size()) { pick[d] = 0; ++d; }
        if (d == n) break;
    }
    return true;
}

bool is_constant_field_extension(const TrigonalModel& M) {
    require_sample_points(M);
    u64 q = M.q;
    Poly D = discriminant(M);
    if (D.is_zero()) return false;
    // the constant extension is cyclic, so its model discriminant is a
    // perfect square in F_q[t]
    if (!D.leading().is_square()) return false;
    for (auto& [j, s] : squarefree_decomposition(D))
        if (j % 2 == 1) return false;

    const CubicExtension& K = cubic_extension(q);
    int n = M.m + 1;
    std::vector<std::vector<CubicExtension::El>> cands(n);
    for (int j = 0; j < n; ++j) {
        Fp z(static_cast<u64>(j), q);
        cands[j] = K.cubic_roots(M.A.evaluate(z).value(), M.B.evaluate(z).value());
        if (cands[j].empty()) return false;
    }
    std::vector<u64> pick(n, 0);
    for (;;) {
        bool all_base = true;
        for (int j = 0; j < n; ++j)
            if (!CubicExtension::in_base(cands[j][pick[j]])) { all_base = false; break; }
        if (!all_base) {
            // Lagrange interpolation over F_{q^3} with base-field nodes
            std::vector<CubicExtension::El> P(n, K.from_base(0));
            for (int j = 0; j < n; ++j) {
                // basis_j(t) = prod_{i != j} (t - i) / (j - i), coefficients in F_q
                Poly basis = Poly::from_ints(q, {1});
                u64 denom = 1;
                for (int i = 0; i < n; ++i) {
                    if (i == j) continue;
                    basis = basis * Poly(q, {(q - static_cast<u64>(i)) % q, 1});
                    denom = mulmod(denom, (static_cast<u64>(j) + q - static_cast<u64>(i)) % q, q);
                }
                auto w = K.scale(cands[j][pick[j]], invmod(denom, q));
                for (int i = 0; i < n; ++i)
                    P[i] = K.add(P[i], K.scale(w, basis.coeff(i).value()));
            }
            bool nonbase = false;
            for (auto& c : P)
                if (!CubicExtension::in_base(c)) { nonbase = true; break; }
            if (nonbase) {
                // verify P^3 + A P + B = 0 in F_{q^3}[t]
                auto P3 = ext_poly_mul(K, ext_poly_mul(K, P, P), P);
                std::size_t len = std::max({P3.size(),
                                            static_cast<std::size_t>(M.A.degree_or0() + M.m + 1),
                                            static_cast<std::size_t>(M.B.degree_or0() + 1)});
                std::vector<CubicExtension::El> acc(len, K.from_base(0));
                for (std::size_t i = 0; i < P3.size(); ++i) acc[i] = P3[i];
                // + A * P
                for (int i = 0; i <= M.A.degree_or0(); ++i) {
                    u64 ai = M.A.coeff(i).value();
                    if (!ai) continue;
                    for (int j2 = 0; j2 < n; ++j2)
                        acc[i + j2] = K.add(acc[i + j2], K.scale(P[j2], ai));
                }
                for (int i = 0; i <= M.B.degree_or0(); ++i)
                    acc[i] = K.add(acc[i], K.from_base(M.B.coeff(i).value()));
                bool zero = true;
                for (auto& c : acc)
                    if (!CubicExtension::is_zero(c)) { zero = false; break; }
                if (zero) return true;
            }
        }
        int d = 0;
        while (d < n && ++pick[d] == cands[d].size()) { pick[d] = 0; ++d; }
        if (d == n) break;
    }
    return false;
}

ModelCheck check_model(const TrigonalModel& M) {
    ModelCheck c;
    c.disc_nonzero = !discriminant(M).is_zero();
    if (!c.disc_nonzero) return c;
    c.irreducible = is_irreducible_global(M);
    if (!c.irreducible) return c;
    // ramified somewhere <=> not the constant cubic extension (an
    // everywhere-unramified cover of P^1 is constant), which is the
    // disc-divisor-degree > 0 requirement
    c.geometrically_integral = !is_constant_field_extension(M);
    return c;
}

SplittingType model_splitting_type(const TrigonalModel& M, const Place& v, int precision_cap) {
    int N = std::min(8, precision_cap);
    for (;;) {
        auto t = splitting_type(localize(M.A, M.B, v, N));
        if (t) return *t;
        if (N >= precision_cap) break;
        N = std::min(N * 2, precision_cap);
    }
    throw std::runtime_error("splitting type undetermined at precision cap " +
                             std::to_string(precision_cap) + " at place " + v.to_string() +
                             " for A = " + M.A.to_string() + ", B = " + M.B.to_string() +
                             " (identically degenerate discriminant?)");
}

int fiber_count(const TrigonalModel& M, const Place& v, int precision_cap) {
    return fiber_points(model_splitting_type(M, v, precision_cap));
}

DiscDivisorInfo disc_divisor_info(const TrigonalModel& M, int precision_cap) {
    Poly D = discriminant(M);
    if (D.is_zero()) throw std::invalid_argument("disc_divisor_info: zero discriminant");
    DiscDivisorInfo info;
    info.d_infinity = disc_exponent(model_splitting_type(M, Place::at_infinity(M.q), precision_cap));
    info.degree = info.d_infinity;
    info.exact = true;
    info.finite_squarefree = true;
    for (auto& [j, s] : squarefree_decomposition(D)) {
        if (j > 1) info.finite_squarefree = false;
        if (j % 2 == 1) {
            // tame cubic exponents are at most 2, so odd valuation
            // forces exponent exactly 1 at every place of s
            info.degree += s.degree_or0();
        } else {
            auto roots = roots_in_field(s);
            for (Fp r : roots)
                info.degree += disc_exponent(model_splitting_type(M, Place::finite(r), precision_cap));
            if (static_cast<int>(roots.size()) != s.degree_or0())
                info.exact = false; // irrational even-multiplicity part: exponent 0 or 2 unknown
        }
    }
    return info;
}

std::optional<long> genus(const TrigonalModel& M, int precision_cap) {
    DiscDivisorInfo info = disc_divisor_info(M, precision_cap);
    if (!info.exact) return std::nullopt;
    if (info.degree % 2 != 0)
        throw std::logic_error("odd discriminant divisor degree");
    return (info.degree - 4) / 2;
}

bool CurveSummary::weil_bound_holds(u64 q) const {
    if (!genus) return true;
    long diff = total - static_cast<long>(q) - 1;
    return diff * diff <= 4 * (*genus) * (*genus) * static_cast<long>(q);
}

CurveSummary point_count(const TrigonalModel& M, int precision_cap) {
    CurveSummary s;
    s.fibers.reserve(M.q + 1);
    for (u64 z = 0; z < M.q; ++z)
        s.fibers.push_back(fiber_count(M, Place::finite(Fp(z, M.q)), precision_cap));
    s.fibers.push_back(fiber_count(M, Place::at_infinity(M.q), precision_cap));
    s.total = 0;
    for (int f : s.fibers) s.total += f;
    DiscDivisorInfo info = disc_divisor_info(M, precision_cap);
    s.disc_divisor_degree = info.degree;
    s.disc_degree_exact = info.exact;
    if (info.exact) {
        if (info.degree % 2 != 0) throw std::logic_error("odd discriminant divisor degree");
        s.genus = (info.degree - 4) / 2;
    }
    return s;
}

namespace {

bool ensemble_accepts(const TrigonalModel& M, Ensemble e, const Poly& D, int precision_cap) {
    if (e == Ensemble::all) return true;
    if (!is_squarefree(D)) return false;
    return disc_exponent(model_splitting_type(M, Place::at_infinity(M.q), precision_cap)) <= 1;
}

u64 checked_total(u64 q, int digits, u64 limit) {
    u64 r = 1;
    for (int i = 0; i < digits; ++i) {
        if (r > limit / q) throw std::invalid_argument("enumeration size q^(5m+2) exceeds the limit");
        r *= q;
    }
    return r;
}

std::vector<u64> model_key(const Poly& A, const Poly& B, int m) {
    std::vector<u64> key(5 * m + 2, 0);
    for (int i = 0; i <= 2 * m; ++i) key[i] = A.coeff(i).value();
    for (int i = 0; i <= 3 * m; ++i) key[2 * m + 1 + i] = B.coeff(i).value();
    return key;
}

bool is_rescale_canonical(const TrigonalModel& M) {
    u64 q = M.q;
    auto key = model_key(M.A, M.B, M.m);
    for (u64 c = 2; c < q; ++c) {
        Fp c4 = Fp(c, q).pow(4), c6 = Fp(c, q).pow(6);
        auto other = model_key(M.A * c4, M.B * c6, M.m);
        if (other < key) return false;
    }
    return true;
}

// counter-based generator: sample i, attempt a is a pure function of
// (seed, i, a), so streams are identical for any worker partition
u64 mix64(u64 x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct SplitMix {
    u64 s;
    u64 next() {
        s += 0x9e3779b97f4a7c15ull;
        u64 z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    u64 below(u64 n) {
        u64 lim = ~0ull - ~0ull % n;
        u64 v;
        do { v = next(); } while (v >= lim);
        return v % n;
    }
};

constexpr u64 kAttemptCap = 100000;

unsigned resolve_workers(unsigned workers) {
    if (workers != 0) return workers;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

// draws valid models at indices [0, count) and hands each to fn from
// worker threads; fn must be safe for concurrent calls on distinct
// indices
void for_each_sample(u64 q, int m, u64 count, u64 seed, Ensemble ens, unsigned workers,
                     int precision_cap,
                     const std::function<void(u64, const TrigonalModel&)>& fn) {
    require_prime_field(q);
    if (m < 1) throw std::invalid_argument("sample: m must be >= 1");
    if (static_cast<u64>(m) + 1 > q)
        throw std::invalid_argument("sample: need m + 1 <= q");
    if (count < 1) throw std::invalid_argument("sample: count must be >= 1");
    workers = resolve_workers(workers);

    std::atomic<u64> next_index{0};
    std::atomic<bool> failed{false};
    std::string error_msg;
    std::mutex error_mu;

    auto run = [&]() {
        std::vector<u64> ac(2 * m + 1), bc(3 * m + 1);
        for (;;) {
            u64 i = next_index.fetch_add(1);
            if (i >= count || failed.load(std::memory_order_relaxed)) break;
            try {
                u64 attempt = 0;
                for (;; ++attempt) {
                    if (attempt >= kAttemptCap)
                        throw std::runtime_error(
                            "sample: rejection rate pathological (no valid model in " +
                            std::to_string(kAttemptCap) + " attempts at index " + std::to_string(i) + ")");
                    SplitMix rng{mix64(mix64(mix64(seed) + i) + attempt)};
                    for (auto& c : ac) c = rng.below(q);
                    for (auto& c : bc) c = rng.below(q);
                    TrigonalModel M(q, m, Poly(q, ac), Poly(q, bc));
                    Poly D = discriminant(M);
                    if (D.is_zero()) continue;
                    if (!ensemble_accepts(M, ens, D, precision_cap)) continue;
                    if (!is_irreducible_global(M)) continue;
                    if (is_constant_field_extension(M)) continue;
                    fn(i, M);
                    break;
                }
            } catch (const std::exception& ex) {
                std::lock_guard<std::mutex> lk(error_mu);
                if (!failed.exchange(true)) error_msg = ex.what();
                break;
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
    if (failed.load()) throw std::runtime_error(error_msg);
}

} // namespace

u64 enumerate_models(u64 q, int m, Ensemble ensemble,
                     const std::function<void(const TrigonalModel&)>& fn,
                     bool dedup_rescale, u64 enumeration_limit) {
    require_prime_field(q);
    if (m < 1) throw std::invalid_argument("enumerate: m must be >= 1");
    if (static_cast<u64>(m) + 1 > q)
        throw std::invalid_argument("enumerate: need m + 1 <= q");
    int digits = 5 * m + 2;
    checked_total(q, digits, enumeration_limit);

    std::vector<u64> ac(2 * m + 1, 0), bc(3 * m + 1, 0);
    u64 emitted = 0;
    for (;;) {
        TrigonalModel M(q, m, Poly(q, ac), Poly(q, bc));
        Poly D = discriminant(M);
        if (!D.is_zero() && ensemble_accepts(M, ensemble, D, 64) &&
            (!dedup_rescale || is_rescale_canonical(M)) && is_irreducible_global(M) &&
            !is_constant_field_extension(M)) {
            ++emitted;
            if (fn) fn(M);
        }
        // odometer over (A, B) coefficients
        std::size_t d = 0;
        bool done = false;
        for (;;) {
            u64* slot = d < ac.size() ? &ac[d] : &bc[d - ac.size()];
            if (++*slot < q) break;
            *slot = 0;
            if (++d == ac.size() + bc.size()) { done = true; break; }
        }
        if (done) break;
    }
    return emitted;
}

std::vector<SampledModel> sample_models(u64 q, int m, u64 count, u64 seed, Ensemble ensemble,
                                        unsigned workers, int precision_cap) {
    std::vector<std::optional<SampledModel>> slots(count);
    for_each_sample(q, m, count, seed, ensemble, workers, precision_cap,
                    [&](u64 i, const TrigonalModel& M) {
                        slots[i] = SampledModel{i, M, point_count(M, precision_cap)};
                    });
    std::vector<SampledModel> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

bool matches_conditions(const TrigonalModel& M, const LocalConditions& sigma, int precision_cap) {
    for (auto& [place, type] : sigma)
        if (model_splitting_type(M, place, precision_cap) != type) return false;
    return true;
}

DensityEstimate empirical_relative_density(u64 q, int m, const LocalConditions& sigma,
                                           const LocalConditions& sigma_prime, Ensemble ensemble,
                                           u64 count, u64 seed, unsigned workers) {
    std::atomic<u64> ns{0}, nsp{0};
    for_each_sample(q, m, count, seed, ensemble, workers, 64,
                    [&](u64, const TrigonalModel& M) {
                        if (matches_conditions(M, sigma)) ns.fetch_add(1);
                        if (matches_conditions(M, sigma_prime)) nsp.fetch_add(1);
                    });
    DensityEstimate est;
    est.sigma_count = ns.load();
    est.sigma_prime_count = nsp.load();
    est.total_models = count;
    return est;
}

} // namespace trigstat
