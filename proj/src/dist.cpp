#include "trigstat/dist.hpp"

#include <stdexcept>

namespace trigstat {

void ExactDist::prune() {
    for (auto it = m_.begin(); it != m_.end();) {
        if (it->second == 0) it = m_.erase(it);
        else ++it;
    }
}

ExactDist ExactDist::point_mass(long k) {
    ExactDist d;
    d.m_.emplace(k, Rat(1));
    return d;
}

ExactDist ExactDist::from_masses(std::map<long, Rat> masses) {
    Rat sum(0);
    for (auto& [k, v] : masses) {
        if (v < 0) throw std::invalid_argument("ExactDist: negative mass");
        sum += v;
    }
    if (sum != 1) throw std::invalid_argument("ExactDist: masses sum to " + rat_str(sum) + ", not 1");
    ExactDist d;
    d.m_ = std::move(masses);
    d.prune();
    return d;
}

Rat ExactDist::mass(long k) const {
    auto it = m_.find(k);
    return it == m_.end() ? Rat(0) : it->second;
}

Rat ExactDist::mean() const {
    Rat s(0);
    for (auto& [k, v] : m_) s += Rat(k) * v;
    return s;
}

ExactDist ExactDist::convolve(const ExactDist& o) const {
    std::map<long, Rat> out;
    for (auto& [i, vi] : m_)
        for (auto& [j, vj] : o.m_) {
            auto [it, fresh] = out.try_emplace(i + j, Rat(0));
            it->second += vi * vj;
        }
    ExactDist d;
    d.m_ = std::move(out);
    d.prune();
    return d;
}

ExactDist ExactDist::convolve_power(long M) const {
    if (M < 1) throw std::invalid_argument("convolve_power: M must be >= 1");
    ExactDist acc = *this;
    for (long i = 1; i < M; ++i) acc = acc.convolve(*this);
    return acc;
}

void require_valid_q(u64 q) {
    if (q < 5 || q % 2 == 0 || q % 3 == 0 || !prime_power_base(q))
        throw std::invalid_argument("q must be a prime power >= 5 coprime to 6, got " + std::to_string(q));
}

ExactDist fiber_law(u64 q) {
    require_valid_q(q);
    Rat qq = rat_u(q);
    Rat denom = 6 * qq * qq + 6 * qq + 6;
    std::map<long, Rat> m;
    m.emplace(0, 2 * qq * qq / denom);
    m.emplace(1, (3 * qq * qq + 6) / denom);
    m.emplace(2, 6 * qq / denom);
    m.emplace(3, qq * qq / denom);
    return ExactDist::from_masses(std::move(m));
}

ExactDist fiber_law_conditional_squarefree(u64 q) {
    require_valid_q(q);
    Rat qq = rat_u(q);
    Rat q1 = qq + 1;
    std::map<long, Rat> m;
    m.emplace(0, qq / (3 * q1));
    m.emplace(1, qq / (2 * q1));
    m.emplace(2, Rat(1) / q1);
    m.emplace(3, qq / (6 * q1));
    return ExactDist::from_masses(std::move(m));
}

ExactDist sum_law(u64 q, long M) {
    if (M < 1) throw std::invalid_argument("sum_law: M must be >= 1");
    return fiber_law(q).convolve_power(M);
}

Rat mean_total_base(u64 q, long M) {
    require_valid_q(q);
    if (M < 0) throw std::invalid_argument("mean_total_base: M must be >= 0");
    Rat qq = rat_u(q);
    return Rat(static_cast<long>(M)) * (1 + qq / (qq * qq + qq + 1));
}

Rat c_sigma(const LocalConditions& sigma, u64 q) {
    Rat c(1);
    for (auto& [place, type] : sigma) {
        (void)place;
        c *= chart_mass(type, q);
    }
    return c;
}

Rat relative_density(const LocalConditions& sigma, const LocalConditions& sigma_prime, u64 q) {
    Rat denom = c_sigma(sigma_prime, q);
    if (denom == 0) throw std::invalid_argument("relative_density: sigma' has zero mass");
    return c_sigma(sigma, q) / denom;
}

EmpiricalHist EmpiricalHist::from_counts(std::map<long, u64> counts) {
    EmpiricalHist h;
    h.counts = std::move(counts);
    for (auto& [k, c] : h.counts) h.total += c;
    return h;
}

void EmpiricalHist::add(long k, u64 c) {
    counts[k] += c;
    total += c;
}

Rat tv_distance(const ExactDist& D, const EmpiricalHist& H) {
    if (H.total == 0) throw std::invalid_argument("tv_distance: empty histogram");
    Rat sum(0);
    for (auto& [k, m] : D.masses()) {
        auto it = H.counts.find(k);
        Rat h = it == H.counts.end() ? Rat(0) : rat_u(it->second, H.total);
        sum += rat_abs(m - h);
    }
    for (auto& [k, c] : H.counts)
        if (D.mass(k) == 0) sum += rat_u(c, H.total);
    return sum / 2;
}

Rat chi_square(const EmpiricalHist& H, const ExactDist& D) {
    if (H.total == 0) throw std::invalid_argument("chi_square: empty histogram");
    for (auto& [k, c] : H.counts)
        if (c > 0 && D.mass(k) == 0)
            throw std::domain_error("chi_square: observation outside the support of the law");
    Rat sum(0);
    for (auto& [k, m] : D.masses()) {
        Rat expected = m * rat_u(H.total);
        auto it = H.counts.find(k);
        Rat obs = it == H.counts.end() ? Rat(0) : rat_u(it->second);
        Rat diff = obs - expected;
        sum += diff * diff / expected;
    }
    return sum;
}

void JointHist::add(long i, long j, u64 c) {
    counts[{i, j}] += c;
    total += c;
}

Rat joint_independence_gap(const JointHist& H) {
    if (H.total == 0) throw std::invalid_argument("joint_independence_gap: empty histogram");
    std::map<long, Rat> mi, mj;
    for (auto& [ij, c] : H.counts) {
        mi[ij.first] += rat_u(c, H.total);
        mj[ij.second] += rat_u(c, H.total);
    }
    Rat sum(0);
    for (auto& [i, pi] : mi)
        for (auto& [j, pj] : mj) {
            auto it = H.counts.find({i, j});
            Rat joint = it == H.counts.end() ? Rat(0) : rat_u(it->second, H.total);
            sum += rat_abs(joint - pi * pj);
        }
    return sum / 2;
}

} // namespace trigstat
