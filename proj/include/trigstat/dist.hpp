#ifndef TRIGSTAT_DIST_HPP
#define TRIGSTAT_DIST_HPP

#include <cstdint>
#include <map>
#include <utility>

#include "trigstat/local_classifier.hpp"
#include "trigstat/rational.hpp"
#include "trigstat/trigonal_family.hpp"

namespace trigstat {

// Finitely supported probability distribution on the integers with
// exact rational masses summing to one.
class ExactDist {
  public:
    static ExactDist point_mass(long k);
    // validates: masses >= 0, sum exactly 1
    static ExactDist from_masses(std::map<long, Rat> masses);

    const std::map<long, Rat>& masses() const { return m_; }
    Rat mass(long k) const;
    Rat mean() const;
    ExactDist convolve(const ExactDist& o) const;
    // M-fold convolution power, M >= 1
    ExactDist convolve_power(long M) const;

    bool operator==(const ExactDist& o) const { return m_ == o.m_; }
    bool operator!=(const ExactDist& o) const { return !(*this == o); }

  private:
    std::map<long, Rat> m_; // no zero entries stored

    void prune();
};

void require_valid_q(u64 q); // prime power, >= 5, coprime to 6

// law of the fiber point count over one rational place:
// masses 2q^2, 3q^2 + 6, 6q, q^2 over 6q^2 + 6q + 6 for k = 0..3
ExactDist fiber_law(u64 q);

// fiber law conditioned on local disc exponent <= 1 (the squarefree
// ensemble target): {q/(3(q+1)), q/(2(q+1)), 1/(q+1), q/(6(q+1))}
ExactDist fiber_law_conditional_squarefree(u64 q);

// law of the total point count over M independent base points
ExactDist sum_law(u64 q, long M);

// expected total over M base points: M (1 + q/(q^2 + q + 1))
Rat mean_total_base(u64 q, long M);

// product of chart masses over the assigned places (types aggregate
// all chart rows with the same splitting type)
Rat c_sigma(const LocalConditions& sigma, u64 q);
// c_sigma / c_sigma'; sigma' must have nonzero mass
Rat relative_density(const LocalConditions& sigma, const LocalConditions& sigma_prime, u64 q);

struct EmpiricalHist {
    std::map<long, u64> counts;
    u64 total = 0;

    static EmpiricalHist from_counts(std::map<long, u64> counts);
    void add(long k, u64 c = 1);
};

// total variation: (1/2) sum_k |D(k) - H(k)/total|
Rat tv_distance(const ExactDist& D, const EmpiricalHist& H);
// Pearson chi-square against expected counts D(k) * total; observations
// outside the support of D are rejected
Rat chi_square(const EmpiricalHist& H, const ExactDist& D);

struct JointHist {
    std::map<std::pair<long, long>, u64> counts;
    u64 total = 0;

    void add(long i, long j, u64 c = 1);
};

// TV distance between the joint empirical distribution and the product
// of its own marginals; zero iff the histogram factors exactly
Rat joint_independence_gap(const JointHist& H);

} // namespace trigstat

#endif
