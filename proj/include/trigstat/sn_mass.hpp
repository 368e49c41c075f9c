#ifndef TRIGSTAT_SN_MASS_HPP
#define TRIGSTAT_SN_MASS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trigstat/dist.hpp"
#include "trigstat/local_classifier.hpp"
#include "trigstat/rational.hpp"

namespace trigstat {

// permutation of {0..n-1}, n <= 8
class Perm {
  public:
    static constexpr int kMaxN = 8;

    explicit Perm(int n); // identity
    static Perm from_images(const std::vector<int>& images);

    int n() const { return n_; }
    int apply(int i) const { return img_[i]; }
    bool is_identity() const;
    Perm compose(const Perm& o) const; // (this ∘ o)(i) = this(o(i))
    Perm inverse() const;
    Perm power(u64 e) const;
    Perm conjugate_by(const Perm& g) const; // g ∘ this ∘ g^{-1}

    // cycles including fixed points, each starting at its least element,
    // ordered by least element
    std::vector<std::vector<int>> cycles() const;
    std::vector<int> cycle_type() const; // lengths, descending
    int num_cycles() const;
    u64 order() const;
    std::string to_string() const; // cycle notation, "()" for identity

    bool operator==(const Perm& o) const { return n_ == o.n_ && img_ == o.img_; }
    bool operator!=(const Perm& o) const { return !(*this == o); }
    bool operator<(const Perm& o) const { return img_ < o.img_; }

  private:
    int n_;
    std::array<std::uint8_t, kMaxN> img_;
};

// all permutations of S_n in lexicographic image order
std::vector<Perm> symmetric_group(int n);
// prod a_i! b_i^{a_i} over cycle lengths b_i with multiplicities a_i
u64 centralizer_size(const std::vector<int>& cycle_type);
// elements commuting with y
std::vector<Perm> centralizer_elements(const Perm& y);

// tameness gate: q a prime power whose characteristic exceeds n
void require_tame(int n, u64 q);

// all (x, y) in S_n^2 with x y x^{-1} = y^q, exhaustively
std::vector<std::pair<Perm, Perm>> enumerate_pairs(int n, u64 q);

// #{x : x y x^{-1} = y^q} by exhaustive search over S_n
u64 count_conjugators(const Perm& y, u64 q);

// #{x : x y x^{-1} = y^q and the given cycle of y is an <x,y>-orbit};
// `cycle` is the support of one cycle of y
u64 single_cycle_fix_count(const Perm& y, const std::vector<int>& cycle, u64 q);

// simultaneous-conjugacy class of pairs (x, y) with x y x^{-1} = y^q
struct PairClass {
    Perm x, y;           // representative
    u64 class_size = 0;  // orbit size under simultaneous conjugation
    int disc_exponent = 0; // n - #cycles(y)
    int fiber_points = 0;  // #<x,y>-orbits that are <y>-orbits
    Rat mass;              // class_size / (n! q^disc_exponent)
};

std::vector<PairClass> pair_classes(int n, u64 q);

// mass-weighted law of fiber_points over all classes; reproduces the
// trigonal fiber law at n = 3 and is the conjectural law for n >= 4
ExactDist conjectural_fiber_law(int n, u64 q);

// [ sum_k k sum_l p(n, n-l, k) q^{-l} ] / [ sum_l p(n, n-l) q^{-l} ]
Rat expected_fiber_partition_formula(int n, u64 q);

struct PartitionStats {
    int n = 0;
    // p(n, m): partitions of n into m parts
    std::map<int, u64> by_parts;
    // p(n, m, k): partitions of n into m parts taking exactly k values
    std::map<std::pair<int, int>, u64> by_parts_values;

    u64 p(int m) const;
    u64 p(int m, int k) const;
};

PartitionStats partition_stats(int n);
// all partitions of n, parts descending, lexicographically descending
std::vector<std::vector<int>> partitions_of(int n);

// row-by-row comparison of pair_classes(3, q) against the chart of
// cubic etale algebras
struct ChartComparisonRow {
    ChartRow chart;
    Rat computed_mass;
    int computed_fiber = -1;
    u64 class_size = 0;
    bool matched = false;
    bool mass_match = false;
    bool fiber_match = false;
};

struct ChartComparison {
    std::vector<ChartComparisonRow> rows;
    Rat total_mass;          // sum of class masses
    Rat expected_total_mass; // 1 + 1/q + 1/q^2
    bool all_match = false;
    std::string diagnostics; // empty when all_match
};

ChartComparison chart_masses_n3(u64 q);

} // namespace trigstat

#endif
