#pragma once

#include <vector>

#include "cantor/expansion.hpp"

namespace cantor {

/// Closed interval with exact rational endpoints.
struct Interval {
  Rat lo;
  Rat hi;
};

/// Depth-k cover of K_{m,D} by the closed cylinders fixing the first
/// k digits, merged into disjoint sorted intervals. Every endpoint has
/// denominator dividing m^k; total length is (|D|/m)^k exactly.
struct CylinderCover {
  unsigned long base = 0;
  std::vector<unsigned long> digits;
  unsigned long depth = 0;
  std::vector<Interval> intervals;

  Rat measure() const;
  bool contains(const Rat& x) const;
};

inline constexpr unsigned long kMaxCylinderDepth = 14;
inline constexpr unsigned long kDefaultIntervalBudget = 10'000'000;

/// Builds the depth-k cover level by level. Throws BudgetExceeded when
/// |D|^k would outrun the pre-merge interval budget, and domain_error
/// past the depth cap. Depth 0 is the trivial cover {[0,1]}.
CylinderCover cylinder_cover(const MissingDigitSet& K, unsigned long k,
                             unsigned long interval_budget =
                                 kDefaultIntervalBudget);

enum class OracleVerdict { InCover, Excluded };

/// Exact containment of x in the depth-k cover. Excluded proves
/// x not in K; InCover at every tested depth is consistent with
/// membership (closed intervals keep dual-representation endpoints).
OracleVerdict oracle_membership(const Rat& x, const MissingDigitSet& K,
                                unsigned long k);

/// All n <= n_max with 1/n! inside the depth-k cover: a superset of
/// the true intersection over [1, n_max] that shrinks as k grows.
std::vector<unsigned long> oracle_intersect(const MissingDigitSet& K,
                                            unsigned long n_max,
                                            unsigned long k);

}  // namespace cantor
