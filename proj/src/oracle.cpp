#include "cantor/oracle.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include "cantor/errors.hpp"

namespace cantor {

Rat CylinderCover::measure() const {
  Rat total(0);
  for (const auto& iv : intervals) total += iv.hi - iv.lo;
  return total;
}

bool CylinderCover::contains(const Rat& x) const {
  auto it = std::partition_point(
      intervals.begin(), intervals.end(),
      [&](const Interval& iv) { return iv.hi < x; });
  return it != intervals.end() && it->lo <= x;
}

CylinderCover cylinder_cover(const MissingDigitSet& K, unsigned long k,
                             unsigned long interval_budget) {
  if (k > kMaxCylinderDepth)
    throw std::domain_error("cylinder_cover: depth exceeds the cap");
  // Pre-merge count |D|^k against the budget, without overflowing.
  unsigned long count = 1;
  for (unsigned long i = 0; i < k; ++i) {
    if (count > interval_budget / K.digits().size())
      throw BudgetExceeded("cylinder_cover: interval budget exceeded",
                           count, interval_budget);
    count *= K.digits().size();
  }

  CylinderCover cover;
  cover.base = K.base();
  cover.digits = K.digits();
  cover.depth = k;
  cover.intervals = {{Rat(0), Rat(1)}};
  const Int m(K.base());
  for (unsigned long level = 0; level < k; ++level) {
    std::vector<Interval> next;
    next.reserve(cover.intervals.size() * K.digits().size());
    for (unsigned long d : K.digits())
      for (const auto& iv : cover.intervals)
        next.push_back({(d + iv.lo) / m, (d + iv.hi) / m});
    std::sort(next.begin(), next.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (auto& iv : next) {
      if (!merged.empty() && iv.lo <= merged.back().hi)
        merged.back().hi = std::max(merged.back().hi, iv.hi);
      else
        merged.push_back(std::move(iv));
    }
    cover.intervals = std::move(merged);
  }
  return cover;
}

namespace {

// Covers are pure functions of (m, D, k); memoized for the many
// repeated containment queries the tests make. Initialize-once,
// read-many.
const CylinderCover& cached_cover(const MissingDigitSet& K, unsigned long k) {
  using Key = std::pair<std::pair<unsigned long, unsigned long>,
                        std::vector<unsigned long>>;
  static std::map<Key, CylinderCover> cache;
  static std::mutex mu;
  Key key{{K.base(), k}, K.digits()};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(std::move(key), cylinder_cover(K, k)).first;
  return it->second;
}

}  // namespace

OracleVerdict oracle_membership(const Rat& x, const MissingDigitSet& K,
                                unsigned long k) {
  Rat y = x;
  y.canonicalize();
  if (y < 0 || y > 1)
    throw std::domain_error("oracle_membership: value must lie in [0, 1]");
  return cached_cover(K, k).contains(y) ? OracleVerdict::InCover
                                        : OracleVerdict::Excluded;
}

std::vector<unsigned long> oracle_intersect(const MissingDigitSet& K,
                                            unsigned long n_max,
                                            unsigned long k) {
  const CylinderCover& cover = cached_cover(K, k);
  std::vector<unsigned long> survivors;
  Int fact(1);
  for (unsigned long n = 1; n <= n_max; ++n) {
    fact *= n;
    if (cover.contains(make_rat(1, fact))) survivors.push_back(n);
  }
  return survivors;
}

}  // namespace cantor
