#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "cantor/errors.hpp"
#include "cantor/expansion.hpp"
#include "cantor/oracle.hpp"

using namespace cantor;

namespace {

bool same_intervals(const std::vector<Interval>& got,
                    const std::vector<std::pair<Rat, Rat>>& want) {
  if (got.size() != want.size()) return false;
  for (size_t i = 0; i < got.size(); ++i)
    if (got[i].lo != want[i].first || got[i].hi != want[i].second)
      return false;
  return true;
}

}  // namespace

TEST_CASE("cylinder_cover level fixtures") {
  MissingDigitSet K(3, {0, 2});
  SUBCASE("depth 0 is the unit interval") {
    auto cover = cylinder_cover(K, 0);
    CHECK(cover.depth == 0);
    REQUIRE(cover.intervals.size() == 1);
    CHECK(cover.intervals[0].lo == 0);
    CHECK(cover.intervals[0].hi == 1);
    CHECK(cover.measure() == 1);
  }
  SUBCASE("depth 1") {
    auto cover = cylinder_cover(K, 1);
    CHECK(same_intervals(cover.intervals, {{make_rat(0, 1), make_rat(1, 3)},
                                           {make_rat(2, 3), make_rat(1, 1)}}));
  }
  SUBCASE("depth 2") {
    auto cover = cylinder_cover(K, 2);
    CHECK(same_intervals(cover.intervals,
                         {{make_rat(0, 1), make_rat(1, 9)},
                          {make_rat(2, 9), make_rat(1, 3)},
                          {make_rat(2, 3), make_rat(7, 9)},
                          {make_rat(8, 9), make_rat(1, 1)}}));
  }
}

TEST_CASE("cylinder_cover merges touching cylinders") {
  // digits {0,1} in base 3: [0,1/3] and [1/3,2/3] share an endpoint
  MissingDigitSet K(3, {0, 1});
  auto cover = cylinder_cover(K, 1);
  CHECK(same_intervals(cover.intervals, {{make_rat(0, 1), make_rat(2, 3)}}));
  // measure still counts both cylinders
  CHECK(cover.measure() == make_rat(2, 3));

  auto cover2 = cylinder_cover(K, 2);
  CHECK(cover2.measure() == make_rat(4, 9));
  for (size_t i = 1; i < cover2.intervals.size(); ++i)
    CHECK(cover2.intervals[i - 1].hi < cover2.intervals[i].lo);
}

TEST_CASE("cylinder_cover base 4 fixture") {
  MissingDigitSet K(4, {0, 3});
  auto cover = cylinder_cover(K, 1);
  CHECK(same_intervals(cover.intervals, {{make_rat(0, 1), make_rat(1, 4)},
                                         {make_rat(3, 4), make_rat(1, 1)}}));
}

TEST_CASE("cylinder_cover measure is (|D|/m)^k") {
  MissingDigitSet K(3, {0, 2});
  auto cover = cylinder_cover(K, 5);
  CHECK(cover.measure() == make_rat(32, 243));
  CHECK(cover.intervals.size() == 32);  // no touching pairs for {0,2}
}

TEST_CASE("cylinder_cover nesting") {
  MissingDigitSet K(5, {0, 2, 4});
  auto outer = cylinder_cover(K, 3);
  auto inner = cylinder_cover(K, 4);
  for (const auto& iv : inner.intervals) {
    bool contained = false;
    for (const auto& big : outer.intervals)
      contained |= big.lo <= iv.lo && iv.hi <= big.hi;
    CHECK(contained);
  }
}

TEST_CASE("cylinder_cover limits") {
  MissingDigitSet K(3, {0, 2});
  CHECK_THROWS_AS(cylinder_cover(K, 15), std::domain_error);
  CHECK_THROWS_AS(cylinder_cover(K, 10, 100), BudgetExceeded);
  // 2^10 = 1024 pre-merge intervals fit a budget of 1024
  CHECK(cylinder_cover(K, 10, 1024).intervals.size() == 1024);
}

TEST_CASE("cover containment probes") {
  MissingDigitSet K(3, {0, 2});
  auto cover = cylinder_cover(K, 2);
  CHECK(cover.contains(make_rat(0, 1)));
  CHECK(cover.contains(make_rat(1, 9)));
  CHECK(cover.contains(make_rat(2, 9)));
  CHECK(cover.contains(make_rat(1, 4)));  // 0.(02) in base 3
  CHECK(cover.contains(make_rat(1, 1)));
  CHECK_FALSE(cover.contains(make_rat(1, 2)));
  CHECK_FALSE(cover.contains(make_rat(1, 8)));  // 0.(010) excluded at depth 2
  CHECK_FALSE(cover.contains(make_rat(2, 10)));
}

TEST_CASE("oracle_membership fixtures") {
  MissingDigitSet K(3, {0, 2});
  CHECK(oracle_membership(make_rat(1, 2), K, 1) == OracleVerdict::Excluded);
  CHECK(oracle_membership(make_rat(1, 4), K, 6) == OracleVerdict::InCover);
  CHECK(oracle_membership(make_rat(1, 4), K, 12) == OracleVerdict::InCover);
  MissingDigitSet K6(6, {0, 5});
  CHECK(oracle_membership(make_rat(1, 6), K6, 5) == OracleVerdict::InCover);
  CHECK_THROWS_AS(oracle_membership(make_rat(3, 2), K, 1), std::domain_error);
}

TEST_CASE("oracle_membership matches digit-stream verdict positions") {
  // NotMember at position p means: in cover up to depth p-1, excluded
  // from depth p on
  MissingDigitSet K(3, {0, 2});
  struct Probe {
    Rat x;
    unsigned long pos;
  };
  std::vector<Probe> probes = {{make_rat(1, 2), 1},
                               {make_rat(1, 6), 2},
                               {make_rat(1, 24), 3},
                               {make_rat(1, 720), 6}};
  for (const auto& pr : probes) {
    for (unsigned long k = 1; k <= 8; ++k) {
      auto want =
          k >= pr.pos ? OracleVerdict::Excluded : OracleVerdict::InCover;
      CHECK(oracle_membership(pr.x, K, k) == want);
    }
  }
}

TEST_CASE("oracle_intersect fixtures") {
  MissingDigitSet K02(3, {0, 2});
  auto got = oracle_intersect(K02, 20, 12);
  CHECK(got == std::vector<unsigned long>{1, 5, 10, 11, 12, 13, 14, 15, 16, 17,
                                          18, 19, 20});
  MissingDigitSet K01(3, {0, 1});
  CHECK(oracle_intersect(K01, 10, 12) ==
        std::vector<unsigned long>{2, 3, 4, 6, 8, 9, 10});
}

TEST_CASE("oracle_intersect survivors shrink with depth") {
  MissingDigitSet K(3, {0, 2});
  std::vector<unsigned long> prev;
  for (unsigned long k = 1; k <= 12; ++k) {
    auto cur = oracle_intersect(K, 15, k);
    CHECK(std::find(cur.begin(), cur.end(), 1UL) != cur.end());
    CHECK(std::find(cur.begin(), cur.end(), 5UL) != cur.end());
    if (k > 1)
      CHECK(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
    prev = std::move(cur);
  }
}
