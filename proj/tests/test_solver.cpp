#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <vector>

#include "cantor/errors.hpp"
#include "cantor/expansion.hpp"
#include "cantor/numtheory.hpp"
#include "cantor/solver.hpp"

using namespace cantor;

namespace {

std::map<Int, unsigned long> as_pairs(const Factorization& f) {
  std::map<Int, unsigned long> out;
  for (const auto& pp : f.factors) out[pp.prime] = pp.exponent;
  return out;
}

Int factorial(unsigned long n) {
  Int r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

}  // namespace

TEST_CASE("factorial_core fixtures") {
  SUBCASE("5! base 3") {
    auto core = factorial_core(5, 3);
    CHECK(core.n == 5);
    CHECK(core.m_free_part == 40);
    CHECK(core.shift == 1);
    CHECK(core.core_factors.value() == 40);
    auto pairs = as_pairs(core.core_factors);
    CHECK(pairs == std::map<Int, unsigned long>{{2, 3}, {5, 1}});
  }
  SUBCASE("4! base 12 is pure power part") {
    auto core = factorial_core(4, 12);
    CHECK(core.m_free_part == 1);
    CHECK(core.shift == 2);
    CHECK(core.core_factors.factors.empty());
  }
  SUBCASE("2! base 3") {
    auto core = factorial_core(2, 3);
    CHECK(core.m_free_part == 2);
    CHECK(core.shift == 0);
  }
  SUBCASE("1!") {
    auto core1 = factorial_core(1, 10);
    CHECK(core1.m_free_part == 1);
    CHECK(core1.shift == 0);
    CHECK_THROWS_AS(factorial_core(0, 3), std::domain_error);
  }
  SUBCASE("21! base 3") {
    auto core = factorial_core(21, 3);
    CHECK(core.m_free_part == Int("2595688775680000"));
    CHECK(core.shift == 9);  // v_3(21!)
    auto pairs = as_pairs(core.core_factors);
    std::map<Int, unsigned long> want{{2, 18}, {5, 4},  {7, 3},  {11, 1},
                                      {13, 1}, {17, 1}, {19, 1}};
    CHECK(pairs == want);
  }
}

TEST_CASE("factorial_core shift for 21! base 3 uses v_3(21!) = 9") {
  CHECK(legendre_valuation(3, 21) == 9);
  auto core = factorial_core(21, 3);
  CHECK(core.shift == 9);
}

TEST_CASE("factorial_core m-free part is coprime to m") {
  for (unsigned long m = 3; m <= 30; ++m) {
    for (unsigned long n = 1; n <= 99; n += 7) {
      auto core = factorial_core(n, m);
      CHECK(gcd(core.m_free_part, Int(m)) == 1);
    }
  }
}

TEST_CASE("factorial_core reassembles n!") {
  for (unsigned long n = 1; n <= 25; ++n) {
    for (unsigned long m : {3UL, 6UL, 10UL, 12UL}) {
      auto core = factorial_core(n, m);
      // n! = core * (m-power contribution); recover the removed part
      Int fact = factorial(n);
      CHECK(fact % core.m_free_part == 0);
      Int removed = fact / core.m_free_part;
      // removed divides m^shift and m^shift / removed is coprime to
      // nothing new: every prime of removed divides m
      Int ms;
      mpz_pow_ui(ms.get_mpz_t(), Int(m).get_mpz_t(), core.shift);
      CHECK(ms % removed == 0);
      if (core.shift > 0) {
        Int prev;
        mpz_pow_ui(prev.get_mpz_t(), Int(m).get_mpz_t(), core.shift - 1);
        CHECK(prev % removed != 0);  // shift is minimal
      }
    }
  }
}

TEST_CASE("choose_p0 picks least odd prime coprime to the base") {
  CHECK(choose_p0(3) == 5);
  CHECK(choose_p0(10) == 3);
  CHECK(choose_p0(105) == 11);
  CHECK(choose_p0(15) == 7);
  CHECK(choose_p0(9) == 5);
  CHECK(choose_p0(4) == 3);
}

TEST_CASE("bound_certificate odd-prime route fixtures") {
  SUBCASE("base 3 with default p0 = 5") {
    auto cert = bound_certificate(3);
    CHECK(cert.base == 3);
    CHECK(cert.p0 == 5);
    CHECK(cert.d == 4);   // ord_5(3)
    CHECK(cert.t == 1);   // v_5(3^4 - 1) = v_5(80)
    CHECK(cert.n0 == 26);
    CHECK_FALSE(cert.legacy_dyadic);
    CHECK(cert.window_checked == 1000);
  }
  SUBCASE("base 7 with p0 = 3") {
    auto cert = bound_certificate(7, Int(3));
    CHECK(cert.d == 1);
    CHECK(cert.t == 1);
    CHECK(cert.n0 == 22);
  }
  SUBCASE("base 8 with p0 = 3") {
    auto cert = bound_certificate(8, Int(3));
    CHECK(cert.d == 2);
    CHECK(cert.t == 2);
    CHECK(cert.n0 == 26);
  }
  SUBCASE("base 9 with p0 = 5") {
    auto cert = bound_certificate(9, Int(5));
    CHECK(cert.d == 2);
    CHECK(cert.t == 1);
    CHECK(cert.n0 == 30);
  }
  SUBCASE("base 12 with p0 = 5") {
    auto cert = bound_certificate(12, Int(5));
    CHECK(cert.d == 4);
    CHECK(cert.t == 1);
    CHECK(cert.n0 == 31);
  }
  SUBCASE("base 10 with default p0 = 3") {
    auto cert = bound_certificate(10);
    CHECK(cert.p0 == 3);
    CHECK(cert.d == 1);  // 10 = 1 mod 3
    CHECK(cert.t == 2);  // v_3(9) = 2
    CHECK(cert.n0 == 26);
  }
  SUBCASE("base 3 with p0 = 7") {
    auto cert = bound_certificate(3, Int(7));
    CHECK(cert.d == 6);
    CHECK(cert.t == 1);
    CHECK(cert.n0 == 33);
  }
  SUBCASE("base 4 and base 5 with default p0 = 3") {
    CHECK(bound_certificate(4).n0 == 20);
    CHECK(bound_certificate(5).n0 == 21);
    CHECK(bound_certificate(6).n0 == 28);
  }
}

TEST_CASE("cutoff_inequality_holds transition points") {
  SUBCASE("base 3, p0 = 5: first hold at n = 26") {
    auto cert = bound_certificate(3);
    for (unsigned long n = cert.p0.get_ui() * (1 + cert.t) + 1; n <= 25; ++n)
      CHECK_FALSE(cutoff_inequality_holds(cert, n));
    CHECK(cutoff_inequality_holds(cert, 26));
    CHECK(cutoff_inequality_holds(cert, 27));
    CHECK(cutoff_inequality_holds(cert, 200));
  }
  SUBCASE("legacy base 3: first hold at n = 21") {
    auto cert = bound_certificate(3, std::nullopt, true);
    CHECK_FALSE(cutoff_inequality_holds(cert, 20));
    for (unsigned long n = 21; n <= 60; ++n)
      CHECK(cutoff_inequality_holds(cert, n));
  }
}

TEST_CASE("bound_certificate legacy dyadic fixtures") {
  SUBCASE("base 3") {
    auto cert = bound_certificate(3, std::nullopt, true);
    CHECK(cert.legacy_dyadic);
    CHECK(cert.p0 == 2);
    CHECK(cert.t == 2);  // v_2(3^2 - 1) - 1 = 3 - 1
    CHECK(cert.c == 3);  // least c with 2^c > 6
    CHECK(cert.n0 == 21);
  }
  SUBCASE("base 5") {
    auto cert = bound_certificate(5, std::nullopt, true);
    CHECK(cert.t == 2);
    CHECK(cert.c == 4);
    CHECK(cert.n0 == 23);
  }
  SUBCASE("base 7") {
    auto cert = bound_certificate(7, std::nullopt, true);
    CHECK(cert.t == 3);
    CHECK(cert.c == 4);
    CHECK(cert.n0 == 26);
  }
  SUBCASE("base 9") {
    auto cert = bound_certificate(9, std::nullopt, true);
    CHECK(cert.t == 3);
    CHECK(cert.c == 5);
    CHECK(cert.n0 == 28);
  }
  SUBCASE("explicit p0 = 2 is accepted") {
    auto cert = bound_certificate(3, Int(2), true);
    CHECK(cert.n0 == 21);
  }
}

TEST_CASE("bound_certificate rejects bad auxiliary primes") {
  CHECK_THROWS_AS(bound_certificate(10, Int(5)), std::domain_error);
  CHECK_THROWS_AS(bound_certificate(3, Int(4)), std::domain_error);
  CHECK_THROWS_AS(bound_certificate(3, Int(2)), std::domain_error);
  // legacy route needs odd base and no odd p0 override
  CHECK_THROWS_AS(bound_certificate(10, std::nullopt, true), std::domain_error);
  CHECK_THROWS_AS(bound_certificate(3, Int(5), true), std::domain_error);
}

TEST_CASE("certificate inequality matches direct evaluation") {
  // odd route: p0^(n - p0*(1+t)) > (2*m*(n-1))^p0, computed with mpz
  auto cert = bound_certificate(3);
  for (unsigned long n = 2; n <= 120; ++n) {
    long e = static_cast<long>(n) -
             static_cast<long>(cert.p0.get_ui() * (1 + cert.t));
    bool expect = false;
    if (e >= 0) {
      Int lhs, rhs;
      mpz_pow_ui(lhs.get_mpz_t(), cert.p0.get_mpz_t(),
                 static_cast<unsigned long>(e));
      Int base_rhs = 2 * Int(cert.base) * Int(n - 1);
      mpz_pow_ui(rhs.get_mpz_t(), base_rhs.get_mpz_t(), cert.p0.get_ui());
      expect = lhs > rhs;
    }
    CHECK(cutoff_inequality_holds(cert, n) == expect);
  }
}

TEST_CASE("order_gap_threshold fixtures") {
  auto gap_ok = [](unsigned long m, const Int& q) {
    return order_gap_threshold(m, q, factorize(q));
  };
  SUBCASE("small moduli go through the direct route") {
    CHECK(gap_ok(3, Int(40)));  // ord_40(3)=4 <= 6*ord_10(3)=24
    CHECK(gap_ok(3, Int(2)));
    CHECK(gap_ok(10, Int(7)));
  }
  SUBCASE("3-free part of 21! has a huge order gap") {
    // ord_q(3) = 3612672000 vs ord_rad(q)(3) = 720: ratio 5017600
    auto core = factorial_core(21, 3);
    CHECK(core.m_free_part == Int("2595688775680000"));
    CHECK_FALSE(order_gap_threshold(3, core.m_free_part, core.core_factors));
  }
  SUBCASE("high prime power with stalled lift") {
    // ord_11(3) = 5 and 3^5 = 1 + 2*11^2, so one lift is free; above
    // that the ratio grows as 11^(k-2)
    Int q(1);
    for (int i = 0; i < 21; ++i) q *= 11;
    CHECK_FALSE(gap_ok(3, q));
  }
  SUBCASE("large squarefree semiprime passes") {
    CHECK(gap_ok(3, Int(1000003) * Int(1000033)));
  }
  SUBCASE("symbolic route agrees with externally computed orders") {
    Int p11_13(1), p7_17(1), mixed(25);
    for (int i = 0; i < 13; ++i) p11_13 *= 11;
    for (int i = 0; i < 17; ++i) p7_17 *= 7;
    mixed *= 1000003;
    mixed *= 1000033;
    // all three exceed 10^12, forcing the factored route; the orders
    // themselves are still small enough to compute outright
    for (const Int& q : {p11_13, p7_17, mixed}) {
      auto f = factorize(q);
      Int ord_full = multiplicative_order(Int(3), q, f);
      Int rad_q = radical(f);
      Int ord_rad = multiplicative_order(Int(3), rad_q, factorize(rad_q));
      bool direct = ord_full <= 2 * 3 * ord_rad;
      CHECK(order_gap_threshold(3, q, f) == direct);
    }
  }
  SUBCASE("domain errors") {
    CHECK_THROWS_AS(gap_ok(3, Int(6)), std::domain_error);
    CHECK_THROWS_AS(gap_ok(3, Int(1)), std::domain_error);
    CHECK_THROWS_AS(gap_ok(2, Int(5)), std::domain_error);
  }
}

TEST_CASE("intersect_factorials on the middle-thirds set") {
  MissingDigitSet K(3, {0, 2});
  auto result = intersect_factorials(K);
  CHECK(result.complete);
  CHECK(result.members == std::vector<unsigned long>{1, 5});
  CHECK(result.certificate.n0 == 26);
  CHECK(result.certificate.p0 == 5);
  CHECK(result.verdicts.size() == 25);  // n = 1 .. n0 - 1

  std::map<unsigned long, std::pair<unsigned long, unsigned long>> positions{
      {2, {1, 1}},   {3, {2, 1}},   {4, {3, 1}},   {6, {6, 1}},
      {7, {8, 1}},   {8, {10, 1}},  {9, {12, 1}},  {10, {14, 1}},
      {11, {16, 1}}, {12, {20, 1}}, {13, {21, 1}}, {14, {23, 1}},
      {15, {26, 1}}, {16, {28, 1}}, {17, {31, 1}}, {18, {35, 1}},
      {19, {36, 1}}, {20, {39, 1}}, {21, {44, 1}}, {22, {46, 1}},
      {23, {47, 1}}, {24, {50, 1}}, {25, {53, 1}}};
  for (const auto& entry : result.verdicts) {
    if (entry.n == 1 || entry.n == 5) {
      CHECK(is_member(entry.verdict));
    } else {
      REQUIRE(std::holds_alternative<NotMember>(entry.verdict));
      const auto& nm = std::get<NotMember>(entry.verdict);
      auto want = positions.at(entry.n);
      CHECK(nm.position == want.first);
      CHECK(nm.digit == want.second);
    }
  }
}

TEST_CASE("intersect_factorials on the no-twos set") {
  MissingDigitSet K(3, {0, 1});
  auto result = intersect_factorials(K);
  CHECK(result.complete);
  CHECK(result.members == std::vector<unsigned long>{2, 3, 4, 6});
}

TEST_CASE("intersect_factorials base 4 keep {0,3}") {
  MissingDigitSet K(4, {0, 3});
  auto result = intersect_factorials(K);
  CHECK(result.complete);
  CHECK(result.members == std::vector<unsigned long>{1});
}

TEST_CASE("intersect_factorials base 5 keep {0,4}") {
  MissingDigitSet K(5, {0, 4});
  auto result = intersect_factorials(K);
  CHECK(result.complete);
  CHECK(result.members == std::vector<unsigned long>{1, 3});
}

TEST_CASE("intersect_factorials with explicit p0") {
  MissingDigitSet K(3, {0, 2});
  auto result = intersect_factorials(K, kDefaultDigitBudget, Int(7));
  CHECK(result.complete);
  CHECK(result.members == std::vector<unsigned long>{1, 5});
  CHECK(result.certificate.p0 == 7);
  CHECK(result.certificate.n0 == 33);
  CHECK(result.verdicts.size() == 32);
}

TEST_CASE("intersect_factorials is thread count independent") {
  MissingDigitSet K(3, {0, 2});
  auto serial = intersect_factorials(K, kDefaultDigitBudget, std::nullopt, 1);
  auto parallel = intersect_factorials(K, kDefaultDigitBudget, std::nullopt, 4);
  CHECK(serial.members == parallel.members);
  CHECK(serial.certificate.n0 == parallel.certificate.n0);
  REQUIRE(serial.verdicts.size() == parallel.verdicts.size());
  for (size_t i = 0; i < serial.verdicts.size(); ++i) {
    CHECK(serial.verdicts[i].n == parallel.verdicts[i].n);
    CHECK(serial.verdicts[i].verdict.index() ==
          parallel.verdicts[i].verdict.index());
  }
}

TEST_CASE("intersect_factorials flags undecided scans") {
  MissingDigitSet K(3, {0, 2});
  auto result = intersect_factorials(K, 2);
  CHECK_FALSE(result.complete);
  bool any_undecided = false;
  for (const auto& entry : result.verdicts)
    any_undecided |= std::holds_alternative<Undecided>(entry.verdict);
  CHECK(any_undecided);
}
