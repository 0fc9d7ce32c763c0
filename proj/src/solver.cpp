#include "cantor/solver.hpp"

#include <atomic>
#include <map>
#include <stdexcept>
#include <thread>

namespace cantor {

namespace {

Int pow_ui(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

}  // namespace

FactorialCore factorial_core(unsigned long n, unsigned long m) {
  if (n < 1) throw std::domain_error("factorial_core: n must be >= 1");
  if (m < 3) throw std::domain_error("factorial_core: base must be >= 3");
  FactorialCore core;
  core.n = n;
  const Int mz(m);
  for (unsigned long p : primes_up_to(n)) {
    const Int pz(p);
    unsigned long e = legendre_valuation(pz, n);
    if (mpz_divisible_ui_p(mz.get_mpz_t(), p)) {
      unsigned long em = valuation(pz, mz);
      core.shift = std::max(core.shift, (e + em - 1) / em);
    } else {
      core.m_free_part *= pow_ui(pz, e);
      core.core_factors.factors.push_back({pz, e});
    }
  }
  return core;
}

Int choose_p0(unsigned long m) {
  if (m < 3) throw std::domain_error("choose_p0: base must be >= 3");
  for (Int p(3);; p += 2)
    if (is_prime(p) && gcd(p, Int(m)) == 1) return p;
}

bool cutoff_inequality_holds(const BoundCertificate& cert, unsigned long n) {
  if (cert.legacy_dyadic) {
    // 2^(n - 2(1+t+c)) >= (n-1)^2, non-strict.
    unsigned long drop = 2 * (1 + cert.t + cert.c);
    if (n < drop) return false;
    Int lhs;
    mpz_ui_pow_ui(lhs.get_mpz_t(), 2, n - drop);
    return lhs >= Int(n - 1) * Int(n - 1);
  }
  // p0^(n - p0(1+t)) > (2m(n-1))^p0, strict.
  const unsigned long p0 = mpz_get_ui(cert.p0.get_mpz_t());
  unsigned long drop = p0 * (1 + cert.t);
  if (n <= drop) return false;
  Int lhs = pow_ui(cert.p0, n - drop);
  Int rhs = pow_ui(Int(2) * cert.base * (n - 1), p0);
  return lhs > rhs;
}

BoundCertificate bound_certificate(unsigned long m, std::optional<Int> p0,
                                   bool legacy_dyadic, unsigned long window) {
  if (m < 3) throw std::domain_error("bound_certificate: base must be >= 3");
  BoundCertificate cert;
  cert.base = m;
  cert.window_checked = window;
  cert.legacy_dyadic = legacy_dyadic;
  unsigned long scan_from = 0;

  if (legacy_dyadic) {
    if (p0 && *p0 != 2)
      throw std::domain_error("legacy dyadic mode fixes p0 = 2");
    if (m % 2 == 0)
      throw std::domain_error("legacy dyadic mode requires an odd base");
    cert.p0 = 2;
    cert.d = 1;
    cert.t = valuation(Int(2), Int(m) * Int(m) - 1) - 1;
    cert.c = 1;
    while ((Int(1) << cert.c) <= 2 * Int(m)) ++cert.c;
    scan_from = 2 * (1 + cert.t) + 1;
  } else {
    cert.p0 = p0 ? *p0 : choose_p0(m);
    if (cert.p0 < 3 || mpz_even_p(cert.p0.get_mpz_t()) || !is_prime(cert.p0))
      throw std::domain_error("p0 must be an odd prime");
    if (gcd(cert.p0, Int(m)) != 1)
      throw std::domain_error("p0 must not divide the base");
    cert.d = multiplicative_order(Int(m), cert.p0);
    cert.t = valuation(cert.p0, pow_ui(Int(m), mpz_get_ui(cert.d.get_mpz_t())) -
                                    1);
    scan_from = mpz_get_ui(cert.p0.get_mpz_t()) * (1 + cert.t) + 1;
  }

  // Least n passing the inequality with the whole forward window clean.
  unsigned long run = 0, first = 0;
  for (unsigned long n = scan_from; run <= window; ++n) {
    if (cutoff_inequality_holds(cert, n)) {
      if (run == 0) first = n;
      ++run;
    } else {
      run = 0;
    }
  }
  cert.n0 = first;
  return cert;
}

namespace {

// nu_2 of the order of odd m modulo 2^e, from the 2-adic rule.
unsigned long dyadic_order_exponent(unsigned long m, unsigned long e) {
  unsigned long t1 = valuation(Int(2), Int(m) - 1);
  if (e <= t1) return 0;
  unsigned long T = valuation(Int(2), Int(m) * Int(m) - 1);
  if (e <= T) return 1;
  return e - T + 1;
}

// Largest k <= cap with a^d = 1 mod p^k (k >= 1 guaranteed by d's
// definition). Avoids forming a^d as an integer.
unsigned long lifted_valuation(const Int& a, const Int& d, const Int& p,
                               unsigned long cap) {
  unsigned long t = 1;
  Int pk = p;
  while (t < cap) {
    pk *= p;
    Int r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), pk.get_mpz_t());
    if (r != 1) break;
    ++t;
  }
  return t;
}

}  // namespace

bool order_gap_threshold(unsigned long m, const Int& q,
                         const Factorization& q_factors) {
  if (m < 3) throw std::domain_error("order_gap_threshold: base must be >= 3");
  if (q < 2)
    throw std::domain_error("order_gap_threshold: modulus must be >= 2");
  if (gcd(q, Int(m)) != 1)
    throw std::domain_error(
        "order_gap_threshold: modulus shares a factor with the base");
  validate_factorization(q, q_factors);

  static const Int kDirectLimit("1000000000000");
  const Int mz(m);
  const Int bound = 2 * mz;

  if (q <= kDirectLimit) {
    Int ord = multiplicative_order(mz, q, q_factors);
    Int ord_rad = multiplicative_order(mz, radical(q_factors));
    return ord <= bound * ord_rad;
  }

  // Factored route: ord_q(m) = lcm over prime powers, each given by
  // the lifting rule, so the quotient ord_q / ord_rad is a product of
  // small prime powers that can be compared against 2m directly.
  std::map<Int, unsigned long> full, rad;
  auto fold = [](std::map<Int, unsigned long>& into, const Int& v,
                 unsigned long extra_p_exp, const Int& p) {
    for (const auto& [ell, e] : factorize(v).factors)
      into[ell] = std::max(into[ell], e);
    if (extra_p_exp > 0)
      into[p] = std::max(into[p], extra_p_exp);
  };
  for (const auto& [p, e] : q_factors.factors) {
    if (p == 2) {
      fold(full, Int(1), dyadic_order_exponent(m, e), Int(2));
      fold(rad, Int(1), dyadic_order_exponent(m, 1), Int(2));
      continue;
    }
    Int d = multiplicative_order(mz, p);
    unsigned long t = lifted_valuation(mz, d, p, e);
    fold(full, d, e > t ? e - t : 0, p);
    fold(rad, d, 0, p);
  }
  Int ratio(1);
  for (const auto& [ell, e] : full) {
    auto it = rad.find(ell);
    unsigned long er = it == rad.end() ? 0 : it->second;
    ratio *= pow_ui(ell, e - er);
    if (ratio > bound) return false;
  }
  return ratio <= bound;
}

IntersectionResult intersect_factorials(const MissingDigitSet& K,
                                        unsigned long budget,
                                        std::optional<Int> p0,
                                        unsigned long jobs) {
  IntersectionResult result;
  result.certificate = bound_certificate(K.base(), std::move(p0));
  const unsigned long n0 = result.certificate.n0;

  std::vector<Rat> values;
  Int fact(1);
  for (unsigned long n = 1; n < n0; ++n) {
    fact *= n;
    values.push_back(make_rat(1, fact));
  }

  result.verdicts.resize(values.size());
  auto scan = [&](unsigned long idx) {
    result.verdicts[idx] = {static_cast<unsigned long>(idx + 1),
                            membership(values[idx], K, budget)};
  };
  if (jobs <= 1) {
    for (unsigned long i = 0; i < values.size(); ++i) scan(i);
  } else {
    std::atomic<unsigned long> next{0};
    std::vector<std::thread> pool;
    for (unsigned long j = 0; j < std::min<unsigned long>(jobs, values.size());
         ++j)
      pool.emplace_back([&] {
        for (unsigned long i = next.fetch_add(1); i < values.size();
             i = next.fetch_add(1))
          scan(i);
      });
    for (auto& th : pool) th.join();
  }

  for (const auto& entry : result.verdicts) {
    if (is_member(entry.verdict)) result.members.push_back(entry.n);
    if (is_undecided(entry.verdict)) result.complete = false;
  }
  return result;
}

}  // namespace cantor
