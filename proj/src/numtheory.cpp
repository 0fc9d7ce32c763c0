#include "cantor/numtheory.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cantor {

namespace {

constexpr unsigned long kTrialDivisionBound = 1'000'000;

const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes =
      primes_up_to(kTrialDivisionBound);
  return primes;
}

bool fits_u64(const Int& n) { return mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

// Miller-Rabin with a fixed witness set. The first twelve primes are a
// deterministic witness set for all n < 3.3 * 10^24, which covers the
// 64-bit range with room to spare.
bool miller_rabin(const Int& n) {
  static const unsigned long kWitnesses[] = {2,  3,  5,  7,  11, 13,
                                             17, 19, 23, 29, 31, 37};
  Int d = n - 1;
  unsigned long r = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), r);
  for (unsigned long w : kWitnesses) {
    Int a(w);
    if (mpz_cmp_ui(n.get_mpz_t(), w) <= 0) continue;
    Int x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned long i = 1; i < r; ++i) {
      x = x * x % n;
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// Brent-style rho with deterministic parameters so repeated runs factor
// identically.
Int pollard_rho(const Int& n) {
  for (unsigned long c = 1;; ++c) {
    Int x(2), y(2), d(1);
    unsigned long power = 1, lam = 0;
    while (d == 1) {
      if (lam == power) {
        x = y;
        power *= 2;
        lam = 0;
      }
      y = (y * y + c) % n;
      ++lam;
      Int diff = x > y ? x - y : y - x;
      if (diff == 0) break;  // cycle collapsed, retry with next c
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != 1 && d != n) return d;
  }
}

void factor_large(const Int& n, std::map<Int, unsigned long>& out,
                  bool& certified) {
  if (n == 1) return;
  if (is_prime(n)) {
    certified = certified && primality_is_deterministic(n);
    out[n] += 1;
    return;
  }
  Int d = pollard_rho(n);
  factor_large(d, out, certified);
  factor_large(n / d, out, certified);
}

}  // namespace

Int Factorization::value() const {
  Int v(1);
  for (const auto& pp : factors) {
    Int q;
    mpz_pow_ui(q.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
    v *= q;
  }
  return v;
}

Int gcd(const Int& a, const Int& b) {
  if (a < 0 || b < 0) throw std::domain_error("gcd: arguments must be >= 0");
  if (a == 0 && b == 0) throw std::domain_error("gcd(0, 0) is undefined");
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Int lcm(const Int& a, const Int& b) {
  if (a < 1 || b < 1) throw std::domain_error("lcm: arguments must be >= 1");
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

unsigned long valuation(const Int& a, const Int& b) {
  if (a < 2) throw std::domain_error("valuation: base must be >= 2");
  if (b < 1) throw std::domain_error("valuation: argument must be >= 1");
  Int stripped;
  return mpz_remove(stripped.get_mpz_t(), b.get_mpz_t(), a.get_mpz_t());
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul,
                          29ul, 31ul, 37ul}) {
    if (mpz_cmp_ui(n.get_mpz_t(), p) == 0) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  if (n < 41 * 41) return true;
  if (!miller_rabin(n)) return false;
  // Beyond the deterministic range, add GMP's own rounds on top of the
  // fixed witnesses.
  if (!fits_u64(n))
    return mpz_probab_prime_p(n.get_mpz_t(), 25) != 0;
  return true;
}

bool primality_is_deterministic(const Int& n) { return fits_u64(n); }

Factorization factorize(const Int& n) {
  if (n < 1) throw std::domain_error("factorize: argument must be >= 1");
  Factorization result;
  if (n == 1) return result;

  Int m = n;
  for (unsigned long p : small_primes()) {
    if (Int(p) * p > m) break;
    if (!mpz_divisible_ui_p(m.get_mpz_t(), p)) continue;
    unsigned long e = 0;
    do {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      ++e;
    } while (mpz_divisible_ui_p(m.get_mpz_t(), p));
    result.factors.push_back({Int(p), e});
  }
  if (m > 1) {
    if (m <= Int(kTrialDivisionBound) * kTrialDivisionBound) {
      // No divisor <= 10^6 remains, so this cofactor is prime.
      result.factors.push_back({m, 1});
    } else {
      std::map<Int, unsigned long> large;
      factor_large(m, large, result.certified);
      for (const auto& [p, e] : large) result.factors.push_back({p, e});
    }
  }
  std::sort(result.factors.begin(), result.factors.end(),
            [](const PrimePower& a, const PrimePower& b) {
              return a.prime < b.prime;
            });
  return result;
}

Int radical(const Factorization& f) {
  Int r(1);
  for (const auto& pp : f.factors) r *= pp.prime;
  return r;
}

std::vector<unsigned long> primes_up_to(unsigned long n) {
  std::vector<unsigned long> primes;
  if (n < 2) return primes;
  std::vector<bool> composite(n + 1, false);
  for (unsigned long i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (unsigned long j = i * i; j <= n; j += i) {
      composite[j] = true;
      if (j > n - i) break;  // overflow guard near ULONG_MAX
    }
  }
  return primes;
}

unsigned long legendre_valuation(const Int& p, unsigned long n) {
  if (!is_prime(p)) throw std::domain_error("legendre_valuation: p not prime");
  unsigned long sum = 0;
  Int pk = p;
  while (pk <= n) {
    sum += mpz_get_ui(Int(Int(n) / pk).get_mpz_t());
    pk *= p;
  }
  return sum;
}

Int carmichael(const Factorization& f) {
  Int lam(1);
  for (const auto& [p, e] : f.factors) {
    Int lam_pe;
    if (p == 2) {
      if (e == 1)
        lam_pe = 1;
      else if (e == 2)
        lam_pe = 2;
      else
        mpz_ui_pow_ui(lam_pe.get_mpz_t(), 2, e - 2);
    } else {
      mpz_pow_ui(lam_pe.get_mpz_t(), p.get_mpz_t(), e - 1);
      lam_pe *= p - 1;
    }
    mpz_lcm(lam.get_mpz_t(), lam.get_mpz_t(), lam_pe.get_mpz_t());
  }
  return lam;
}

void validate_factorization(const Int& value, const Factorization& f) {
  Int prev(1);
  for (const auto& [p, e] : f.factors) {
    if (e < 1)
      throw std::domain_error("factorization: exponent must be >= 1");
    if (p <= prev)
      throw std::domain_error("factorization: primes must strictly increase");
    if (!is_prime(p))
      throw std::domain_error("factorization: listed factor is not prime");
    prev = p;
  }
  if (f.value() != value)
    throw std::domain_error("factorization does not match its value");
}

Int multiplicative_order(const Int& a, const Int& q,
                         const Factorization& q_factors) {
  if (a < 1) throw std::domain_error("multiplicative_order: base must be >= 1");
  if (q < 2)
    throw std::domain_error("multiplicative_order: modulus must be >= 2");
  validate_factorization(q, q_factors);
  if (gcd(a, q) != 1)
    throw std::domain_error("multiplicative_order: base shares a factor "
                            "with the modulus");

  // Start from the group exponent and strip one prime at a time.
  Int e = carmichael(q_factors);
  for (const auto& [ell, _] : factorize(e).factors) {
    while (mpz_divisible_p(e.get_mpz_t(), ell.get_mpz_t())) {
      Int reduced = e / ell;
      Int pow;
      mpz_powm(pow.get_mpz_t(), a.get_mpz_t(), reduced.get_mpz_t(),
               q.get_mpz_t());
      if (pow != 1) break;
      e = reduced;
    }
  }
  return e;
}

Int multiplicative_order(const Int& a, const Int& q) {
  return multiplicative_order(a, q, factorize(q));
}

Int prime_power_order(const Int& a, const Int& p0, unsigned long k) {
  if (p0 == 2)
    throw std::domain_error(
        "prime_power_order: p0 = 2 is outside the closed form; use "
        "dyadic_order");
  if (!is_prime(p0) || p0 < 3)
    throw std::domain_error("prime_power_order: p0 must be an odd prime");
  if (k < 1) throw std::domain_error("prime_power_order: k must be >= 1");
  if (gcd(a, p0) != 1)
    throw std::domain_error("prime_power_order: base divisible by p0");

  Factorization p0f;
  p0f.factors.push_back({p0, 1});
  Int d = multiplicative_order(a, p0, p0f);
  // t = nu_{p0}(a^d - 1), probed modulo p0^j so a^d never materializes;
  // only min(t, k) matters, and t >= 1 by the choice of d.
  unsigned long t = 1;
  Int pj = p0;
  while (t < k) {
    pj *= p0;
    Int r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), pj.get_mpz_t());
    if (r != 1) break;
    ++t;
  }
  if (k <= t) return d;
  Int lift;
  mpz_pow_ui(lift.get_mpz_t(), p0.get_mpz_t(), k - t);
  return d * lift;
}

Int dyadic_order(const Int& a, unsigned long k) {
  if (a < 3 || mpz_even_p(a.get_mpz_t()))
    throw std::domain_error("dyadic_order: base must be odd and >= 3");
  if (k < 1) throw std::domain_error("dyadic_order: k must be >= 1");
  unsigned long t1 = valuation(2, a - 1);
  if (k <= t1) return 1;
  unsigned long T = valuation(2, a * a - 1);
  if (k <= T) return 2;
  Int result;
  mpz_ui_pow_ui(result.get_mpz_t(), 2, k - T + 1);
  return result;
}

}  // namespace cantor
