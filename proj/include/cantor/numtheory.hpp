#pragma once

#include <gmpxx.h>

#include <vector>

namespace cantor {

using Int = mpz_class;

/// One prime power p^e in a factorization.
struct PrimePower {
  Int prime;
  unsigned long exponent = 0;
};

/// Multiset of prime powers with strictly increasing primes. The empty
/// list represents the value 1. `certified` is false when a prime was
/// only established probabilistically (beyond 64-bit Miller-Rabin
/// scale).
struct Factorization {
  std::vector<PrimePower> factors;
  bool certified = true;

  Int value() const;
};

/// Greatest common divisor of two non-negative integers. gcd(0,0) is
/// undefined and rejected.
Int gcd(const Int& a, const Int& b);

/// Least common multiple; requires a,b >= 1.
Int lcm(const Int& a, const Int& b);

/// Largest s with a^s | b, for a >= 2, b >= 1. a need not be prime.
unsigned long valuation(const Int& a, const Int& b);

/// Deterministic Miller-Rabin below 2^64; fixed-witness probabilistic
/// above (see primality_is_deterministic).
bool is_prime(const Int& n);

/// True when is_prime(n) is a proof rather than a probable-prime claim.
bool primality_is_deterministic(const Int& n);

/// Factor n >= 1 by trial division over primes <= 10^6, then Pollard
/// rho with Miller-Rabin certification for what survives.
Factorization factorize(const Int& n);

/// Checks the Factorization invariants against the value it is
/// claimed to factor; throws std::domain_error on any mismatch.
void validate_factorization(const Int& value, const Factorization& f);

/// Product of the distinct primes; 1 for the empty factorization.
Int radical(const Factorization& f);

/// All primes <= n, increasing.
std::vector<unsigned long> primes_up_to(unsigned long n);

/// Exponent of the prime p in n!, via the finite sum of floor(n/p^k).
unsigned long legendre_valuation(const Int& p, unsigned long n);

/// Carmichael function of the factored modulus: the exponent of the
/// multiplicative group mod value(f).
Int carmichael(const Factorization& f);

/// Least t >= 1 with a^t = 1 (mod q), for gcd(a,q) = 1 and q >= 2.
/// Computed by stripping primes from carmichael(q_factors), never by
/// stepping through powers one at a time.
Int multiplicative_order(const Int& a, const Int& q,
                         const Factorization& q_factors);

/// Convenience overload that factors q itself.
Int multiplicative_order(const Int& a, const Int& q);

/// Order of a modulo p0^k for an odd prime p0 coprime to a, from the
/// closed form: d for k <= t, d * p0^(k-t) above, where d is the order
/// mod p0 and t the p0-valuation of a^d - 1. p0 = 2 is rejected; use
/// dyadic_order.
Int prime_power_order(const Int& a, const Int& p0, unsigned long k);

/// Order of an odd a modulo 2^k. Handles the 2-adic irregularity the
/// odd-prime closed form misses.
Int dyadic_order(const Int& a, unsigned long k);

}  // namespace cantor
