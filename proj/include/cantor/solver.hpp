#pragma once

#include <optional>
#include <vector>

#include "cantor/expansion.hpp"
#include "cantor/numtheory.hpp"

namespace cantor {

/// n! with every prime factor of m divided out. Built symbolically
/// from primes <= n and Legendre exponents, never by factoring n!.
struct FactorialCore {
  unsigned long n = 1;
  Int m_free_part{1};          // M_n, coprime to m
  unsigned long shift = 0;     // preperiod of 1/n! base m
  Factorization core_factors;  // factorization of M_n
};

FactorialCore factorial_core(unsigned long n, unsigned long m);

/// Smallest odd prime not dividing m.
Int choose_p0(unsigned long m);

/// Effective cutoff certificate: for every n >= n0 the digit-frequency
/// argument rules 1/n! out of K_{m,D}, because
///   n/p0 - 1 - t > log_p0(n-1) + log_p0(2m)
/// holds there (checked in exact integer arithmetic over
/// [n0, n0 + window_checked]). In legacy dyadic mode p0 = 2 and the
/// inequality is the non-strict variant with the 2-adic order rule,
/// padded by the least c with 2^c > 2m.
struct BoundCertificate {
  unsigned long base = 0;      // m
  Int p0;                      // odd prime, or 2 in legacy mode
  Int d;                       // ord_p0(m) (1 in legacy mode)
  unsigned long t = 0;         // nu_p0(m^d - 1); legacy: nu_2(m^2-1) - 1
  unsigned long c = 0;         // legacy only: least c with 2^c > 2m
  unsigned long n0 = 0;
  unsigned long window_checked = 0;
  bool legacy_dyadic = false;
};

/// Exact-arithmetic evaluation of the certificate inequality at n.
/// Odd route: p0^(n - p0(1+t)) > (2m(n-1))^p0, strict.
/// Legacy route: 2^(n - 2(1+t+c)) >= (n-1)^2, non-strict.
bool cutoff_inequality_holds(const BoundCertificate& cert, unsigned long n);

/// Minimal n0 > p0(1+t) such that the inequality holds at n0 and for
/// the following `window` values of n.
BoundCertificate bound_certificate(unsigned long m,
                                   std::optional<Int> p0 = std::nullopt,
                                   bool legacy_dyadic = false,
                                   unsigned long window = 1000);

/// True iff ord_q(m) <= 2m * ord_rad(q)(m), for gcd(q, m) = 1.
/// Small q (<= 10^12) compares the orders directly; larger q is
/// decided through the factored forms of both orders, so neither
/// giant integer is ever materialized.
bool order_gap_threshold(unsigned long m, const Int& q,
                         const Factorization& q_factors);

/// One scanned n with its verdict on 1/n!.
struct ScanEntry {
  unsigned long n = 0;
  MembershipVerdict verdict;
};

struct IntersectionResult {
  BoundCertificate certificate;
  std::vector<unsigned long> members;  // sorted n with 1/n! in K
  std::vector<ScanEntry> verdicts;     // every n in [1, n0)
  bool complete = true;                // false iff any Undecided
};

/// Decides {1/n! : n >= 1} within K by certifying the cutoff n0 and
/// testing 1/n! directly for each n < n0. Undecided verdicts are kept
/// and flagged, never dropped. `jobs` > 1 splits the scan across
/// threads; output order is by n regardless.
IntersectionResult intersect_factorials(const MissingDigitSet& K,
                                        unsigned long budget =
                                            kDefaultDigitBudget,
                                        std::optional<Int> p0 = std::nullopt,
                                        unsigned long jobs = 1);

}  // namespace cantor
