#pragma once

#include <map>
#include <variant>
#include <vector>

#include "cantor/numtheory.hpp"

namespace cantor {

using Rat = mpq_class;

/// Steps the digit-stream budget defaults to when the caller does not
/// say otherwise. Overridable per call and via the CLI.
inline constexpr unsigned long kDefaultDigitBudget = 1'000'000;

/// Canonicalized fraction num/den with den >= 1. Throws on den < 1.
Rat make_rat(const Int& num, const Int& den);

/// Base m >= 3 together with an allowed digit set D, 1 < |D| < m,
/// D a subset of {0,...,m-1}. Digits are stored sorted and deduped.
class MissingDigitSet {
 public:
  MissingDigitSet(unsigned long base, std::vector<unsigned long> digits);

  unsigned long base() const { return base_; }
  const std::vector<unsigned long>& digits() const { return digits_; }
  bool contains(unsigned long digit) const;

 private:
  unsigned long base_;
  std::vector<unsigned long> digits_;
};

/// Split of a denominator q relative to the base m:
/// q = m_part * m_free_part with gcd(m_free_part, m) = 1 and every
/// prime of m_part dividing m. preperiod_len is the least s with
/// m_part | m^s; the base-m expansion of any reduced r/q has exactly
/// that preperiod, then period ord_{m_free_part}(m).
struct ExpansionSplit {
  unsigned long preperiod_len = 0;
  Int m_part{1};
  Int m_free_part{1};
};

ExpansionSplit split_denominator(const Int& q, const Int& m,
                                 const Factorization& q_factors);

/// Overload that peels gcds instead of requiring a factorization.
ExpansionSplit split_denominator(const Int& q, const Int& m);

/// One long-division step: the emitted digit and the remainder left
/// behind.
struct DigitStep {
  unsigned long digit = 0;
  Int remainder;
};

/// Stateful long-division cursor over the base-m expansion of x in
/// [0,1). Distinct cursors are independent.
class DigitStream {
 public:
  DigitStream(const Rat& x, unsigned long base);

  unsigned long next_digit();
  const Int& remainder() const { return rem_; }
  const Int& denominator() const { return den_; }
  unsigned long steps() const { return steps_; }

 private:
  Int rem_;
  Int den_;
  unsigned long base_;
  unsigned long steps_ = 0;
};

/// First `limit` long-division steps of x in [0,1).
std::vector<DigitStep> digit_stream(const Rat& x, unsigned long m,
                                    unsigned long limit);

/// Digit counts over exactly one full period of a purely periodic
/// expansion. Sum of counts equals period_len = ord_den(m).
struct DigitStats {
  unsigned long period_len = 0;
  std::vector<unsigned long> counts;  // indexed by digit 0..m-1
};

/// Streams one full period of x = r/q with gcd(q, m) = 1 and counts
/// each digit. Throws BudgetExceeded when the period outruns budget.
DigitStats digit_stats(const Rat& x, unsigned long m,
                       unsigned long budget = kDefaultDigitBudget);

/// Outcome of the digit-frequency inequality
///   |N_i - ord_q(m)/m| <= 2 ord_rad(q)(m)
/// for each digit i. margins[i] = bound - |N_i - ord/m| as an exact
/// rational; holds iff every margin is >= 0.
struct KorobovReport {
  bool holds = false;
  unsigned long period_len = 0;
  Int bound;
  std::vector<Rat> margins;
};

KorobovReport korobov_check(const Rat& x, unsigned long m,
                            unsigned long budget = kDefaultDigitBudget);

/// How a Member verdict was reached.
enum class Witness {
  Periodic,  // remainder cycle closed with all digits allowed
  ZeroTail,  // terminating digits, 0^w tail
  HighTail,  // last digit lowered, (m-1)^w tail
  One,       // x = 1 read as 0.(m-1)^w
};

/// Which representation a NotMember verdict reports. For terminating
/// expansions both candidate representations are tried; the one that
/// failed deepest (ties: ZeroTail) is reported.
enum class FailedRep { Canonical, ZeroTail, HighTail };

struct Member {
  Witness witness;
  unsigned long digits_checked = 0;
};

struct NotMember {
  unsigned long position = 0;  // 1-based index of the disallowed digit
  unsigned long digit = 0;
  FailedRep representation = FailedRep::Canonical;
};

struct Undecided {
  unsigned long steps_used = 0;
  unsigned long budget = 0;
};

using MembershipVerdict = std::variant<Member, NotMember, Undecided>;

bool is_member(const MembershipVerdict& v);
bool is_undecided(const MembershipVerdict& v);

/// Decides x in K_{m,D} for x in [0,1] by streaming digits with O(1)
/// cycle detection. Terminating expansions are accepted when either
/// the 0^w form or the (m-1)^w form stays inside D; a NotMember
/// position is the first disallowed digit of the reported
/// representation, which for m-adic x is also the least cylinder depth
/// excluding x.
MembershipVerdict membership(const Rat& x, const MissingDigitSet& K,
                             unsigned long budget = kDefaultDigitBudget);

}  // namespace cantor
