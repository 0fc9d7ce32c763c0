#include "cantor/expansion.hpp"

#include <algorithm>
#include <stdexcept>

#include "cantor/errors.hpp"

namespace cantor {

namespace {

// Canonical copy with num >= 0 guaranteed by the callers' range checks.
Rat canonical(const Rat& x) {
  Rat y = x;
  y.canonicalize();
  return y;
}

void require_unit_interval(const Rat& x, bool allow_one) {
  if (x < 0 || x > 1 || (!allow_one && x == 1))
    throw std::domain_error(allow_one ? "value must lie in [0, 1]"
                                      : "value must lie in [0, 1)");
}

}  // namespace

Rat make_rat(const Int& num, const Int& den) {
  if (den < 1) throw std::domain_error("denominator must be >= 1");
  if (num < 0) throw std::domain_error("numerator must be >= 0");
  Rat x(num, den);
  x.canonicalize();
  return x;
}

MissingDigitSet::MissingDigitSet(unsigned long base,
                                 std::vector<unsigned long> digits)
    : base_(base), digits_(std::move(digits)) {
  if (base_ < 3) throw std::domain_error("digit-set base must be >= 3");
  std::sort(digits_.begin(), digits_.end());
  if (std::adjacent_find(digits_.begin(), digits_.end()) != digits_.end())
    throw std::domain_error("digit set must not repeat a digit");
  if (!digits_.empty() && digits_.back() >= base_)
    throw std::domain_error("digit out of range for the base");
  if (digits_.size() < 2 || digits_.size() >= base_)
    throw std::domain_error("digit set must satisfy 1 < |D| < m");
}

bool MissingDigitSet::contains(unsigned long digit) const {
  return std::binary_search(digits_.begin(), digits_.end(), digit);
}

ExpansionSplit split_denominator(const Int& q, const Int& m,
                                 const Factorization& q_factors) {
  if (q < 1) throw std::domain_error("split_denominator: q must be >= 1");
  if (m < 2) throw std::domain_error("split_denominator: base must be >= 2");
  validate_factorization(q, q_factors);
  ExpansionSplit out;
  for (const auto& [p, e] : q_factors.factors) {
    if (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
      Int pe;
      mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
      out.m_part *= pe;
      unsigned long em = valuation(p, m);
      out.preperiod_len =
          std::max(out.preperiod_len, (e + em - 1) / em);  // ceil(e/em)
    } else {
      Int pe;
      mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
      out.m_free_part *= pe;
    }
  }
  return out;
}

ExpansionSplit split_denominator(const Int& q, const Int& m) {
  if (q < 1) throw std::domain_error("split_denominator: q must be >= 1");
  if (m < 2) throw std::domain_error("split_denominator: base must be >= 2");
  ExpansionSplit out;
  Int qf = q;
  for (Int g = gcd(qf, m); g > 1; g = gcd(qf, m)) qf /= g;
  out.m_free_part = qf;
  out.m_part = q / qf;
  // s = least power of m the m-part divides.
  for (Int t = out.m_part; t > 1; t /= gcd(t, m)) ++out.preperiod_len;
  return out;
}

DigitStream::DigitStream(const Rat& x, unsigned long base) : base_(base) {
  if (base < 2) throw std::domain_error("digit stream: base must be >= 2");
  Rat y = canonical(x);
  require_unit_interval(y, /*allow_one=*/false);
  rem_ = y.get_num();
  den_ = y.get_den();
}

unsigned long DigitStream::next_digit() {
  rem_ *= base_;
  Int quot;
  mpz_fdiv_qr(quot.get_mpz_t(), rem_.get_mpz_t(), rem_.get_mpz_t(),
              den_.get_mpz_t());
  ++steps_;
  return mpz_get_ui(quot.get_mpz_t());
}

std::vector<DigitStep> digit_stream(const Rat& x, unsigned long m,
                                    unsigned long limit) {
  DigitStream stream(x, m);
  std::vector<DigitStep> out;
  out.reserve(limit);
  for (unsigned long i = 0; i < limit; ++i) {
    unsigned long d = stream.next_digit();
    out.push_back({d, stream.remainder()});
  }
  return out;
}

DigitStats digit_stats(const Rat& x, unsigned long m, unsigned long budget) {
  Rat y = canonical(x);
  if (y <= 0 || y >= 1)
    throw std::domain_error("digit_stats: value must lie in (0, 1)");
  if (gcd(y.get_den(), Int(m)) != 1)
    throw std::domain_error(
        "digit_stats: denominator shares a factor with the base");
  if (budget < 1) throw std::domain_error("digit_stats: budget must be >= 1");

  DigitStats stats;
  stats.counts.assign(m, 0);
  DigitStream stream(y, m);
  const Int start = stream.remainder();
  for (unsigned long j = 1; j <= budget; ++j) {
    ++stats.counts[stream.next_digit()];
    if (stream.remainder() == start) {
      stats.period_len = j;
      return stats;
    }
  }
  throw BudgetExceeded("digit_stats: period exceeds budget", budget, budget);
}

KorobovReport korobov_check(const Rat& x, unsigned long m,
                            unsigned long budget) {
  Rat y = canonical(x);
  if (y <= 0 || y >= 1)
    throw std::domain_error("korobov_check: value must lie in (0, 1)");
  if (gcd(y.get_den(), Int(m)) != 1)
    throw std::domain_error(
        "korobov_check: denominator shares a factor with the base");

  DigitStats stats = digit_stats(y, m, budget);
  Int rad = radical(factorize(y.get_den()));
  KorobovReport report;
  report.period_len = stats.period_len;
  report.bound = 2 * multiplicative_order(Int(m), rad);
  report.holds = true;
  const Rat mean = make_rat(Int(stats.period_len), Int(m));
  for (unsigned long i = 0; i < m; ++i) {
    Rat dev = Rat(Int(stats.counts[i])) - mean;
    if (dev < 0) dev = -dev;
    Rat margin = Rat(report.bound) - dev;
    if (margin < 0) report.holds = false;
    report.margins.push_back(margin);
  }
  return report;
}

bool is_member(const MembershipVerdict& v) {
  return std::holds_alternative<Member>(v);
}

bool is_undecided(const MembershipVerdict& v) {
  return std::holds_alternative<Undecided>(v);
}

namespace {

// Terminating expansions have two candidate representations. Reports
// Member through whichever accepts, else the failure that happened
// deepest (ties go to the zero-tail form).
MembershipVerdict decide_terminating(const std::vector<unsigned long>& ds,
                                     const MissingDigitSet& K) {
  const unsigned long m = K.base();
  const unsigned long s = ds.size();
  bool prefix_ok = true;
  for (unsigned long i = 0; i + 1 < s && prefix_ok; ++i)
    prefix_ok = K.contains(ds[i]);

  if (prefix_ok && K.contains(ds[s - 1]) && K.contains(0))
    return Member{Witness::ZeroTail, s};
  if (prefix_ok && ds[s - 1] >= 1 && K.contains(ds[s - 1] - 1) &&
      K.contains(m - 1))
    return Member{Witness::HighTail, s};

  // 1-based first failures; position s+1 means the infinite tail.
  unsigned long fail_zero = s + 1;
  for (unsigned long i = 0; i < s; ++i)
    if (!K.contains(ds[i])) {
      fail_zero = i + 1;
      break;
    }
  unsigned long fail_high = s + 1;
  for (unsigned long i = 0; i < s; ++i) {
    unsigned long d = (i + 1 == s) ? ds[i] - 1 : ds[i];
    if (i + 1 == s && ds[i] == 0) d = m;  // impossible digit, always fails
    if (!K.contains(d)) {
      fail_high = i + 1;
      break;
    }
  }

  if (fail_zero >= fail_high) {
    unsigned long digit = fail_zero <= s ? ds[fail_zero - 1] : 0;
    return NotMember{fail_zero, digit, FailedRep::ZeroTail};
  }
  unsigned long digit = fail_high < s    ? ds[fail_high - 1]
                        : fail_high == s ? ds[s - 1] - 1
                                         : m - 1;
  return NotMember{fail_high, digit, FailedRep::HighTail};
}

}  // namespace

MembershipVerdict membership(const Rat& x, const MissingDigitSet& K,
                             unsigned long budget) {
  Rat y = canonical(x);
  require_unit_interval(y, /*allow_one=*/true);
  if (budget < 1) throw std::domain_error("membership: budget must be >= 1");
  const unsigned long m = K.base();

  if (y == 1)
    return K.contains(m - 1)
               ? MembershipVerdict(Member{Witness::One, 0})
               : MembershipVerdict(NotMember{1, m - 1, FailedRep::HighTail});
  if (y == 0)
    return K.contains(0)
               ? MembershipVerdict(Member{Witness::ZeroTail, 0})
               : MembershipVerdict(NotMember{1, 0, FailedRep::ZeroTail});

  const ExpansionSplit split = split_denominator(y.get_den(), Int(m));
  const unsigned long s = split.preperiod_len;

  if (split.m_free_part == 1) {
    // Terminates after exactly s digits, the last of which is >= 1.
    std::vector<unsigned long> ds;
    ds.reserve(s);
    DigitStream stream(y, m);
    for (unsigned long i = 0; i < s; ++i) ds.push_back(stream.next_digit());
    return decide_terminating(ds, K);
  }

  // Eventually periodic: one representation, O(1)-memory cycle check
  // anchored at the remainder after the preperiod.
  DigitStream stream(y, m);
  Int anchor = s == 0 ? stream.remainder() : Int(0);
  bool anchored = s == 0;
  for (unsigned long j = 1; j <= budget; ++j) {
    unsigned long d = stream.next_digit();
    if (!K.contains(d)) return NotMember{j, d, FailedRep::Canonical};
    if (j == s) {
      anchor = stream.remainder();
      anchored = true;
    } else if (anchored && j > s && stream.remainder() == anchor) {
      return Member{Witness::Periodic, j};
    }
  }
  return Undecided{budget, budget};
}

}  // namespace cantor
