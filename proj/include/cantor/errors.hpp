#pragma once

#include <stdexcept>
#include <string>

namespace cantor {

/// Thrown when a streaming or enumeration budget runs out before a
/// decision is reached. Carries how far the computation got.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::string what, unsigned long steps_used,
                 unsigned long budget)
      : std::runtime_error(std::move(what)),
        steps_used_(steps_used),
        budget_(budget) {}

  unsigned long steps_used() const { return steps_used_; }
  unsigned long budget() const { return budget_; }

 private:
  unsigned long steps_used_;
  unsigned long budget_;
};

}  // namespace cantor
