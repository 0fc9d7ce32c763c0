#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cantor/expansion.hpp"

namespace cantor::cli {

enum class Command { Intersect, Member, Expand, Stats, Bound, Table };
enum class OutputMode { Human, Machine };

/// Parsed invocation. digit_budget resolves as: --budget flag, else
/// the CANTOR_DIGIT_BUDGET environment variable, else the library
/// default.
struct RunConfig {
  Command command = Command::Table;
  unsigned long base = 0;
  std::vector<unsigned long> digits;
  Int num{0};
  Int den{1};
  std::optional<Int> p0;
  unsigned long digit_budget = kDefaultDigitBudget;
  std::optional<unsigned long> verify_depth;
  unsigned long expand_count = 0;
  unsigned long jobs = 1;
  bool legacy_dyadic = false;
  OutputMode output_mode = OutputMode::Human;
  std::string out_path;
};

/// Renders one result record: machine mode is a single JSON line with
/// sorted keys (byte-stable across runs); human mode is line-oriented
/// text derived from the same record.
std::string format_report(const nlohmann::json& record, OutputMode mode);

/// Dispatches a full invocation. Exit codes: 0 success, 1 usage or
/// domain error, 2 the result contains Undecided verdicts.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// main()-shaped wrapper over std::cout/std::cerr.
int run(int argc, char** argv);

}  // namespace cantor::cli
