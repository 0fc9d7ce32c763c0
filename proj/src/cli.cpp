#include "cantor/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cantor/errors.hpp"
#include "cantor/oracle.hpp"
#include "cantor/solver.hpp"

namespace cantor::cli {

namespace {

using nlohmann::json;

const char* witness_name(Witness w) {
  switch (w) {
    case Witness::Periodic: return "periodic";
    case Witness::ZeroTail: return "zero_tail";
    case Witness::HighTail: return "high_tail";
    case Witness::One: return "one";
  }
  return "?";
}

const char* rep_name(FailedRep r) {
  switch (r) {
    case FailedRep::Canonical: return "canonical";
    case FailedRep::ZeroTail: return "zero_tail";
    case FailedRep::HighTail: return "high_tail";
  }
  return "?";
}

std::string rat_str(const Rat& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

json verdict_json(const MembershipVerdict& v) {
  json j;
  if (const auto* m = std::get_if<Member>(&v)) {
    j["kind"] = "member";
    j["witness"] = witness_name(m->witness);
    j["digits_checked"] = m->digits_checked;
  } else if (const auto* n = std::get_if<NotMember>(&v)) {
    j["kind"] = "not_member";
    j["position"] = n->position;
    j["digit"] = n->digit;
    j["representation"] = rep_name(n->representation);
  } else {
    const auto& u = std::get<Undecided>(v);
    j["kind"] = "undecided";
    j["steps_used"] = u.steps_used;
    j["budget"] = u.budget;
  }
  return j;
}

json cert_json(const BoundCertificate& c) {
  json j;
  j["base"] = c.base;
  j["p0"] = c.p0.get_str();
  j["d"] = c.d.get_str();
  j["t"] = c.t;
  if (c.legacy_dyadic) j["c"] = c.c;
  j["n0"] = c.n0;
  j["window_checked"] = c.window_checked;
  j["legacy_dyadic"] = c.legacy_dyadic;
  return j;
}

std::string braces(const json& arr) {
  std::string s = "{";
  for (size_t i = 0; i < arr.size(); ++i) {
    if (i) s += ",";
    s += arr[i].dump();
  }
  return s + "}";
}

std::string cert_line(const json& c) {
  std::ostringstream os;
  os << "certificate: p0=" << c["p0"].get<std::string>()
     << " d=" << c["d"].get<std::string>() << " t=" << c["t"];
  if (c["legacy_dyadic"].get<bool>()) os << " c=" << c["c"];
  os << " n0=" << c["n0"] << " window=" << c["window_checked"];
  if (c["legacy_dyadic"].get<bool>()) os << " legacy_dyadic=yes";
  return os.str();
}

std::string verdict_line(const json& v) {
  std::ostringstream os;
  const std::string kind = v["kind"].get<std::string>();
  os << kind;
  if (kind == "member")
    os << " witness=" << v["witness"].get<std::string>()
       << " digits_checked=" << v["digits_checked"];
  else if (kind == "not_member")
    os << " position=" << v["position"] << " digit=" << v["digit"]
       << " representation=" << v["representation"].get<std::string>();
  else
    os << " steps_used=" << v["steps_used"] << " budget=" << v["budget"];
  return os.str();
}

std::string human_report(const json& r) {
  std::ostringstream os;
  const std::string cmd = r["command"].get<std::string>();
  if (cmd == "intersect") {
    os << "intersect base=" << r["base"] << " digits=" << braces(r["digits"])
       << "\n";
    os << cert_line(r["certificate"]) << "\n";
    for (size_t i = 0; i < r["members"].size(); ++i)
      os << "n=" << r["members"][i].get<unsigned long>()
         << " value=" << r["values"][i].get<std::string>() << "\n";
    os << "members: " << braces(r["members"]) << "\n";
    if (!r["complete"].get<bool>()) {
      os << "undecided:";
      for (const auto& entry : r["verdicts"])
        if (entry["verdict"]["kind"] == "undecided")
          os << " n=" << entry["n"].get<unsigned long>();
      os << "\n";
    }
    if (r.contains("oracle"))
      os << "oracle: depth=" << r["oracle"]["depth"]
         << " survivors=" << braces(r["oracle"]["survivors"])
         << " agrees=" << (r["oracle"]["agrees"].get<bool>() ? "yes" : "no")
         << "\n";
  } else if (cmd == "member") {
    os << "member base=" << r["base"] << " digits=" << braces(r["digits"])
       << " x=" << r["num"].get<std::string>() << "/"
       << r["den"].get<std::string>() << "\n";
    os << verdict_line(r["verdict"]) << "\n";
  } else if (cmd == "expand") {
    os << "expand base=" << r["base"] << " x=" << r["num"].get<std::string>()
       << "/" << r["den"].get<std::string>() << " count=" << r["count"]
       << "\n";
    os << "digits:";
    for (const auto& d : r["digits"]) os << " " << d.get<unsigned long>();
    os << "\n";
    os << "structure: preperiod=" << r["preperiod"]
       << " m_part=" << r["m_part"].get<std::string>()
       << " m_free_part=" << r["m_free_part"].get<std::string>()
       << " period=" << r["period"].get<std::string>() << "\n";
  } else if (cmd == "stats") {
    os << "stats base=" << r["base"] << " x=" << r["num"].get<std::string>()
       << "/" << r["den"].get<std::string>() << "\n";
    os << "period=" << r["period"] << "\n";
    os << "counts:";
    for (size_t i = 0; i < r["counts"].size(); ++i)
      os << " " << i << "=" << r["counts"][i].get<unsigned long>();
    os << "\n";
    os << "korobov: bound=" << r["bound"].get<std::string>()
       << " holds=" << (r["holds"].get<bool>() ? "yes" : "no") << "\n";
    os << "margins:";
    for (size_t i = 0; i < r["margins"].size(); ++i)
      os << " " << i << "=" << r["margins"][i].get<std::string>();
    os << "\n";
  } else if (cmd == "bound") {
    os << "bound base=" << r["base"] << "\n";
    os << cert_line(r["certificate"]) << "\n";
  } else if (cmd == "table") {
    for (const auto& row : r["rows"]) {
      os << (row["pass"].get<bool>() ? "PASS" : "FAIL")
         << " base=" << row["base"] << " digits=" << braces(row["digits"])
         << " got=" << braces(row["got"]);
      if (!row["pass"].get<bool>())
        os << " expected=" << braces(row["expected"]);
      os << "\n";
    }
    size_t passed = 0;
    for (const auto& row : r["rows"])
      if (row["pass"].get<bool>()) ++passed;
    os << "table: " << passed << "/" << r["rows"].size() << " rows pass\n";
  }
  return os.str();
}

struct Emitted {
  std::string text;
  int exit_code = 0;
};

void write_out(const std::string& text, const RunConfig& cfg,
               std::ostream& out) {
  out << text;
  if (!cfg.out_path.empty()) {
    std::ofstream f(cfg.out_path);
    if (!f) throw std::runtime_error("cannot open --out file");
    f << text;
  }
}

Emitted do_intersect(const RunConfig& cfg) {
  MissingDigitSet K(cfg.base, cfg.digits);
  IntersectionResult res =
      intersect_factorials(K, cfg.digit_budget, cfg.p0, cfg.jobs);

  json rec;
  rec["command"] = "intersect";
  rec["base"] = cfg.base;
  rec["digits"] = K.digits();
  rec["certificate"] = cert_json(res.certificate);
  rec["members"] = res.members;
  json values = json::array();
  Int fact(1);
  unsigned long next = 1;
  for (unsigned long n : res.members) {
    while (next <= n) fact *= next++;
    values.push_back("1/" + fact.get_str());
  }
  rec["values"] = values;
  rec["complete"] = res.complete;
  json verdicts = json::array();
  for (const auto& entry : res.verdicts)
    verdicts.push_back({{"n", entry.n}, {"verdict", verdict_json(entry.verdict)}});
  rec["verdicts"] = verdicts;

  if (cfg.verify_depth) {
    auto survivors =
        oracle_intersect(K, res.certificate.n0 - 1, *cfg.verify_depth);
    // Members must survive; non-survivors must not be Member verdicts.
    bool agrees = std::includes(survivors.begin(), survivors.end(),
                                res.members.begin(), res.members.end());
    for (const auto& entry : res.verdicts)
      if (is_member(entry.verdict) &&
          !std::binary_search(survivors.begin(), survivors.end(), entry.n))
        agrees = false;
    rec["oracle"] = {
        {"depth", *cfg.verify_depth}, {"survivors", survivors},
        {"agrees", agrees}};
  }
  return {format_report(rec, cfg.output_mode), res.complete ? 0 : 2};
}

Emitted do_member(const RunConfig& cfg) {
  MissingDigitSet K(cfg.base, cfg.digits);
  Rat x = make_rat(cfg.num, cfg.den);
  MembershipVerdict v = membership(x, K, cfg.digit_budget);
  json rec;
  rec["command"] = "member";
  rec["base"] = cfg.base;
  rec["digits"] = K.digits();
  rec["num"] = cfg.num.get_str();
  rec["den"] = cfg.den.get_str();
  rec["verdict"] = verdict_json(v);
  return {format_report(rec, cfg.output_mode), is_undecided(v) ? 2 : 0};
}

Emitted do_expand(const RunConfig& cfg) {
  Rat x = make_rat(cfg.num, cfg.den);
  auto steps = digit_stream(x, cfg.base, cfg.expand_count);
  ExpansionSplit split = split_denominator(x.get_den(), Int(cfg.base));
  Int period =
      split.m_free_part == 1
          ? Int(1)
          : multiplicative_order(Int(cfg.base), split.m_free_part);
  json rec;
  rec["command"] = "expand";
  rec["base"] = cfg.base;
  rec["num"] = cfg.num.get_str();
  rec["den"] = cfg.den.get_str();
  rec["count"] = cfg.expand_count;
  json ds = json::array();
  for (const auto& step : steps) ds.push_back(step.digit);
  rec["digits"] = ds;
  rec["preperiod"] = split.preperiod_len;
  rec["m_part"] = split.m_part.get_str();
  rec["m_free_part"] = split.m_free_part.get_str();
  rec["period"] = period.get_str();
  return {format_report(rec, cfg.output_mode), 0};
}

Emitted do_stats(const RunConfig& cfg) {
  Rat x = make_rat(cfg.num, cfg.den);
  KorobovReport report = korobov_check(x, cfg.base, cfg.digit_budget);
  DigitStats stats = digit_stats(x, cfg.base, cfg.digit_budget);
  json rec;
  rec["command"] = "stats";
  rec["base"] = cfg.base;
  rec["num"] = cfg.num.get_str();
  rec["den"] = cfg.den.get_str();
  rec["period"] = stats.period_len;
  rec["counts"] = stats.counts;
  rec["bound"] = report.bound.get_str();
  rec["holds"] = report.holds;
  json margins = json::array();
  for (const auto& mgn : report.margins) margins.push_back(rat_str(mgn));
  rec["margins"] = margins;
  return {format_report(rec, cfg.output_mode), 0};
}

Emitted do_bound(const RunConfig& cfg) {
  BoundCertificate cert =
      bound_certificate(cfg.base, cfg.p0, cfg.legacy_dyadic);
  json rec;
  rec["command"] = "bound";
  rec["base"] = cfg.base;
  rec["certificate"] = cert_json(cert);
  return {format_report(rec, cfg.output_mode), 0};
}

Emitted do_table(const RunConfig& cfg) {
  struct Row {
    unsigned long base;
    std::vector<unsigned long> digits;
    std::vector<unsigned long> expected;
  };
  const std::vector<Row> fixture = {
      {3, {0, 1}, {2, 3, 4, 6}}, {3, {0, 2}, {1, 5}}, {4, {0, 3}, {1}},
      {5, {0, 4}, {1, 3}},       {6, {0, 5}, {1, 3}},
  };
  json rows = json::array();
  bool all_pass = true, any_undecided = false;
  for (const auto& row : fixture) {
    MissingDigitSet K(row.base, row.digits);
    IntersectionResult res =
        intersect_factorials(K, cfg.digit_budget, std::nullopt, cfg.jobs);
    bool pass = res.complete && res.members == row.expected;
    all_pass = all_pass && pass;
    any_undecided = any_undecided || !res.complete;
    rows.push_back({{"base", row.base},
                    {"digits", row.digits},
                    {"expected", row.expected},
                    {"got", res.members},
                    {"complete", res.complete},
                    {"pass", pass}});
  }
  json rec;
  rec["command"] = "table";
  rec["rows"] = rows;
  rec["all_pass"] = all_pass;
  int code = any_undecided ? 2 : all_pass ? 0 : 1;
  return {format_report(rec, cfg.output_mode), code};
}

}  // namespace

std::string format_report(const nlohmann::json& record, OutputMode mode) {
  if (mode == OutputMode::Machine) return record.dump() + "\n";
  return human_report(record);
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"exact arithmetic for factorial reciprocals in "
               "missing-digit sets"};
  app.require_subcommand(1);

  RunConfig cfg;
  if (const char* env = std::getenv("CANTOR_DIGIT_BUDGET")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      err << "error: CANTOR_DIGIT_BUDGET must be a positive integer\n";
      return 1;
    }
    cfg.digit_budget = v;
  }

  std::string num_str = "0", den_str = "1", p0_str;
  bool machine = false;

  auto add_common = [&](CLI::App* sub, bool with_digits, bool with_rational) {
    sub->add_option("--base", cfg.base, "expansion base m >= 3")->required();
    if (with_digits)
      sub->add_option("--digits", cfg.digits,
                      "allowed digit set, comma separated")
          ->delimiter(',')
          ->required();
    if (with_rational) {
      sub->add_option("--num", num_str, "numerator")->required();
      sub->add_option("--den", den_str, "denominator")->required();
    }
    sub->add_flag("--machine", machine, "one JSON record on stdout");
    sub->add_option("--out", cfg.out_path, "duplicate stdout to this file");
  };

  CLI::App* c_intersect = app.add_subcommand(
      "intersect", "compute {1/n!} inside K_{m,D} with a cutoff certificate");
  add_common(c_intersect, true, false);
  c_intersect->add_option("--p0", p0_str, "odd auxiliary prime");
  c_intersect->add_option("--budget", cfg.digit_budget, "digit budget");
  unsigned long verify_depth = 0;
  c_intersect->add_option("--verify-depth", verify_depth,
                          "cross-check members against cylinder covers");
  c_intersect->add_option("--jobs", cfg.jobs, "parallel scan threads");

  CLI::App* c_member =
      app.add_subcommand("member", "decide num/den in K_{m,D}");
  add_common(c_member, true, true);
  c_member->add_option("--budget", cfg.digit_budget, "digit budget");

  CLI::App* c_expand =
      app.add_subcommand("expand", "stream base-m digits of num/den");
  add_common(c_expand, false, true);
  c_expand->add_option("--count", cfg.expand_count, "digits to emit")
      ->required();

  CLI::App* c_stats = app.add_subcommand(
      "stats", "period digit counts and the frequency inequality");
  add_common(c_stats, false, true);
  c_stats->add_option("--budget", cfg.digit_budget, "digit budget");

  CLI::App* c_bound =
      app.add_subcommand("bound", "effective cutoff certificate for base m");
  add_common(c_bound, false, false);
  c_bound->add_option("--p0", p0_str, "odd auxiliary prime");
  c_bound->add_flag("--legacy-dyadic", cfg.legacy_dyadic,
                    "p0 = 2 route for odd bases");

  CLI::App* c_table = app.add_subcommand(
      "table", "recompute the five reference digit-set rows");
  c_table->add_option("--budget", cfg.digit_budget, "digit budget");
  c_table->add_option("--jobs", cfg.jobs, "parallel scan threads");
  c_table->add_flag("--machine", machine, "one JSON record on stdout");
  c_table->add_option("--out", cfg.out_path, "duplicate stdout to this file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  cfg.output_mode = machine ? OutputMode::Machine : OutputMode::Human;
  try {
    if (!num_str.empty()) cfg.num = Int(num_str);
    if (!den_str.empty()) cfg.den = Int(den_str);
    if (!p0_str.empty()) cfg.p0 = Int(p0_str);
  } catch (const std::invalid_argument&) {
    err << "error: --num, --den and --p0 must be decimal integers\n";
    return 1;
  }
  if (c_intersect->parsed() && c_intersect->count("--verify-depth"))
    cfg.verify_depth = verify_depth;

  try {
    Emitted result;
    if (c_intersect->parsed()) {
      cfg.command = Command::Intersect;
      result = do_intersect(cfg);
    } else if (c_member->parsed()) {
      cfg.command = Command::Member;
      result = do_member(cfg);
    } else if (c_expand->parsed()) {
      cfg.command = Command::Expand;
      result = do_expand(cfg);
    } else if (c_stats->parsed()) {
      cfg.command = Command::Stats;
      result = do_stats(cfg);
    } else if (c_bound->parsed()) {
      cfg.command = Command::Bound;
      result = do_bound(cfg);
    } else {
      cfg.command = Command::Table;
      result = do_table(cfg);
    }
    write_out(result.text, cfg, out);
    return result.exit_code;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << " (steps=" << e.steps_used()
        << " budget=" << e.budget() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace cantor::cli
