#pragma once

// Command line front end: compute, check and search, with JSON or CSV
// reports and exit codes callers can branch on.

#include "momentlab/report.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace momentlab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitViolated = 1,
  kExitConfig = 2,
  kExitNonConvergence = 3,
  kExitInconclusive = 4,
};

struct RunConfig {
  std::string command;
  std::string target;

  std::string family;
  std::string theta;
  std::string value;
  std::string rate;
  std::string lo;
  std::string hi;
  std::string dist;

  std::string p;
  std::string n;
  std::string m;
  std::string method = "auto";
  unsigned precision = 0;
  std::uint64_t seed = 1;
  std::uint64_t trials = 0;
  std::uint64_t budget = 10'000;
  std::size_t samples = 100'000;
  unsigned threads = 0;
  std::string format = "json";
  std::string output;
};

struct Outcome {
  Json json;
  std::string csv;
  int code = kExitOk;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

struct Subject {
  std::string name;
  Distribution law;
};

inline unsigned parse_unsigned(const std::string& s, const char* what) {
  unsigned long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || v > std::numeric_limits<unsigned>::max()) {
    throw ConfigError(std::string(what) + " must be a nonnegative integer, got '" + s + "'");
  }
  return static_cast<unsigned>(v);
}

/// "a..b" or a single "n".
inline std::pair<unsigned, unsigned> parse_range(const std::string& s, std::pair<unsigned, unsigned> fallback) {
  if (s.empty()) return fallback;
  const auto dots = s.find("..");
  unsigned a = 0;
  unsigned b = 0;
  if (dots == std::string::npos) {
    a = b = parse_unsigned(s, "--n");
  } else {
    a = parse_unsigned(s.substr(0, dots), "--n");
    b = parse_unsigned(s.substr(dots + 2), "--n");
  }
  if (a < 1 || b < a) throw ConfigError("--n must be n or a..b with 1 <= a <= b, got '" + s + "'");
  return {a, b};
}

inline unsigned single_n(const RunConfig& cfg, unsigned fallback) {
  const auto [a, b] = parse_range(cfg.n, {fallback, fallback});
  if (a != b) throw ConfigError("--n takes a single value for " + cfg.command + " " + cfg.target);
  return a;
}

inline Rational rational_flag(const std::string& s, const char* what) {
  if (s.empty()) throw ConfigError(std::string(what) + " is required");
  try {
    return parse_rational(s);
  } catch (const DomainError& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

inline unsigned integer_power(const std::string& s, unsigned min_p) {
  const Rational p = rational_flag(s, "--p");
  if (!is_integer(p) || p < min_p || p > kMaxOrder) {
    throw ConfigError("--p must be an integer in [" + std::to_string(min_p) + ", " + std::to_string(kMaxOrder) +
                      "] here, got " + to_string(p));
  }
  return static_cast<unsigned>(p.get_num().get_ui());
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, sep);) out.push_back(part);
  return out;
}

inline std::uint64_t trials_or(const RunConfig& cfg, std::uint64_t fallback) { return cfg.trials ? cfg.trials : fallback; }

inline std::vector<Subject> subjects(const RunConfig& cfg, std::uint64_t random_count, bool random_by_default) {
  if (!cfg.family.empty() && !cfg.dist.empty()) throw ConfigError("give either --family or --dist, not both");
  std::vector<Subject> out;
  auto single = [&](Distribution d) {
    out.push_back({describe(d), std::move(d)});
    return out;
  };
  if (!cfg.family.empty()) {
    if (cfg.family == "bernoulli") return single(DiscreteDistribution::bernoulli(rational_flag(cfg.theta, "--theta")));
    if (cfg.family == "point") return single(DiscreteDistribution::point_mass(rational_flag(cfg.value, "--value")));
    if (cfg.family == "exponential") return single(ContinuousFamily::exponential(rational_flag(cfg.rate, "--rate")));
    if (cfg.family == "uniform") {
      return single(ContinuousFamily::uniform(rational_flag(cfg.lo, "--lo"), rational_flag(cfg.hi, "--hi")));
    }
    throw ConfigError("--family must be bernoulli, point, exponential or uniform, got '" + cfg.family + "'");
  }
  std::string dist = cfg.dist;
  if (dist.empty()) {
    if (!random_by_default) throw ConfigError("a distribution is required: --family or --dist");
    dist = "random";
  }
  if (dist == "random") {
    for (const auto& d : random_pool(cfg.seed, random_count)) out.push_back({d.describe(), Distribution(d)});
    return out;
  }
  if (dist.rfind("point:", 0) == 0) {
    return single(DiscreteDistribution::point_mass(rational_flag(dist.substr(6), "--dist point:c")));
  }
  if (dist.front() == '{') {
    try {
      return single(distribution_from_json(Json::parse(dist)));
    } catch (const Json::exception& e) {
      throw ConfigError(std::string("--dist inline JSON: ") + e.what());
    }
  }
  return single(load_distribution_file(dist));
}

inline int status_code(VerdictStatus s) {
  if (holds(s)) return kExitOk;
  return s == VerdictStatus::violated ? kExitViolated : kExitInconclusive;
}

inline int rank(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::holds_exact: return 0;
    case VerdictStatus::holds_within_tolerance: return 1;
    case VerdictStatus::inconclusive: return 2;
    case VerdictStatus::violated: return 3;
  }
  return 3;
}

/// The least favourable of the statuses seen so far.
inline void fold(VerdictStatus& acc, VerdictStatus s) {
  if (rank(s) > rank(acc)) acc = s;
}

inline Json header(const RunConfig& cfg) {
  Json j{{"command", cfg.command}};
  if (!cfg.target.empty()) j["target"] = cfg.target;
  j["precision_bits"] = precision_bits();
  return j;
}

inline std::string slack_csv_header() { return "subject,n,slack,error_bound,status\n"; }

inline void slack_csv_rows(std::ostringstream& out, const std::string& subject, const std::vector<SlackEntry>& slacks) {
  for (const auto& s : slacks) {
    out << momentlab::detail::csv_quote(subject) << ',' << s.n << ',' << (s.exact ? to_string(*s.exact) : to_string(s.value))
        << ',' << format_double(s.error_bound) << ',' << to_string(s.status) << '\n';
  }
}

// ---------------------------------------------------------------------------
// compute

inline Outcome cmd_compute(const RunConfig& cfg) {
  const auto subject = subjects(cfg, 1, false).front();
  const Rational p = rational_flag(cfg.p, "--p");
  const auto [n_first, n_last] = parse_range(cfg.n, {1, 10});
  const Method method = parse_method(cfg.method);
  const FunctionDescriptor f = PowerFunction{p};
  const Method chosen = momentlab::detail::resolve_method(subject.law, f, n_last, method);
  const auto seq = an_sequence(subject.law, f, n_first, n_last, method, {cfg.samples, cfg.seed});
  Outcome out;
  out.json = header(cfg);
  out.json["distribution"] = subject.name;
  out.json["p"] = to_string(p);
  out.json["method"] = to_string(chosen);
  out.json["sequence"] = to_json(seq);
  out.csv = to_csv(seq);
  return out;
}

// ---------------------------------------------------------------------------
// check

inline Outcome cmd_check_sequence(const RunConfig& cfg, Claim claim) {
  const auto list = subjects(cfg, trials_or(cfg, 20), false);
  const Rational p = rational_flag(cfg.p, "--p");
  const auto [n_first, n_last] = parse_range(cfg.n, {1, 20});
  if (n_last < n_first + 2) throw ConfigError("a log-convexity check needs at least three terms");
  const Method method = parse_method(cfg.method);
  const FunctionDescriptor f = PowerFunction{p};

  VerdictStatus overall = VerdictStatus::holds_exact;
  Json results = Json::array();
  std::ostringstream csv;
  csv << slack_csv_header();
  for (const auto& s : list) {
    const Method chosen = momentlab::detail::resolve_method(s.law, f, n_last, method);
    const auto verdict = check_sequence(an_sequence(s.law, f, n_first, n_last, method, {cfg.samples, cfg.seed}), claim);
    fold(overall, verdict.status);
    results.push_back({{"distribution", s.name}, {"method", to_string(chosen)}, {"verdict", to_json(verdict)}});
    slack_csv_rows(csv, s.name, verdict.slacks);
  }
  Outcome out;
  out.json = header(cfg);
  out.json["claim"] = to_string(claim);
  out.json["p"] = to_string(p);
  out.json["status"] = to_string(overall);
  out.json["results"] = results;
  out.csv = csv.str();
  out.code = status_code(overall);
  return out;
}

inline Outcome cmd_check_theorem4(const RunConfig& cfg) {
  const unsigned p = integer_power(cfg.p, 2);
  const auto list = subjects(cfg, trials_or(cfg, 100), true);
  const unsigned n_max = cfg.n.empty() ? p * p + 30 : parse_range(cfg.n, {1, 1}).second;

  VerdictStatus overall = VerdictStatus::holds_exact;
  Json results = Json::array();
  std::ostringstream csv;
  csv << slack_csv_header();
  for (const auto& s : list) {
    const auto& d = require_discrete(s.law, "theorem4");
    const auto verdict = check_theorem4(moments_of(d, p), p, n_max);
    fold(overall, verdict.status);
    results.push_back({{"distribution", s.name}, {"method", "partition"}, {"verdict", to_json(verdict)}});
    slack_csv_rows(csv, s.name, verdict.slacks);
  }
  Outcome out;
  out.json = header(cfg);
  out.json["p"] = p;
  out.json["n_range"] = {p * p, n_max};
  out.json["status"] = to_string(overall);
  out.json["results"] = results;
  out.csv = csv.str();
  out.code = status_code(overall);
  return out;
}

inline Outcome cmd_check_lemma7(const RunConfig& cfg) {
  const unsigned p = integer_power(cfg.p, 2);
  std::vector<unsigned> ms;
  if (cfg.m.empty()) {
    for (unsigned m = 1; m < p; ++m) ms.push_back(m);
  } else {
    ms.push_back(parse_unsigned(cfg.m, "--m"));
  }
  const unsigned n_max = cfg.n.empty() ? 0 : parse_range(cfg.n, {1, 1}).second;

  VerdictStatus overall = VerdictStatus::holds_exact;
  Json results = Json::array();
  std::ostringstream csv;
  csv << "m,x,value\n";
  for (const unsigned m : ms) {
    const auto r = check_lemma7(p, m, {}, n_max);
    fold(overall, r.status);
    results.push_back(to_json(r));
    for (const auto& row : r.table) csv << m << ',' << to_string(row.x) << ',' << to_string(row.value) << '\n';
  }
  Outcome out;
  out.json = header(cfg);
  out.json["p"] = p;
  out.json["method"] = "exact";
  out.json["status"] = to_string(overall);
  out.json["results"] = results;
  out.csv = csv.str();
  out.code = status_code(overall);
  return out;
}

inline Outcome cmd_check_remark5(const RunConfig& cfg) {
  const unsigned p = integer_power(cfg.p, 2);
  const auto list = subjects(cfg, trials_or(cfg, 50), true);
  const unsigned n_check = cfg.n.empty() ? 50 : parse_range(cfg.n, {1, 1}).second;

  VerdictStatus overall = VerdictStatus::holds_exact;
  Json results = Json::array();
  std::ostringstream csv;
  csv << "subject,basis,coefficient\n";
  for (const auto& s : list) {
    const auto d = verify_remark5_decomposition(moments_of(s.law, p), p, n_check);
    fold(overall, d.nonnegative && d.reconstruction_exact ? VerdictStatus::holds_exact : VerdictStatus::violated);
    Json row = to_json(d);
    row["distribution"] = s.name;
    results.push_back(row);
    for (const auto& t : d.terms) csv << momentlab::detail::csv_quote(s.name) << ',' << t.basis << ',' << to_string(t.coefficient) << '\n';
  }
  Outcome out;
  out.json = header(cfg);
  out.json["p"] = p;
  out.json["method"] = "exact";
  out.json["status"] = to_string(overall);
  out.json["results"] = results;
  out.csv = csv.str();
  out.code = status_code(overall);
  return out;
}

inline Outcome cmd_check_remark6(const RunConfig& cfg) {
  const auto list = subjects(cfg, trials_or(cfg, 20), false);
  const Rational p = rational_flag(cfg.p, "--p");
  auto [n_first, n_last] = parse_range(cfg.n, {2, 10});
  n_first = std::max(2U, n_first);
  if (n_last < n_first) throw ConfigError("remark6 needs n >= 2");
  const Method method = parse_method(cfg.method);

  VerdictStatus overall = VerdictStatus::holds_exact;
  Json results = Json::array();
  std::ostringstream csv;
  csv << "subject,n,factor,sharp_slack,weak_slack,status\n";
  for (const auto& s : list) {
    const Method chosen = momentlab::detail::resolve_method(s.law, PowerFunction{p}, n_last + 1, method);
    for (unsigned n = n_first; n <= n_last; ++n) {
      const auto r = check_remark6_factor(s.law, p, n, method);
      fold(overall, r.status);
      Json row = to_json(r);
      row["distribution"] = s.name;
      row["method"] = to_string(chosen);
      results.push_back(row);
      csv << momentlab::detail::csv_quote(s.name) << ',' << n << ',' << to_string(r.factor) << ','
          << row["sharp"]["slack"].get<std::string>() << ',' << row["weak"]["slack"].get<std::string>() << ','
          << to_string(r.status) << '\n';
    }
  }
  Outcome out;
  out.json = header(cfg);
  out.json["p"] = to_string(p);
  out.json["status"] = to_string(overall);
  out.json["results"] = results;
  out.csv = csv.str();
  out.code = status_code(overall);
  return out;
}

// ---------------------------------------------------------------------------
// search

inline Outcome search_outcome(const RunConfig& cfg, const SearchReport& r, bool expect_violation) {
  Outcome out;
  out.json = header(cfg);
  out.json.update(to_json(r));
  const bool expected = expect_violation ? !r.violations.empty() : r.violations.empty();
  out.json["expected_outcome"] = expect_violation ? "at least one violation" : "no violation";
  out.json["observed"] = expected;
  out.csv = miss_table_csv(r);
  out.code = expected ? kExitOk : kExitViolated;
  return out;
}

inline Outcome cmd_search_conjecture4(const RunConfig& cfg) {
  Conjecture4Options opt;
  opt.p_values.clear();
  for (const auto& s : split(cfg.p.empty() ? "3" : cfg.p, ',')) opt.p_values.push_back(integer_power(s, 2));
  std::tie(opt.n_first, opt.n_last) = parse_range(cfg.n, {2, 20});
  if (opt.n_first < 2) throw ConfigError("conjecture4 needs n >= 2");
  if (cfg.budget == 0) throw ConfigError("--budget must be positive");
  return search_outcome(cfg, search_conjecture4(cfg.seed, cfg.budget, opt), false);
}

inline Outcome cmd_search_remark8(const RunConfig& cfg) {
  Remark8Options opt;
  opt.n = single_n(cfg, 2);
  if (opt.n < 2 || opt.n > kRemark8MaxN) {
    throw ConfigError("remark8 needs 2 <= n <= " + std::to_string(kRemark8MaxN));
  }
  if (!cfg.p.empty()) {
    opt.p_values.clear();
    for (const auto& s : split(cfg.p, ',')) {
      const Rational p = rational_flag(s, "--p");
      if (p <= 1) throw ConfigError("remark8 needs p > 1, got " + to_string(p));
      opt.p_values.push_back(p);
    }
  }
  opt.trials = trials_or(cfg, 100'000);
  opt.seed = cfg.seed;
  return search_outcome(cfg, search_remark8(opt), false);
}

inline Outcome cmd_search_final_remark(const RunConfig& cfg) {
  const unsigned n_max = single_n(cfg, 6);
  if (n_max < 3) throw ConfigError("final_remark needs --n >= 3");
  const auto grid = unit_grid(10);
  return search_outcome(cfg, find_final_remark_counterexample(grid, grid, n_max), true);
}

inline Outcome dispatch(const RunConfig& cfg) {
  if (cfg.command == "compute") return cmd_compute(cfg);
  if (cfg.command == "check") {
    if (cfg.target == "logconvex") return cmd_check_sequence(cfg, Claim::log_convex);
    if (cfg.target == "logconcave") return cmd_check_sequence(cfg, Claim::log_concave);
    if (cfg.target == "theorem4") return cmd_check_theorem4(cfg);
    if (cfg.target == "lemma7") return cmd_check_lemma7(cfg);
    if (cfg.target == "remark5") return cmd_check_remark5(cfg);
    if (cfg.target == "remark6") return cmd_check_remark6(cfg);
  }
  if (cfg.command == "search") {
    if (cfg.target == "conjecture4") return cmd_search_conjecture4(cfg);
    if (cfg.target == "remark8") return cmd_search_remark8(cfg);
    if (cfg.target == "final_remark") return cmd_search_final_remark(cfg);
  }
  throw ConfigError("unknown command '" + cfg.command + " " + cfg.target + "'");
}

inline void add_common_options(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--family", cfg.family, "bernoulli | point | exponential | uniform");
  sub.add_option("--theta", cfg.theta, "Bernoulli parameter, e.g. 1/3");
  sub.add_option("--value", cfg.value, "point mass location");
  sub.add_option("--rate", cfg.rate, "exponential rate");
  sub.add_option("--lo", cfg.lo, "uniform lower end");
  sub.add_option("--hi", cfg.hi, "uniform upper end");
  sub.add_option("--dist", cfg.dist, "point:c | random | inline JSON | path to a JSON distribution file");
  sub.add_option("--p", cfg.p, "power, exact: a/b, integer or plain decimal");
  sub.add_option("--n", cfg.n, "n or a..b");
  sub.add_option("--m", cfg.m, "basis index for lemma7");
  sub.add_option("--method", cfg.method,
                 "auto | exact | partition | stirling | exact-binomial | convolution | quadrature | monte-carlo");
  sub.add_option("--precision", cfg.precision, "working precision in bits (>= 64)");
  sub.add_option("--seed", cfg.seed, "random seed");
  sub.add_option("--trials", cfg.trials, "random distributions or vectors to draw");
  sub.add_option("--budget", cfg.budget, "slack evaluations for conjecture4");
  sub.add_option("--samples", cfg.samples, "Monte Carlo replicates");
  sub.add_option("--threads", cfg.threads, "worker cap, 0 = all cores");
  sub.add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  sub.add_option("--output", cfg.output, "write the report here instead of stdout");
}

}  // namespace detail

/// Parses argv, runs the command, writes the report and returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app("Moment sequences of averages of i.i.d. variables: compute, check, search", "momentlab");
  app.require_subcommand(1);
  auto* compute = app.add_subcommand("compute", "emit b_n = E((X_1+...+X_n)/n)^p over an n range");
  auto* check = app.add_subcommand("check", "run a checker and exit 0 holds, 1 violated, 4 inconclusive");
  auto* search = app.add_subcommand("search", "search for counterexamples; exit 0 when the expected outcome is seen");
  for (auto* sub : {compute, check, search}) detail::add_common_options(*sub, cfg);
  check->add_option("claim", cfg.target, "logconvex | logconcave | theorem4 | lemma7 | remark5 | remark6")
      ->required()
      ->check(CLI::IsMember({"logconvex", "logconcave", "theorem4", "lemma7", "remark5", "remark6"}));
  search->add_option("target", cfg.target, "conjecture4 | remark8 | final_remark")
      ->required()
      ->check(CLI::IsMember({"conjecture4", "remark8", "final_remark"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  const unsigned saved_threads = momentlab::detail::max_threads_slot().load();
  struct ThreadsGuard {
    unsigned saved;
    ~ThreadsGuard() { set_max_threads(saved); }
  } guard{saved_threads};

  try {
    std::optional<PrecisionScope> precision;
    if (cfg.precision != 0) precision.emplace(cfg.precision);
    set_max_threads(cfg.threads);

    const Outcome outcome = detail::dispatch(cfg);
    const std::string body = cfg.format == "csv" ? outcome.csv : outcome.json.dump(2) + "\n";
    if (cfg.output.empty()) {
      out << body;
    } else {
      std::ofstream file(cfg.output);
      if (!file || !(file << body)) {
        err << "error: cannot write '" << cfg.output << "'\n";
        return kExitConfig;
      }
    }
    if (cfg.format == "csv" && outcome.json.contains("method") && outcome.json["method"].is_string()) {
      err << "method: " << outcome.json["method"].get<std::string>() << '\n';
    }
    if (outcome.json.contains("status")) err << "status: " << outcome.json["status"].get<std::string>() << '\n';
    return outcome.code;
  } catch (const ConvergenceError& e) {
    err << "non-convergence: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CapacityError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace momentlab::cli
