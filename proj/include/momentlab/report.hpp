#pragma once

// JSON and CSV forms of sequences, verdicts and search reports, and the
// distribution description format read by the command line tool. Exact rationals
// are always written as "a/b" strings; reals in scientific notation with
// enough digits to re-parse exactly.

#include "momentlab/checkers.hpp"
#include "momentlab/explorer.hpp"

#include "json.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace momentlab {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Scalars

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DomainError("not a number: '" + std::string(s) + "'");
  }
  return x;
}

inline const char* value_kind(const SequenceValue& v) {
  if (std::holds_alternative<Rational>(v)) return "exact";
  if (std::holds_alternative<Real>(v)) return "real";
  return to_string(std::get<EstimateWithError>(v).kind);
}

inline std::string value_string(const SequenceValue& v) {
  return std::visit([](const auto& x) -> std::string {
    using T = std::decay_t<decltype(x)>;
    if constexpr (std::is_same_v<T, EstimateWithError>) {
      return format_double(x.value);
    } else {
      return to_string(x);
    }
  }, v);
}

inline double value_error(const SequenceValue& v) {
  if (const auto* e = std::get_if<EstimateWithError>(&v)) return e->error_bound;
  return 0.0;
}

inline SequenceValue parse_value(std::string_view kind, std::string_view text, double error_bound) {
  if (kind == "exact") return parse_rational(text);
  if (kind == "real") return parse_real(text);
  if (kind == "quadrature") return EstimateWithError{parse_double(text), error_bound, EstimateKind::quadrature};
  if (kind == "monte_carlo") return EstimateWithError{parse_double(text), error_bound, EstimateKind::monte_carlo};
  throw DomainError("unknown value kind '" + std::string(kind) + "'");
}

inline bool same_value(const SequenceValue& a, const SequenceValue& b) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<EstimateWithError>(&a)) {
    const auto& y = std::get<EstimateWithError>(b);
    return x->value == y.value && x->error_bound == y.error_bound && x->kind == y.kind;
  }
  if (const auto* x = std::get_if<Rational>(&a)) return *x == std::get<Rational>(b);
  return std::get<Real>(a) == std::get<Real>(b);
}

inline Json value_json(const SequenceValue& v) {
  return Json{{"value", value_string(v)}, {"kind", value_kind(v)}, {"error_bound", value_error(v)}};
}

inline SequenceValue value_from_json(const Json& j) {
  return parse_value(j.at("kind").get<std::string>(), j.at("value").get<std::string>(),
                     j.value("error_bound", 0.0));
}

// ---------------------------------------------------------------------------
// Distributions

inline Json to_json(const DiscreteDistribution& d) {
  Json atoms = Json::array();
  for (const auto& a : d.atoms()) atoms.push_back({{"value", to_string(a.value)}, {"prob", to_string(a.prob)}});
  return Json{{"atoms", atoms}};
}

inline Json to_json(const Distribution& d) {
  if (const auto* discrete = std::get_if<DiscreteDistribution>(&d)) return to_json(*discrete);
  const auto& c = std::get<ContinuousFamily>(d);
  if (c.kind() == ContinuousFamily::Kind::exponential) return Json{{"family", "exponential"}, {"rate", to_string(c.first())}};
  return Json{{"family", "uniform"}, {"lo", to_string(c.first())}, {"hi", to_string(c.second())}};
}

namespace detail {

inline Rational json_rational(const Json& j, const char* key) {
  if (!j.contains(key)) throw DomainError(std::string("distribution description is missing '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_string()) throw DomainError(std::string("'") + key + "' must be a rational string such as \"1/3\"");
  return parse_rational(v.get<std::string>());
}

}  // namespace detail

/// {"atoms": [{"value": "1/2", "prob": "1/3"}, ...]}
/// {"family": "bernoulli", "theta": "1/3"}     {"family": "point", "value": "2"}
/// {"family": "exponential", "rate": "1"}      {"family": "uniform", "lo": "0", "hi": "1"}
inline Distribution distribution_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("distribution description must be a JSON object");
  if (j.contains("atoms")) {
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) atoms.push_back({detail::json_rational(a, "value"), detail::json_rational(a, "prob")});
    return DiscreteDistribution::from_atoms(std::move(atoms));
  }
  if (!j.contains("family")) throw DomainError("distribution description needs 'atoms' or 'family'");
  const auto family = j.at("family").get<std::string>();
  if (family == "bernoulli") return DiscreteDistribution::bernoulli(detail::json_rational(j, "theta"));
  if (family == "point") return DiscreteDistribution::point_mass(detail::json_rational(j, "value"));
  if (family == "exponential") return ContinuousFamily::exponential(detail::json_rational(j, "rate"));
  if (family == "uniform") return ContinuousFamily::uniform(detail::json_rational(j, "lo"), detail::json_rational(j, "hi"));
  throw DomainError("unknown family '" + family + "'");
}

inline Distribution load_distribution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open distribution file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DomainError("distribution file '" + path + "' is not valid JSON: " + e.what());
  }
  return distribution_from_json(j);
}

// ---------------------------------------------------------------------------
// Sequences

inline Json to_json(const MomentSequence& seq) {
  Json entries = Json::array();
  for (const auto& e : seq.entries()) {
    Json row{{"n", e.n}};
    row.update(value_json(e.value));
    row["provenance"] = to_string(e.provenance);
    entries.push_back(std::move(row));
  }
  return Json{{"order", seq.order()}, {"precision_bits", precision_bits()}, {"entries", entries}};
}

inline MomentSequence sequence_from_json(const Json& j) {
  MomentSequence seq(j.value("order", std::string()));
  for (const auto& row : j.at("entries")) {
    seq.push_back({row.at("n").get<unsigned>(), value_from_json(row),
                   parse_provenance(row.at("provenance").get<std::string>())});
  }
  return seq;
}

inline constexpr const char* kSequenceCsvHeader = "n,value,provenance,error_bound";

/// Columns n, value, provenance, error_bound. Exact values are "a/b",
/// reals scientific, estimates plain decimals.
inline std::string to_csv(const MomentSequence& seq) {
  std::ostringstream out;
  out << kSequenceCsvHeader << '\n';
  for (const auto& e : seq.entries()) {
    out << e.n << ',' << value_string(e.value) << ',' << to_string(e.provenance) << ','
        << format_double(value_error(e.value)) << '\n';
  }
  return out.str();
}

inline MomentSequence sequence_from_csv(const std::string& text, std::string order = "") {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSequenceCsvHeader) throw DomainError("CSV header must be " + std::string(kSequenceCsvHeader));
  MomentSequence seq(std::move(order));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    if (cells.size() != 4) throw DomainError("CSV row must have 4 columns: '" + line + "'");
    const Provenance prov = parse_provenance(cells[2]);
    std::string kind;
    if (prov == Provenance::quadrature) {
      kind = "quadrature";
    } else if (prov == Provenance::monte_carlo) {
      kind = "monte_carlo";
    } else {
      kind = cells[1].find_first_of("eE") == std::string::npos ? "exact" : "real";
    }
    seq.push_back({static_cast<unsigned>(std::stoul(cells[0])), parse_value(kind, cells[1], parse_double(cells[3])), prov});
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Verdicts

inline Json to_json(const SlackEntry& s) {
  Json j{{"n", s.n}, {"slack", s.exact ? to_string(*s.exact) : to_string(s.value)},
         {"exact", s.exact.has_value()}, {"error_bound", s.error_bound}, {"status", to_string(s.status)}};
  return j;
}

inline SlackEntry slack_from_json(const Json& j) {
  SlackEntry s;
  s.n = j.at("n").get<unsigned>();
  const auto text = j.at("slack").get<std::string>();
  if (j.at("exact").get<bool>()) {
    s.exact = parse_rational(text);
    s.value = to_real(*s.exact);
  } else {
    s.value = parse_real(text);
  }
  s.error_bound = j.at("error_bound").get<double>();
  s.status = parse_status(j.at("status").get<std::string>());
  return s;
}

inline Json to_json(const SequenceVerdict& v) {
  Json j{{"claim", to_string(v.claim)}, {"status", to_string(v.status)}, {"order", v.order}};
  j["margin"] = v.exact_margin ? to_string(*v.exact_margin) : to_string(v.margin);
  j["margin_exact"] = v.exact_margin.has_value();
  j["margin_error"] = v.margin_error;
  j["onset"] = v.onset ? Json(*v.onset) : Json(nullptr);
  if (v.first_violation) {
    const auto& c = *v.first_violation;
    j["certificate"] = {{"n", c.n}, {"previous", value_json(c.previous)}, {"current", value_json(c.current)},
                        {"next", value_json(c.next)}};
  } else {
    j["certificate"] = nullptr;
  }
  Json prov = Json::array();
  for (const auto p : v.provenance) prov.push_back(to_string(p));
  j["provenance"] = prov;
  j["precision_bits"] = v.precision_bits;
  Json slacks = Json::array();
  for (const auto& s : v.slacks) slacks.push_back(to_json(s));
  j["slacks"] = slacks;
  return j;
}

inline SequenceVerdict verdict_from_json(const Json& j) {
  SequenceVerdict v;
  v.claim = parse_claim(j.at("claim").get<std::string>());
  v.status = parse_status(j.at("status").get<std::string>());
  v.order = j.at("order").get<std::string>();
  const auto margin = j.at("margin").get<std::string>();
  if (j.at("margin_exact").get<bool>()) {
    v.exact_margin = parse_rational(margin);
    v.margin = to_real(*v.exact_margin);
  } else {
    v.margin = parse_real(margin);
  }
  v.margin_error = j.at("margin_error").get<double>();
  if (!j.at("onset").is_null()) v.onset = j.at("onset").get<unsigned>();
  if (!j.at("certificate").is_null()) {
    const auto& c = j.at("certificate");
    v.first_violation = Certificate{c.at("n").get<unsigned>(), value_from_json(c.at("previous")),
                                    value_from_json(c.at("current")), value_from_json(c.at("next"))};
  }
  for (const auto& p : j.at("provenance")) v.provenance.push_back(parse_provenance(p.get<std::string>()));
  v.precision_bits = j.at("precision_bits").get<unsigned>();
  for (const auto& s : j.at("slacks")) v.slacks.push_back(slack_from_json(s));
  return v;
}

inline Json to_json(const Lemma7Report& r) {
  Json table = Json::array();
  for (const auto& row : r.table) table.push_back({{"x", to_string(row.x)}, {"value", to_string(row.value)}});
  return Json{{"claim", "lemma7"},
              {"status", to_string(r.status)},
              {"p", r.p},
              {"m", r.m},
              {"minimum", to_string(r.minimum)},
              {"argmin", to_string(r.argmin)},
              {"lower_bound", to_string(r.lower_bound)},
              {"all_positive", r.all_positive},
              {"above_lower_bound", r.above_lower_bound},
              {"midpoint", to_json(r.midpoint)},
              {"table", table}};
}

inline Json to_json(const Remark5Decomposition& d) {
  Json terms = Json::array();
  for (const auto& t : d.terms) terms.push_back({{"basis", t.basis}, {"coefficient", to_string(t.coefficient)}});
  const bool ok = d.nonnegative && d.reconstruction_exact;
  return Json{{"claim", "remark5"},
              {"status", ok ? "holds_exact" : "violated"},
              {"p", d.p},
              {"terms", terms},
              {"nonnegative", d.nonnegative},
              {"reconstruction_exact", d.reconstruction_exact},
              {"checked_up_to", d.checked_up_to}};
}

inline Json to_json(const Remark6Report& r) {
  return Json{{"claim", "remark6"},
              {"status", to_string(r.status)},
              {"branch", to_string(r.claim)},
              {"p", to_string(r.p)},
              {"n", r.n},
              {"factor", to_string(r.factor)},
              {"sharp", to_json(r.sharp)},
              {"weak", to_json(r.weak)},
              {"gap", to_string(r.gap)},
              {"implication_holds", r.implication_holds},
              {"precision_bits", precision_bits()}};
}

inline Json to_json(const GPropertyReport& r) {
  return Json{{"monotone_checks", r.monotone_checks},
              {"monotone_failures", r.monotone_failures},
              {"monotone_margin", to_string(r.monotone_margin)},
              {"concavity_checks", r.concavity_checks},
              {"concavity_failures", r.concavity_failures},
              {"concavity_margin", to_string(r.concavity_margin)},
              {"tolerance", to_string(r.tolerance)},
              {"holds", r.holds}};
}

// ---------------------------------------------------------------------------
// Search reports

inline Json to_json(const NearestMiss& m) {
  return Json{{"subject", m.subject}, {"parameter", m.parameter}, {"n", m.n},
              {"normalized_slack", m.normalized_slack}, {"value", m.value}};
}

inline NearestMiss nearest_miss_from_json(const Json& j) {
  return {j.at("subject").get<std::string>(), j.at("parameter").get<std::string>(), j.at("n").get<unsigned>(),
          j.at("normalized_slack").get<std::string>(), j.at("value").get<double>()};
}

inline Json to_json(const SearchReport& r) {
  Json space = Json::object();
  for (const auto& [k, v] : r.space) space[k] = v;
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"subject", v.subject}, {"parameter", v.parameter}, {"n", v.n},
                          {"certificate", v.certificate}, {"slack", v.slack}, {"reverified", v.reverified}});
  }
  Json regions = Json::array();
  for (const auto& g : r.regions) {
    regions.push_back({{"name", g.name}, {"checks", g.checks}, {"violations", g.violations},
                       {"nearest_miss", g.nearest_miss ? to_json(*g.nearest_miss) : Json(nullptr)}});
  }
  Json table = Json::array();
  for (const auto& m : r.miss_table) table.push_back(to_json(m));
  return Json{{"target", r.target},
              {"space", space},
              {"trials", r.trials},
              {"violations", violations},
              {"nearest_miss", r.nearest_miss ? to_json(*r.nearest_miss) : Json(nullptr)},
              {"regions", regions},
              {"miss_table", table}};
}

inline SearchReport search_report_from_json(const Json& j) {
  SearchReport r;
  r.target = j.at("target").get<std::string>();
  for (const auto& [k, v] : j.at("space").items()) r.space[k] = v.get<std::string>();
  r.trials = j.at("trials").get<std::uint64_t>();
  for (const auto& v : j.at("violations")) {
    r.violations.push_back({v.at("subject").get<std::string>(), v.at("parameter").get<std::string>(),
                            v.at("n").get<unsigned>(), v.at("certificate").get<std::vector<std::string>>(),
                            v.at("slack").get<std::string>(), v.at("reverified").get<bool>()});
  }
  if (!j.at("nearest_miss").is_null()) r.nearest_miss = nearest_miss_from_json(j.at("nearest_miss"));
  for (const auto& g : j.at("regions")) {
    SearchRegion region{g.at("name").get<std::string>(), g.at("checks").get<std::uint64_t>(),
                        g.at("violations").get<std::uint64_t>(), std::nullopt};
    if (!g.at("nearest_miss").is_null()) region.nearest_miss = nearest_miss_from_json(g.at("nearest_miss"));
    r.regions.push_back(std::move(region));
  }
  for (const auto& m : j.at("miss_table")) r.miss_table.push_back(nearest_miss_from_json(m));
  return r;
}

namespace detail {

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// subject, parameter, n, normalized_slack, value
inline std::string miss_table_csv(const SearchReport& r) {
  std::ostringstream out;
  out << "subject,parameter,n,normalized_slack,value\n";
  for (const auto& m : r.miss_table) {
    out << detail::csv_quote(m.subject) << ',' << detail::csv_quote(m.parameter) << ',' << m.n << ','
        << m.normalized_slack << ',' << format_double(m.value) << '\n';
  }
  return out.str();
}

}  // namespace momentlab
