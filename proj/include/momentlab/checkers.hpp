#pragma once

// Verdicts for log-convexity and log-concavity of computed sequences, and
// the exact checks built around the partition expansion.
//
// Slack is signed so that slack >= 0 means the claim holds at that index:
//   log-convex:  b_{n-1} b_{n+1} - b_n^2
//   log-concave: b_n^2 - b_{n-1} b_{n+1}

#include "momentlab/moment_engine.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace momentlab {

enum class Claim { log_convex, log_concave };

enum class VerdictStatus { holds_exact, holds_within_tolerance, violated, inconclusive };

inline const char* to_string(Claim c) { return c == Claim::log_convex ? "log_convex" : "log_concave"; }

inline const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::holds_exact: return "holds_exact";
    case VerdictStatus::holds_within_tolerance: return "holds_within_tolerance";
    case VerdictStatus::violated: return "violated";
    case VerdictStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

inline Claim parse_claim(std::string_view s) {
  if (s == "log_convex") return Claim::log_convex;
  if (s == "log_concave") return Claim::log_concave;
  throw DomainError("unknown claim '" + std::string(s) + "'");
}

inline VerdictStatus parse_status(std::string_view s) {
  for (auto v : {VerdictStatus::holds_exact, VerdictStatus::holds_within_tolerance, VerdictStatus::violated,
                 VerdictStatus::inconclusive}) {
    if (s == to_string(v)) return v;
  }
  throw DomainError("unknown verdict status '" + std::string(s) + "'");
}

inline bool holds(VerdictStatus s) { return s == VerdictStatus::holds_exact || s == VerdictStatus::holds_within_tolerance; }

/// Signed slack at one interior index.
struct SlackEntry {
  unsigned n = 0;
  std::optional<Rational> exact;  // set when all three inputs were exact
  Real value;
  double error_bound = 0.0;
  VerdictStatus status = VerdictStatus::holds_exact;
};

struct Certificate {
  unsigned n = 0;
  SequenceValue previous;
  SequenceValue current;
  SequenceValue next;
};

struct SequenceVerdict {
  Claim claim = Claim::log_convex;
  VerdictStatus status = VerdictStatus::holds_exact;
  std::string order;
  std::vector<SlackEntry> slacks;
  std::optional<Certificate> first_violation;
  Real margin;
  std::optional<Rational> exact_margin;
  double margin_error = 0.0;
  /// Smallest n from which every scanned index holds.
  std::optional<unsigned> onset;
  std::vector<Provenance> provenance;
  unsigned precision_bits = 0;
};

namespace detail {

inline constexpr double kRealRelativeSlop = 1024.0;
inline constexpr double kViolationSafety = 4.0;

struct Term {
  Real value;
  double error = 0.0;
  std::optional<Rational> exact;
  bool estimate = false;
};

inline Term make_term(const SequenceValue& v) {
  return std::visit([](const auto& x) -> Term {
    using T = std::decay_t<decltype(x)>;
    if constexpr (std::is_same_v<T, Rational>) {
      return {to_real(x), 0.0, x, false};
    } else if constexpr (std::is_same_v<T, Real>) {
      const double err = kRealRelativeSlop * to_double(unit_roundoff()) * std::abs(to_double(x));
      return {x, err, std::nullopt, false};
    } else {
      return {Real(x.value), x.error_bound, std::nullopt, true};
    }
  }, v);
}

// Classification of a slack with error bound. Exact slacks have no error;
// estimates need the bound cleared, and are called violated only past the
// safety factor.
inline VerdictStatus classify(const Real& slack, double err, bool exact, bool estimate) {
  if (exact) return slack >= 0 ? VerdictStatus::holds_exact : VerdictStatus::violated;
  const double s = to_double(slack);
  if (estimate) {
    if (s > err || (err == 0 && slack >= 0)) return VerdictStatus::holds_within_tolerance;
    if (-s > kViolationSafety * err) return VerdictStatus::violated;
    return VerdictStatus::inconclusive;
  }
  if (s >= -err) return VerdictStatus::holds_within_tolerance;
  if (-s > kViolationSafety * err) return VerdictStatus::violated;
  return VerdictStatus::inconclusive;
}

inline SlackEntry slack_at(Claim claim, unsigned n, const SequenceValue& prev, const SequenceValue& cur,
                           const SequenceValue& next) {
  const Term x = make_term(prev);
  const Term y = make_term(cur);
  const Term z = make_term(next);
  SlackEntry out;
  out.n = n;
  const double sign = claim == Claim::log_convex ? 1.0 : -1.0;
  if (x.exact && y.exact && z.exact) {
    Rational s = *x.exact * *z.exact - *y.exact * *y.exact;
    if (claim == Claim::log_concave) s = -s;
    out.exact = s;
    out.value = to_real(s);
    out.status = classify(out.value, 0.0, true, false);
    return out;
  }
  const Real cross = x.value * z.value;
  const Real square = y.value * y.value;
  out.value = sign * (cross - square);
  const double ax = std::abs(to_double(x.value));
  const double ay = std::abs(to_double(y.value));
  const double az = std::abs(to_double(z.value));
  const double rounding = 8 * std::numeric_limits<double>::epsilon() * (ax * az + ay * ay);
  const bool estimate = x.estimate || y.estimate || z.estimate;
  out.error_bound = ax * z.error + az * x.error + x.error * z.error + 2 * ay * y.error + y.error * y.error +
                    (estimate ? rounding : 0.0);
  out.status = classify(out.value, out.error_bound, false, estimate);
  return out;
}

}  // namespace detail

inline SequenceVerdict check_sequence(const MomentSequence& seq, Claim claim) {
  if (seq.size() < 3) throw DomainError("a log-convexity check needs at least 3 terms");
  SequenceVerdict v;
  v.claim = claim;
  v.order = seq.order();
  v.precision_bits = precision_bits();
  const auto& e = seq.entries();
  for (std::size_t i = 1; i + 1 < e.size(); ++i) {
    v.slacks.push_back(detail::slack_at(claim, e[i].n, e[i - 1].value, e[i].value, e[i + 1].value));
  }
  for (const auto& entry : e) {
    if (std::find(v.provenance.begin(), v.provenance.end(), entry.provenance) == v.provenance.end()) {
      v.provenance.push_back(entry.provenance);
    }
  }

  bool any_violation = false;
  bool any_inconclusive = false;
  bool all_exact = true;
  const auto* worst = &v.slacks.front();
  for (const auto& s : v.slacks) {
    if (s.value < worst->value) worst = &s;
    all_exact = all_exact && s.exact.has_value();
    if (s.status == VerdictStatus::violated && !any_violation) {
      any_violation = true;
      const std::size_t i = s.n - seq.first_n();
      v.first_violation = Certificate{s.n, e[i - 1].value, e[i].value, e[i + 1].value};
    }
    any_inconclusive = any_inconclusive || s.status == VerdictStatus::inconclusive;
  }
  v.margin = worst->value;
  v.margin_error = worst->error_bound;
  if (all_exact) {
    Rational m = *v.slacks.front().exact;
    for (const auto& s : v.slacks) m = std::min(m, *s.exact);
    v.exact_margin = m;
  }
  if (any_violation) {
    v.status = VerdictStatus::violated;
  } else if (any_inconclusive) {
    v.status = VerdictStatus::inconclusive;
  } else {
    v.status = all_exact ? VerdictStatus::holds_exact : VerdictStatus::holds_within_tolerance;
  }

  for (std::size_t i = v.slacks.size(); i-- > 0;) {
    if (!holds(v.slacks[i].status)) break;
    v.onset = v.slacks[i].n;
  }
  return v;
}

inline SequenceVerdict check_log_convex(const MomentSequence& seq) { return check_sequence(seq, Claim::log_convex); }
inline SequenceVerdict check_log_concave(const MomentSequence& seq) { return check_sequence(seq, Claim::log_concave); }

/// Exact sequence from a list of rationals, indexed from n_first.
inline MomentSequence exact_sequence(const std::vector<Rational>& values, unsigned n_first = 1,
                                     Provenance provenance = Provenance::partition_formula, std::string order = "") {
  MomentSequence seq(std::move(order));
  for (std::size_t i = 0; i < values.size(); ++i) {
    seq.push_back({n_first + static_cast<unsigned>(i), values[i], provenance});
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Integer powers p >= 2, n >= p^2

/// Verdict over p^2 <= n <= n_max for b_n = E(S_n/n)^p. The onset field is
/// the smallest n from which log-convexity holds over the whole scan 2..n_max.
inline SequenceVerdict check_theorem4(const MomentProfile& profile, unsigned p, unsigned n_max) {
  if (p < 2) throw DomainError("the integer-power check needs p >= 2");
  if (n_max < p * p + 1) throw DomainError("n_max must be at least p^2 + 1 = " + std::to_string(p * p + 1));
  if (profile.max_order() < p) {
    throw DomainError("moment profile covers order " + std::to_string(profile.max_order()) + ", need " +
                      std::to_string(p));
  }
  const PartitionExpansion expansion(normalize_mean(profile), p);
  std::vector<Rational> values;
  values.reserve(n_max + 1);
  for (unsigned n = 1; n <= n_max + 1; ++n) values.push_back(expansion.at(n));
  const std::string order = "pow:" + std::to_string(p);

  const auto full = check_log_convex(exact_sequence(values, 1, Provenance::partition_formula, order));
  const std::vector<Rational> tail(values.begin() + (p * p - 2), values.end());
  auto verdict = check_log_convex(exact_sequence(tail, p * p - 1, Provenance::partition_formula, order));
  verdict.onset = full.onset;
  return verdict;
}

// ---------------------------------------------------------------------------
// Basis sequences u^{(m)}_n = n! / (n^p (n-m)!)

/// x^2 f''(x) for f(x) = log(x(x-1)...(x-m+1) / x^p).
inline Rational lemma7_value(unsigned p, unsigned m, const Rational& x) {
  if (p < 2) throw DomainError("need p >= 2");
  if (m < 1 || m > p - 1) throw DomainError("need 1 <= m <= p-1");
  if (sgn(x) <= 0 || x <= m - 1) throw DomainError("x = " + to_string(x) + " is not in the domain x > m-1");
  Rational sum = 0;
  for (unsigned k = 1; k < m; ++k) {
    const Rational d = x - k;
    sum += 1 / (d * d);
  }
  return canonical(Rational(p - 1) - x * x * sum);
}

/// (p-1)(p+2) / (p(p^2-2))
inline Rational lemma7_lower_bound(unsigned p) {
  if (p < 2) throw DomainError("need p >= 2");
  const Rational pp(p);
  return canonical(Rational((pp - 1) * (pp + 2)) / (pp * (pp * pp - 2)));
}

inline Rational basis_sequence_value(unsigned p, unsigned m, unsigned long n) {
  Integer np;
  mpz_ui_pow_ui(np.get_mpz_t(), n, p);
  return canonical(Rational(falling_factorial(n, m), np));
}

struct Lemma7GridPoint {
  Rational x;
  Rational value;
};

struct Lemma7Report {
  unsigned p = 0;
  unsigned m = 0;
  std::vector<Lemma7GridPoint> table;
  Rational minimum;
  Rational argmin;
  Rational lower_bound;
  bool all_positive = false;
  bool above_lower_bound = false;
  SequenceVerdict midpoint;
  VerdictStatus status = VerdictStatus::holds_exact;
};

/// Integers and half-integers in [p^2-1, 4p^2].
inline std::vector<Rational> lemma7_default_grid(unsigned p) {
  std::vector<Rational> grid;
  for (unsigned twice = 2 * (p * p - 1); twice <= 8 * p * p; ++twice) grid.push_back(canonical(Rational(twice, 2)));
  return grid;
}

/// Exact positivity of x^2 f''(x) on the grid and the midpoint inequality
/// (u_n)^2 <= u_{n-1} u_{n+1} for p^2 <= n <= n_max (default 4p^2).
inline Lemma7Report check_lemma7(unsigned p, unsigned m, std::vector<Rational> grid = {}, unsigned n_max = 0) {
  if (grid.empty()) grid = lemma7_default_grid(p);
  if (n_max == 0) n_max = 4 * p * p;
  if (n_max < p * p) throw DomainError("n_max must be at least p^2");
  Lemma7Report r;
  r.p = p;
  r.m = m;
  r.lower_bound = lemma7_lower_bound(p);
  r.all_positive = true;
  r.above_lower_bound = true;
  for (const auto& x : grid) {
    const Rational v = lemma7_value(p, m, x);
    if (r.table.empty() || v < r.minimum) {
      r.minimum = v;
      r.argmin = x;
    }
    r.all_positive = r.all_positive && sgn(v) > 0;
    r.above_lower_bound = r.above_lower_bound && (x < p * p - 1 || v >= r.lower_bound);
    r.table.push_back({x, v});
  }
  std::vector<Rational> u;
  for (unsigned long n = p * p - 1; n <= n_max + 1; ++n) u.push_back(basis_sequence_value(p, m, n));
  r.midpoint = check_log_convex(exact_sequence(u, p * p - 1, Provenance::partition_formula,
                                               "u(m=" + std::to_string(m) + ",p=" + std::to_string(p) + ")"));
  r.status = r.all_positive && r.midpoint.status == VerdictStatus::holds_exact ? VerdictStatus::holds_exact
                                                                              : VerdictStatus::violated;
  return r;
}

// ---------------------------------------------------------------------------
// Closed forms for p = 2 and p = 3

struct DecompositionTerm {
  std::string basis;
  Rational coefficient;
};

struct Remark5Decomposition {
  unsigned p = 0;
  std::vector<DecompositionTerm> terms;
  bool nonnegative = false;
  bool reconstruction_exact = false;
  unsigned checked_up_to = 0;
};

inline Rational remark5_basis(unsigned p, std::size_t index, unsigned long n) {
  const Rational inv(1, n);
  if (index == 0) return Rational(1);
  if (p == 2) return inv;
  return index == 1 ? Rational(inv * inv) : Rational(3 * inv - inv * inv);
}

/// p = 2: b_n = (EX)^2 + Var(X)/n.
/// p = 3: b_n = (EX)^3 + (EX^3 + (EX)^3 - 2 EX^2 EX) n^{-2} + EX Var(X) (3n^{-1} - n^{-2}).
inline Remark5Decomposition verify_remark5_decomposition(const MomentProfile& profile, unsigned p,
                                                         unsigned n_check = 50) {
  if (p != 2 && p != 3) throw DomainError("the closed-form decomposition exists for p = 2 and p = 3 only");
  if (profile.max_order() < p) throw DomainError("moment profile does not cover order " + std::to_string(p));
  const Rational& m1 = profile[1];
  const Rational& m2 = profile[2];
  const Rational var = m2 - m1 * m1;
  Remark5Decomposition d;
  d.p = p;
  if (p == 2) {
    d.terms = {{"1", m1 * m1}, {"1/n", var}};
  } else {
    const Rational& m3 = profile[3];
    d.terms = {{"1", m1 * m1 * m1}, {"1/n^2", m3 + m1 * m1 * m1 - 2 * m2 * m1}, {"3/n - 1/n^2", m1 * var}};
  }
  d.nonnegative = std::all_of(d.terms.begin(), d.terms.end(), [](const auto& t) { return sgn(t.coefficient) >= 0; });
  const PartitionExpansion expansion(profile, p);
  d.reconstruction_exact = true;
  for (unsigned long n = 1; n <= n_check; ++n) {
    Rational total = 0;
    for (std::size_t i = 0; i < d.terms.size(); ++i) total += d.terms[i].coefficient * remark5_basis(p, i, n);
    d.reconstruction_exact = d.reconstruction_exact && total == expansion.at(n);
  }
  d.checked_up_to = n_check;
  return d;
}

// ---------------------------------------------------------------------------
// The ((n^2-1)/n^2)^p factor

struct Remark6Report {
  Rational p;
  unsigned n = 0;
  Claim claim = Claim::log_concave;
  Real factor;
  /// Slack of the factor-free inequality.
  SlackEntry sharp;
  /// Slack of the inequality with the factor.
  SlackEntry weak;
  /// weak - sharp >= 0: the factor-free statement implies the factored one.
  Real gap;
  bool implication_holds = false;
  VerdictStatus status = VerdictStatus::holds_exact;
};

/// Compares b_n^2 against b_{n-1} b_{n+1} with and without the factor.
/// Concave branch 0 < p < 1/2, convex branch p < 0.
inline Remark6Report check_remark6_factor(const SequenceValue& previous, const SequenceValue& current,
                                          const SequenceValue& next, const Rational& p, unsigned n) {
  if (n < 2) throw DomainError("need n >= 2");
  Remark6Report r;
  r.p = p;
  r.n = n;
  if (sgn(p) > 0 && p < Rational(1, 2)) {
    r.claim = Claim::log_concave;
  } else if (sgn(p) < 0) {
    r.claim = Claim::log_convex;
  } else {
    throw DomainError("(xy)^p is neither convex nor concave for p in [1/2, 1); need 0 < p < 1/2 or p < 0, got " +
                      to_string(p));
  }
  const Rational ratio = Rational(Rational(n) * n - 1) / (Rational(n) * n);
  r.factor = pow_real(canonical(ratio), p);
  r.sharp = detail::slack_at(r.claim, n, previous, current, next);

  const detail::Term x = detail::make_term(previous);
  const detail::Term y = detail::make_term(current);
  const detail::Term z = detail::make_term(next);
  const Real scaled = r.factor * x.value * z.value;
  r.weak.n = n;
  r.weak.value = r.claim == Claim::log_concave ? Real(y.value * y.value - scaled) : Real(scaled - y.value * y.value);
  const double f = to_double(r.factor);
  const double ax = std::abs(to_double(x.value));
  const double ay = std::abs(to_double(y.value));
  const double az = std::abs(to_double(z.value));
  const bool estimate = x.estimate || y.estimate || z.estimate;
  r.weak.error_bound = f * (ax * z.error + az * x.error + x.error * z.error) + 2 * ay * y.error + y.error * y.error +
                       detail::kRealRelativeSlop * to_double(unit_roundoff()) * (f * ax * az + ay * ay);
  r.weak.status = detail::classify(r.weak.value, r.weak.error_bound, false, estimate);
  r.gap = r.weak.value - r.sharp.value;
  // gap = |1 - factor| b_{n-1} b_{n+1}, so its sign is decided without noise
  r.implication_holds = r.gap >= 0;

  if (!r.implication_holds || r.sharp.status == VerdictStatus::violated || r.weak.status == VerdictStatus::violated) {
    r.status = VerdictStatus::violated;
  } else if (r.sharp.status == VerdictStatus::inconclusive || r.weak.status == VerdictStatus::inconclusive) {
    r.status = VerdictStatus::inconclusive;
  } else {
    r.status = r.sharp.status == VerdictStatus::holds_exact ? VerdictStatus::holds_within_tolerance : r.sharp.status;
  }
  return r;
}

inline Remark6Report check_remark6_factor(const Distribution& dist, const Rational& p, unsigned n,
                                          Method method = Method::automatic) {
  if (n < 2) throw DomainError("need n >= 2");
  const auto seq = bn_sequence(dist, p, n - 1, n + 1, method);
  return check_remark6_factor(seq.at_n(n - 1), seq.at_n(n), seq.at_n(n + 1), p, n);
}

}  // namespace momentlab
