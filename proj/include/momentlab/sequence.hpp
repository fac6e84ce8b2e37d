#pragma once

// Sequence values a_n = E f((X_1+...+X_n)/n) as produced by the engines, and
// the descriptors of the functions f they support.

#include "momentlab/numeric.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace momentlab {

enum class EstimateKind { monte_carlo, quadrature };

inline const char* to_string(EstimateKind k) { return k == EstimateKind::monte_carlo ? "monte_carlo" : "quadrature"; }

/// A value that could not be computed exactly, with an error bound: the
/// standard error for Monte Carlo, an absolute bound for quadrature.
struct EstimateWithError {
  double value = 0.0;
  double error_bound = 0.0;
  EstimateKind kind = EstimateKind::quadrature;
};

/// Exact rational, working-precision real, or an estimate with error.
using SequenceValue = std::variant<Rational, Real, EstimateWithError>;

inline bool is_exact(const SequenceValue& v) { return std::holds_alternative<Rational>(v); }

inline double to_double(const SequenceValue& v) {
  return std::visit([](const auto& x) -> double {
    using T = std::decay_t<decltype(x)>;
    if constexpr (std::is_same_v<T, EstimateWithError>) {
      return x.value;
    } else {
      return momentlab::to_double(x);
    }
  }, v);
}

enum class Provenance {
  partition_formula,
  stirling_bernoulli,
  binomial_oracle,
  convolution_oracle,
  laplace_product,
  quadrature,
  monte_carlo,
};

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::partition_formula: return "partition_formula";
    case Provenance::stirling_bernoulli: return "stirling_bernoulli";
    case Provenance::binomial_oracle: return "binomial_oracle";
    case Provenance::convolution_oracle: return "convolution_oracle";
    case Provenance::laplace_product: return "laplace_product";
    case Provenance::quadrature: return "quadrature";
    case Provenance::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

inline Provenance parse_provenance(std::string_view s) {
  for (auto p : {Provenance::partition_formula, Provenance::stirling_bernoulli, Provenance::binomial_oracle,
                 Provenance::convolution_oracle, Provenance::laplace_product, Provenance::quadrature,
                 Provenance::monte_carlo}) {
    if (s == to_string(p)) return p;
  }
  throw DomainError("unknown provenance '" + std::string(s) + "'");
}

struct SequenceEntry {
  unsigned n = 0;
  SequenceValue value;
  Provenance provenance = Provenance::partition_formula;
};

/// One value per n over a contiguous range, each tagged with the engine
/// that produced it.
class MomentSequence {
 public:
  MomentSequence() = default;
  explicit MomentSequence(std::string order) : order_(std::move(order)) {}

  /// Appends the value for n = last n + 1 (or any n when empty).
  void push_back(SequenceEntry e) {
    if (!entries_.empty() && e.n != entries_.back().n + 1) {
      throw DomainError("sequence indices must be contiguous: " + std::to_string(entries_.back().n) + " then " +
                        std::to_string(e.n));
    }
    if (e.n == 0) throw DomainError("sequence indices start at n = 1");
    check_nonnegative(e.value);
    entries_.push_back(std::move(e));
  }

  const std::string& order() const { return order_; }
  const std::vector<SequenceEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  unsigned first_n() const { return entries_.front().n; }
  unsigned last_n() const { return entries_.back().n; }
  const SequenceValue& at_n(unsigned n) const { return entries_.at(n - first_n()).value; }

  bool all_exact() const {
    for (const auto& e : entries_) {
      if (!is_exact(e.value)) return false;
    }
    return true;
  }

 private:
  static void check_nonnegative(const SequenceValue& v) {
    const bool ok = std::visit([](const auto& x) {
      using T = std::decay_t<decltype(x)>;
      if constexpr (std::is_same_v<T, EstimateWithError>) {
        return std::isfinite(x.value) && x.error_bound >= 0 && x.value + x.error_bound >= 0;
      } else {
        return x >= 0;
      }
    }, v);
    if (!ok) throw DomainError("sequence values must be nonnegative with finite error bounds");
  }

  std::string order_;
  std::vector<SequenceEntry> entries_;
};

// ---------------------------------------------------------------------------
// Functions f

struct PowerFunction {
  Rational p;
};
/// f(x) = exp(-s x)
struct ExponentialFunction {
  Rational s;
};
/// f(x) = max(x - a, 0)
struct HingeFunction {
  Rational a;
};

using FunctionDescriptor = std::variant<PowerFunction, ExponentialFunction, HingeFunction>;

inline std::string describe(const FunctionDescriptor& f) {
  return std::visit([](const auto& g) -> std::string {
    using T = std::decay_t<decltype(g)>;
    if constexpr (std::is_same_v<T, PowerFunction>) return "pow:" + to_string(g.p);
    if constexpr (std::is_same_v<T, ExponentialFunction>) return "exp:" + to_string(g.s);
    if constexpr (std::is_same_v<T, HingeFunction>) return "hinge:" + to_string(g.a);
  }, f);
}

/// Inverse of describe(): "pow:<p>", "exp:<s>", "hinge:<a>".
inline FunctionDescriptor parse_function(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw DomainError("function must look like pow:<p>, exp:<s> or hinge:<a>");
  const auto name = text.substr(0, colon);
  const Rational arg = parse_rational(text.substr(colon + 1));
  if (name == "pow") return PowerFunction{arg};
  if (name == "exp") {
    if (sgn(arg) <= 0) throw DomainError("exp:<s> needs s > 0");
    return ExponentialFunction{arg};
  }
  if (name == "hinge") return HingeFunction{arg};
  throw DomainError("unknown function '" + std::string(name) + "'");
}

inline bool is_positive_integer_power(const FunctionDescriptor& f) {
  const auto* pf = std::get_if<PowerFunction>(&f);
  return pf != nullptr && is_integer(pf->p) && sgn(pf->p) > 0;
}

/// f(x) exactly, when f maps rationals to rationals (integer powers, hinge).
inline std::optional<Rational> apply_exact(const FunctionDescriptor& f, const Rational& x) {
  if (const auto* pf = std::get_if<PowerFunction>(&f)) {
    if (!is_integer(pf->p) || !pf->p.get_num().fits_slong_p()) return std::nullopt;
    const long e = pf->p.get_num().get_si();
    if (e >= 0) return pow(x, static_cast<unsigned long>(e));
    if (sgn(x) == 0) throw DomainError("0 raised to a negative power");
    return pow(Rational(1 / x), static_cast<unsigned long>(-e));
  }
  if (const auto* hf = std::get_if<HingeFunction>(&f)) return x > hf->a ? Rational(x - hf->a) : Rational(0);
  return std::nullopt;
}

inline Real apply_real(const FunctionDescriptor& f, const Rational& x) {
  if (const auto* pf = std::get_if<PowerFunction>(&f)) return pow_real(x, pf->p);
  if (const auto* ef = std::get_if<ExponentialFunction>(&f)) return boost::multiprecision::exp(-to_real(Rational(ef->s * x)));
  const auto& hf = std::get<HingeFunction>(f);
  return to_real(x > hf.a ? Rational(x - hf.a) : Rational(0));
}

inline double apply_double(const FunctionDescriptor& f, double x) {
  if (const auto* pf = std::get_if<PowerFunction>(&f)) return std::pow(x, to_double(pf->p));
  if (const auto* ef = std::get_if<ExponentialFunction>(&f)) return std::exp(-to_double(ef->s) * x);
  return std::max(x - to_double(std::get<HingeFunction>(f).a), 0.0);
}

}  // namespace momentlab
