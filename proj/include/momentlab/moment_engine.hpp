#pragma once

// Exact engines for b_n = E((X_1+...+X_n)/n)^p and a_n = E f(...):
//  * the partition expansion over Q_m (any exact moment profile),
//  * the Stirling form for Bernoulli(theta),
//  * direct binomial sums (Bernoulli oracle),
//  * exact convolution of the n-fold sum (general finite-support oracle).
// an_sequence() dispatches between these and the analytic paths.

#include "momentlab/analytic_engine.hpp"
#include "momentlab/distributions.hpp"
#include "momentlab/parallel.hpp"
#include "momentlab/partitions.hpp"
#include "momentlab/sequence.hpp"

#include <map>
#include <string>
#include <vector>

namespace momentlab {

/// b_n for a fixed profile and order p as a polynomial in the basis
/// n!/(n^p (n-m)!), m = 1..p. Coefficients are computed once.
class PartitionExpansion {
 public:
  PartitionExpansion(const MomentProfile& profile, unsigned p) : p_(p) {
    if (p < 1) throw DomainError("partition formula needs p >= 1");
    detail::check_order(p, "bn_partition_formula");
    if (profile.max_order() < p) {
      throw DomainError("moment profile of order " + std::to_string(profile.max_order()) +
                        " cannot produce b_n of order " + std::to_string(p));
    }
    grouped_.assign(p + 1, Rational(0));
    for (unsigned m = 1; m <= p; ++m) {
      for (const auto& q : enumerate_partitions(p, m)) grouped_[m] += beta(q) * mu_of_partition(profile, q);
    }
  }

  unsigned order() const { return p_; }

  /// sum_{q in Q_m} beta(q) mu(q), indexed by m (entry 0 unused).
  const std::vector<Rational>& grouped_coefficients() const { return grouped_; }

  Rational at(unsigned long n) const {
    if (n < 1) throw DomainError("n must be at least 1");
    Rational total = 0;
    for (unsigned m = 1; m <= p_ && m <= n; ++m) total += Rational(falling_factorial(n, m)) * grouped_[m];
    Integer np;
    mpz_ui_pow_ui(np.get_mpz_t(), n, p_);
    return canonical(Rational(total / np));
  }

 private:
  unsigned p_;
  std::vector<Rational> grouped_;
};

inline Rational bn_partition_formula(const MomentProfile& profile, unsigned p, unsigned long n) {
  return PartitionExpansion(profile, p).at(n);
}

/// sum_{k=0}^{p} S(p,k) n!/((n-k)! n^p) theta^k.
inline Rational bn_bernoulli_stirling(const Rational& theta, unsigned p, unsigned long n) {
  if (sgn(theta) <= 0 || theta >= 1) throw DomainError("theta must lie in (0,1)");
  if (p < 1 || n < 1) throw DomainError("Stirling form needs p, n >= 1");
  detail::check_order(p, "bn_bernoulli_stirling");
  Rational total = 0;
  Rational theta_k = 1;
  for (unsigned k = 0; k <= p; ++k) {
    total += Rational(stirling2(p, k) * falling_factorial(n, k)) * theta_k;
    theta_k *= theta;
  }
  Integer np;
  mpz_ui_pow_ui(np.get_mpz_t(), n, p);
  return canonical(Rational(total / np));
}

inline constexpr unsigned long kBinomialExactMaxN = 10000;

/// Exact binomial weights C(n,k) theta^k (1-theta)^(n-k), k = 0..n.
inline std::vector<Rational> binomial_weights(const Rational& theta, unsigned long n) {
  if (sgn(theta) <= 0 || theta >= 1) throw DomainError("theta must lie in (0,1)");
  if (n > kBinomialExactMaxN) throw CapacityError("binomial oracle is capped at n = 10000");
  std::vector<Rational> w(n + 1);
  const Rational ratio = theta / (1 - theta);
  w[0] = pow(Rational(1 - theta), n);
  for (unsigned long k = 1; k <= n; ++k) w[k] = canonical(Rational(w[k - 1] * ratio * (n - k + 1) / k));
  return w;
}

/// E f(S_n / n) for S_n ~ Binomial(n, theta), exact when f allows it.
inline SequenceValue bernoulli_average_expectation(const Rational& theta, const FunctionDescriptor& f,
                                                   unsigned long n) {
  if (n < 1) throw DomainError("n must be at least 1");
  if (const auto* pf = std::get_if<PowerFunction>(&f); pf != nullptr && sgn(pf->p) <= 0) {
    throw DomainError("p <= 0 is undefined for a law with an atom at 0");
  }
  const auto w = binomial_weights(theta, n);
  const Rational nn(static_cast<unsigned long>(n));
  if (apply_exact(f, Rational(0))) {
    Rational total = 0;
    for (unsigned long k = 0; k <= n; ++k) total += w[k] * *apply_exact(f, Rational(k) / nn);
    return canonical(total);
  }
  Real total(0);
  for (unsigned long k = 0; k <= n; ++k) total += to_real(w[k]) * apply_real(f, canonical(Rational(k) / nn));
  return total;
}

/// sum_k C(n,k) (k/n)^p theta^k (1-theta)^(n-k); exact for integer p, real otherwise.
inline SequenceValue bn_binomial_oracle(const Rational& theta, const Rational& p, unsigned long n) {
  if (sgn(p) <= 0) throw DomainError("binomial oracle needs p > 0");
  return bernoulli_average_expectation(theta, PowerFunction{p}, n);
}

inline constexpr unsigned kConvolutionMaxN = 30;
inline constexpr std::size_t kConvolutionMaxAtoms = 6;
inline constexpr std::size_t kConvolutionMaxSupport = 1'000'000;

/// Exact law of S_n = X_1 + ... + X_n by repeated convolution.
inline std::vector<Atom> sum_distribution(const DiscreteDistribution& dist, unsigned n) {
  if (n < 1) throw DomainError("n must be at least 1");
  if (n > kConvolutionMaxN) {
    throw CapacityError("convolution oracle is capped at n = " + std::to_string(kConvolutionMaxN) + " (got " +
                        std::to_string(n) + ")");
  }
  if (dist.size() > kConvolutionMaxAtoms) {
    throw CapacityError("convolution oracle is capped at " + std::to_string(kConvolutionMaxAtoms) + " atoms (got " +
                        std::to_string(dist.size()) + ")");
  }
  std::map<Rational, Rational> current{{Rational(0), Rational(1)}};
  for (unsigned step = 0; step < n; ++step) {
    std::map<Rational, Rational> next;
    for (const auto& [s, ps] : current) {
      for (const auto& a : dist.atoms()) next[s + a.value] += ps * a.prob;
    }
    if (next.size() > kConvolutionMaxSupport) {
      throw CapacityError("support of S_n exceeds " + std::to_string(kConvolutionMaxSupport) + " points");
    }
    current = std::move(next);
  }
  std::vector<Atom> out;
  out.reserve(current.size());
  for (auto& [s, ps] : current) out.push_back({s, canonical(ps)});
  return out;
}

/// E f(S_n / n) from the exact law of S_n.
inline SequenceValue convolution_expectation(const DiscreteDistribution& dist, const FunctionDescriptor& f,
                                             unsigned n) {
  if (const auto* pf = std::get_if<PowerFunction>(&f); pf != nullptr && sgn(pf->p) <= 0 && !dist.is_positive()) {
    throw DomainError("p <= 0 is undefined for a law with an atom at 0");
  }
  const auto law = sum_distribution(dist, n);
  const Rational nn(n);
  if (apply_exact(f, law.front().value / nn)) {
    Rational total = 0;
    for (const auto& a : law) total += a.prob * *apply_exact(f, a.value / nn);
    return canonical(total);
  }
  Real total(0);
  for (const auto& a : law) total += to_real(a.prob) * apply_real(f, canonical(Rational(a.value / nn)));
  return total;
}

/// b_n from the full law of S_n: exact for integer p, working precision otherwise.
inline SequenceValue bn_convolution_oracle(const DiscreteDistribution& dist, const Rational& p, unsigned n) {
  return convolution_expectation(dist, PowerFunction{p}, n);
}

/// a_n = F(s/n)^n for f(x) = exp(-s x).
inline Real an_exponential(const Distribution& dist, const Rational& s, unsigned n) {
  if (sgn(s) <= 0) throw DomainError("exp:<s> needs s > 0");
  return u_n(dist, to_real(s), n);
}

enum class Method { automatic, exact, partition, stirling, binomial, convolution, quadrature, monte_carlo };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::automatic: return "auto";
    case Method::exact: return "exact";
    case Method::partition: return "partition";
    case Method::stirling: return "stirling";
    case Method::binomial: return "exact-binomial";
    case Method::convolution: return "convolution";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

inline Method parse_method(std::string_view s) {
  if (s == "monte_carlo") return Method::monte_carlo;
  if (s == "exact_binomial" || s == "binomial") return Method::binomial;
  for (auto m : {Method::automatic, Method::exact, Method::partition, Method::stirling, Method::binomial,
                 Method::convolution, Method::quadrature, Method::monte_carlo}) {
    if (s == to_string(m)) return m;
  }
  throw DomainError("unknown method '" + std::string(s) + "'");
}

struct MonteCarloOptions {
  std::size_t samples = 100'000;
  std::uint64_t seed = 1;
};

namespace detail {

inline bool quadrature_applies(const FunctionDescriptor& f) {
  const auto* pf = std::get_if<PowerFunction>(&f);
  return pf != nullptr && (sgn(pf->p) < 0 || (sgn(pf->p) > 0 && pf->p < 1));
}

inline bool convolution_fits(const DiscreteDistribution& d, unsigned n_last) {
  return n_last <= kConvolutionMaxN && d.size() <= kConvolutionMaxAtoms;
}

// Concrete engine for `method`, resolving automatic/exact preferences.
inline Method resolve_method(const Distribution& dist, const FunctionDescriptor& f, unsigned n_last, Method method) {
  const auto* discrete = std::get_if<DiscreteDistribution>(&dist);
  const bool bernoulli = discrete != nullptr && discrete->bernoulli_theta().has_value();
  if (method == Method::automatic || method == Method::exact) {
    if (std::holds_alternative<ExponentialFunction>(f)) return Method::exact;  // F(s/n)^n
    if (discrete != nullptr) {
      if (is_positive_integer_power(f)) return Method::partition;
      if (bernoulli && n_last <= kBinomialExactMaxN) return Method::binomial;
      if (convolution_fits(*discrete, n_last)) return Method::convolution;
    }
    if (method == Method::exact) {
      throw DomainError("no exact engine for " + describe(f) + " on " + describe(dist) + " up to n = " +
                        std::to_string(n_last));
    }
    if (quadrature_applies(f)) {
      const auto& pf = std::get<PowerFunction>(f);
      if (sgn(pf.p) > 0 || is_positive(dist)) return Method::quadrature;
    }
    return Method::monte_carlo;
  }
  return method;
}

}  // namespace detail

/// a_n = E f((X_1+...+X_n)/n) for n in [n_first, n_last], each value tagged
/// with the engine that produced it.
inline MomentSequence an_sequence(const Distribution& dist, const FunctionDescriptor& f, unsigned n_first,
                                  unsigned n_last, Method method = Method::automatic,
                                  const MonteCarloOptions& mc = {}) {
  if (n_first < 1 || n_last < n_first) throw DomainError("invalid n range");
  const Method chosen = detail::resolve_method(dist, f, n_last, method);
  const std::size_t count = n_last - n_first + 1;

  if (chosen == Method::monte_carlo) {
    return an_monte_carlo(dist, f, n_first, n_last, mc.samples, mc.seed);
  }

  std::vector<SequenceEntry> entries;
  switch (chosen) {
    case Method::exact: {
      const auto* ef = std::get_if<ExponentialFunction>(&f);
      if (ef == nullptr) throw DomainError("exact method needs an exact engine for " + describe(f));
      entries = parallel_map(count, [&](std::size_t i) {
        const unsigned n = n_first + static_cast<unsigned>(i);
        return SequenceEntry{n, an_exponential(dist, ef->s, n), Provenance::laplace_product};
      });
      break;
    }
    case Method::partition: {
      if (!is_positive_integer_power(f)) throw DomainError("partition formula needs f = x^p with integer p >= 1");
      const auto p = static_cast<unsigned>(std::get<PowerFunction>(f).p.get_num().get_ui());
      detail::check_order(p, "bn_partition_formula");
      const PartitionExpansion expansion(moments_of(dist, p), p);
      entries = parallel_map(count, [&](std::size_t i) {
        const unsigned n = n_first + static_cast<unsigned>(i);
        return SequenceEntry{n, expansion.at(n), Provenance::partition_formula};
      });
      break;
    }
    case Method::stirling: {
      const auto& d = require_discrete(dist, "Stirling form");
      const auto theta = d.bernoulli_theta();
      if (!theta || !is_positive_integer_power(f)) throw DomainError("Stirling form needs Bernoulli(theta) and integer p >= 1");
      const auto p = static_cast<unsigned>(std::get<PowerFunction>(f).p.get_num().get_ui());
      entries = parallel_map(count, [&](std::size_t i) {
        const unsigned n = n_first + static_cast<unsigned>(i);
        return SequenceEntry{n, bn_bernoulli_stirling(*theta, p, n), Provenance::stirling_bernoulli};
      });
      break;
    }
    case Method::binomial: {
      const auto& d = require_discrete(dist, "binomial oracle");
      const auto theta = d.bernoulli_theta();
      if (!theta) throw DomainError("exact-binomial needs a Bernoulli distribution, got " + d.describe());
      entries = parallel_map(count, [&](std::size_t i) {
        const unsigned n = n_first + static_cast<unsigned>(i);
        return SequenceEntry{n, bernoulli_average_expectation(*theta, f, n), Provenance::binomial_oracle};
      });
      break;
    }
    case Method::convolution: {
      const auto& d = require_discrete(dist, "convolution oracle");
      entries = parallel_map(count, [&](std::size_t i) {
        const unsigned n = n_first + static_cast<unsigned>(i);
        return SequenceEntry{n, convolution_expectation(d, f, n), Provenance::convolution_oracle};
      });
      break;
    }
    case Method::quadrature: {
      if (!detail::quadrature_applies(f)) throw DomainError("quadrature needs f = x^p with p < 0 or 0 < p < 1");
      const Rational p = std::get<PowerFunction>(f).p;
      entries = parallel_map(count, [&](std::size_t i) {
        const unsigned n = n_first + static_cast<unsigned>(i);
        const auto est = sgn(p) < 0 ? an_quadrature_negative_p(dist, p, n) : an_quadrature_fractional_p(dist, p, n);
        return SequenceEntry{n, est, Provenance::quadrature};
      });
      break;
    }
    default:
      throw DomainError(std::string("method ") + to_string(chosen) + " is not applicable here");
  }

  MomentSequence seq(describe(f));
  for (auto& e : entries) seq.push_back(std::move(e));
  return seq;
}

inline MomentSequence bn_sequence(const Distribution& dist, const Rational& p, unsigned n_first, unsigned n_last,
                                  Method method = Method::automatic, const MonteCarloOptions& mc = {}) {
  return an_sequence(dist, PowerFunction{p}, n_first, n_last, method, mc);
}

}  // namespace momentlab
