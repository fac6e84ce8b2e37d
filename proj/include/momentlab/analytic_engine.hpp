#pragma once

// a_n for completely monotone f and fractional powers through Laplace-type
// integral representations, plus Monte Carlo with common random numbers.
//
//   x^p      = 1/Gamma(-p) * int_0^inf t^{-p-1} e^{-tx} dt          (p < 0)
//   x^p      = p/Gamma(1-p) * int_0^inf (1 - e^{-tx}) t^{-p-1} dt    (0 < p < 1)
//   e^{-sx}  = the point mass at t = s
//
// Averaging over i.i.d. X_i replaces e^{-tx} by u_n(t) = F(t/n)^n.

#include "momentlab/distributions.hpp"
#include "momentlab/sequence.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace momentlab {

struct IntegralRepresentation {
  enum class Kind { power_negative, power_fractional, exponential };

  Kind kind;
  Rational parameter;
  std::string weight;

  static IntegralRepresentation for_function(const FunctionDescriptor& f) {
    if (const auto* e = std::get_if<ExponentialFunction>(&f)) {
      if (sgn(e->s) <= 0) throw DomainError("exponential representation needs s > 0");
      return {Kind::exponential, e->s, "mu = point mass at t = " + to_string(e->s)};
    }
    const auto* pf = std::get_if<PowerFunction>(&f);
    if (pf == nullptr) throw DomainError(describe(f) + " has no shipped integral representation");
    if (sgn(pf->p) < 0) {
      return {Kind::power_negative, pf->p, "d mu = t^(-p-1) / Gamma(-p) dt"};
    }
    if (sgn(pf->p) > 0 && pf->p < 1) {
      return {Kind::power_fractional, pf->p, "d nu = p t^(-p-1) / Gamma(1-p) dt"};
    }
    throw DomainError("x^p has an integral representation only for p < 0 or 0 < p < 1");
  }
};

/// u_n(t) = F(t/n)^n.
inline Real u_n(const Distribution& dist, const Real& t, unsigned n) {
  if (n < 1) throw DomainError("u_n needs n >= 1");
  return boost::multiprecision::pow(laplace_real(dist, t / n), n);
}

/// G(alpha, t) = 1 - F(t/alpha)^alpha.
inline Real g_alpha_t(const Distribution& dist, const Real& alpha, const Real& t) {
  if (alpha <= 0 || t <= 0) throw DomainError("G(alpha, t) needs alpha, t > 0");
  return 1 - boost::multiprecision::pow(laplace_real(dist, t / alpha), alpha);
}

namespace detail {

inline constexpr double kTailTarget = 1e-15;
// Largest tail left unintegrated once T reaches kTailCap; it goes into the error.
inline constexpr double kTailLimit = 1e-6;
inline constexpr double kTailCap = 1e16;
inline constexpr double kPanelTolerance = 1e-14;
inline constexpr unsigned kPanelDepth = 12;

struct QuadratureSum {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

template <class Integrand>
void add_panel(const Integrand& f, double a, double b, QuadratureSum& acc) {
  double err = 0.0;
  double l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, kPanelDepth,
                                                                                 kPanelTolerance, &err, &l1);
  if (!std::isfinite(v) || !std::isfinite(err)) throw ConvergenceError("quadrature panel produced a non-finite value");
  acc.value += v;
  acc.error += err;
  acc.l1 += l1;
}

// Upper bound on int_T^inf C t^e exp(-rate t) dt.
inline double tail_integral(double c, double e, double rate, double T) {
  if (rate > 0) {
    if (e <= 0) return c * std::pow(T, e) * std::exp(-rate * T) / rate;
    return c * boost::math::tgamma(e + 1, rate * T) / std::pow(rate, e + 1);
  }
  if (e < -1) return c * std::pow(T, e + 1) / (-e - 1);
  return std::numeric_limits<double>::infinity();
}

// Bound on int_T^inf t^e (F(t/n)^n - pi0^n) dt from the law's envelope.
inline double remainder_tail(const LaplaceEnvelope& env, double e, unsigned n, double T) {
  if (env.mass_at_zero > 0) {
    // a^n - b^n <= n (a - b) on [0,1]
    return tail_integral(n * (1 - env.mass_at_zero), e, env.rate / n, T);
  }
  const double c = env.power == 0 ? 1.0 : std::pow(env.scale * n, static_cast<double>(env.power * n));
  return tail_integral(c, e - static_cast<double>(env.power * n), env.rate, T);
}

// int_0^T t^{e} g(t) dt with g evaluated at working precision. [0, t_scale]
// is integrated in u = t^{1/k}, which turns the t^{e} endpoint behaviour
// into a bounded integrand; the rest in doubling panels.
template <class G>
QuadratureSum integrate_weighted(const G& g, double e, double k, double t_scale, double T) {
  QuadratureSum acc;
  const Real e_plus_one(e + 1);
  auto substituted = [&](double u) -> double {
    if (u <= 0) return 0.0;
    const Real ur(u);
    const Real t = k == 1.0 ? ur : boost::multiprecision::pow(ur, Real(k));
    if (t == 0) return 0.0;
    return to_double(Real(k) * g(t) * boost::multiprecision::pow(t, e_plus_one) / ur);
  };
  auto direct = [&](double tt) -> double {
    const Real t(tt);
    return to_double(g(t) * boost::multiprecision::pow(t, Real(e)));
  };
  const double split = std::min(t_scale, T);
  add_panel(substituted, 0.0, std::pow(split, 1.0 / k), acc);
  for (double a = split; a < T; a *= 2) add_panel(direct, a, std::min(2 * a, T), acc);
  return acc;
}

inline double choose_tail_cutoff(const LaplaceEnvelope& env, double e, unsigned n, double t_scale) {
  double T = 4 * t_scale;
  if (env.power > 0) T = std::max(T, env.scale * n);
  for (int i = 0; i < 200; ++i, T *= 2) {
    const double bound = remainder_tail(env, e, n, T);
    if (!std::isfinite(bound) && env.rate == 0) break;
    if (bound <= kTailTarget) return T;
    if (T > kTailCap) {
      if (std::isfinite(bound) && bound <= kTailLimit) return T;
      break;
    }
  }
  throw ConvergenceError("integrand tail does not decay fast enough (moment may be infinite)");
}

// t = u^k with k the denominator of the order makes the endpoint power an
// integer power of u; huge denominators fall back to the fractional choice.
inline double substitution_power(const Rational& order, double fallback) {
  const Integer& den = order.get_den();
  if (den <= 64) return den.get_d();
  return fallback;
}

inline double distribution_scale(const Distribution& dist) {
  const double m = to_double(mean(dist));
  return m > 0 ? 1.0 / m : 1.0;
}

}  // namespace detail

/// a_n = E ((X_1+...+X_n)/n)^p for -8 <= p < 0 by quadrature of
/// (1/Gamma(q)) int_0^inf t^{q-1} F(t/n)^n dt with q = -p.
inline EstimateWithError an_quadrature_negative_p(const Distribution& dist, const Rational& p, unsigned n) {
  if (!(sgn(p) < 0) || p < -8) throw DomainError("negative-order quadrature needs -8 <= p < 0");
  if (!is_positive(dist)) throw DomainError("negative moments need a strictly positive distribution: " + describe(dist));
  if (n < 1) throw DomainError("n must be at least 1");
  const double q = -to_double(p);
  const double e = q - 1;
  const double k = detail::substitution_power(p, q < 1 ? 1 / q : 1.0);
  const LaplaceEnvelope env = envelope(dist);
  const double scale = detail::distribution_scale(dist);
  const double T = detail::choose_tail_cutoff(env, e, n, scale);
  auto g = [&](const Real& t) { return u_n(dist, t, n); };
  auto body = detail::integrate_weighted(g, e, k, scale, T);
  const double tail = detail::remainder_tail(env, e, n, T);
  const double gamma = to_double(boost::multiprecision::tgamma(Real(q)));
  const double value = (body.value + tail / 2) / gamma;
  const double error = (body.error + tail / 2 + 8 * std::numeric_limits<double>::epsilon() * body.l1) / gamma;
  return {value, error, EstimateKind::quadrature};
}

/// a_n for 0 < p < 1 by quadrature of
/// (p/Gamma(1-p)) int_0^inf (1 - F(t/n)^n) t^{-p-1} dt.
inline EstimateWithError an_quadrature_fractional_p(const Distribution& dist, const Rational& p, unsigned n) {
  if (!(sgn(p) > 0 && p < 1)) throw DomainError("fractional-order quadrature needs 0 < p < 1");
  if (n < 1) throw DomainError("n must be at least 1");
  const LaplaceEnvelope env = envelope(dist);
  if (const auto* d = std::get_if<DiscreteDistribution>(&dist); d != nullptr && !d->smallest_positive_value()) {
    return {0.0, 0.0, EstimateKind::quadrature};  // X = 0 almost surely
  }
  const double pd = to_double(p);
  const double e = -pd - 1;
  const double k = detail::substitution_power(p, 1 / (1 - pd));
  const double scale = detail::distribution_scale(dist);
  const double T = detail::choose_tail_cutoff(env, e, n, scale);
  auto g = [&](const Real& t) {
    return -boost::multiprecision::expm1(n * boost::multiprecision::log1p(-laplace_complement(dist, t / n)));
  };
  auto body = detail::integrate_weighted(g, e, k, scale, T);
  const double pi0n = std::pow(env.mass_at_zero, static_cast<double>(n));
  const double remainder = detail::remainder_tail(env, e, n, T);
  const double tail = (1 - pi0n) * std::pow(T, -pd) / pd - remainder / 2;
  const double factor = to_double(to_real(p) / boost::multiprecision::tgamma(1 - to_real(p)));
  const double value = (body.value + tail) * factor;
  const double error =
      (body.error + remainder / 2 + 8 * std::numeric_limits<double>::epsilon() * (body.l1 + std::abs(tail))) * factor;
  return {value, error, EstimateKind::quadrature};
}

/// Monte Carlo estimates of a_n for n in [n_first, n_last]. One pool of X
/// draws is shared by every n: replicate r uses X_{r,1..n}, so neighbouring
/// terms see the same noise.
inline MomentSequence an_monte_carlo(const Distribution& dist, const FunctionDescriptor& f, unsigned n_first,
                                     unsigned n_last, std::size_t samples, std::uint64_t seed) {
  if (samples < 1000) throw DomainError("Monte Carlo needs at least 1000 samples");
  if (n_first < 1 || n_last < n_first) throw DomainError("invalid n range");
  const std::vector<double> draws = sample(dist, seed, samples * n_last);
  const std::size_t width = n_last;
  std::vector<double> mean(width, 0.0);
  std::vector<double> m2(width, 0.0);
  for (std::size_t r = 0; r < samples; ++r) {
    double sum = 0.0;
    for (std::size_t j = 0; j < width; ++j) {
      sum += draws[r * width + j];
      const double y = apply_double(f, sum / static_cast<double>(j + 1));
      const double delta = y - mean[j];
      mean[j] += delta / static_cast<double>(r + 1);
      m2[j] += delta * (y - mean[j]);
    }
  }
  MomentSequence seq(describe(f));
  const auto count = static_cast<double>(samples);
  for (unsigned n = n_first; n <= n_last; ++n) {
    const double variance = m2[n - 1] / (count - 1);
    seq.push_back({n, EstimateWithError{mean[n - 1], std::sqrt(variance / count), EstimateKind::monte_carlo},
                   Provenance::monte_carlo});
  }
  return seq;
}

}  // namespace momentlab
