#pragma once

// Laws of X_1: finite-support distributions with exact rational atoms, plus a
// small table of continuous families that only expose Laplace transforms and
// samplers.

#include "momentlab/numeric.hpp"
#include "momentlab/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace momentlab {

struct Atom {
  Rational value;
  Rational prob;
};

class DiscreteDistribution {
 public:
  /// Validates and sorts atoms by value. Probabilities must be positive and
  /// sum to exactly one; values must be distinct and nonnegative.
  static DiscreteDistribution from_atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) throw DomainError("distribution needs at least one atom");
    Rational total = 0;
    for (auto& a : atoms) {
      a.value.canonicalize();
      a.prob.canonicalize();
      if (sgn(a.value) < 0) throw DomainError("atom value " + to_string(a.value) + " is negative");
      if (sgn(a.prob) <= 0) throw DomainError("atom probability " + to_string(a.prob) + " is not positive");
      total += a.prob;
    }
    if (total != 1) throw DomainError("probabilities sum to " + to_string(total) + ", not 1");
    std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.value < y.value; });
    for (std::size_t i = 1; i < atoms.size(); ++i) {
      if (atoms[i].value == atoms[i - 1].value) {
        throw DomainError("duplicate atom value " + to_string(atoms[i].value));
      }
    }
    DiscreteDistribution d;
    d.atoms_ = std::move(atoms);
    return d;
  }

  static DiscreteDistribution point_mass(const Rational& c) { return from_atoms({{c, 1}}); }

  static DiscreteDistribution bernoulli(const Rational& theta) {
    if (sgn(theta) <= 0 || theta >= 1) {
      throw DomainError("Bernoulli parameter must lie in (0,1), got " + to_string(theta));
    }
    return from_atoms({{0, 1 - theta}, {1, theta}});
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  /// All atoms strictly positive (required for negative-order moments).
  bool is_positive() const { return sgn(atoms_.front().value) > 0; }

  Rational mass_at_zero() const { return sgn(atoms_.front().value) == 0 ? atoms_.front().prob : Rational(0); }

  std::optional<Rational> smallest_positive_value() const {
    for (const auto& a : atoms_) {
      if (sgn(a.value) > 0) return a.value;
    }
    return std::nullopt;
  }

  Rational mean() const {
    Rational m = 0;
    for (const auto& a : atoms_) m += a.prob * a.value;
    return m;
  }

  /// theta when the law is Bernoulli(theta), i.e. atoms exactly {0, 1}.
  std::optional<Rational> bernoulli_theta() const {
    if (atoms_.size() == 2 && atoms_[0].value == 0 && atoms_[1].value == 1) return atoms_[1].prob;
    return std::nullopt;
  }

  std::string describe() const {
    std::string s = "{";
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (i != 0) s += ", ";
      s += to_string(atoms_[i].value) + ":" + to_string(atoms_[i].prob);
    }
    return s + "}";
  }

  friend bool operator==(const DiscreteDistribution& a, const DiscreteDistribution& b) {
    if (a.atoms_.size() != b.atoms_.size()) return false;
    for (std::size_t i = 0; i < a.atoms_.size(); ++i) {
      if (a.atoms_[i].value != b.atoms_[i].value || a.atoms_[i].prob != b.atoms_[i].prob) return false;
    }
    return true;
  }

 private:
  std::vector<Atom> atoms_;
};

/// Bound on the Laplace transform used to control quadrature tails:
/// F(s) - P(X=0) <= (1 - P(X=0)) * exp(-rate*s) * min(1, (scale/s)^power).
struct LaplaceEnvelope {
  double mass_at_zero = 0.0;
  double rate = 0.0;
  double scale = 0.0;
  unsigned power = 0;
};

/// Continuous law known only through closed forms. No exact moment path.
class ContinuousFamily {
 public:
  enum class Kind { exponential, uniform };

  static ContinuousFamily exponential(const Rational& rate) {
    if (sgn(rate) <= 0) throw DomainError("exponential rate must be positive");
    return ContinuousFamily(Kind::exponential, rate, 0);
  }

  static ContinuousFamily uniform(const Rational& lo, const Rational& hi) {
    if (sgn(lo) < 0 || !(lo < hi)) throw DomainError("uniform family needs 0 <= lo < hi");
    return ContinuousFamily(Kind::uniform, lo, hi);
  }

  Kind kind() const { return kind_; }
  const Rational& first() const { return a_; }
  const Rational& second() const { return b_; }

  /// Positive almost surely; strict positivity of the support for uniform.
  bool is_positive() const { return kind_ == Kind::exponential || sgn(a_) > 0; }

  Rational mean() const { return kind_ == Kind::exponential ? Rational(1 / a_) : Rational((a_ + b_) / 2); }

  Real laplace(const Real& t) const {
    if (kind_ == Kind::exponential) {
      const Real rate = to_real(a_);
      return rate / (rate + t);
    }
    const Real lo = to_real(a_);
    const Real hi = to_real(b_);
    if (t == 0) return Real(1);
    // (e^{-t lo} - e^{-t hi}) / (t (hi-lo)), written with expm1 for small t.
    const Real width = hi - lo;
    return -boost::multiprecision::exp(-t * lo) * boost::multiprecision::expm1(-t * width) / (t * width);
  }

  /// 1 - F(t) without cancellation for small t.
  Real laplace_complement(const Real& t) const {
    if (kind_ == Kind::exponential) {
      const Real rate = to_real(a_);
      return t / (rate + t);
    }
    if (t == 0) return Real(0);
    const Real lo = to_real(a_);
    const Real hi = to_real(b_);
    return (expm1_remainder(t * hi) - expm1_remainder(t * lo)) / (t * (hi - lo));
  }

  LaplaceEnvelope envelope() const {
    if (kind_ == Kind::exponential) return {0.0, 0.0, to_double(a_), 1};
    return {0.0, to_double(a_), 1.0 / to_double(Rational(b_ - a_)), 1};
  }

  double draw(double u) const {
    if (kind_ == Kind::exponential) return -std::log1p(-u) / to_double(a_);
    return to_double(a_) + (to_double(b_) - to_double(a_)) * u;
  }

  std::string describe() const {
    if (kind_ == Kind::exponential) return "exponential(rate=" + to_string(a_) + ")";
    return "uniform(" + to_string(a_) + ", " + to_string(b_) + ")";
  }

 private:
  // e^{-y} - 1 + y, by series below 1/2
  static Real expm1_remainder(const Real& y) {
    if (y >= Real(0.5)) return boost::multiprecision::expm1(-y) + y;
    Real term = y * y / 2;
    Real sum(0);
    const Real eps = std::numeric_limits<Real>::epsilon() * term;
    for (unsigned k = 3; boost::multiprecision::abs(term) > eps; ++k) {
      sum += term;
      term *= -y / k;
    }
    return sum;
  }

  ContinuousFamily(Kind k, Rational a, Rational b) : kind_(k), a_(std::move(a)), b_(std::move(b)) {}

  Kind kind_;
  Rational a_;
  Rational b_;
};

using Distribution = std::variant<DiscreteDistribution, ContinuousFamily>;

inline std::string describe(const Distribution& d) {
  return std::visit([](const auto& x) { return x.describe(); }, d);
}

inline bool is_positive(const Distribution& d) {
  return std::visit([](const auto& x) { return x.is_positive(); }, d);
}

inline Rational mean(const Distribution& d) {
  return std::visit([](const auto& x) { return x.mean(); }, d);
}

inline const DiscreteDistribution& require_discrete(const Distribution& d, const char* what) {
  if (const auto* dd = std::get_if<DiscreteDistribution>(&d)) return *dd;
  throw DomainError(std::string(what) + " needs exact rational moments; " + describe(d) +
                    " is a continuous family");
}

/// Exact sequence mu_0, ..., mu_P of raw moments.
class MomentProfile {
 public:
  static MomentProfile from_moments(std::vector<Rational> moments) {
    if (moments.empty() || moments.front() != 1) throw DomainError("moment profile must start with mu_0 = 1");
    for (const auto& m : moments) {
      if (sgn(m) < 0) throw DomainError("moments must be nonnegative");
    }
    MomentProfile p;
    p.moments_ = std::move(moments);
    return p;
  }

  unsigned max_order() const { return static_cast<unsigned>(moments_.size() - 1); }
  const Rational& operator[](unsigned k) const { return moments_.at(k); }
  const std::vector<Rational>& moments() const { return moments_; }

  /// mu_j^k <= mu_k^j for all 1 <= j < k <= P, in exact arithmetic.
  bool is_power_mean_monotone() const {
    for (unsigned j = 1; j <= max_order(); ++j) {
      for (unsigned k = j + 1; k <= max_order(); ++k) {
        if (pow(moments_[j], k) > pow(moments_[k], j)) return false;
      }
    }
    return true;
  }

  friend bool operator==(const MomentProfile& a, const MomentProfile& b) { return a.moments_ == b.moments_; }

 private:
  std::vector<Rational> moments_;
};

inline MomentProfile moments_of(const DiscreteDistribution& dist, unsigned p_max) {
  detail::check_order(p_max, "moments_of");
  std::vector<Rational> mu(p_max + 1, Rational(0));
  for (const auto& a : dist.atoms()) {
    Rational power = 1;
    for (unsigned k = 0; k <= p_max; ++k) {
      mu[k] += a.prob * power;
      power *= a.value;
    }
  }
  return MomentProfile::from_moments(std::move(mu));
}

inline MomentProfile moments_of(const Distribution& dist, unsigned p_max) {
  return moments_of(require_discrete(dist, "moments_of"), p_max);
}

/// Moments of X / E X.
inline MomentProfile normalize_mean(const MomentProfile& profile) {
  if (profile.max_order() < 1 || sgn(profile[1]) <= 0) {
    throw DomainError("normalize_mean requires mu_1 > 0");
  }
  std::vector<Rational> mu(profile.moments());
  Rational scale = 1;
  for (unsigned k = 1; k < mu.size(); ++k) {
    scale *= profile[1];
    mu[k] /= scale;
  }
  return MomentProfile::from_moments(std::move(mu));
}

/// mu(q) = mu_{q_1} ... mu_{q_m}.
inline Rational mu_of_partition(const MomentProfile& profile, const Partition& q) {
  if (q.largest_part() > profile.max_order()) {
    throw DomainError("partition " + q.to_string() + " needs moments beyond order " +
                      std::to_string(profile.max_order()));
  }
  Rational r = 1;
  for (const auto& [value, count] : q.multiplicities()) r *= pow(profile[value], count);
  return r;
}

/// F(t) = E exp(-t X) at working precision.
inline Real laplace_real(const DiscreteDistribution& dist, const Real& t) {
  if (t < 0) throw DomainError("Laplace transform needs t >= 0");
  Real sum(0);
  for (const auto& a : dist.atoms()) sum += to_real(a.prob) * boost::multiprecision::exp(-t * to_real(a.value));
  return sum;
}

inline Real laplace_real(const Distribution& dist, const Real& t) {
  if (t < 0) throw DomainError("Laplace transform needs t >= 0");
  return std::visit([&](const auto& d) -> Real {
    if constexpr (std::is_same_v<std::decay_t<decltype(d)>, DiscreteDistribution>) {
      return laplace_real(d, t);
    } else {
      return d.laplace(t);
    }
  }, dist);
}

/// 1 - F(t), accurate when t is tiny.
inline Real laplace_complement(const Distribution& dist, const Real& t) {
  if (t < 0) throw DomainError("Laplace transform needs t >= 0");
  if (const auto* c = std::get_if<ContinuousFamily>(&dist)) return c->laplace_complement(t);
  Real sum(0);
  for (const auto& a : std::get<DiscreteDistribution>(dist).atoms()) {
    sum -= to_real(a.prob) * boost::multiprecision::expm1(-t * to_real(a.value));
  }
  return sum;
}

inline Real laplace_exact(const Distribution& dist, const Rational& t) { return laplace_real(dist, to_real(t)); }

inline double laplace(const Distribution& dist, double t) {
  if (t < 0) throw DomainError("Laplace transform needs t >= 0");
  return to_double(laplace_real(dist, Real(t)));
}

inline LaplaceEnvelope envelope(const Distribution& dist) {
  if (const auto* c = std::get_if<ContinuousFamily>(&dist)) return c->envelope();
  const auto& d = std::get<DiscreteDistribution>(dist);
  const auto v = d.smallest_positive_value();
  return {to_double(d.mass_at_zero()), v ? to_double(*v) : 0.0, 0.0, 0};
}

namespace detail {
// 53 random bits in [0, 1); bit-identical on every platform for a given seed.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
}  // namespace detail

/// Independent draws of X_1; deterministic for a given seed.
inline std::vector<double> sample(const Distribution& dist, std::uint64_t seed, std::size_t count) {
  if (count < 1) throw DomainError("sample count must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<double> out;
  out.reserve(count);
  if (const auto* c = std::get_if<ContinuousFamily>(&dist)) {
    for (std::size_t i = 0; i < count; ++i) out.push_back(c->draw(detail::unit_uniform(rng)));
    return out;
  }
  const auto& atoms = std::get<DiscreteDistribution>(dist).atoms();
  std::vector<double> cumulative;
  std::vector<double> values;
  Rational running = 0;
  for (const auto& a : atoms) {
    running += a.prob;
    cumulative.push_back(to_double(running));
    values.push_back(to_double(a.value));
  }
  cumulative.back() = 1.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double u = detail::unit_uniform(rng);
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    out.push_back(values[std::min<std::size_t>(it - cumulative.begin(), values.size() - 1)]);
  }
  return out;
}

}  // namespace momentlab
