#pragma once

// Search harness: stress scans of log-convexity for integer powers below and
// above n = p^2, the pointwise subset-average inequality, the hinge-function
// counterexample and grid scans of G(alpha, t).

#include "momentlab/analytic_engine.hpp"
#include "momentlab/checkers.hpp"
#include "momentlab/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace momentlab {

struct Violation {
  std::string subject;
  std::string parameter;
  unsigned n = 0;
  /// Exact strings; for log-convexity checks (b_{n-1}, b_n, b_{n+1}).
  std::vector<std::string> certificate;
  std::string slack;
  bool reverified = false;
};

struct NearestMiss {
  std::string subject;
  std::string parameter;
  unsigned n = 0;
  /// (b_{n-1} b_{n+1} - b_n^2) / b_n^2, or the raw slack where that is undefined.
  std::string normalized_slack;
  double value = 0.0;
};

struct SearchRegion {
  std::string name;
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  std::optional<NearestMiss> nearest_miss;
};

struct SearchReport {
  std::string target;
  std::map<std::string, std::string> space;
  std::uint64_t trials = 0;
  std::vector<Violation> violations;
  std::optional<NearestMiss> nearest_miss;
  std::vector<SearchRegion> regions;
  /// Rows for plotting: (subject, parameter, n, normalized slack).
  std::vector<NearestMiss> miss_table;
};

// ---------------------------------------------------------------------------
// Pools

/// k in {2,3,4} atoms with values j/16, j in [1, 64], and weights drawn
/// from 1..9 then normalized.
inline std::vector<DiscreteDistribution> random_pool(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> atoms_draw(2, 4);
  std::uniform_int_distribution<unsigned> value_draw(1, 64);
  std::uniform_int_distribution<unsigned> weight_draw(1, 9);
  std::vector<DiscreteDistribution> pool;
  pool.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned k = atoms_draw(rng);
    std::set<unsigned> values;
    while (values.size() < k) values.insert(value_draw(rng));
    std::vector<unsigned> weights;
    unsigned total = 0;
    for (unsigned j = 0; j < k; ++j) total += weights.emplace_back(weight_draw(rng));
    std::vector<Atom> atoms;
    std::size_t j = 0;
    for (const unsigned v : values) atoms.push_back({canonical(Rational(v, 16)), canonical(Rational(weights[j++], total))});
    pool.push_back(DiscreteDistribution::from_atoms(std::move(atoms)));
  }
  return pool;
}

/// Bernoulli(k/den) for k = 1..den-1.
inline std::vector<DiscreteDistribution> bernoulli_grid(unsigned den = 32) {
  std::vector<DiscreteDistribution> grid;
  for (unsigned k = 1; k < den; ++k) grid.push_back(DiscreteDistribution::bernoulli(canonical(Rational(k, den))));
  return grid;
}

namespace detail {

inline void track_miss(std::optional<NearestMiss>& best, const NearestMiss& candidate) {
  if (!best || candidate.value < best->value) best = candidate;
}

inline std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ",") + p;
  return out;
}

// b_n recomputed from the law itself, not from its moment profile.
inline std::optional<Rational> independent_bn(const DiscreteDistribution& d, unsigned p, unsigned n) {
  if (const auto theta = d.bernoulli_theta()) return bn_bernoulli_stirling(*theta, p, n);
  if (n <= kConvolutionMaxN && d.size() <= kConvolutionMaxAtoms) {
    return std::get<Rational>(bn_convolution_oracle(d, p, n));
  }
  return std::nullopt;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Integer powers, all n in range

struct Conjecture4Options {
  std::vector<unsigned> p_values{3};
  unsigned n_first = 2;
  unsigned n_last = 20;
};

/// Scans b_n^2 <= b_{n-1} b_{n+1} exactly over the pool, splitting n < p^2
/// from n >= p^2. Violations are re-verified from the law.
inline SearchReport search_conjecture4(const std::vector<DiscreteDistribution>& pool, const Conjecture4Options& opt,
                                       const std::string& pool_description) {
  if (opt.n_first < 2 || opt.n_last < opt.n_first) throw DomainError("n range must satisfy 2 <= n_first <= n_last");
  for (const unsigned p : opt.p_values) {
    if (p < 2) throw DomainError("integer powers must be > 1");
  }
  struct Cell {
    std::vector<Violation> violations;
    std::optional<NearestMiss> below;
    std::optional<NearestMiss> above;
    std::uint64_t checks_below = 0;
    std::uint64_t checks_above = 0;
    std::uint64_t violations_below = 0;
    std::uint64_t violations_above = 0;
    std::vector<NearestMiss> rows;
  };
  const std::size_t per_dist = opt.p_values.size();
  auto cells = parallel_map(pool.size() * per_dist, [&](std::size_t index) {
    const auto& d = pool[index / per_dist];
    const unsigned p = opt.p_values[index % per_dist];
    Cell cell;
    const PartitionExpansion expansion(normalize_mean(moments_of(d, p)), p);
    std::vector<Rational> b;
    for (unsigned n = opt.n_first - 1; n <= opt.n_last + 1; ++n) b.push_back(expansion.at(n));
    std::optional<NearestMiss> dist_best;
    for (unsigned n = opt.n_first; n <= opt.n_last; ++n) {
      const std::size_t i = n - (opt.n_first - 1);
      const Rational slack = b[i - 1] * b[i + 1] - b[i] * b[i];
      const Rational normalized = slack / (b[i] * b[i]);
      const bool theorem_region = n >= p * p;
      (theorem_region ? cell.checks_above : cell.checks_below) += 1;
      const NearestMiss miss{d.describe(), "p=" + std::to_string(p), n, to_string(canonical(normalized)),
                             to_double(normalized)};
      detail::track_miss(theorem_region ? cell.above : cell.below, miss);
      detail::track_miss(dist_best, miss);
      if (sgn(slack) < 0) {
        (theorem_region ? cell.violations_above : cell.violations_below) += 1;
        Violation v{d.describe(), "p=" + std::to_string(p), n,
                    {to_string(b[i - 1]), to_string(b[i]), to_string(b[i + 1])}, to_string(slack), false};
        // normalized moments scale b_n by (EX)^{-p}; rescale before comparing to the raw law
        const Rational scale = pow(Rational(1 / d.mean()), p);
        const auto x = detail::independent_bn(d, p, n - 1);
        const auto y = detail::independent_bn(d, p, n);
        const auto z = detail::independent_bn(d, p, n + 1);
        v.reverified = x && y && z && *x * scale == b[i - 1] && *y * scale == b[i] && *z * scale == b[i + 1] &&
                       (*y) * (*y) > (*x) * (*z);
        cell.violations.push_back(std::move(v));
      }
    }
    if (dist_best) cell.rows.push_back(*dist_best);
    return cell;
  });

  SearchReport r;
  r.target = "conjecture4";
  std::vector<std::string> ps;
  for (const unsigned p : opt.p_values) ps.push_back(std::to_string(p));
  r.space = {{"pool", pool_description},
             {"pool_size", std::to_string(pool.size())},
             {"p_values", detail::join(ps)},
             {"n_range", std::to_string(opt.n_first) + ".." + std::to_string(opt.n_last)},
             {"f", "pow"}};
  SearchRegion below{"n<p^2", 0, 0, std::nullopt};
  SearchRegion above{"n>=p^2", 0, 0, std::nullopt};
  for (auto& c : cells) {
    below.checks += c.checks_below;
    above.checks += c.checks_above;
    below.violations += c.violations_below;
    above.violations += c.violations_above;
    if (c.below) detail::track_miss(below.nearest_miss, *c.below);
    if (c.above) detail::track_miss(above.nearest_miss, *c.above);
    for (auto& v : c.violations) r.violations.push_back(std::move(v));
    for (auto& row : c.rows) r.miss_table.push_back(std::move(row));
  }
  r.trials = below.checks + above.checks;
  if (below.nearest_miss) detail::track_miss(r.nearest_miss, *below.nearest_miss);
  if (above.nearest_miss) detail::track_miss(r.nearest_miss, *above.nearest_miss);
  r.regions = {below, above};
  std::stable_sort(r.miss_table.begin(), r.miss_table.end(),
                   [](const NearestMiss& a, const NearestMiss& b) { return a.value < b.value; });
  if (r.miss_table.size() > 20) r.miss_table.resize(20);
  return r;
}

/// Random pool sized so that the number of slack evaluations is about `budget`.
inline SearchReport search_conjecture4(std::uint64_t seed, std::uint64_t budget, const Conjecture4Options& opt) {
  const std::uint64_t per_dist = opt.p_values.size() * (opt.n_last >= opt.n_first ? opt.n_last - opt.n_first + 1 : 1);
  const std::uint64_t count = std::max<std::uint64_t>(1, (budget + per_dist - 1) / per_dist);
  auto r = search_conjecture4(random_pool(seed, count), opt, "random(seed=" + std::to_string(seed) + ")");
  r.space["budget"] = std::to_string(budget);
  return r;
}

// ---------------------------------------------------------------------------
// Subset averages

inline constexpr unsigned kRemark8MaxN = 10;

struct SubsetAverageSlack {
  std::optional<Rational> exact;
  Real value;
  Real left;
  Real right;
};

/// (1/C(2n,n+1)) sum_{|I|=n+1} phi(x_I x_{I^c}/(n^2-1))
///   - (1/C(2n,n)) sum_{|I|=n} phi(x_I x_{I^c}/n^2),   phi(y) = y^p.
inline SubsetAverageSlack check_pointwise_remark8(const std::vector<Rational>& x, const Rational& p, unsigned n) {
  if (n < 2 || n > kRemark8MaxN) throw DomainError("need 2 <= n <= " + std::to_string(kRemark8MaxN));
  if (x.size() != 2 * n) throw DomainError("need exactly 2n = " + std::to_string(2 * n) + " numbers");
  if (p <= 1) throw DomainError("phi(y) = y^p is used with p > 1");
  for (const auto& v : x) {
    if (sgn(v) < 0) throw DomainError("entries must be nonnegative");
  }
  Rational total = 0;
  for (const auto& v : x) total += v;
  const bool exact = is_integer(p);
  const unsigned s = 2 * n;
  Rational left_q = 0;
  Rational right_q = 0;
  Real left_r(0);
  Real right_r(0);
  std::uint64_t left_count = 0;
  std::uint64_t right_count = 0;
  const Rational d_left(n * n);
  const Rational d_right(n * n - 1);
  const std::uint32_t full = (1U << s) - 1;
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    const auto size = static_cast<unsigned>(std::popcount(mask));
    if (size != n && size != n + 1) continue;
    // I and its complement give the same term when |I| = n
    const unsigned weight = size == n ? 2 : 1;
    if (size == n && (full ^ mask) < mask) continue;
    Rational xi = 0;
    for (unsigned i = 0; i < s; ++i) {
      if (mask & (1U << i)) xi += x[i];
    }
    const Rational product = xi * (total - xi);
    const Rational arg = size == n ? Rational(product / d_left) : Rational(product / d_right);
    if (exact) {
      const Rational v = pow(arg, p.get_num().get_ui()) * weight;
      (size == n ? left_q : right_q) += v;
    } else {
      const Real v = pow_real(arg, p) * weight;
      (size == n ? left_r : right_r) += v;
    }
    (size == n ? left_count : right_count) += weight;
  }
  SubsetAverageSlack out;
  if (exact) {
    const Rational l = left_q / Rational(static_cast<unsigned long>(left_count));
    const Rational r = right_q / Rational(static_cast<unsigned long>(right_count));
    out.exact = canonical(r - l);
    out.left = to_real(l);
    out.right = to_real(r);
    out.value = to_real(*out.exact);
  } else {
    out.left = left_r / left_count;
    out.right = right_r / right_count;
    out.value = out.right - out.left;
  }
  return out;
}

struct Remark8Options {
  unsigned n = 2;
  std::vector<Rational> p_values{Rational(2), Rational(3), Rational(7)};
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  /// Values j/16 with j in [0, max_numerator].
  unsigned max_numerator = 64;
  /// Allowed negative slack for non-integer p (working precision).
  Real tolerance = Real("1e-20");
};

/// Random nonnegative rational vectors; a trial is one vector checked for
/// every p. Violations are re-evaluated after reversing the vector.
inline SearchReport search_remark8(const Remark8Options& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<unsigned> draw(0, opt.max_numerator);
  std::vector<std::vector<Rational>> vectors(opt.trials);
  for (auto& v : vectors) {
    v.resize(2 * opt.n);
    for (auto& e : v) e = canonical(Rational(draw(rng), 16));
  }
  struct Cell {
    std::vector<Violation> violations;
    std::vector<std::optional<NearestMiss>> best;
    std::vector<std::uint64_t> counts;
  };
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (vectors.size() + kChunk - 1) / kChunk;
  auto cells = parallel_map(chunks, [&](std::size_t c) {
    Cell cell;
    cell.best.resize(opt.p_values.size());
    cell.counts.resize(opt.p_values.size(), 0);
    for (std::size_t t = c * kChunk; t < std::min(vectors.size(), (c + 1) * kChunk); ++t) {
      const auto& x = vectors[t];
      auto subject = [&] {
        std::vector<std::string> xs;
        for (const auto& e : x) xs.push_back(to_string(e));
        return "x=(" + detail::join(xs) + ")";
      };
      for (std::size_t k = 0; k < opt.p_values.size(); ++k) {
        const Rational& p = opt.p_values[k];
        const auto s = check_pointwise_remark8(x, p, opt.n);
        cell.counts[k] += 1;
        const double value = to_double(s.value);
        const bool bad = s.exact ? sgn(*s.exact) < 0 : s.value < -opt.tolerance;
        if (!bad && cell.best[k] && cell.best[k]->value <= value) continue;
        const std::string slack = s.exact ? to_string(*s.exact) : to_string(s.value);
        detail::track_miss(cell.best[k], {subject(), "p=" + to_string(p), opt.n, slack, value});
        if (bad) {
          std::vector<Rational> reversed(x.rbegin(), x.rend());
          const auto again = check_pointwise_remark8(reversed, p, opt.n);
          const bool still = again.exact ? sgn(*again.exact) < 0 : again.value < -opt.tolerance;
          cell.violations.push_back({subject(), "p=" + to_string(p), opt.n, {to_string(s.left), to_string(s.right)},
                                     slack, still});
        }
      }
    }
    return cell;
  });

  SearchReport r;
  r.target = "remark8";
  std::vector<std::string> ps;
  for (const auto& p : opt.p_values) ps.push_back(to_string(p));
  r.space = {{"n", std::to_string(opt.n)},
             {"p_values", detail::join(ps)},
             {"entries", "j/16, j in [0," + std::to_string(opt.max_numerator) + "]"},
             {"seed", std::to_string(opt.seed)},
             {"tolerance", to_string(opt.tolerance)}};
  r.trials = opt.trials;
  for (std::size_t k = 0; k < opt.p_values.size(); ++k) {
    SearchRegion region{"p=" + to_string(opt.p_values[k]), 0, 0, std::nullopt};
    for (const auto& c : cells) {
      region.checks += c.counts[k];
      if (c.best[k]) detail::track_miss(region.nearest_miss, *c.best[k]);
    }
    r.regions.push_back(region);
  }
  for (auto& c : cells) {
    for (auto& v : c.violations) {
      for (auto& region : r.regions) {
        if (region.name == v.parameter) region.violations += 1;
      }
      r.violations.push_back(std::move(v));
    }
  }
  for (const auto& region : r.regions) {
    if (region.nearest_miss) {
      detail::track_miss(r.nearest_miss, *region.nearest_miss);
      r.miss_table.push_back(*region.nearest_miss);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// f(x) = max(x - a, 0) on Bernoulli laws

/// {k/den : k = 1..den-1}
inline std::vector<Rational> unit_grid(unsigned den) {
  std::vector<Rational> g;
  for (unsigned k = 1; k < den; ++k) g.push_back(canonical(Rational(k, den)));
  return g;
}

/// a_n = E max(S_n/n - a, 0) for Bernoulli(theta), n = 1..n_max, by exact
/// binomial sums; reports every interior n with a_n^2 > a_{n-1} a_{n+1}.
/// Sequences with a zero term are skipped.
inline SearchReport find_final_remark_counterexample(const std::vector<Rational>& a_grid,
                                                     const std::vector<Rational>& theta_grid, unsigned n_max) {
  if (a_grid.empty() || theta_grid.empty()) throw DomainError("grids must be nonempty");
  if (n_max < 3) throw DomainError("need n_max >= 3");
  struct Cell {
    std::vector<Violation> violations;
    std::optional<NearestMiss> best;
    std::uint64_t checks = 0;
    bool skipped = false;
  };
  const std::size_t cols = theta_grid.size();
  auto cells = parallel_map(a_grid.size() * cols, [&](std::size_t index) {
    const Rational& a = a_grid[index / cols];
    const Rational& theta = theta_grid[index % cols];
    Cell cell;
    const HingeFunction f{a};
    std::vector<Rational> values;
    for (unsigned n = 1; n <= n_max; ++n) values.push_back(std::get<Rational>(bernoulli_average_expectation(theta, f, n)));
    if (std::any_of(values.begin(), values.end(), [](const Rational& v) { return sgn(v) == 0; })) {
      cell.skipped = true;
      return cell;
    }
    const std::string subject = "bernoulli(" + to_string(theta) + ")";
    const std::string parameter = "a=" + to_string(a);
    const auto dist = DiscreteDistribution::bernoulli(theta);
    for (unsigned n = 2; n < n_max; ++n) {
      const Rational& x = values[n - 2];
      const Rational& y = values[n - 1];
      const Rational& z = values[n];
      const Rational slack = x * z - y * y;
      ++cell.checks;
      const Rational normalized = slack / (y * y);
      detail::track_miss(cell.best, {subject, parameter, n, to_string(canonical(normalized)), to_double(normalized)});
      if (sgn(slack) < 0) {
        const auto cx = std::get<Rational>(convolution_expectation(dist, f, n - 1));
        const auto cy = std::get<Rational>(convolution_expectation(dist, f, n));
        const auto cz = std::get<Rational>(convolution_expectation(dist, f, n + 1));
        cell.violations.push_back({subject, parameter, n, {to_string(x), to_string(y), to_string(z)},
                                   to_string(slack), cx == x && cy == y && cz == z && cy * cy > cx * cz});
      }
    }
    return cell;
  });

  SearchReport r;
  r.target = "final_remark";
  std::vector<std::string> as;
  std::vector<std::string> ts;
  for (const auto& a : a_grid) as.push_back(to_string(a));
  for (const auto& t : theta_grid) ts.push_back(to_string(t));
  r.space = {{"f", "hinge"}, {"a_grid", detail::join(as)}, {"theta_grid", detail::join(ts)},
             {"n_range", "1.." + std::to_string(n_max)}};
  SearchRegion region{"positive sequences", 0, 0, std::nullopt};
  std::uint64_t skipped = 0;
  for (auto& c : cells) {
    region.checks += c.checks;
    region.violations += c.violations.size();
    skipped += c.skipped ? 1 : 0;
    for (auto& v : c.violations) r.violations.push_back(std::move(v));
    // nearest miss only among cells that stayed log-convex
    if (c.best && c.best->value >= 0) detail::track_miss(region.nearest_miss, *c.best);
  }
  r.space["skipped_cells"] = std::to_string(skipped);
  r.trials = region.checks;
  r.nearest_miss = region.nearest_miss;
  r.regions = {region};
  return r;
}

// ---------------------------------------------------------------------------
// G(alpha, t) = 1 - F(t/alpha)^alpha

struct GPropertyReport {
  std::uint64_t monotone_checks = 0;
  std::uint64_t monotone_failures = 0;
  Real monotone_margin;
  std::uint64_t concavity_checks = 0;
  std::uint64_t concavity_failures = 0;
  Real concavity_margin;
  Real tolerance;
  bool holds = false;
};

/// Monotonicity along alpha, midpoint concavity along alpha rows and along
/// random segments between grid points.
inline GPropertyReport scan_g_properties(const std::vector<Distribution>& pool, const std::vector<Real>& alpha_grid,
                                         const std::vector<Real>& t_grid, std::uint64_t segments_per_dist = 200,
                                         std::uint64_t seed = 1, const Real& tolerance = Real("1e-30")) {
  if (alpha_grid.size() < 2 || t_grid.empty()) throw DomainError("need at least two alpha values and one t value");
  for (const auto& a : alpha_grid) {
    if (a <= 0) throw DomainError("alpha grid must lie in (0, inf)");
  }
  for (const auto& t : t_grid) {
    if (t <= 0) throw DomainError("t grid must lie in (0, inf)");
  }
  auto alphas = alpha_grid;
  std::sort(alphas.begin(), alphas.end());
  struct Partial {
    std::uint64_t mono = 0, mono_fail = 0, conc = 0, conc_fail = 0;
    std::optional<Real> mono_margin, conc_margin;
  };
  auto partials = parallel_map(pool.size(), [&](std::size_t k) {
    const auto& dist = pool[k];
    Partial part;
    auto note = [](std::optional<Real>& m, const Real& v) {
      if (!m || v < *m) m = v;
    };
    std::vector<std::vector<Real>> g(alphas.size(), std::vector<Real>(t_grid.size()));
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      for (std::size_t j = 0; j < t_grid.size(); ++j) g[i][j] = g_alpha_t(dist, alphas[i], t_grid[j]);
    }
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
      for (std::size_t i = 0; i + 1 < alphas.size(); ++i) {
        const Real slack = g[i + 1][j] - g[i][j];
        ++part.mono;
        note(part.mono_margin, slack);
        if (slack < -tolerance) ++part.mono_fail;
      }
      for (std::size_t i = 0; i + 1 < alphas.size(); ++i) {
        const Real mid = (alphas[i] + alphas[i + 1]) / 2;
        const Real slack = g_alpha_t(dist, mid, t_grid[j]) - (g[i][j] + g[i + 1][j]) / 2;
        ++part.conc;
        note(part.conc_margin, slack);
        if (slack < -tolerance) ++part.conc_fail;
      }
    }
    std::mt19937_64 rng(seed + k);
    std::uniform_int_distribution<std::size_t> ai(0, alphas.size() - 1);
    std::uniform_int_distribution<std::size_t> tj(0, t_grid.size() - 1);
    for (std::uint64_t s = 0; s < segments_per_dist; ++s) {
      const std::size_t i1 = ai(rng), j1 = tj(rng), i2 = ai(rng), j2 = tj(rng);
      const Real slack = g_alpha_t(dist, (alphas[i1] + alphas[i2]) / 2, (t_grid[j1] + t_grid[j2]) / 2) -
                         (g[i1][j1] + g[i2][j2]) / 2;
      ++part.conc;
      note(part.conc_margin, slack);
      if (slack < -tolerance) ++part.conc_fail;
    }
    return part;
  });
  GPropertyReport r;
  r.tolerance = tolerance;
  std::optional<Real> mono_margin, conc_margin;
  for (const auto& p : partials) {
    r.monotone_checks += p.mono;
    r.monotone_failures += p.mono_fail;
    r.concavity_checks += p.conc;
    r.concavity_failures += p.conc_fail;
    if (p.mono_margin && (!mono_margin || *p.mono_margin < *mono_margin)) mono_margin = p.mono_margin;
    if (p.conc_margin && (!conc_margin || *p.conc_margin < *conc_margin)) conc_margin = p.conc_margin;
  }
  r.monotone_margin = mono_margin.value_or(Real(0));
  r.concavity_margin = conc_margin.value_or(Real(0));
  r.holds = r.monotone_failures == 0 && r.concavity_failures == 0;
  return r;
}

/// n evenly spaced reals from lo to hi inclusive.
inline std::vector<Real> linear_grid(const Rational& lo, const Rational& hi, unsigned count) {
  if (count < 2) throw DomainError("a grid needs at least two points");
  std::vector<Real> g;
  for (unsigned i = 0; i < count; ++i) g.push_back(to_real(canonical(lo + (hi - lo) * Rational(i, count - 1))));
  return g;
}

}  // namespace momentlab
