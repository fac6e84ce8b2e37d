#pragma once

// Test-only generators, independent of the explorer's pool.

#include "momentlab/distributions.hpp"

#include <random>
#include <set>
#include <vector>

namespace momentlab::fixtures {

/// k atoms with values j/den (j in [lo, hi], distinct) and integer weights 1..9.
inline DiscreteDistribution random_rational_distribution(std::mt19937_64& rng, unsigned k, unsigned den = 8,
                                                         unsigned lo = 0, unsigned hi = 40) {
  std::uniform_int_distribution<unsigned> value_draw(lo, hi);
  std::uniform_int_distribution<unsigned> weight_draw(1, 9);
  std::set<unsigned> values;
  while (values.size() < k) values.insert(value_draw(rng));
  std::vector<unsigned> weights;
  unsigned total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    weights.push_back(weight_draw(rng));
    total += weights.back();
  }
  std::vector<Atom> atoms;
  std::size_t i = 0;
  for (const unsigned v : values) {
    atoms.push_back({Rational(v, den), Rational(weights[i++], total)});
  }
  for (auto& a : atoms) {
    a.value.canonicalize();
    a.prob.canonicalize();
  }
  return DiscreteDistribution::from_atoms(std::move(atoms));
}

inline std::vector<DiscreteDistribution> random_pool(std::uint64_t seed, std::size_t count, unsigned min_atoms = 2,
                                                     unsigned max_atoms = 4, unsigned lo = 0) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> k_draw(min_atoms, max_atoms);
  std::vector<DiscreteDistribution> pool;
  for (std::size_t i = 0; i < count; ++i) pool.push_back(random_rational_distribution(rng, k_draw(rng), 8, lo));
  return pool;
}

}  // namespace momentlab::fixtures
