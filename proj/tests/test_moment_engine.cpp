#include "momentlab/moment_engine.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace momentlab;

namespace {

Rational q(const char* s) { return parse_rational(s); }

// E f(S_n/n) by enumerating every n-tuple of atoms.
Rational brute_force(const DiscreteDistribution& d, unsigned n, const std::function<Rational(const Rational&)>& f) {
  Rational total = 0;
  std::vector<std::size_t> idx(n, 0);
  const std::size_t k = d.size();
  while (true) {
    Rational sum = 0;
    Rational prob = 1;
    for (const auto i : idx) {
      sum += d.atoms()[i].value;
      prob *= d.atoms()[i].prob;
    }
    total += prob * f(sum / n);
    std::size_t pos = 0;
    while (pos < n && ++idx[pos] == k) idx[pos++] = 0;
    if (pos == n) break;
  }
  return total;
}

Rational exact(const SequenceValue& v) { return std::get<Rational>(v); }

}  // namespace

TEST(PartitionFormula, SecondOrderClosedForm) {
  for (const auto& d : fixtures::random_pool(21, 30)) {
    const auto mu = moments_of(d, 2);
    for (unsigned n = 1; n <= 15; ++n) {
      EXPECT_EQ(bn_partition_formula(mu, 2, n), mu[1] * mu[1] + (mu[2] - mu[1] * mu[1]) / n);
    }
  }
}

TEST(PartitionFormula, ConstantVariableGivesOne) {
  const auto mu = moments_of(DiscreteDistribution::point_mass(1), 9);
  for (unsigned p = 1; p <= 9; ++p) {
    for (unsigned n = 1; n <= 20; ++n) EXPECT_EQ(bn_partition_formula(mu, p, n), 1);
  }
}

TEST(PartitionFormula, BernoulliHalfSquaredAtTwo) {
  const auto mu = moments_of(DiscreteDistribution::bernoulli(q("1/2")), 2);
  EXPECT_EQ(bn_partition_formula(mu, 2, 2), q("3/8"));
}

TEST(PartitionFormula, MatchesBruteForceEnumeration) {
  for (const auto& d : fixtures::random_pool(8, 12, 2, 3)) {
    const auto mu = moments_of(d, 5);
    for (unsigned p = 1; p <= 5; ++p) {
      for (unsigned n = 1; n <= 5; ++n) {
        const auto ref = brute_force(d, n, [p](const Rational& x) { return pow(x, p); });
        EXPECT_EQ(bn_partition_formula(mu, p, n), ref) << d.describe() << " p=" << p << " n=" << n;
      }
    }
  }
}

TEST(PartitionFormula, RejectsShortProfile) {
  const auto mu = moments_of(DiscreteDistribution::bernoulli(q("1/2")), 2);
  EXPECT_THROW(bn_partition_formula(mu, 3, 4), DomainError);
}

TEST(StirlingForm, Examples) {
  EXPECT_EQ(bn_bernoulli_stirling(q("1/2"), 2, 2), q("3/8"));
  for (unsigned n = 1; n <= 10; ++n) EXPECT_EQ(bn_bernoulli_stirling(q("2/9"), 1, n), q("2/9"));
  for (unsigned p = 2; p <= 7; ++p) {
    for (unsigned n = 1; n < p; ++n) {
      EXPECT_EQ(bn_bernoulli_stirling(q("1/3"), p, n), exact(bn_binomial_oracle(q("1/3"), p, n)));
    }
  }
  EXPECT_THROW(bn_bernoulli_stirling(q("0"), 2, 2), DomainError);
  EXPECT_THROW(bn_bernoulli_stirling(q("1"), 2, 2), DomainError);
}

TEST(BinomialOracle, Examples) {
  EXPECT_EQ(exact(bn_binomial_oracle(q("1/2"), 2, 2)), q("3/8"));
  const Real got = std::get<Real>(bn_binomial_oracle(q("1/2"), q("1/2"), 3));
  using boost::multiprecision::sqrt;
  const Real expected = (3 * sqrt(Real(1) / 3) + 3 * sqrt(Real(2) / 3) + 1) / 8;
  EXPECT_LT(boost::multiprecision::abs(got - expected), unit_roundoff() * 16);
  EXPECT_THROW(bn_binomial_oracle(q("1/2"), 0, 3), DomainError);
  EXPECT_THROW(bn_binomial_oracle(q("1/2"), 2, 10001), CapacityError);
}

TEST(BernoulliEngines, TripleAgreement) {
  for (const char* theta : {"1/4", "1/3", "1/2", "9/10"}) {
    const auto mu = moments_of(DiscreteDistribution::bernoulli(q(theta)), 6);
    for (unsigned p = 1; p <= 6; ++p) {
      const PartitionExpansion exp(mu, p);
      for (unsigned n = 1; n <= 20; ++n) {
        const Rational s = bn_bernoulli_stirling(q(theta), p, n);
        EXPECT_EQ(s, exact(bn_binomial_oracle(q(theta), p, n)));
        EXPECT_EQ(s, exp.at(n));
      }
    }
  }
}

TEST(ConvolutionOracle, MatchesPartitionFormulaAndBruteForce) {
  for (const auto& d : fixtures::random_pool(99, 20, 2, 4)) {
    const auto mu = moments_of(d, 5);
    for (unsigned p = 1; p <= 5; ++p) {
      const PartitionExpansion exp(mu, p);
      for (unsigned n = 1; n <= 10; ++n) EXPECT_EQ(exact(bn_convolution_oracle(d, p, n)), exp.at(n));
    }
    const auto hinge = brute_force(d, 4, [](const Rational& x) { return x > 2 ? Rational(x - 2) : Rational(0); });
    EXPECT_EQ(exact(convolution_expectation(d, HingeFunction{2}, 4)), hinge);
  }
}

TEST(ConvolutionOracle, PointMassAndBernoulli) {
  const auto point = DiscreteDistribution::point_mass(q("3/2"));
  for (unsigned n = 1; n <= 8; ++n) EXPECT_EQ(exact(bn_convolution_oracle(point, 4, n)), pow(q("3/2"), 4));
  const auto coin = DiscreteDistribution::bernoulli(q("1/3"));
  for (unsigned n = 1; n <= 12; ++n) {
    EXPECT_EQ(exact(bn_convolution_oracle(coin, 3, n)), exact(bn_binomial_oracle(q("1/3"), 3, n)));
    const Real a = std::get<Real>(bn_convolution_oracle(coin, q("1/2"), n));
    const Real b = std::get<Real>(bn_binomial_oracle(q("1/3"), q("1/2"), n));
    EXPECT_LT(boost::multiprecision::abs(a - b), unit_roundoff() * 64);
  }
}

TEST(ConvolutionOracle, CapsAreExplicitErrors) {
  const auto coin = DiscreteDistribution::bernoulli(q("1/3"));
  EXPECT_THROW(bn_convolution_oracle(coin, 2, 31), CapacityError);
  std::vector<Atom> atoms;
  for (int i = 1; i <= 7; ++i) atoms.push_back({i, Rational(1, 7)});
  EXPECT_THROW(bn_convolution_oracle(DiscreteDistribution::from_atoms(atoms), 2, 3), CapacityError);
  EXPECT_THROW(bn_convolution_oracle(coin, -1, 3), DomainError);
}

TEST(Sequences, NonincreasingForConvexPowers) {
  for (const auto& d : fixtures::random_pool(4, 20)) {
    for (unsigned p = 1; p <= 5; ++p) {
      const PartitionExpansion exp(moments_of(d, p), p);
      for (unsigned n = 1; n < 40; ++n) EXPECT_GE(exp.at(n), exp.at(n + 1));
    }
  }
}

TEST(Sequences, ApproachMeanPowerMonotonically) {
  for (const auto& d : fixtures::random_pool(17, 20)) {
    const auto mu = normalize_mean(moments_of(d, 4));
    for (unsigned p = 2; p <= 4; ++p) {
      const PartitionExpansion exp(mu, p);
      Rational previous = exp.at(p * p) - 1;
      for (unsigned n = p * p + 1; n <= 400; n += 7) {
        const Rational gap = exp.at(n) - 1;
        EXPECT_GE(gap, 0);
        EXPECT_LE(gap, previous);
        previous = gap;
      }
      // O(1/n): n (b_n - 1) stays bounded by the m = p-1 coefficient sum
      EXPECT_LT(exp.at(10000) - 1, Rational((exp.grouped_coefficients()[p - 1] + 1) / 1000));
    }
  }
}

TEST(AnSequence, DispatchesToExactEngines) {
  const Distribution coin = DiscreteDistribution::bernoulli(q("1/3"));
  const auto sq = an_sequence(coin, PowerFunction{2}, 1, 10);
  for (const auto& e : sq.entries()) {
    EXPECT_EQ(e.provenance, Provenance::partition_formula);
    EXPECT_EQ(exact(e.value), q("1/9") + q("2/9") / e.n);
  }
  const auto st = an_sequence(coin, PowerFunction{3}, 1, 8, Method::stirling);
  for (const auto& e : st.entries()) EXPECT_EQ(exact(e.value), bn_bernoulli_stirling(q("1/3"), 3, e.n));

  const DiscreteDistribution three = DiscreteDistribution::from_atoms({{1, q("1/4")}, {2, q("1/4")}, {5, q("1/2")}});
  const auto hinge = an_sequence(Distribution(three), HingeFunction{q("5/2")}, 1, 5);
  for (const auto& e : hinge.entries()) {
    EXPECT_EQ(e.provenance, Provenance::convolution_oracle);
    EXPECT_EQ(exact(e.value), brute_force(three, e.n, [](const Rational& x) {
                return x > q("5/2") ? Rational(x - q("5/2")) : Rational(0);
              }));
  }

  const auto ex = an_sequence(coin, ExponentialFunction{2}, 1, 6);
  for (const auto& e : ex.entries()) {
    EXPECT_EQ(e.provenance, Provenance::laplace_product);
    const Real expected = boost::multiprecision::pow((2 + boost::multiprecision::exp(Real(-2) / e.n)) / 3, e.n);
    EXPECT_LT(boost::multiprecision::abs(std::get<Real>(e.value) - expected), unit_roundoff() * 64);
  }

  const auto frac = an_sequence(coin, PowerFunction{q("1/2")}, 1, 50);
  EXPECT_EQ(frac.entries().back().provenance, Provenance::binomial_oracle);
}

TEST(AnSequence, RejectsIncompatibleMethods) {
  const Distribution coin = DiscreteDistribution::bernoulli(q("1/3"));
  const Distribution expo = ContinuousFamily::exponential(1);
  EXPECT_THROW(an_sequence(coin, PowerFunction{q("1/2")}, 1, 4, Method::partition), DomainError);
  EXPECT_THROW(an_sequence(coin, PowerFunction{2}, 1, 4, Method::quadrature), DomainError);
  EXPECT_THROW(an_sequence(expo, PowerFunction{2}, 1, 4, Method::exact), DomainError);
  EXPECT_THROW(an_sequence(expo, PowerFunction{2}, 1, 4, Method::convolution), DomainError);
  const DiscreteDistribution three = DiscreteDistribution::from_atoms({{1, q("1/4")}, {2, q("1/4")}, {5, q("1/2")}});
  EXPECT_THROW(an_sequence(Distribution(three), PowerFunction{2}, 1, 4, Method::binomial), DomainError);
  EXPECT_THROW(an_sequence(coin, PowerFunction{2}, 0, 4), DomainError);
}

TEST(AnSequence, AutoFallsBackToQuadratureThenMonteCarlo) {
  const Distribution expo = ContinuousFamily::exponential(1);
  const auto quad = an_sequence(expo, PowerFunction{q("1/2")}, 1, 3);
  EXPECT_EQ(quad.entries().front().provenance, Provenance::quadrature);
  const auto mc = an_sequence(expo, PowerFunction{2}, 1, 3, Method::automatic, {2000, 5});
  EXPECT_EQ(mc.entries().front().provenance, Provenance::monte_carlo);
}

TEST(AnSequence, PointMassEveryEngineGivesPower) {
  const Distribution point = DiscreteDistribution::point_mass(q("3/2"));
  for (auto m : {Method::partition, Method::convolution}) {
    const auto s = an_sequence(point, PowerFunction{3}, 1, 6, m);
    for (const auto& e : s.entries()) EXPECT_EQ(exact(e.value), q("27/8"));
  }
}
