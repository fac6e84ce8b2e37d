#include "momentlab/checkers.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace momentlab;

namespace {

Rational q(const char* s) { return parse_rational(s); }

MomentSequence estimates(const std::vector<std::pair<double, double>>& values) {
  MomentSequence seq("test");
  unsigned n = 1;
  for (const auto& [v, e] : values) seq.push_back({n++, EstimateWithError{v, e, EstimateKind::quadrature}, Provenance::quadrature});
  return seq;
}

DiscreteDistribution scaled(const DiscreteDistribution& d, const Rational& c) {
  std::vector<Atom> atoms;
  for (const auto& a : d.atoms()) atoms.push_back({canonical(a.value * c), a.prob});
  return DiscreteDistribution::from_atoms(atoms);
}

}  // namespace

TEST(SequenceVerdict, GeometricIsBothWithMarginZero) {
  const auto seq = exact_sequence({1, q("1/2"), q("1/4"), q("1/8")});
  for (const auto& v : {check_log_convex(seq), check_log_concave(seq)}) {
    EXPECT_EQ(v.status, VerdictStatus::holds_exact);
    ASSERT_TRUE(v.exact_margin);
    EXPECT_EQ(*v.exact_margin, 0);
    EXPECT_EQ(v.onset, 2u);
  }
}

TEST(SequenceVerdict, InverseSquaresAndBasisAreLogConvex) {
  std::vector<Rational> a;
  std::vector<Rational> b;
  for (unsigned n = 1; n <= 10; ++n) {
    a.push_back(Rational(1, n * n));
    b.push_back(canonical(Rational(3, n) - Rational(1, n * n)));
  }
  EXPECT_EQ(check_log_convex(exact_sequence(a)).status, VerdictStatus::holds_exact);
  EXPECT_EQ(check_log_convex(exact_sequence(b)).status, VerdictStatus::holds_exact);
  EXPECT_EQ(check_log_concave(exact_sequence(a)).status, VerdictStatus::violated);
}

TEST(SequenceVerdict, ViolationCarriesRecheckableCertificate) {
  const auto v = check_log_convex(exact_sequence({1, 1, 2, 3, 9}));
  ASSERT_EQ(v.status, VerdictStatus::violated);
  ASSERT_TRUE(v.first_violation);
  const auto& c = *v.first_violation;
  EXPECT_EQ(c.n, 3u);
  const Rational x = std::get<Rational>(c.previous);
  const Rational y = std::get<Rational>(c.current);
  const Rational z = std::get<Rational>(c.next);
  EXPECT_GT(y * y, x * z);
  EXPECT_EQ(*v.exact_margin, -1);
  EXPECT_EQ(v.onset, 4u);
}

TEST(SequenceVerdict, RejectsShortSequences) {
  EXPECT_THROW(check_log_convex(exact_sequence({1, 2})), DomainError);
}

TEST(SequenceVerdict, EstimatesUseIntervalSlack) {
  // slack at n=2 is 1*1 - 1 = 0 with nonzero error: straddles 0
  EXPECT_EQ(check_log_convex(estimates({{1, 1e-9}, {1, 1e-9}, {1, 1e-9}})).status, VerdictStatus::inconclusive);
  // slack -0.01 against an error of ~4e-9: a real violation
  const auto bad = check_log_convex(estimates({{1, 1e-9}, {1.005, 1e-9}, {1, 1e-9}}));
  EXPECT_EQ(bad.status, VerdictStatus::violated);
  ASSERT_TRUE(bad.first_violation);
  const auto good = check_log_convex(estimates({{1, 1e-9}, {0.9, 1e-9}, {1, 1e-9}}));
  EXPECT_EQ(good.status, VerdictStatus::holds_within_tolerance);
  EXPECT_GT(to_double(good.slacks[0].value), 4 * good.slacks[0].error_bound);
  // slack -1e-8 with error ~4e-9: inside the safety band
  const auto near = check_log_convex(estimates({{1, 1e-9}, {1.000000005, 1e-9}, {1, 1e-9}}));
  EXPECT_EQ(near.status, VerdictStatus::inconclusive);
  EXPECT_FALSE(near.first_violation);
}

TEST(SequenceVerdict, RealValuedInputsHoldWithinTolerance) {
  MomentSequence seq("exp:1");
  const Distribution point = DiscreteDistribution::point_mass(1);
  for (unsigned n = 1; n <= 6; ++n) seq.push_back({n, an_exponential(point, 1, n), Provenance::laplace_product});
  const auto v = check_log_convex(seq);
  EXPECT_EQ(v.status, VerdictStatus::holds_within_tolerance);
  EXPECT_FALSE(v.exact_margin);
  EXPECT_EQ(v.precision_bits, precision_bits());
}

TEST(SequenceVerdict, FractionalPowerBernoulliIsLogConcave) {
  const Distribution coin = DiscreteDistribution::bernoulli(q("1/2"));
  const auto seq = bn_sequence(coin, q("1/2"), 1, 12);
  EXPECT_EQ(seq.entries().front().provenance, Provenance::binomial_oracle);
  const auto v = check_log_concave(seq);
  EXPECT_EQ(v.status, VerdictStatus::holds_within_tolerance);
  EXPECT_GT(v.margin, 0);
}

TEST(IntegerPowerTail, SecondPowerHoldsEverywhere) {
  for (const auto& d : fixtures::random_pool(77, 20)) {
    const auto v = check_theorem4(moments_of(d, 2), 2, 30);
    EXPECT_EQ(v.status, VerdictStatus::holds_exact);
    EXPECT_EQ(v.onset, 2u);
    EXPECT_GT(*v.exact_margin, 0);
  }
}

TEST(IntegerPowerTail, BernoulliThirdPowerOnsetAtMostNine) {
  const auto v = check_theorem4(moments_of(DiscreteDistribution::bernoulli(q("1/3")), 3), 3, 30);
  EXPECT_EQ(v.status, VerdictStatus::holds_exact);
  EXPECT_EQ(v.slacks.front().n, 9u);
  EXPECT_EQ(v.slacks.back().n, 30u);
  ASSERT_TRUE(v.onset);
  EXPECT_LE(*v.onset, 9u);
}

TEST(IntegerPowerTail, PointMassGivesEquality) {
  const auto v = check_theorem4(moments_of(DiscreteDistribution::point_mass(q("7/3")), 4), 4, 40);
  EXPECT_EQ(v.status, VerdictStatus::holds_exact);
  EXPECT_EQ(*v.exact_margin, 0);
}

TEST(IntegerPowerTail, RejectsBadInputs) {
  const auto mu = moments_of(DiscreteDistribution::bernoulli(q("1/3")), 3);
  EXPECT_THROW(check_theorem4(mu, 4, 30), DomainError);
  EXPECT_THROW(check_theorem4(mu, 3, 9), DomainError);
  EXPECT_THROW(check_theorem4(mu, 1, 9), DomainError);
}

TEST(IntegerPowerTail, ScalingDoesNotChangeVerdict) {
  for (const auto& d : fixtures::random_pool(8, 15, 2, 4, 1)) {
    for (unsigned p = 2; p <= 4; ++p) {
      const auto base = check_theorem4(moments_of(d, p), p, p * p + 10);
      for (const char* c : {"1/7", "3", "25/2"}) {
        const auto other = check_theorem4(moments_of(scaled(d, q(c)), p), p, p * p + 10);
        EXPECT_EQ(other.status, base.status);
        EXPECT_EQ(*other.exact_margin, *base.exact_margin);
        EXPECT_EQ(other.onset, base.onset);
      }
      // the raw (unnormalized) sequence scales by c^p; its verdict is the same
      std::vector<Rational> raw;
      std::vector<Rational> raw_scaled;
      const PartitionExpansion e1(moments_of(d, p), p);
      const PartitionExpansion e2(moments_of(scaled(d, 3), p), p);
      for (unsigned n = 1; n <= 20; ++n) {
        raw.push_back(e1.at(n));
        raw_scaled.push_back(e2.at(n));
        EXPECT_EQ(e2.at(n), e1.at(n) * pow(Rational(3), p));
      }
      EXPECT_EQ(check_log_convex(exact_sequence(raw)).status, check_log_convex(exact_sequence(raw_scaled)).status);
      EXPECT_EQ(check_log_convex(exact_sequence(raw)).onset, check_log_convex(exact_sequence(raw_scaled)).onset);
    }
  }
}

TEST(BasisSequence, Values) {
  for (unsigned p = 2; p <= 6; ++p) EXPECT_EQ(lemma7_value(p, 1, q("5/2")), p - 1);
  EXPECT_EQ(lemma7_value(3, 2, 8), q("34/49"));
  EXPECT_EQ(lemma7_lower_bound(3), q("10/21"));
  EXPECT_GE(lemma7_value(3, 2, 8), lemma7_lower_bound(3));
  EXPECT_GT(lemma7_value(5, 4, 24), 0);
  EXPECT_THROW(lemma7_value(3, 2, 1), DomainError);
  EXPECT_THROW(lemma7_value(3, 2, q("1/2")), DomainError);
  EXPECT_THROW(lemma7_value(3, 3, 9), DomainError);
  EXPECT_THROW(lemma7_value(3, 1, 0), DomainError);
}

TEST(BasisSequence, MatchesSecondDerivativeOfLogBasis) {
  // f''(x) = p/x^2 - sum_{k=0}^{m-1} 1/(x-k)^2, differentiated term by term
  for (unsigned p = 2; p <= 8; ++p) {
    for (unsigned m = 1; m < p; ++m) {
      for (const char* xs : {"10", "23/2", "100", "7/3"}) {
        const Rational x = q(xs);
        if (x <= m - 1) continue;
        Rational second = Rational(p) / (x * x);
        for (unsigned k = 0; k < m; ++k) second -= 1 / ((x - k) * (x - k));
        EXPECT_EQ(lemma7_value(p, m, x), canonical(x * x * second));
      }
    }
  }
}

TEST(BasisSequence, GridAndMidpointChecks) {
  const auto r = check_lemma7(4, 3, {}, 100);
  EXPECT_EQ(r.status, VerdictStatus::holds_exact);
  EXPECT_TRUE(r.all_positive);
  EXPECT_TRUE(r.above_lower_bound);
  EXPECT_EQ(r.table.size(), 2 * (64 - 15) + 1u);
  EXPECT_EQ(r.table.front().x, 15);
  EXPECT_EQ(r.argmin, 15);
  EXPECT_EQ(r.midpoint.slacks.front().n, 16u);
  EXPECT_EQ(r.midpoint.slacks.back().n, 100u);

  const auto inv = check_lemma7(2, 1);
  EXPECT_EQ(inv.status, VerdictStatus::holds_exact);
  EXPECT_EQ(basis_sequence_value(2, 1, 7), q("1/7"));
  EXPECT_EQ(basis_sequence_value(4, 3, 5), q("60/625"));
}

TEST(ClosedForms, BernoulliSecondPower) {
  const auto d = verify_remark5_decomposition(moments_of(DiscreteDistribution::bernoulli(q("2/5")), 2), 2);
  ASSERT_EQ(d.terms.size(), 2u);
  EXPECT_EQ(d.terms[0].coefficient, q("4/25"));
  EXPECT_EQ(d.terms[1].coefficient, q("6/25"));
  EXPECT_TRUE(d.nonnegative);
  EXPECT_TRUE(d.reconstruction_exact);
}

TEST(ClosedForms, PointMassThirdPower) {
  const auto d = verify_remark5_decomposition(moments_of(DiscreteDistribution::point_mass(q("3/2")), 3), 3);
  ASSERT_EQ(d.terms.size(), 3u);
  EXPECT_EQ(d.terms[0].coefficient, q("27/8"));
  EXPECT_EQ(d.terms[1].coefficient, 0);
  EXPECT_EQ(d.terms[2].coefficient, 0);
  EXPECT_TRUE(d.reconstruction_exact);
}

TEST(ClosedForms, RandomThreeAtomReconstruction) {
  for (const auto& dist : fixtures::random_pool(55, 25, 3, 3)) {
    for (unsigned p : {2u, 3u}) {
      const auto d = verify_remark5_decomposition(moments_of(dist, 3), p);
      EXPECT_TRUE(d.nonnegative) << dist.describe();
      EXPECT_TRUE(d.reconstruction_exact) << dist.describe();
    }
  }
  EXPECT_THROW(verify_remark5_decomposition(moments_of(DiscreteDistribution::point_mass(1), 4), 4), DomainError);
}

TEST(FactorCheck, ConcaveBranchBernoulli) {
  const Distribution coin = DiscreteDistribution::bernoulli(q("1/2"));
  const auto r = check_remark6_factor(coin, q("1/4"), 3);
  EXPECT_EQ(r.claim, Claim::log_concave);
  EXPECT_TRUE(holds(r.sharp.status));
  EXPECT_TRUE(holds(r.weak.status));
  EXPECT_LE(r.sharp.value, r.weak.value);
  EXPECT_TRUE(r.implication_holds);
  EXPECT_LT(r.factor, 1);
  EXPECT_EQ(r.status, VerdictStatus::holds_within_tolerance);
}

TEST(FactorCheck, ConvexBranchTwoAtomsByQuadrature) {
  const Distribution two = DiscreteDistribution::from_atoms({{1, q("1/2")}, {2, q("1/2")}});
  const auto r = check_remark6_factor(two, -1, 3, Method::quadrature);
  EXPECT_EQ(r.claim, Claim::log_convex);
  EXPECT_GT(r.factor, 1);
  EXPECT_EQ(r.status, VerdictStatus::holds_within_tolerance);
  EXPECT_GT(r.sharp.value, 0);
  EXPECT_GE(r.weak.value, r.sharp.value);
  const auto exact = check_remark6_factor(two, -1, 3, Method::convolution);
  EXPECT_EQ(exact.sharp.status, VerdictStatus::holds_exact);
  EXPECT_NEAR(to_double(exact.sharp.value), to_double(r.sharp.value), 1e-9);
}

TEST(FactorCheck, PointMassMakesFactorStrict) {
  const Distribution point = DiscreteDistribution::point_mass(q("5/3"));
  const auto r = check_remark6_factor(point, q("1/3"), 4);
  EXPECT_LT(boost::multiprecision::abs(r.sharp.value), Real("1e-60"));
  EXPECT_GT(r.weak.value, 0);
  EXPECT_GT(r.gap, 0);
}

TEST(FactorCheck, RejectsMiddleRange) {
  const Distribution coin = DiscreteDistribution::bernoulli(q("1/2"));
  EXPECT_THROW(check_remark6_factor(coin, q("1/2"), 3), DomainError);
  EXPECT_THROW(check_remark6_factor(coin, q("3/4"), 3), DomainError);
  EXPECT_THROW(check_remark6_factor(coin, 0, 3), DomainError);
  EXPECT_THROW(check_remark6_factor(coin, 2, 3), DomainError);
}

TEST(PowerBranches, SmallConvexSuite) {
  for (const auto& d : fixtures::random_pool(12, 3, 2, 3, 1)) {
    const auto v = check_log_convex(bn_sequence(Distribution(d), -1, 1, 6, Method::quadrature));
    EXPECT_EQ(v.status, VerdictStatus::holds_within_tolerance) << d.describe();
    for (const auto& s : v.slacks) EXPECT_GT(to_double(s.value), 4 * s.error_bound);
  }
}

TEST(ExponentialLaplace, ExponentialIsLogConvex) {
  for (const auto& d : fixtures::random_pool(19, 10)) {
    for (const char* s : {"1/2", "1", "2"}) {
      const auto v = check_log_convex(an_sequence(Distribution(d), ExponentialFunction{q(s)}, 1, 15));
      EXPECT_EQ(v.status, VerdictStatus::holds_within_tolerance) << d.describe();
      EXPECT_GT(v.margin, -Real("1e-60"));
    }
  }
}
