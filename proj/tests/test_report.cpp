#include "momentlab/report.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace momentlab;

namespace {

Rational q(const char* s) { return parse_rational(s); }

void expect_same_sequence(const MomentSequence& a, const MomentSequence& b) {
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(a.order(), b.order());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.entries()[i].n, b.entries()[i].n);
    EXPECT_EQ(a.entries()[i].provenance, b.entries()[i].provenance);
    EXPECT_TRUE(same_value(a.entries()[i].value, b.entries()[i].value)) << "n = " << a.entries()[i].n;
  }
}

MomentSequence mixed_sequence() {
  MomentSequence seq("pow:-1");
  seq.push_back({1, q("7/3"), Provenance::partition_formula});
  seq.push_back({2, to_real(q("1/3")), Provenance::laplace_product});
  seq.push_back({3, EstimateWithError{0.1 + 0.2, 1e-11, EstimateKind::quadrature}, Provenance::quadrature});
  seq.push_back({4, EstimateWithError{0.25, 3.5e-4, EstimateKind::monte_carlo}, Provenance::monte_carlo});
  return seq;
}

}  // namespace

TEST(Report, ValueStringsAreExactOrRoundTrip) {
  EXPECT_EQ(value_string(SequenceValue(q("2/4"))), "1/2");
  const SequenceValue r = to_real(q("1/3"));
  EXPECT_NE(value_string(r).find('e'), std::string::npos);
  EXPECT_TRUE(same_value(parse_value("real", value_string(r), 0), r));
  EXPECT_EQ(parse_double(format_double(0.1 + 0.2)), 0.1 + 0.2);
  EXPECT_THROW(parse_double("0.5x"), DomainError);
  EXPECT_THROW(parse_value("guess", "1", 0), DomainError);
}

TEST(Report, SequenceJsonRoundTrip) {
  const auto seq = mixed_sequence();
  const Json j = to_json(seq);
  EXPECT_EQ(j["entries"][0]["value"], "7/3");
  EXPECT_EQ(j["entries"][0]["kind"], "exact");
  EXPECT_EQ(j["entries"][2]["kind"], "quadrature");
  expect_same_sequence(sequence_from_json(Json::parse(j.dump())), seq);
}

TEST(Report, SequenceCsvRoundTrip) {
  const auto seq = mixed_sequence();
  const auto csv = to_csv(seq);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,value,provenance,error_bound");
  expect_same_sequence(sequence_from_csv(csv, "pow:-1"), seq);
  EXPECT_THROW(sequence_from_csv("n,value\n1,2\n"), DomainError);
  EXPECT_THROW(sequence_from_csv(std::string(kSequenceCsvHeader) + "\n1,2,partition_formula\n"), DomainError);
}

TEST(Report, EngineSequencesRoundTrip) {
  const Distribution d = DiscreteDistribution::bernoulli(q("1/3"));
  const auto exact = bn_sequence(d, 3, 1, 8);
  expect_same_sequence(sequence_from_json(to_json(exact)), exact);
  expect_same_sequence(sequence_from_csv(to_csv(exact), exact.order()), exact);
  const auto quad = bn_sequence(d, q("1/2"), 1, 3, Method::quadrature);
  expect_same_sequence(sequence_from_csv(to_csv(quad), quad.order()), quad);
}

TEST(Report, VerdictRoundTrip) {
  const auto seq = exact_sequence({q("1"), q("1/2"), q("1/2"), q("1/8")});
  const auto v = check_log_convex(seq);
  ASSERT_EQ(v.status, VerdictStatus::violated);
  const Json j = to_json(v);
  EXPECT_EQ(j["status"], "violated");
  EXPECT_EQ(j["certificate"]["n"], 3);
  const auto back = verdict_from_json(Json::parse(j.dump()));
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(back.first_violation->n, 3u);
  EXPECT_EQ(*back.exact_margin, *v.exact_margin);

  const auto real_verdict = check_log_concave(mixed_sequence());
  EXPECT_EQ(to_json(verdict_from_json(to_json(real_verdict))), to_json(real_verdict));
}

TEST(Report, SearchReportRoundTrip) {
  const auto r = find_final_remark_counterexample(unit_grid(10), unit_grid(10), 4);
  const Json j = to_json(r);
  const auto back = search_report_from_json(Json::parse(j.dump()));
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(back.violations.front().certificate, r.violations.front().certificate);
  const auto csv = miss_table_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "subject,parameter,n,normalized_slack,value");
}

TEST(Report, OtherReportsEmit) {
  const auto lemma = to_json(check_lemma7(3, 2));
  EXPECT_EQ(lemma["claim"], "lemma7");
  EXPECT_EQ(lemma["lower_bound"], to_string(lemma7_lower_bound(3)));
  const auto d = DiscreteDistribution::from_atoms({{1, q("1/2")}, {3, q("1/2")}});
  const auto r5 = to_json(verify_remark5_decomposition(normalize_mean(moments_of(d, 3)), 3, 20));
  EXPECT_EQ(r5["status"], "holds_exact");
  const auto r6 = to_json(check_remark6_factor(Distribution(d), q("1/4"), 3));
  EXPECT_EQ(r6["claim"], "remark6");
  EXPECT_TRUE(r6.contains("factor"));
}

TEST(Report, DistributionSpecs) {
  auto d = distribution_from_json(Json::parse(R"({"atoms":[{"value":"1/2","prob":"1/3"},{"value":"2","prob":"2/3"}]})"));
  EXPECT_EQ(mean(d), q("3/2"));
  EXPECT_EQ(to_json(d), to_json(distribution_from_json(to_json(d))));
  d = distribution_from_json(Json::parse(R"({"family":"bernoulli","theta":"1/3"})"));
  EXPECT_EQ(std::get<DiscreteDistribution>(d).bernoulli_theta(), q("1/3"));
  EXPECT_EQ(mean(distribution_from_json(Json::parse(R"({"family":"point","value":"7/2"})"))), q("7/2"));
  EXPECT_EQ(mean(distribution_from_json(Json::parse(R"({"family":"exponential","rate":"2"})"))), q("1/2"));
  const auto u = distribution_from_json(Json::parse(R"({"family":"uniform","lo":"1","hi":"3"})"));
  EXPECT_EQ(mean(u), 2);
  EXPECT_EQ(to_json(u), to_json(distribution_from_json(to_json(u))));

  EXPECT_THROW(distribution_from_json(Json::parse(R"({"family":"cauchy"})")), DomainError);
  EXPECT_THROW(distribution_from_json(Json::parse(R"({"family":"bernoulli","theta":0.5})")), DomainError);
  EXPECT_THROW(distribution_from_json(Json::parse(R"({"atoms":[{"value":"1","prob":"1/2"}]})")), DomainError);
  EXPECT_THROW(distribution_from_json(Json::parse("[1]")), DomainError);
}

TEST(Report, DistributionFile) {
  const auto path = std::filesystem::temp_directory_path() / "momentlab_report_dist.json";
  {
    std::ofstream out(path);
    out << R"({"atoms":[{"value":"0","prob":"1/4"},{"value":"1","prob":"3/4"}]})";
  }
  EXPECT_EQ(mean(load_distribution_file(path.string())), q("3/4"));
  {
    std::ofstream out(path);
    out << "{not json";
  }
  EXPECT_THROW(load_distribution_file(path.string()), DomainError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_distribution_file(path.string()), DomainError);
}
