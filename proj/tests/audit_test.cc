/*
 * Copyright 2026 The fairgamble Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fairgamble/audit.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fairgamble/errors.hpp"

namespace fairgamble {
namespace {

AuditInput Parse(const std::string& text, const AuditConfig& config = {}) {
  std::istringstream in(text);
  return parse_jsonl(in, config);
}

std::vector<std::string> Problems(const std::string& text, const AuditConfig& config = {}) {
  try {
    Parse(text, config);
  } catch (const IngestError& e) {
    return e.problems();
  }
  return {};
}

std::string ReadFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TEST(Ingest, WellFormed) {
  auto in = Parse(
      "{\"t\": 2, \"forecast\": 0.5, \"outcome\": 1, \"groups\": [\"a\"]}\n"
      "\n"
      "{\"t\": 0, \"forecast\": 0.25, \"outcome\": 0}\n"
      "{\"t\": 1, \"forecast\": 1, \"outcome\": \"1\"}\n");
  ASSERT_EQ(in.run.size(), 3u);
  EXPECT_EQ(in.t, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(in.run.forecasts[0].scalar(), 0.25);
  EXPECT_EQ(in.run.outcomes, (std::vector<Outcome>{0, 1, 1}));
  EXPECT_EQ(in.run.groups[2], std::vector<std::string>{"a"});
  EXPECT_TRUE(in.run.groups[0].empty());
  EXPECT_TRUE(in.beliefs.empty());
}

TEST(Ingest, HeaderDeclaresSpaceAndProperty) {
  auto in = Parse(
      "{\"space\": {\"labels\": [\"a\", \"b\", \"c\"]}, \"property\": \"dist\"}\n"
      "{\"t\": 0, \"forecast\": [0.2, 0.3, 0.5], \"outcome\": \"c\"}\n");
  EXPECT_EQ(in.property, "dist");
  EXPECT_EQ(in.run.space.size(), 3u);
  EXPECT_EQ(in.run.outcomes[0], 2u);
  EXPECT_EQ(resolve_model(in, {}).spec.kind(), PropertyKind::kFullDistribution);
}

TEST(Ingest, ErrorsNameLines) {
  auto p = Problems("{\"t\": 0, \"forecast\": 0.5, \"outcome\": 1}\n{\"t\": 1, \"forecast\": 0.5, \"outcome\": 2}\n");
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], "line 2: outcome 2 is not in the outcome space");

  p = Problems("{\"t\": 0, \"forecast\": 0.5, \"outcome\": \"x\"}\n");
  EXPECT_EQ(p.at(0), "line 1: unknown outcome label 'x'");

  p = Problems("{\"t\": 3, \"forecast\": 0.5, \"outcome\": 1}\n{\"t\": 3, \"forecast\": 0.5, \"outcome\": 0}\n");
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], "line 2: duplicate t=3 (first on line 1)");

  p = Problems("{\"t\": 0, \"forecast\": 1.5, \"outcome\": 1}\n{oops\n{\"t\": 2, \"outcome\": 1}\n");
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0].rfind("line 1: forecast", 0), 0u);
  EXPECT_EQ(p[1].rfind("line 2: invalid JSON", 0), 0u);
  EXPECT_EQ(p[2], "line 3: missing field 'forecast'");

  p = Problems("{\"t\": -1, \"forecast\": 0.5, \"outcome\": 1, \"colour\": 1}\n");
  EXPECT_EQ(p.at(0), "line 1: unknown field 'colour'");
  p = Problems("{\"t\": -1, \"forecast\": 0.5, \"outcome\": 1}\n");
  EXPECT_EQ(p.at(0), "line 1: t must be a non-negative integer");

  p = Problems("{\"t\": 0, \"forecast\": 0.5, \"outcome\": 1, \"belief\": [0.5, 0.5]}\n"
               "{\"t\": 1, \"forecast\": 0.5, \"outcome\": 1}\n");
  EXPECT_EQ(p.at(0), "line 2: belief must be given on every record or none");

  p = Problems("{\"t\": 0, \"forecast\": 0.5, \"outcome\": 1}\n{\"space\": {\"values\": [0, 1]}}\n");
  EXPECT_EQ(p.at(0), "line 2: header must be the first line");

  p = Problems("\n\n");
  EXPECT_EQ(p.at(0), "no round records");
}

TEST(Ingest, ConfigErrorsAreIngestionErrors) {
  AuditConfig c;
  c.property = "median";
  auto p = Problems("{\"t\": 0, \"forecast\": 0.5, \"outcome\": 1}\n", c);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].rfind("config:", 0), 0u);
}

TEST(Ingest, Extensions) {
  auto in = Parse(
      "{\"t\": 0, \"forecast\": 0.5, \"outcome\": 1, \"belief\": null, \"fine_belief\": [0, 1],"
      " \"restriction\": \"regret*0.25\", \"restriction_prime\": {\"finite\": [[0, 0], [1, -1]]},"
      " \"gamble\": [-0.5, 0.5]}\n"
      "{\"t\": 1, \"forecast\": 0.5, \"outcome\": 0, \"belief\": [1, 0], \"fine_belief\": [1, 0],"
      " \"restriction\": \"lsup_ball(match)\", \"restriction_prime\": \"nonpositive\"}\n");
  EXPECT_FALSE(in.beliefs[0].has_value());
  EXPECT_EQ(in.fine_beliefs[0]->weights()[1], 1.0);
  EXPECT_EQ(std::get<RegretGambles>(in.restrictions[0]).scale, 0.25);
  EXPECT_EQ(std::get<NormBall>(in.restrictions[1]).norm, Norm::kLsup);
  EXPECT_EQ(std::get<FiniteSet>(in.restrictions_prime[0]).gambles.size(), 2u);
  ASSERT_EQ(in.gambles.size(), 2u);
  EXPECT_TRUE(in.gambles[0].has_value());
  EXPECT_FALSE(in.gambles[1].has_value());
  EXPECT_EQ(Parse(emit_jsonl(in)), in);
}

TEST(ParseRestriction, InvertsDescribe) {
  for (const Restriction& r : {Restriction(RegretGambles{}), Restriction(RegretGambles{0.25}), Restriction(NonPositive{}),
                               Restriction(NormBall{}), Restriction(NormBall{Norm::kL1, 1.0}),
                               Restriction(NormBall{Norm::kLsup, 0.1})}) {
    EXPECT_EQ(parse_restriction(describe(r)), r) << describe(r);
  }
  EXPECT_THROW(parse_restriction("l2_ball(1)"), StructuralError);
  EXPECT_THROW(parse_restriction("regret*x"), StructuralError);
}

TEST(ResolveModel, AffineLoss) {
  auto in = Parse("{\"t\": 0, \"forecast\": 0.5, \"outcome\": 1}\n");
  AuditConfig c;
  c.loss = "squared*2-1";
  auto m = resolve_model(in, c);
  EXPECT_EQ(m.loss.range(), std::make_pair(-1.0, 1.0));
  c.loss = "pinball";
  c.property = "quantile@0.5";
  EXPECT_EQ(resolve_model(in, c).loss.kind(), LossKind::kPinball);
  c.loss = "squared*0-1";
  EXPECT_THROW(resolve_model(in, c), StructuralError);
  c.loss = "cubic";
  EXPECT_THROW(resolve_model(in, c), StructuralError);
}

TEST(ResolveGroups, Modes) {
  auto in = Parse(
      "{\"t\": 0, \"forecast\": 0.5, \"outcome\": 1, \"groups\": [\"b\"]}\n"
      "{\"t\": 1, \"forecast\": 0.5, \"outcome\": 0, \"groups\": [\"a\"]}\n");
  EXPECT_EQ(resolve_groups(in.run, "tags").size(), 3u);
  EXPECT_EQ(resolve_groups(in.run, "all").size(), 1u);
  auto only_b = resolve_groups(in.run, "b");
  ASSERT_EQ(only_b.size(), 2u);
  EXPECT_EQ(only_b[1].members, (std::vector<bool>{true, false}));
  EXPECT_THROW(resolve_groups(in.run, "c"), StructuralError);
}

TEST(RunAudit, CalibratedRunIsClean) {
  auto in = Parse(
      "{\"t\": 0, \"forecast\": 0.5, \"outcome\": 0}\n"
      "{\"t\": 1, \"forecast\": 0.5, \"outcome\": 1}\n"
      "{\"t\": 2, \"forecast\": 1, \"outcome\": 1}\n");
  auto r = run_audit(in, {});
  EXPECT_EQ(r.exit_code, kExitOk);
  const auto& doc = r.document;
  EXPECT_EQ(doc["schema_version"], kReportSchemaVersion);
  for (const auto& m : doc["metrics"]) {
    const std::string id = m["id"];
    if (id == "bias_large" || id == "ece" || id == "cal_l2" || id == "multical_l1" || id == "multical_l2") {
      EXPECT_NEAR(m["value"].get<double>(), 0.0, 1e-15) << id;
    }
  }
  EXPECT_TRUE(doc["recovery"]["all_within_tolerance"].get<bool>());
  EXPECT_EQ(doc["status"], "ok");
}

TEST(RunAudit, CounterexampleFixture) {
  auto in = ingest(std::string(FAIRGAMBLE_FIXTURE_DIR) + "/refinement_counterexample.jsonl", {});
  auto r = run_audit(in, {});
  EXPECT_EQ(r.exit_code, kExitPrecondition);
  const auto& check = r.document["hierarchy"]["checks"].back();
  EXPECT_EQ(check["name"], "refinement_order");
  EXPECT_EQ(check["outcome"], "preconditions-violated");
  EXPECT_NEAR(check["lhs"].get<double>(), 5.0 / 36.0, 1e-12);
  EXPECT_NEAR(check["rhs"].get<double>(), -5.0 / 36.0, 1e-12);
}

TEST(RunAudit, BoundaryGeometryFixture) {
  auto in = ingest(std::string(FAIRGAMBLE_FIXTURE_DIR) + "/boundary_geometry.jsonl", {});
  auto r = run_audit(in, {});
  const auto& g = r.document["availability"]["gambles"];
  ASSERT_EQ(g.size(), 4u);
  EXPECT_TRUE(g[0]["available"].get<bool>());
  EXPECT_EQ(g[0]["sup_value"].get<double>(), 0.0);
  EXPECT_EQ(g[0]["scaled_regret"]["status"], "inconclusive_closure");
  for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(g[i]["scaled_regret"]["status"], "dominated");
  EXPECT_TRUE(r.document["availability"]["levels"][0]["offer_axioms"]["ok"].get<bool>());
}

TEST(RunAudit, SelectedMetricMustApply) {
  auto in = ingest(std::string(FAIRGAMBLE_FIXTURE_DIR) + "/random_labels_seed42.jsonl", {});
  AuditConfig c;
  c.metrics = {MetricId::kEce};
  EXPECT_THROW(run_audit(in, c), StructuralError);
  c.tol = 0.0;
  c.metrics.clear();
  EXPECT_THROW(run_audit(in, c), PreconditionError);
}

TEST(RunAudit, SectionsAndBinning) {
  auto in = ingest(std::string(FAIRGAMBLE_FIXTURE_DIR) + "/random_binary_seed42.jsonl", {});
  AuditConfig c;
  c.sections = {true, false, false, false};
  c.bin_width = 0.25;
  auto r = run_audit(in, c);
  EXPECT_TRUE(r.document.contains("metrics"));
  EXPECT_FALSE(r.document.contains("recovery"));
  EXPECT_LE(r.document["run"]["distinct_forecasts"].get<std::size_t>(), 4u);
  EXPECT_EQ(r.exit_code, kExitOk);
}

class FixtureTest : public ::testing::TestWithParam<std::size_t> {};

TEST_P(FixtureTest, RoundTrip) {
  const auto fixture = make_fixtures(42).at(GetParam());
  AuditConfig c;
  auto back = Parse(emit_jsonl(fixture.input), c);
  EXPECT_EQ(back, fixture.input) << fixture.name;
}

TEST_P(FixtureTest, MatchesCommittedFile) {
  const auto fixture = make_fixtures(42).at(GetParam());
  EXPECT_EQ(ReadFile(std::string(FAIRGAMBLE_FIXTURE_DIR) + "/" + fixture.name + ".jsonl"),
            emit_jsonl(fixture.input));
}

TEST_P(FixtureTest, ReportIsDeterministic) {
  const auto fixture = make_fixtures(42).at(GetParam());
  AuditConfig c;
  c.seed = 42;
  const auto a = run_audit(fixture.input, c).dump();
  const auto b = run_audit(Parse(emit_jsonl(fixture.input)), c).dump();
  EXPECT_EQ(a, b);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, FixtureTest, ::testing::Range<std::size_t>(0, 5));

TEST(Fixtures, SeedChangesRandomCorpora) {
  auto a = make_fixtures(1);
  auto b = make_fixtures(2);
  EXPECT_EQ(a[1].input, b[1].input);
  EXPECT_NE(a[2].input, b[2].input);
  EXPECT_EQ(a[2].name, "random_binary_seed1");
}

}  // namespace
}  // namespace fairgamble
