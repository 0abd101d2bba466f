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

#include "fairgamble/hierarchy.hpp"

#include <gtest/gtest.h>

#include "fairgamble/errors.hpp"
#include "test_util.hpp"

namespace fairgamble {
namespace {

using testing::RandomRun;
using testing::Rng;
using testing::Uniform;
using testing::UniformIndex;

ProtocolRun BinaryRun(std::vector<double> v, std::vector<Outcome> y) {
  ProtocolRun run;
  for (double x : v) run.forecasts.emplace_back(x);
  run.outcomes = std::move(y);
  return run;
}

PropertyModel BinaryMean() { return parse_property_model("mean", OutcomeSpace::Binary()); }

// Squared loss rescaled to [-1, 1].
PropertyModel BinaryMeanUnit() {
  auto m = BinaryMean();
  m.loss = m.loss.affine(2.0, -1.0);
  return m;
}

std::vector<Belief> Beliefs(BeliefKind kind, const ProtocolRun& run) { return make_beliefs({kind, {}, {}}, run); }

// Independent binary-mean oracle: the level set at v is the single
// distribution (1 - v, v), so g is available iff its mean under it is <= 0.
double BruteFiniteCapital(const FiniteSet& set, const std::vector<Belief>& beliefs, const ProtocolRun& run) {
  double total = 0.0;
  for (std::size_t t = 0; t < run.size(); ++t) {
    if (!beliefs[t]) continue;
    const double v = run.forecasts[t].scalar();
    const Gamble* best = nullptr;
    double best_e = 0.0;
    for (const auto& g : set.gambles) {
      if ((1.0 - v) * g[0] + v * g[1] > 1e-9) continue;
      const double e = (*beliefs[t])[0] * g[0] + (*beliefs[t])[1] * g[1];
      if (!best || e > best_e) {
        best = &g;
        best_e = e;
      }
    }
    total += (*best)[run.outcomes[t]];
  }
  return total / static_cast<double>(run.size());
}

// Random runs often give two forecast levels the same empirical outcome
// distribution, which breaks the forecast-consistency precondition. Those runs
// must fail on that precondition alone; every other run must satisfy the order.
void ExpectHoldsOrCollides(const HierarchyCheck& c, int& checked) {
  if (c.outcome == CheckOutcome::kPreconditionsViolated) {
    EXPECT_EQ(c.failed_preconditions, std::vector<std::string>{"forecast constant on belief cells"});
    return;
  }
  EXPECT_EQ(c.outcome, CheckOutcome::kHolds) << c.name << " " << c.lhs << " " << c.rhs;
  ++checked;
}

TEST(Contains, CertifiedPairs) {
  const auto m = BinaryMean();
  const PropertyValue v(0.3);
  const Restriction zero = FiniteSet{{Gamble::Zero(2)}};
  EXPECT_TRUE(contains(NormBall{}, zero, v, m));
  EXPECT_TRUE(contains(NonPositive{}, zero, v, m));
  EXPECT_TRUE(contains(FiniteSet{{Gamble::Zero(2), Gamble({1, -1})}}, zero, v, m));
  EXPECT_FALSE(contains(zero, FiniteSet{{Gamble::Zero(2), Gamble({1, -1})}}, v, m));
  EXPECT_FALSE(contains(NonPositive{}, FiniteSet{{Gamble({0.1, -1})}}, v, m));
  // ||nu_v||_1 = 1 on the binary mean.
  EXPECT_TRUE(contains(NormBall{Norm::kL1, 1.0}, NormBall{}, v, m));
  EXPECT_FALSE(contains(NormBall{Norm::kL1, 0.5}, NormBall{}, v, m));
  EXPECT_TRUE(contains(NormBall{Norm::kLsup, 1.0}, NormBall{Norm::kL1, 1.0}, v, m));
  EXPECT_FALSE(contains(NormBall{Norm::kL1, 1.5}, NormBall{Norm::kLsup, 1.0}, v, m));
  EXPECT_TRUE(contains(NormBall{Norm::kL1, 2.0}, NormBall{Norm::kLsup, 1.0}, v, m));
  EXPECT_TRUE(contains(RegretGambles{}, RegretGambles{}, v, m));
}

TEST(Contains, RegretInsideUnitBall) {
  const auto m = BinaryMeanUnit();
  for (double v : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    EXPECT_TRUE(contains(NormBall{Norm::kL1, 1.0}, RegretGambles{0.25}, v, m));
    EXPECT_FALSE(contains(NormBall{Norm::kL1, 0.49}, RegretGambles{0.25}, v, m));
  }
  // The bound is attained at the far end of the value range.
  const auto g = m.loss.row(0.25) - m.loss.row(1.0);
  EXPECT_NEAR((0.25 * g).l1_norm(), 0.75, 1e-15);
  EXPECT_FALSE(contains(NormBall{Norm::kL1, 0.74}, RegretGambles{0.25}, 0.25, m));
}

TEST(Contains, UnsupportedPairsAreRejected) {
  const auto m = BinaryMean();
  EXPECT_THROW(contains(RegretGambles{}, NormBall{}, 0.5, m), StructuralError);
  EXPECT_THROW(contains(NormBall{}, NonPositive{}, 0.5, m), StructuralError);
  EXPECT_THROW(contains(RegretGambles{}, FiniteSet{{Gamble::Zero(2)}}, 0.5, m), StructuralError);
  EXPECT_THROW(contains(NormBall{Norm::kLsup}, RegretGambles{}, 0.5, m), StructuralError);
  auto q = parse_property_model("mean", OutcomeSpace::Numeric({0, 0.5, 1}));
  EXPECT_THROW(contains(NormBall{Norm::kL1, 1.0}, RegretGambles{}, 0.5, q), StructuralError);
}

TEST(RestrictionOrder, ZeroGambler) {
  Rng rng(301);
  const auto m = BinaryMean();
  int checked = 0;
  for (int rep = 0; rep < 50; ++rep) {
    auto run = RandomRun(rng, OutcomeSpace::Binary(), 60, 0);
    const auto beliefs = Beliefs(BeliefKind::kConditionalOnForecast, run);
    const Restriction zero[] = {FiniteSet{{Gamble::Zero(2)}}};
    const Restriction ball[] = {NormBall{}};
    auto c = check_restriction_order(run, m, beliefs, zero, ball);
    ExpectHoldsOrCollides(c, checked);
    EXPECT_EQ(c.lhs, 0.0);
    EXPECT_LE(0.0, c.rhs + 1e-12);
  }
  EXPECT_GE(checked, 20);
}

TEST(RestrictionOrder, FiniteSetsOnAlignedRuns) {
  Rng rng(311);
  const auto m = BinaryMean();
  int checked = 0;
  for (int rep = 0; rep < 200; ++rep) {
    auto run = RandomRun(rng, OutcomeSpace::Binary(), 80, 0);
    FiniteSet big{{Gamble::Zero(2)}};
    for (int k = 0; k < 6; ++k) big.gambles.push_back(Gamble({Uniform(rng, -1, 1), Uniform(rng, -1, 1)}));
    FiniteSet small{{Gamble::Zero(2)}};
    for (std::size_t k = 1; k < big.gambles.size(); ++k) {
      if (UniformIndex(rng, 2)) small.gambles.push_back(big.gambles[k]);
    }
    const auto beliefs = Beliefs(BeliefKind::kConditionalOnForecast, run);
    const Restriction g[] = {small};
    const Restriction gp[] = {big};
    auto c = check_restriction_order(run, m, beliefs, g, gp);
    ExpectHoldsOrCollides(c, checked);
    EXPECT_NEAR(c.lhs, BruteFiniteCapital(small, beliefs, run), 1e-12);
    EXPECT_NEAR(c.rhs, BruteFiniteCapital(big, beliefs, run), 1e-12);
  }
  EXPECT_GE(checked, 80);
}

TEST(RestrictionOrder, RegretBelowUnitBall) {
  Rng rng(321);
  const auto m = BinaryMeanUnit();
  int checked = 0;
  for (int rep = 0; rep < 200; ++rep) {
    auto run = RandomRun(rng, OutcomeSpace::Binary(), 80, 0);
    const auto beliefs = Beliefs(BeliefKind::kConditionalOnForecast, run);
    const Restriction g[] = {RegretGambles{0.25}};
    const Restriction gp[] = {NormBall{Norm::kL1, 1.0}};
    ExpectHoldsOrCollides(check_restriction_order(run, m, beliefs, g, gp), checked);
  }
  EXPECT_GE(checked, 80);
}

TEST(RestrictionOrder, PreconditionsAreReported) {
  const auto m = BinaryMean();
  auto run = BinaryRun({0.2, 0.7}, {0, 1});
  // The average belief spans two different forecasts.
  const auto beliefs = Beliefs(BeliefKind::kAverage, run);
  const Restriction zero[] = {FiniteSet{{Gamble::Zero(2)}}};
  const Restriction ball[] = {NormBall{}};
  auto c = check_restriction_order(run, m, beliefs, zero, ball);
  EXPECT_EQ(c.outcome, CheckOutcome::kPreconditionsViolated);
  ASSERT_EQ(c.failed_preconditions.size(), 1u);
  EXPECT_EQ(c.failed_preconditions[0], "forecast constant on belief cells");

  std::vector<Belief> wrong(2, Distribution({0.9, 0.1}));
  auto d = check_restriction_order(run, m, wrong, zero, ball);
  EXPECT_EQ(d.failed_preconditions.front(), "beliefs aligned to truth");

  const auto cond = Beliefs(BeliefKind::kConditionalOnForecast, run);
  const Restriction small_ball[] = {NormBall{Norm::kL1, 0.5}};
  auto e = check_restriction_order(run, m, cond, ball, small_ball);
  EXPECT_EQ(e.outcome, CheckOutcome::kPreconditionsViolated);
  EXPECT_EQ(e.failed_preconditions.front(), "containment certified at round 0");
}

TEST(RefinementOrder, IdentityIsEquality) {
  Rng rng(331);
  const auto m = BinaryMean();
  auto run = RandomRun(rng, OutcomeSpace::Binary(), 100, 0);
  const auto b = Beliefs(BeliefKind::kConditionalOnForecast, run);
  const Restriction ball[] = {NormBall{}};
  auto c = check_refinement_order(run, m, b, b, ball);
  EXPECT_EQ(c.outcome, CheckOutcome::kHolds);
  EXPECT_EQ(c.lhs, c.rhs);
}

TEST(RefinementOrder, BeliefChainIsMonotone) {
  Rng rng(341);
  int checked = 0;
  for (int rep = 0; rep < 100; ++rep) {
    auto space = testing::RandomNumericSpace(rng, 2 + rep % 3);
    auto run = RandomRun(rng, space, 80, 0);
    const auto m = parse_property_model("mean", space);
    const auto avg = Beliefs(BeliefKind::kAverage, run);
    const auto cond = Beliefs(BeliefKind::kConditionalOnForecast, run);
    const auto clair = Beliefs(BeliefKind::kClairvoyant, run);
    const Restriction regret[] = {RegretGambles{}};
    auto a = check_refinement_order(run, m, avg, cond, regret);
    auto b = check_refinement_order(run, m, cond, clair, regret);
    ExpectHoldsOrCollides(a, checked);
    ExpectHoldsOrCollides(b, checked);
    EXPECT_NEAR(a.lhs * run.size(), external_regret(m.loss, run), 1e-9);
  }
  EXPECT_GE(checked, 80);
}

TEST(RefinementOrder, TimeVaryingRestrictionCounterexample) {
  const auto m = BinaryMean();
  const double v = 5.0 / 12.0;
  auto run = BinaryRun({v, v, v}, {0, 1, 0});
  const std::vector<Belief> coarse(3, Distribution({2.0 / 3.0, 1.0 / 3.0}));
  const std::vector<Belief> fine{Distribution({0.5, 0.5}), Distribution({0.5, 0.5}), Distribution::Dirac(2, 0)};
  const std::vector<Restriction> g{NormBall{Norm::kL1, 1.0}, NonPositive{}, NonPositive{}};
  auto c = check_refinement_order(run, m, coarse, fine, g);
  EXPECT_EQ(c.outcome, CheckOutcome::kPreconditionsViolated);
  ASSERT_EQ(c.failed_preconditions.size(), 1u);
  EXPECT_EQ(c.failed_preconditions[0], "restriction constant on belief cells");
  EXPECT_NEAR(c.lhs, 5.0 / 36.0, 1e-12);
  EXPECT_NEAR(c.rhs, -5.0 / 36.0, 1e-12);
  EXPECT_FALSE(c.inequality_holds());
  EXPECT_TRUE(refines(fine, coarse));
  EXPECT_TRUE(is_aligned_to_truth(coarse, run));
  EXPECT_TRUE(is_aligned_to_truth(fine, run));
}

TEST(SwapVsEce, Examples) {
  const auto unit = BinaryMeanUnit();
  auto calibrated = BinaryRun({0.5, 0.5, 1.0}, {0, 1, 1});
  auto c = check_swap_vs_ece_bound(calibrated, unit.loss);
  EXPECT_EQ(c.outcome, CheckOutcome::kHolds);
  EXPECT_NEAR(c.rhs, 0.0, 1e-15);
  EXPECT_LE(c.lhs, 1e-12);

  auto d = check_swap_vs_ece_bound(BinaryRun({0.4, 0.4}, {0, 0}), BinaryMean().loss);
  EXPECT_EQ(d.outcome, CheckOutcome::kHolds);
  EXPECT_NEAR(d.lhs, 0.32, 1e-15);
  EXPECT_NEAR(d.rhs, 3.2, 1e-15);

  auto wide = parse_property_model("mean", OutcomeSpace::Numeric({0, 2}));
  ProtocolRun w;
  w.space = wide.spec.space();
  w.forecasts = {PropertyValue(1.0)};
  w.outcomes = {0};
  auto e = check_swap_vs_ece_bound(w, wide.loss);
  EXPECT_EQ(e.outcome, CheckOutcome::kPreconditionsViolated);
  EXPECT_EQ(e.failed_preconditions.size(), 2u);

  auto q = parse_property_model("quantile@0.5", OutcomeSpace::Binary());
  auto f = check_swap_vs_ece_bound(BinaryRun({0.5}, {0}), q.loss);
  EXPECT_EQ(f.outcome, CheckOutcome::kPreconditionsViolated);
  EXPECT_TRUE(std::isnan(f.rhs));
}

TEST(SwapVsEce, RandomBinaryRuns) {
  Rng rng(351);
  const auto unit = BinaryMeanUnit();
  for (int rep = 0; rep < 500; ++rep) {
    auto run = RandomRun(rng, OutcomeSpace::Binary(), 100, 0);
    auto c = check_swap_vs_ece_bound(run, unit.loss);
    EXPECT_EQ(c.outcome, CheckOutcome::kHolds) << c.lhs << " " << c.rhs;
  }
}

TEST(MetricOrders, HoldOnRandomRuns) {
  Rng rng(361);
  for (int rep = 0; rep < 200; ++rep) {
    auto space = testing::RandomNumericSpace(rng, 2 + rep % 4);
    auto run = RandomRun(rng, space, 60, 0);
    for (const char* id : {"mean", "quantile@0.7"}) {
      auto checks = check_metric_orders(run, parse_property_model(id, space));
      EXPECT_EQ(checks.size(), std::string(id) == "mean" ? 4u : 2u);
      for (const auto& c : checks) EXPECT_EQ(c.outcome, CheckOutcome::kHolds) << c.name;
    }
  }
}

TEST(MetricOrders, SingleRound) {
  for (const auto& c : check_metric_orders(BinaryRun({0.3}, {1}), BinaryMean())) {
    EXPECT_EQ(c.outcome, CheckOutcome::kHolds) << c.name;
  }
  EXPECT_THROW(check_metric_orders(BinaryRun({}, {}), BinaryMean()), PreconditionError);
  EXPECT_EQ(to_string(CheckOutcome::kPreconditionsViolated), "preconditions-violated");
}

}  // namespace
}  // namespace fairgamble
