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

#include "fairgamble/core.hpp"

#include <gtest/gtest.h>

#include <limits>

#include "fairgamble/errors.hpp"
#include "test_util.hpp"

namespace fairgamble {
namespace {

using testing::RandomDistribution;
using testing::RandomGamble;
using testing::RandomVector;
using testing::Rng;

TEST(OutcomeSpace, RejectsDuplicateLabelsAndSingletons) {
  EXPECT_THROW(OutcomeSpace({"a", "a"}), StructuralError);
  EXPECT_THROW(OutcomeSpace({"a"}), StructuralError);
  EXPECT_THROW(OutcomeSpace({"a", "b"}, std::vector<double>{1.0}), StructuralError);
}

TEST(OutcomeSpace, NumericLabels) {
  auto s = OutcomeSpace::Numeric({0.0, 0.5, 1.0});
  EXPECT_EQ(s.labels(), (std::vector<std::string>{"0", "0.5", "1"}));
  EXPECT_EQ(s.index_of("0.5"), 1u);
  EXPECT_THROW(s.index_of("2"), StructuralError);
  OutcomeSpace cats({"a", "b", "c"});
  EXPECT_THROW(cats.numeric_values(), StructuralError);
}

TEST(Gamble, RejectsNonFinite) {
  EXPECT_THROW(Gamble({0.0, std::numeric_limits<double>::quiet_NaN()}), StructuralError);
  EXPECT_THROW(Gamble({std::numeric_limits<double>::infinity(), 0.0}), StructuralError);
}

TEST(Distribution, Validation) {
  EXPECT_THROW(Distribution({0.5, 0.6}), StructuralError);
  EXPECT_THROW(Distribution({-0.1, 1.1}), StructuralError);
  // Small drift is renormalized.
  Distribution d({0.5, 0.5 + 5e-10});
  EXPECT_NEAR(d[0] + d[1], 1.0, 1e-15);
}

TEST(Expectation, Examples) {
  EXPECT_EQ(expectation(Distribution::Uniform(2), Gamble({-1.0, 1.0})), 0.0);
  EXPECT_NEAR(expectation(Distribution({0.6, 0.4}), Gamble({-0.4, 0.6})), 0.0, 1e-15);
  EXPECT_THROW(expectation(Distribution::Uniform(3), Gamble({1.0, 2.0})), StructuralError);
}

TEST(Expectation, DiracPicksCoordinate) {
  Rng rng(7);
  auto space = OutcomeSpace({"a", "b", "c"});
  for (int rep = 0; rep < 100; ++rep) {
    Gamble g = RandomGamble(rng, 3, 5.0);
    for (Outcome y = 0; y < 3; ++y) EXPECT_EQ(expectation(dirac(space, y), g), g[y]);
  }
}

TEST(Expectation, BilinearInMeasure) {
  Rng rng(11);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t n = 2 + rep % 5;
    SignedMeasure phi(RandomVector(rng, n, 3.0));
    SignedMeasure psi(RandomVector(rng, n, 3.0));
    Gamble g = RandomGamble(rng, n, 2.0);
    const double a = testing::Uniform(rng, -2, 2);
    const double b = testing::Uniform(rng, -2, 2);
    EXPECT_NEAR(expectation(a * phi + b * psi, g), a * expectation(phi, g) + b * expectation(psi, g), 1e-12);
  }
}

TEST(Expectation, ConstantGambleGivesConstant) {
  Rng rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rep % 6;
    const double c = testing::Uniform(rng, -10, 10);
    EXPECT_NEAR(expectation(RandomDistribution(rng, n), Gamble::Constant(n, c)), c, 1e-12);
  }
}

TEST(Dirac, Examples) {
  EXPECT_EQ(dirac(OutcomeSpace::Binary(), "1").weights()[1], 1.0);
  auto d = dirac(OutcomeSpace({"a", "b", "c"}), "b");
  EXPECT_EQ(std::vector<double>(d.weights().begin(), d.weights().end()), (std::vector<double>{0, 1, 0}));
  EXPECT_THROW(dirac(OutcomeSpace::Binary(), "2"), StructuralError);
}

TEST(EmpiricalDistribution, CountsOutcomes) {
  auto s = OutcomeSpace::Binary();
  std::vector<std::string> ys{"0", "1", "1"};
  auto d = empirical_distribution(s, std::span<const std::string>(ys));
  EXPECT_DOUBLE_EQ(d[0], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(d[1], 2.0 / 3.0);

  std::vector<std::string> ys2{"0", "1", "0"};
  auto d2 = empirical_distribution(s, std::span<const std::string>(ys2));
  EXPECT_DOUBLE_EQ(d2[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(d2[1], 1.0 / 3.0);

  std::vector<Outcome> empty;
  EXPECT_THROW(empirical_distribution(s, std::span<const Outcome>(empty)), PreconditionError);
}

TEST(EmpiricalDistribution, RepeatedOutcomeIsDiracExactly) {
  auto s = OutcomeSpace({"a", "b", "c", "d"});
  for (std::size_t copies = 1; copies < 50; ++copies) {
    std::vector<Outcome> ys(copies, 2);
    EXPECT_EQ(empirical_distribution(s, std::span<const Outcome>(ys)), dirac(s, 2));
  }
}

}  // namespace
}  // namespace fairgamble
