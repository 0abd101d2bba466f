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

// Fair, restricted and rational gamblers: beliefs, restriction sets, the
// gamble a rational gambler selects each round, and accumulated capital.

#ifndef FAIRGAMBLE_GAMBLER_HPP_
#define FAIRGAMBLE_GAMBLER_HPP_

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fairgamble/core.hpp"
#include "fairgamble/properties.hpp"

namespace fairgamble {

// A forecasting run: forecasts v_t, outcomes y_t and group tags per round.
struct ProtocolRun {
  OutcomeSpace space = OutcomeSpace::Binary();
  std::vector<PropertyValue> forecasts;
  std::vector<Outcome> outcomes;
  std::vector<std::vector<std::string>> groups;  // empty, or one tag list per round

  std::size_t size() const { return outcomes.size(); }
  // Throws StructuralError/DomainError on length, outcome or value-set violations.
  void validate(const PropertySpec& spec) const;

  bool operator==(const ProtocolRun&) const = default;
};

// nullopt is the opt-out token: the gambler plays the zero gamble.
using Belief = std::optional<Distribution>;

// Regret gambles of scale * l at the round forecast: l_v - l_c over c.
struct RegretGambles {
  double scale = 1.0;
  bool operator==(const RegretGambles&) const = default;
};

enum class Norm { kL1, kLsup };
std::string to_string(Norm norm);
Norm parse_norm(const std::string& id);

// {g : ||g|| <= r}; r = ||nu_v|| in the same norm when radius is unset.
struct NormBall {
  Norm norm = Norm::kL1;
  std::optional<double> radius;
  bool operator==(const NormBall&) const = default;
};

struct NonPositive {
  bool operator==(const NonPositive&) const = default;
};

// An explicit finite restriction; must contain the zero gamble.
struct FiniteSet {
  std::vector<Gamble> gambles;
  bool operator==(const FiniteSet&) const = default;
};

using Restriction = std::variant<RegretGambles, NormBall, NonPositive, FiniteSet>;
std::string describe(const Restriction& r);
// Inverse of describe() for every kind except FiniteSet.
Restriction parse_restriction(const std::string& id);

struct GamblerSpec {
  std::vector<Belief> beliefs;  // one per round
  // A single restriction, or one per round.
  std::vector<Restriction> restrictions{NormBall{}};
  // 0 means exact rationality.
  double epsilon = 0.0;

  const Restriction& restriction(std::size_t t) const;
};

// The gamble a fair, restricted and rational gambler plays against forecast v.
//   opt-out                -> 0
//   RegretGambles          -> s * (l(., v) - l(., c)), c the representative of Gamma(b)
//   NormBall, L1           -> +-(r / ||nu_v||_1) nu_v, sign of E_b[nu_v] (+ iff > 0)
//   NormBall, Lsup         -> rational_gamble
//   NonPositive            -> 0
//   FiniteSet              -> argmax of E_b over available members, first on ties
// The L1 closed form needs a scalar identification function; if the signed
// gamble is not available (a quantile forecast sitting on an atom) the LP
// selection is used instead.
Gamble select_gamble(const Restriction& restriction, const Belief& belief, const PropertyValue& forecast,
                     const PropertyModel& model);

// All rounds of one gambler.
std::vector<Gamble> play(const GamblerSpec& spec, const ProtocolRun& run, const PropertyModel& model);

// argmax E_b[g] over g available for `ls` with ||g|| <= radius, solved as one LP
// through the dual description of availability.
Gamble rational_gamble(const LevelSetPolytope& ls, const Distribution& belief, Norm norm, double radius);

// (1/|T|) sum_t g_t(y_t), summed in round order.
double capital(std::span<const Gamble> gambles, std::span<const Outcome> outcomes);

enum class BeliefKind { kAverage, kConditionalOnForecast, kConditionalOnForecastAndGroup, kClairvoyant };
std::string to_string(BeliefKind kind);

struct BeliefRule {
  BeliefKind kind = BeliefKind::kAverage;
  // Conditional kinds: only rounds forecasting `anchor` get a belief. Unset
  // means every round is conditioned on its own forecast.
  std::optional<PropertyValue> anchor;
  // Group kind: round membership of S.
  std::vector<bool> members;
};

// Empirical beliefs; empty conditioning cells yield opt-out.
std::vector<Belief> make_beliefs(const BeliefRule& rule, const ProtocolRun& run);

// Each distinct belief equals the empirical outcome distribution over the
// rounds that hold it (within 1e-12).
bool is_aligned_to_truth(std::span<const Belief> beliefs, const ProtocolRun& run);

// For every distinct coarse belief B, the fine beliefs on B's rounds are all
// distributions and average to B (within 1e-12).
bool refines(std::span<const Belief> fine, std::span<const Belief> coarse);

}  // namespace fairgamble

#endif  // FAIRGAMBLE_GAMBLER_HPP_
