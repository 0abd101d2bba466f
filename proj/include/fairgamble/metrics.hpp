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

// Forecast evaluation metrics computed directly from (forecast, outcome)
// pairs, and their reconstruction from the capital of suitably equipped
// gamblers.

#ifndef FAIRGAMBLE_METRICS_HPP_
#define FAIRGAMBLE_METRICS_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fairgamble/gambler.hpp"
#include "fairgamble/properties.hpp"

namespace fairgamble {

struct Group {
  std::string name;
  std::vector<bool> members;  // one flag per round
};
using GroupSystem = std::vector<Group>;

inline constexpr const char* kAllRoundsGroup = "*";

// One group per distinct tag (sorted by name), optionally preceded by the
// group of all rounds.
GroupSystem groups_from_tags(const ProtocolRun& run, bool include_all = true);

// Snaps scalar forecasts to the centre of width-w bins anchored at the
// smallest outcome value (clamped to the value range).
ProtocolRun bin_forecasts(const ProtocolRun& run, double width);

// argmin_c sum_i l(y_i, c); exact for the shipped losses.
PropertyValue best_constant(const ScoringFunction& sf, std::span<const Outcome> outcomes);

double external_regret(const ScoringFunction& sf, const ProtocolRun& run);
double swap_regret(const ScoringFunction& sf, const ProtocolRun& run);
double groupwise_swap_regret(const ScoringFunction& sf, const ProtocolRun& run, const GroupSystem& groups);
double zeroed_loss_score(const ScoringFunction& sf, const ProtocolRun& run);

// Mean property only.
double bias_in_the_large(const PropertySpec& spec, const ProtocolRun& run);
double expected_calibration_error(const PropertySpec& spec, const ProtocolRun& run);
double calibration_score_l2(const PropertySpec& spec, const ProtocolRun& run);

enum class Flavor { kL1, kL2 };
// Scalar identification functions only.
double multicalibration(const IdentificationFunction& idf, const ProtocolRun& run, const GroupSystem& groups,
                        Flavor flavor);
double individual_calibration(const IdentificationFunction& idf, const ProtocolRun& run);

enum class MetricId {
  kExternalRegret,
  kSwapRegret,
  kGroupSwapRegret,
  kZeroedLoss,
  kBiasLarge,
  kEce,
  kCalL2,
  kMulticalL1,
  kMulticalL2,
  kIndivCal,
};
std::string to_string(MetricId id);
MetricId parse_metric_id(const std::string& id);
const std::vector<MetricId>& all_metric_ids();
// Whether the metric is defined for the model (calibration metrics need the
// mean or a scalar identification function).
bool metric_applies(MetricId id, const PropertyModel& model);

double direct_metric(MetricId id, const ProtocolRun& run, const PropertyModel& model, const GroupSystem& groups);

struct Recovery {
  MetricId id;
  double direct = 0.0;
  double via_capital = 0.0;
  double abs_diff = 0.0;
  std::size_t gamblers = 0;
};

// Builds the gambler family that reproduces the metric (beliefs from
// make_beliefs, one restriction per family), plays it and aggregates the
// capitals. Calibration families use an L1 (or `norm`) ball of radius
// ||nu_v||.
Recovery recover_via_gamblers(MetricId id, const ProtocolRun& run, const PropertyModel& model,
                              const GroupSystem& groups, Norm norm = Norm::kL1);

using InstanceEvaluator = std::function<double(std::size_t t, Outcome y, const PropertyValue& v)>;
using Aggregation = std::function<double(std::span<const double>)>;

struct WrappedMetric {
  std::vector<std::vector<Gamble>> gamblers;  // gamblers[s][t]
  std::vector<double> capitals;
  double direct = 0.0;        // A over per-round values
  double via_capital = 0.0;   // A(|T| * capitals)
};

// One gambler per round s, playing y -> f_s(y, v_s) in round s and 0 elsewhere.
WrappedMetric wrap_single_instance_metric(const ProtocolRun& run, const InstanceEvaluator& f, const Aggregation& agg);

}  // namespace fairgamble

#endif  // FAIRGAMBLE_METRICS_HPP_
