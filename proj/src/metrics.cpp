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

#include "fairgamble/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "fairgamble/errors.hpp"

namespace fairgamble {
namespace {

using Cells = std::map<PropertyValue, std::vector<std::size_t>>;

Cells ForecastCells(const ProtocolRun& run, const std::vector<bool>* members = nullptr) {
  Cells cells;
  for (std::size_t t = 0; t < run.size(); ++t) {
    if (members && !(*members)[t]) continue;
    cells[run.forecasts[t]].push_back(t);
  }
  return cells;
}

std::vector<Outcome> OutcomesAt(const ProtocolRun& run, const std::vector<std::size_t>& rounds) {
  std::vector<Outcome> ys;
  ys.reserve(rounds.size());
  for (std::size_t t : rounds) ys.push_back(run.outcomes[t]);
  return ys;
}

double SumLoss(const ScoringFunction& sf, std::span<const Outcome> ys, const PropertyValue& c) {
  double s = 0.0;
  for (Outcome y : ys) s += sf(y, c);
  return s;
}

void RequireRounds(const ProtocolRun& run) {
  if (run.size() == 0) throw PreconditionError("metric of an empty run");
  if (run.forecasts.size() != run.size()) throw StructuralError("forecasts and outcomes differ in length");
}

void RequireMean(const PropertySpec& spec) {
  if (spec.kind() != PropertyKind::kMean) throw StructuralError("this calibration metric is defined for the mean");
}

void RequireScalar(const IdentificationFunction& idf) {
  if (!idf.property().is_scalar()) {
    throw StructuralError("calibration metrics need a scalar identification function");
  }
}

void RequireGroups(const ProtocolRun& run, const GroupSystem& groups) {
  if (groups.empty()) throw PreconditionError("empty group system");
  for (const auto& g : groups) {
    if (g.members.size() != run.size()) throw StructuralError("group '" + g.name + "' does not cover every round");
  }
}

// max_c sum_{t in rounds} l(y_t, gamma) - l(y_t, c).
double CellRegret(const ScoringFunction& sf, const ProtocolRun& run, const PropertyValue& gamma,
                  const std::vector<std::size_t>& rounds) {
  const auto ys = OutcomesAt(run, rounds);
  return SumLoss(sf, ys, gamma) - SumLoss(sf, ys, best_constant(sf, ys));
}

double SumNu(const IdentificationFunction& idf, const ProtocolRun& run, const PropertyValue& gamma,
             const std::vector<std::size_t>& rounds) {
  double s = 0.0;
  for (std::size_t t : rounds) s += idf(run.outcomes[t], gamma);
  return s;
}

}  // namespace

GroupSystem groups_from_tags(const ProtocolRun& run, bool include_all) {
  GroupSystem out;
  if (include_all) out.push_back({kAllRoundsGroup, std::vector<bool>(run.size(), true)});
  std::set<std::string> tags;
  for (const auto& ts : run.groups) tags.insert(ts.begin(), ts.end());
  for (const auto& tag : tags) {
    Group g{tag, std::vector<bool>(run.size(), false)};
    for (std::size_t t = 0; t < run.groups.size(); ++t) {
      g.members[t] = std::find(run.groups[t].begin(), run.groups[t].end(), tag) != run.groups[t].end();
    }
    out.push_back(std::move(g));
  }
  return out;
}

ProtocolRun bin_forecasts(const ProtocolRun& run, double width) {
  if (!(width > 0.0)) throw PreconditionError("bin width must be positive");
  const double lo = run.space.min_value(), hi = run.space.max_value();
  ProtocolRun out = run;
  for (auto& v : out.forecasts) {
    if (!v.is_scalar()) throw StructuralError("binning applies to scalar forecasts only");
    const double k = std::floor((v.scalar() - lo) / width);
    v = PropertyValue(std::clamp(lo + (k + 0.5) * width, lo, hi));
  }
  return out;
}

PropertyValue best_constant(const ScoringFunction& sf, std::span<const Outcome> outcomes) {
  if (outcomes.empty()) throw PreconditionError("best constant of no outcomes");
  const auto& spec = sf.property();
  switch (sf.kind()) {
    case LossKind::kSquared: {
      double s = 0.0;
      for (Outcome y : outcomes) s += spec.space().value(y);
      return PropertyValue(s / static_cast<double>(outcomes.size()));
    }
    case LossKind::kPinball: {
      // The pinball risk is piecewise linear with kinks at the outcome values.
      std::set<double> candidates;
      for (Outcome y : outcomes) candidates.insert(spec.space().value(y));
      PropertyValue best;
      double best_loss = 0.0;
      for (double c : candidates) {
        const double l = SumLoss(sf, outcomes, c);
        if (best.coords().empty() || l < best_loss) {
          best = PropertyValue(c);
          best_loss = l;
        }
      }
      return best;
    }
    case LossKind::kBrier:
      return PropertyValue(empirical_distribution(spec.space(), outcomes));
  }
  throw StructuralError("unknown loss");
}

double external_regret(const ScoringFunction& sf, const ProtocolRun& run) {
  RequireRounds(run);
  double s = 0.0;
  for (std::size_t t = 0; t < run.size(); ++t) s += sf(run.outcomes[t], run.forecasts[t]);
  return s - SumLoss(sf, run.outcomes, best_constant(sf, run.outcomes));
}

double swap_regret(const ScoringFunction& sf, const ProtocolRun& run) {
  RequireRounds(run);
  double s = 0.0;
  for (const auto& [gamma, rounds] : ForecastCells(run)) s += CellRegret(sf, run, gamma, rounds);
  return s;
}

double groupwise_swap_regret(const ScoringFunction& sf, const ProtocolRun& run, const GroupSystem& groups) {
  RequireRounds(run);
  RequireGroups(run, groups);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& g : groups) {
    double s = 0.0;
    for (const auto& [gamma, rounds] : ForecastCells(run, &g.members)) s += CellRegret(sf, run, gamma, rounds);
    best = std::max(best, s);
  }
  return best / static_cast<double>(run.size());
}

double zeroed_loss_score(const ScoringFunction& sf, const ProtocolRun& run) {
  RequireRounds(run);
  double s = 0.0;
  for (std::size_t t = 0; t < run.size(); ++t) {
    const Outcome y = run.outcomes[t];
    const auto oracle = evaluate_property(sf.property(), dirac(run.space, y)).representative();
    s += sf(y, run.forecasts[t]) - sf(y, oracle);
  }
  return s / static_cast<double>(run.size());
}

double bias_in_the_large(const PropertySpec& spec, const ProtocolRun& run) {
  RequireMean(spec);
  RequireRounds(run);
  double s = 0.0;
  for (std::size_t t = 0; t < run.size(); ++t) s += run.space.value(run.outcomes[t]) - run.forecasts[t].scalar();
  return std::abs(s) / static_cast<double>(run.size());
}

double expected_calibration_error(const PropertySpec& spec, const ProtocolRun& run) {
  RequireMean(spec);
  RequireRounds(run);
  const auto idf = IdentificationFunction::For(spec);
  double s = 0.0;
  for (const auto& [gamma, rounds] : ForecastCells(run)) s += std::abs(SumNu(idf, run, gamma, rounds));
  return s / static_cast<double>(run.size());
}

double calibration_score_l2(const PropertySpec& spec, const ProtocolRun& run) {
  RequireMean(spec);
  RequireRounds(run);
  const auto idf = IdentificationFunction::For(spec);
  const double T = static_cast<double>(run.size());
  double s = 0.0;
  for (const auto& [gamma, rounds] : ForecastCells(run)) {
    const double sum = SumNu(idf, run, gamma, rounds);
    s += sum * sum / (T * static_cast<double>(rounds.size()));
  }
  return s;
}

double multicalibration(const IdentificationFunction& idf, const ProtocolRun& run, const GroupSystem& groups,
                        Flavor flavor) {
  RequireScalar(idf);
  RequireRounds(run);
  RequireGroups(run, groups);
  const double T = static_cast<double>(run.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& g : groups) {
    double s = 0.0;
    for (const auto& [gamma, rounds] : ForecastCells(run, &g.members)) {
      const double sum = SumNu(idf, run, gamma, rounds);
      s += flavor == Flavor::kL1 ? std::abs(sum) / T : sum * sum / (T * static_cast<double>(rounds.size()));
    }
    best = std::max(best, s);
  }
  return best;
}

double individual_calibration(const IdentificationFunction& idf, const ProtocolRun& run) {
  RequireScalar(idf);
  RequireRounds(run);
  double s = 0.0;
  for (std::size_t t = 0; t < run.size(); ++t) s += std::abs(idf(run.outcomes[t], run.forecasts[t]));
  return s / static_cast<double>(run.size());
}

namespace {

struct MetricName {
  MetricId id;
  const char* name;
};

constexpr MetricName kMetricNames[] = {
    {MetricId::kExternalRegret, "external_regret"},
    {MetricId::kSwapRegret, "swap_regret"},
    {MetricId::kGroupSwapRegret, "group_swap_regret"},
    {MetricId::kZeroedLoss, "zeroed_loss"},
    {MetricId::kBiasLarge, "bias_large"},
    {MetricId::kEce, "ece"},
    {MetricId::kCalL2, "cal_l2"},
    {MetricId::kMulticalL1, "multical_l1"},
    {MetricId::kMulticalL2, "multical_l2"},
    {MetricId::kIndivCal, "indiv_cal"},
};

}  // namespace

std::string to_string(MetricId id) {
  for (const auto& m : kMetricNames) {
    if (m.id == id) return m.name;
  }
  return "?";
}

MetricId parse_metric_id(const std::string& id) {
  for (const auto& m : kMetricNames) {
    if (id == m.name) return m.id;
  }
  throw StructuralError("unknown metric '" + id + "'");
}

const std::vector<MetricId>& all_metric_ids() {
  static const std::vector<MetricId> ids = [] {
    std::vector<MetricId> v;
    for (const auto& m : kMetricNames) v.push_back(m.id);
    return v;
  }();
  return ids;
}

bool metric_applies(MetricId id, const PropertyModel& model) {
  switch (id) {
    case MetricId::kBiasLarge:
    case MetricId::kEce:
    case MetricId::kCalL2:
      return model.spec.kind() == PropertyKind::kMean;
    case MetricId::kMulticalL1:
    case MetricId::kMulticalL2:
    case MetricId::kIndivCal:
      return model.spec.is_scalar();
    default:
      return true;
  }
}

double direct_metric(MetricId id, const ProtocolRun& run, const PropertyModel& model, const GroupSystem& groups) {
  switch (id) {
    case MetricId::kExternalRegret:
      return external_regret(model.loss, run);
    case MetricId::kSwapRegret:
      return swap_regret(model.loss, run);
    case MetricId::kGroupSwapRegret:
      return groupwise_swap_regret(model.loss, run, groups);
    case MetricId::kZeroedLoss:
      return zeroed_loss_score(model.loss, run);
    case MetricId::kBiasLarge:
      return bias_in_the_large(model.spec, run);
    case MetricId::kEce:
      return expected_calibration_error(model.spec, run);
    case MetricId::kCalL2:
      return calibration_score_l2(model.spec, run);
    case MetricId::kMulticalL1:
      return multicalibration(model.identification, run, groups, Flavor::kL1);
    case MetricId::kMulticalL2:
      return multicalibration(model.identification, run, groups, Flavor::kL2);
    case MetricId::kIndivCal:
      return individual_calibration(model.identification, run);
  }
  throw StructuralError("unknown metric");
}

namespace {

struct Harness {
  const ProtocolRun& run;
  const PropertyModel& model;
  std::size_t gamblers = 0;

  double Capital(const BeliefRule& rule, const Restriction& restriction) {
    ++gamblers;
    GamblerSpec spec;
    spec.beliefs = make_beliefs(rule, run);
    spec.restrictions = {restriction};
    return capital(play(spec, run, model), run.outcomes);
  }
};

// Forecast levels in ascending order.
std::vector<PropertyValue> Levels(const ProtocolRun& run) {
  std::set<PropertyValue> s(run.forecasts.begin(), run.forecasts.end());
  return {s.begin(), s.end()};
}

std::size_t CellSize(const ProtocolRun& run, const PropertyValue& gamma, const std::vector<bool>* members) {
  std::size_t n = 0;
  for (std::size_t t = 0; t < run.size(); ++t) {
    if ((!members || (*members)[t]) && run.forecasts[t] == gamma) ++n;
  }
  return n;
}

}  // namespace

Recovery recover_via_gamblers(MetricId id, const ProtocolRun& run, const PropertyModel& model,
                              const GroupSystem& groups, Norm norm) {
  if (!metric_applies(id, model)) {
    throw StructuralError("metric " + to_string(id) + " is not defined for " + model.id());
  }
  Recovery out{id};
  out.direct = direct_metric(id, run, model, groups);
  const double T = static_cast<double>(run.size());
  const Restriction ball = NormBall{norm, std::nullopt};
  const Restriction regret = RegretGambles{};
  Harness h{run, model};

  switch (id) {
    case MetricId::kExternalRegret:
      out.via_capital = T * h.Capital({BeliefKind::kAverage, {}, {}}, regret);
      break;
    case MetricId::kSwapRegret: {
      double s = 0.0;
      for (const auto& gamma : Levels(run)) s += h.Capital({BeliefKind::kConditionalOnForecast, gamma, {}}, regret);
      out.via_capital = T * s;
      break;
    }
    case MetricId::kGroupSwapRegret:
    case MetricId::kMulticalL1:
    case MetricId::kMulticalL2: {
      const Restriction& r = id == MetricId::kGroupSwapRegret ? regret : ball;
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& g : groups) {
        double s = 0.0;
        for (const auto& gamma : Levels(run)) {
          const double k = h.Capital({BeliefKind::kConditionalOnForecastAndGroup, gamma, g.members}, r);
          if (id == MetricId::kMulticalL2) {
            const std::size_t cell = CellSize(run, gamma, &g.members);
            if (cell > 0) s += T / static_cast<double>(cell) * k * k;
          } else {
            s += std::abs(k);
          }
        }
        best = std::max(best, s);
      }
      out.via_capital = best;
      break;
    }
    case MetricId::kZeroedLoss:
      out.via_capital = h.Capital({BeliefKind::kClairvoyant, {}, {}}, regret);
      break;
    case MetricId::kBiasLarge:
      out.via_capital = h.Capital({BeliefKind::kAverage, {}, {}}, ball);
      break;
    case MetricId::kEce:
    case MetricId::kCalL2: {
      double s = 0.0;
      for (const auto& gamma : Levels(run)) {
        const double k = h.Capital({BeliefKind::kConditionalOnForecast, gamma, {}}, ball);
        s += id == MetricId::kEce ? std::abs(k) : T / static_cast<double>(CellSize(run, gamma, nullptr)) * k * k;
      }
      out.via_capital = s;
      break;
    }
    case MetricId::kIndivCal:
      out.via_capital = h.Capital({BeliefKind::kClairvoyant, {}, {}}, ball);
      break;
  }
  out.gamblers = h.gamblers;
  out.abs_diff = std::abs(out.direct - out.via_capital);
  return out;
}

WrappedMetric wrap_single_instance_metric(const ProtocolRun& run, const InstanceEvaluator& f, const Aggregation& agg) {
  RequireRounds(run);
  const std::size_t T = run.size(), n = run.space.size();
  WrappedMetric out;
  std::vector<double> per_round(T);
  for (std::size_t s = 0; s < T; ++s) {
    std::vector<Gamble> gs(T, Gamble::Zero(n));
    std::vector<double> row(n);
    for (Outcome y = 0; y < n; ++y) row[y] = f(s, y, run.forecasts[s]);
    gs[s] = Gamble(std::move(row));
    per_round[s] = gs[s][run.outcomes[s]];
    out.capitals.push_back(capital(gs, run.outcomes));
    out.gamblers.push_back(std::move(gs));
  }
  out.direct = agg(per_round);
  std::vector<double> rescaled(out.capitals);
  for (double& k : rescaled) k *= static_cast<double>(T);
  out.via_capital = agg(rescaled);
  return out;
}

}  // namespace fairgamble
