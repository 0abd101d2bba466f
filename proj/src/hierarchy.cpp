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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "fairgamble/errors.hpp"

namespace fairgamble {

std::string to_string(CheckOutcome outcome) {
  switch (outcome) {
    case CheckOutcome::kHolds:
      return "holds";
    case CheckOutcome::kViolated:
      return "violated";
    case CheckOutcome::kPreconditionsViolated:
      return "preconditions-violated";
  }
  return "?";
}

namespace {

constexpr double kMembershipTol = 1e-12;

double BallRadius(const NormBall& ball, const PropertyValue& v, const PropertyModel& model) {
  if (ball.radius) return *ball.radius;
  if (!model.spec.is_scalar()) throw StructuralError("a matching norm ball needs a scalar property");
  const Gamble nu = model.identification.row(v);
  return ball.norm == Norm::kL1 ? nu.l1_norm() : nu.sup_norm();
}

double NormOf(const Gamble& g, Norm norm) { return norm == Norm::kL1 ? g.l1_norm() : g.sup_norm(); }

// sup_c ||s (l_v - l_c)||_1 for l = A (y - c)^2 + B on Y = {0, 1}:
// 2 s A |c - v| over c in [0, 1].
std::optional<double> RegretL1Bound(const RegretGambles& regret, const PropertyValue& v,
                                    const PropertyModel& model) {
  const auto& space = model.spec.space();
  if (model.spec.kind() != PropertyKind::kMean || model.loss.kind() != LossKind::kSquared) return std::nullopt;
  if (space.size() != 2 || !space.has_numeric_values() || space.value(0) != 0.0 || space.value(1) != 1.0) {
    return std::nullopt;
  }
  if (!(model.loss.scale() > 0.0)) return std::nullopt;
  const double x = v.scalar();
  return 2.0 * regret.scale * model.loss.scale() * std::max(x, 1.0 - x);
}

[[noreturn]] void Unsupported(const Restriction& outer, const Restriction& inner) {
  throw StructuralError("no containment certificate for " + describe(inner) + " inside " + describe(outer));
}

bool IsMember(const Gamble& g, const Restriction& outer, const PropertyValue& v, const PropertyModel& model) {
  if (const auto* ball = std::get_if<NormBall>(&outer)) {
    return NormOf(g, ball->norm) <= BallRadius(*ball, v, model) + kMembershipTol;
  }
  if (std::holds_alternative<NonPositive>(outer)) return g.is_non_positive();
  if (const auto* set = std::get_if<FiniteSet>(&outer)) {
    return std::find(set->gambles.begin(), set->gambles.end(), g) != set->gambles.end();
  }
  return false;
}

const Restriction& At(std::span<const Restriction> rs, std::size_t t, std::size_t T) {
  if (rs.size() == 1) return rs[0];
  if (rs.size() != T) throw StructuralError("restrictions must be one, or one per round");
  return rs[t];
}

void CheckSizes(const ProtocolRun& run, std::size_t beliefs) {
  if (run.size() == 0) throw PreconditionError("hierarchy checks need at least one round");
  if (beliefs != run.size()) throw StructuralError("beliefs must have one entry per round");
}

// Key of a belief: opt-out sorts first.
std::pair<bool, std::vector<double>> Key(const Belief& b) {
  if (!b) return {false, {}};
  return {true, std::vector<double>(b->weights().begin(), b->weights().end())};
}

// Whether forecasts and each restriction sequence are constant on the cells
// that group rounds by `key`. Appends failed precondition labels.
template <typename KeyFn>
void CheckConsistency(const ProtocolRun& run, KeyFn key, std::span<const std::span<const Restriction>> families,
                      std::vector<std::string>& failed) {
  using K = decltype(key(std::size_t{0}));
  std::map<K, std::size_t> first;
  bool forecast_ok = true;
  bool restriction_ok = true;
  const std::size_t T = run.size();
  for (std::size_t t = 0; t < T; ++t) {
    auto [it, fresh] = first.emplace(key(t), t);
    if (fresh) continue;
    const std::size_t s = it->second;
    forecast_ok = forecast_ok && run.forecasts[s] == run.forecasts[t];
    for (auto rs : families) restriction_ok = restriction_ok && At(rs, s, T) == At(rs, t, T);
  }
  if (!forecast_ok) failed.emplace_back("forecast constant on belief cells");
  if (!restriction_ok) failed.emplace_back("restriction constant on belief cells");
}

HierarchyCheck Finish(std::string name, double lhs, double rhs, double tol, std::vector<std::string> failed) {
  HierarchyCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.tol = tol;
  c.failed_preconditions = std::move(failed);
  if (!c.failed_preconditions.empty()) {
    c.outcome = CheckOutcome::kPreconditionsViolated;
  } else {
    c.outcome = c.inequality_holds() ? CheckOutcome::kHolds : CheckOutcome::kViolated;
  }
  return c;
}

double Capital(const ProtocolRun& run, const PropertyModel& model, std::span<const Belief> beliefs,
               std::span<const Restriction> restrictions) {
  GamblerSpec spec;
  spec.beliefs.assign(beliefs.begin(), beliefs.end());
  spec.restrictions.assign(restrictions.begin(), restrictions.end());
  const auto gambles = play(spec, run, model);
  return capital(gambles, run.outcomes);
}

}  // namespace

bool contains(const Restriction& outer, const Restriction& inner, const PropertyValue& v, const PropertyModel& model) {
  if (outer == inner) return true;
  if (const auto* set = std::get_if<FiniteSet>(&inner)) {
    if (std::holds_alternative<RegretGambles>(outer)) Unsupported(outer, inner);
    return std::all_of(set->gambles.begin(), set->gambles.end(),
                       [&](const Gamble& g) { return IsMember(g, outer, v, model); });
  }
  const auto* big = std::get_if<NormBall>(&outer);
  if (const auto* small = std::get_if<NormBall>(&inner); small && big) {
    const double r = BallRadius(*small, v, model);
    const double r_outer = BallRadius(*big, v, model);
    // Lsup(r) spans the cube whose corners have L1 norm n r.
    const double needed =
        small->norm == Norm::kLsup && big->norm == Norm::kL1 ? static_cast<double>(model.spec.num_outcomes()) * r : r;
    return needed <= r_outer + kMembershipTol;
  }
  if (const auto* regret = std::get_if<RegretGambles>(&inner); regret && big && big->norm == Norm::kL1) {
    const auto bound = RegretL1Bound(*regret, v, model);
    if (!bound) Unsupported(outer, inner);
    return *bound <= BallRadius(*big, v, model) + kMembershipTol;
  }
  Unsupported(outer, inner);
}

HierarchyCheck check_restriction_order(const ProtocolRun& run, const PropertyModel& model,
                                       std::span<const Belief> beliefs, std::span<const Restriction> g,
                                       std::span<const Restriction> g_prime, double tol) {
  CheckSizes(run, beliefs.size());
  const std::size_t T = run.size();
  std::vector<std::string> failed;
  if (!is_aligned_to_truth(beliefs, run)) failed.emplace_back("beliefs aligned to truth");
  for (std::size_t t = 0; t < T; ++t) {
    if (!contains(At(g_prime, t, T), At(g, t, T), run.forecasts[t], model)) {
      failed.push_back("containment certified at round " + std::to_string(t));
      break;
    }
  }
  const std::span<const Restriction> families[] = {g, g_prime};
  CheckConsistency(run, [&](std::size_t t) { return Key(beliefs[t]); }, families, failed);
  return Finish("restriction_order", Capital(run, model, beliefs, g), Capital(run, model, beliefs, g_prime), tol,
                std::move(failed));
}

HierarchyCheck check_refinement_order(const ProtocolRun& run, const PropertyModel& model,
                                      std::span<const Belief> coarse, std::span<const Belief> fine,
                                      std::span<const Restriction> restrictions, double tol) {
  CheckSizes(run, coarse.size());
  CheckSizes(run, fine.size());
  std::vector<std::string> failed;
  if (!refines(fine, coarse)) failed.emplace_back("fine beliefs refine coarse beliefs");
  if (!is_aligned_to_truth(fine, run)) failed.emplace_back("fine beliefs aligned to truth");
  const std::span<const Restriction> families[] = {restrictions};
  CheckConsistency(
      run, [&](std::size_t t) { return std::make_pair(Key(coarse[t]), Key(fine[t])); }, families, failed);
  return Finish("refinement_order", Capital(run, model, coarse, restrictions),
                Capital(run, model, fine, restrictions), tol, std::move(failed));
}

HierarchyCheck check_swap_vs_ece_bound(const ProtocolRun& run, const ScoringFunction& sf, double tol) {
  if (run.size() == 0) throw PreconditionError("hierarchy checks need at least one round");
  const auto& spec = sf.property();
  std::vector<std::string> failed;
  const auto& space = spec.space();
  const bool binary_mean = spec.kind() == PropertyKind::kMean && space.size() == 2 && space.has_numeric_values() &&
                           space.value(0) == 0.0 && space.value(1) == 1.0;
  if (!binary_mean) failed.emplace_back("binary mean property");
  const auto [lo, hi] = sf.range();
  if (lo < -1.0 || hi > 1.0) failed.emplace_back("loss bounded in [-1, 1]");
  const double swap = swap_regret(sf, run);
  double rhs = std::numeric_limits<double>::quiet_NaN();
  if (spec.kind() == PropertyKind::kMean) {
    rhs = 4.0 * static_cast<double>(run.size()) * expected_calibration_error(spec, run);
  }
  return Finish("swap_le_4_rescaled_ece", swap, rhs, tol, std::move(failed));
}

std::vector<HierarchyCheck> check_metric_orders(const ProtocolRun& run, const PropertyModel& model, double tol) {
  if (run.size() == 0) throw PreconditionError("hierarchy checks need at least one round");
  std::vector<HierarchyCheck> out;
  const double ext = external_regret(model.loss, run);
  const double swap = swap_regret(model.loss, run);
  const double zeroed = static_cast<double>(run.size()) * zeroed_loss_score(model.loss, run);
  out.push_back(Finish("external_le_swap", ext, swap, tol, {}));
  out.push_back(Finish("swap_le_zeroed", swap, zeroed, tol, {}));
  if (model.spec.kind() == PropertyKind::kMean) {
    const double bias = bias_in_the_large(model.spec, run);
    const double ece = expected_calibration_error(model.spec, run);
    const double indiv = individual_calibration(model.identification, run);
    out.push_back(Finish("bias_le_ece", bias, ece, tol, {}));
    out.push_back(Finish("ece_le_indiv_cal", ece, indiv, tol, {}));
  }
  return out;
}

}  // namespace fairgamble
