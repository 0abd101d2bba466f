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

#include "fairgamble/gambler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "fairgamble/availability.hpp"
#include "fairgamble/errors.hpp"
#include "fairgamble/lp.hpp"

namespace fairgamble {

void ProtocolRun::validate(const PropertySpec& spec) const {
  if (!(spec.space() == space)) throw StructuralError("run and property use different outcome spaces");
  if (forecasts.size() != outcomes.size()) throw StructuralError("forecasts and outcomes differ in length");
  if (!groups.empty() && groups.size() != outcomes.size()) throw StructuralError("group tags must cover every round");
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    if (outcomes[t] >= space.size()) throw StructuralError("outcome index out of range at round " + std::to_string(t));
    if (!spec.in_value_set(forecasts[t])) {
      throw DomainError("forecast " + forecasts[t].to_string() + " at round " + std::to_string(t) +
                        " is outside the value set");
    }
  }
}

std::string to_string(Norm norm) { return norm == Norm::kL1 ? "l1" : "lsup"; }

Norm parse_norm(const std::string& id) {
  if (id == "l1") return Norm::kL1;
  if (id == "lsup" || id == "linf") return Norm::kLsup;
  throw StructuralError("unknown norm '" + id + "'");
}

std::string describe(const Restriction& r) {
  struct Visitor {
    std::string operator()(const RegretGambles& x) const {
      return x.scale == 1.0 ? "regret" : "regret*" + format_double(x.scale);
    }
    std::string operator()(const NormBall& x) const {
      return to_string(x.norm) + "_ball(" + (x.radius ? format_double(*x.radius) : std::string("match")) + ")";
    }
    std::string operator()(const NonPositive&) const { return "nonpositive"; }
    std::string operator()(const FiniteSet& x) const { return "finite(" + std::to_string(x.gambles.size()) + ")"; }
  };
  return std::visit(Visitor{}, r);
}

Restriction parse_restriction(const std::string& id) {
  auto number = [&](std::string_view text) {
    double x = 0.0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(x)) {
      throw StructuralError("bad number in restriction '" + id + "'");
    }
    return x;
  };
  if (id == "nonpositive") return NonPositive{};
  if (id == "regret") return RegretGambles{};
  if (id.rfind("regret*", 0) == 0) return RegretGambles{number(std::string_view(id).substr(7))};
  const auto open = id.find("_ball(");
  if (open != std::string::npos && id.back() == ')') {
    NormBall ball{parse_norm(id.substr(0, open)), std::nullopt};
    const std::string_view arg = std::string_view(id).substr(open + 6, id.size() - open - 7);
    if (arg != "match") ball.radius = number(arg);
    return ball;
  }
  throw StructuralError("unknown restriction '" + id + "'");
}

const Restriction& GamblerSpec::restriction(std::size_t t) const {
  if (restrictions.empty()) throw StructuralError("gambler has no restriction");
  if (restrictions.size() == 1) return restrictions.front();
  if (t >= restrictions.size()) throw StructuralError("no restriction for round " + std::to_string(t));
  return restrictions[t];
}

Gamble rational_gamble(const LevelSetPolytope& ls, const Distribution& belief, Norm norm, double radius) {
  const std::size_t n = ls.dimension();
  if (belief.size() != n) throw StructuralError("belief does not match the level set dimension");
  if (!(radius >= 0.0)) throw DomainError("norm-ball radius must be non-negative");
  const std::size_t ne = ls.eq_rows().size(), nu = ls.ub_rows().size();
  // Variables: g (n, free) | t (free) | lambda (ne, free) | mu (nu, >= 0) | u (n, L1 only).
  const std::size_t off_t = n, off_l = n + 1, off_m = off_l + ne, off_u = off_m + nu;
  const std::size_t nvars = off_u + (norm == Norm::kL1 ? n : 0);
  LinearProgram lp;
  lp.num_vars = nvars;
  lp.objective.assign(nvars, 0.0);
  for (std::size_t y = 0; y < n; ++y) lp.objective[y] = belief[y];
  lp.is_free.assign(nvars, false);
  for (std::size_t j = 0; j < off_m; ++j) lp.is_free[j] = true;

  // sup over the level set of <phi, g> <= 0, via its dual:
  // g <= t + A^T lambda + B^T mu and t + a.lambda + b.mu <= 0.
  for (std::size_t y = 0; y < n; ++y) {
    std::vector<double> row(nvars, 0.0);
    row[y] = 1.0;
    row[off_t] = -1.0;
    for (std::size_t i = 0; i < ne; ++i) row[off_l + i] = -ls.eq_rows()[i][y];
    for (std::size_t j = 0; j < nu; ++j) row[off_m + j] = -ls.ub_rows()[j][y];
    lp.add_ub(std::move(row), 0.0);
  }
  {
    std::vector<double> row(nvars, 0.0);
    row[off_t] = 1.0;
    for (std::size_t i = 0; i < ne; ++i) row[off_l + i] = ls.eq_rhs()[i];
    for (std::size_t j = 0; j < nu; ++j) row[off_m + j] = ls.ub_rhs()[j];
    lp.add_ub(std::move(row), 0.0);
  }
  if (norm == Norm::kL1) {
    std::vector<double> total(nvars, 0.0);
    for (std::size_t y = 0; y < n; ++y) {
      std::vector<double> hi(nvars, 0.0), lo(nvars, 0.0);
      hi[y] = 1.0;
      hi[off_u + y] = -1.0;
      lo[y] = -1.0;
      lo[off_u + y] = -1.0;
      lp.add_ub(std::move(hi), 0.0);
      lp.add_ub(std::move(lo), 0.0);
      total[off_u + y] = 1.0;
    }
    lp.add_ub(std::move(total), radius);
  } else {
    for (std::size_t y = 0; y < n; ++y) {
      std::vector<double> hi(nvars, 0.0), lo(nvars, 0.0);
      hi[y] = 1.0;
      lo[y] = -1.0;
      lp.add_ub(std::move(hi), radius);
      lp.add_ub(std::move(lo), radius);
    }
  }
  auto sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal || sol.residual > 1e-9) {
    throw NumericError("rational gamble LP failed (" + to_string(sol.status) + ")", sol.residual);
  }
  return Gamble(std::vector<double>(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n)));
}

namespace {

double Norm1(const Gamble& g) { return g.l1_norm(); }

Gamble SelectNormBall(const NormBall& ball, const Distribution& b, const PropertyValue& v, const PropertyModel& model) {
  const auto& spec = model.spec;
  if (!spec.is_scalar()) {
    if (!ball.radius) {
      throw StructuralError("a norm ball matching the identification function needs a scalar property");
    }
    return rational_gamble(level_set(spec, v), b, ball.norm, *ball.radius);
  }
  const Gamble nu = model.identification.row(v);
  if (nu.is_zero()) throw PreconditionError("identification function vanishes at forecast " + v.to_string());
  const double norm_nu = ball.norm == Norm::kL1 ? Norm1(nu) : nu.sup_norm();
  const double r = ball.radius.value_or(norm_nu);
  if (ball.norm == Norm::kLsup) return rational_gamble(level_set(spec, v), b, ball.norm, r);

  const double sign = expectation(b, nu) > 0.0 ? 1.0 : -1.0;
  Gamble g = (sign * r / norm_nu) * nu;
  if (spec.kind() == PropertyKind::kQuantile) {
    auto ls = level_set(spec, v);
    if (!is_available(g, ls).available) return rational_gamble(ls, b, ball.norm, r);
  }
  return g;
}

Gamble SelectFinite(const FiniteSet& set, const Distribution& b, const PropertyValue& v, const PropertyModel& model) {
  const std::size_t n = model.spec.num_outcomes();
  bool has_zero = false;
  for (const auto& g : set.gambles) {
    if (g.size() != n) throw StructuralError("finite restriction gamble has the wrong dimension");
    has_zero = has_zero || g.is_zero();
  }
  if (!has_zero) throw StructuralError("finite restriction must contain the zero gamble");
  auto ls = level_set(model.spec, v);
  const Gamble* best = nullptr;
  double best_value = 0.0;
  for (const auto& g : set.gambles) {
    if (!is_available(g, ls).available) continue;
    const double e = expectation(b, g);
    if (!best || e > best_value) {
      best = &g;
      best_value = e;
    }
  }
  return *best;
}

}  // namespace

Gamble select_gamble(const Restriction& restriction, const Belief& belief, const PropertyValue& forecast,
                     const PropertyModel& model) {
  const std::size_t n = model.spec.num_outcomes();
  if (!belief) return Gamble::Zero(n);
  if (belief->size() != n) throw StructuralError("belief does not match the outcome space");
  model.spec.require_in_value_set(forecast);
  const Distribution& b = *belief;

  if (const auto* r = std::get_if<RegretGambles>(&restriction)) {
    if (!(r->scale > 0.0)) throw DomainError("regret gamble scale must be positive");
    const PropertyValue c = evaluate_property(model.spec, b).representative();
    return r->scale * (model.loss.row(forecast) - model.loss.row(c));
  }
  if (const auto* r = std::get_if<NormBall>(&restriction)) return SelectNormBall(*r, b, forecast, model);
  if (std::holds_alternative<NonPositive>(restriction)) return Gamble::Zero(n);
  return SelectFinite(std::get<FiniteSet>(restriction), b, forecast, model);
}

std::vector<Gamble> play(const GamblerSpec& spec, const ProtocolRun& run, const PropertyModel& model) {
  if (spec.beliefs.size() != run.size()) throw StructuralError("one belief per round expected");
  if (spec.restrictions.size() != 1 && spec.restrictions.size() != run.size()) {
    throw StructuralError("restrictions must be a single entry or one per round");
  }
  if (spec.epsilon < 0.0) throw DomainError("approximation slack must be non-negative");
  std::vector<Gamble> out;
  out.reserve(run.size());
  for (std::size_t t = 0; t < run.size(); ++t) {
    out.push_back(select_gamble(spec.restriction(t), spec.beliefs[t], run.forecasts[t], model));
  }
  return out;
}

double capital(std::span<const Gamble> gambles, std::span<const Outcome> outcomes) {
  if (gambles.size() != outcomes.size()) throw StructuralError("one gamble per outcome expected");
  if (outcomes.empty()) throw PreconditionError("capital of an empty run");
  double sum = 0.0;
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    if (outcomes[t] >= gambles[t].size()) throw StructuralError("outcome index out of range");
    sum += gambles[t][outcomes[t]];
  }
  return sum / static_cast<double>(outcomes.size());
}

std::string to_string(BeliefKind kind) {
  switch (kind) {
    case BeliefKind::kAverage:
      return "average";
    case BeliefKind::kConditionalOnForecast:
      return "conditional";
    case BeliefKind::kConditionalOnForecastAndGroup:
      return "conditional_group";
    case BeliefKind::kClairvoyant:
      return "clairvoyant";
  }
  return "?";
}

std::vector<Belief> make_beliefs(const BeliefRule& rule, const ProtocolRun& run) {
  const std::size_t T = run.size();
  std::vector<Belief> out(T);
  switch (rule.kind) {
    case BeliefKind::kAverage: {
      if (T == 0) return out;
      const Distribution d = empirical_distribution(run.space, std::span<const Outcome>(run.outcomes));
      std::fill(out.begin(), out.end(), d);
      return out;
    }
    case BeliefKind::kClairvoyant:
      for (std::size_t t = 0; t < T; ++t) out[t] = dirac(run.space, run.outcomes[t]);
      return out;
    case BeliefKind::kConditionalOnForecast:
    case BeliefKind::kConditionalOnForecastAndGroup:
      break;
  }
  const bool grouped = rule.kind == BeliefKind::kConditionalOnForecastAndGroup;
  if (grouped && rule.members.size() != T) throw StructuralError("group membership must cover every round");
  if (run.forecasts.size() != T) throw StructuralError("forecasts and outcomes differ in length");
  std::map<PropertyValue, std::vector<Outcome>> cells;
  for (std::size_t t = 0; t < T; ++t) {
    if (grouped && !rule.members[t]) continue;
    if (rule.anchor && !(run.forecasts[t] == *rule.anchor)) continue;
    cells[run.forecasts[t]].push_back(run.outcomes[t]);
  }
  std::map<PropertyValue, Distribution> beliefs;
  for (const auto& [v, ys] : cells) beliefs.emplace(v, empirical_distribution(run.space, std::span<const Outcome>(ys)));
  for (std::size_t t = 0; t < T; ++t) {
    if (grouped && !rule.members[t]) continue;
    auto it = beliefs.find(run.forecasts[t]);
    if (it != beliefs.end()) out[t] = it->second;
  }
  return out;
}

namespace {

std::map<std::vector<double>, std::vector<std::size_t>> Cells(std::span<const Belief> beliefs) {
  std::map<std::vector<double>, std::vector<std::size_t>> cells;
  for (std::size_t t = 0; t < beliefs.size(); ++t) {
    if (!beliefs[t]) continue;
    auto w = beliefs[t]->weights();
    cells[std::vector<double>(w.begin(), w.end())].push_back(t);
  }
  return cells;
}

bool Close(std::span<const double> a, std::span<const double> b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

}  // namespace

bool is_aligned_to_truth(std::span<const Belief> beliefs, const ProtocolRun& run) {
  if (beliefs.size() != run.size()) return false;
  for (const auto& [w, rounds] : Cells(beliefs)) {
    std::vector<Outcome> ys;
    for (std::size_t t : rounds) ys.push_back(run.outcomes[t]);
    const Distribution emp = empirical_distribution(run.space, std::span<const Outcome>(ys));
    if (!Close(w, emp.weights(), 1e-12)) return false;
  }
  return true;
}

bool refines(std::span<const Belief> fine, std::span<const Belief> coarse) {
  if (fine.size() != coarse.size()) return false;
  for (const auto& [w, rounds] : Cells(coarse)) {
    std::vector<double> avg(w.size(), 0.0);
    for (std::size_t t : rounds) {
      if (!fine[t] || fine[t]->size() != w.size()) return false;
      for (std::size_t i = 0; i < w.size(); ++i) avg[i] += (*fine[t])[i];
    }
    for (double& x : avg) x /= static_cast<double>(rounds.size());
    if (!Close(w, avg, 1e-12)) return false;
  }
  return true;
}

}  // namespace fairgamble
