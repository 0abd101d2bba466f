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

#include "fairgamble/availability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fairgamble/errors.hpp"
#include "fairgamble/lp.hpp"

namespace fairgamble {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double MinSlack(const Gamble& dominating, const Gamble& g) {
  double s = kInf;
  for (Outcome y = 0; y < g.size(); ++y) s = std::min(s, dominating[y] - g[y]);
  return s;
}

AvailabilityVerdict SupByLp(const Gamble& g, const LevelSetPolytope& ls) {
  LinearProgram lp;
  lp.num_vars = ls.dimension();
  lp.objective.assign(g.values().begin(), g.values().end());
  lp.add_eq(std::vector<double>(ls.dimension(), 1.0), 1.0);
  for (std::size_t i = 0; i < ls.eq_rows().size(); ++i) lp.add_eq(ls.eq_rows()[i], ls.eq_rhs()[i]);
  for (std::size_t i = 0; i < ls.ub_rows().size(); ++i) lp.add_ub(ls.ub_rows()[i], ls.ub_rhs()[i]);
  auto sol = solve_lp(lp);
  if (sol.status == LpStatus::kInfeasible) throw DomainError("level set is empty");
  if (sol.status != LpStatus::kOptimal || sol.residual > 1e-9) {
    throw NumericError("availability LP did not converge (" + to_string(sol.status) + ")", sol.residual);
  }
  for (double& w : sol.x) w = std::max(w, 0.0);
  Distribution witness(sol.x);
  return {false, expectation(witness, g), witness};
}

}  // namespace

AvailabilityVerdict is_available(const Gamble& g, const LevelSetPolytope& ls, double tol, AvailabilityMethod method) {
  if (g.size() != ls.dimension()) throw StructuralError("gamble does not match the level set dimension");
  if (!(tol >= 0.0)) throw PreconditionError("availability tolerance must be non-negative");
  const bool use_vertices =
      method == AvailabilityMethod::kVertices || (method == AvailabilityMethod::kAuto && ls.has_vertices());
  AvailabilityVerdict v;
  if (use_vertices) {
    const auto& verts = ls.vertices();
    v.sup_value = -kInf;
    for (const auto& phi : verts) {
      const double e = expectation(phi, g);
      if (e > v.sup_value) {
        v.sup_value = e;
        v.witness = phi;
      }
    }
  } else {
    v = SupByLp(g, ls);
  }
  v.available = v.sup_value <= tol;
  return v;
}

Gamble regret_gamble(const ScoringFunction& sf, const PropertyValue& gamma, const PropertyValue& c) {
  sf.property().require_in_value_set(gamma);
  sf.property().require_in_value_set(c);
  return sf.row(gamma) - sf.row(c);
}

Gamble scaled_regret_gamble(const ScoringFunction& sf, const PropertyValue& gamma, const PropertyValue& c,
                            double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("regret scale must be a finite non-negative number");
  return beta * regret_gamble(sf, gamma, c);
}

Gamble calibration_gamble(const IdentificationFunction& idf, const PropertyValue& gamma, double alpha) {
  idf.property().require_in_value_set(gamma);
  return alpha * idf.row(gamma);
}

Gamble calibration_gamble(const IdentificationFunction& idf, const PropertyValue& gamma,
                          std::span<const double> alpha) {
  idf.property().require_in_value_set(gamma);
  auto comps = idf.components(gamma);
  if (alpha.size() != comps.size()) throw StructuralError("one coefficient per identification component expected");
  Gamble out = Gamble::Zero(idf.property().num_outcomes());
  for (std::size_t k = 0; k < comps.size(); ++k) out = out + alpha[k] * comps[k];
  return out;
}

std::optional<CalibrationCertificate> dominated_by_calibration(const Gamble& g, const IdentificationFunction& idf,
                                                               const PropertyValue& gamma, double tol) {
  const auto& spec = idf.property();
  if (g.size() != spec.num_outcomes()) throw StructuralError("gamble does not match the outcome space");
  spec.require_in_value_set(gamma);
  auto comps = idf.components(gamma);
  bool all_zero = true;
  for (const auto& c : comps) all_zero = all_zero && c.is_zero();
  if (all_zero) throw PreconditionError("identification function vanishes identically at " + gamma.to_string());

  if (!spec.is_scalar()) {
    // sum_k alpha_k (1[y=k] - gamma_k) = alpha_y - <alpha, gamma>; alpha = g is
    // optimal, and works iff <gamma, g> <= 0.
    std::vector<double> alpha(g.values().begin(), g.values().end());
    Gamble dom = calibration_gamble(idf, gamma, alpha);
    const double slack = MinSlack(dom, g);
    if (slack < -tol) return std::nullopt;
    return CalibrationCertificate{std::move(alpha), std::move(dom), slack};
  }

  const Gamble& nu = comps.front();
  double lo = -kInf, hi = kInf;
  for (Outcome y = 0; y < g.size(); ++y) {
    if (nu[y] > 0.0) lo = std::max(lo, g[y] / nu[y]);
    if (nu[y] < 0.0) hi = std::min(hi, g[y] / nu[y]);
  }
  std::vector<double> candidates;
  if (lo <= hi) {
    candidates.push_back(std::clamp(0.0, lo, hi));
  } else {
    if (std::isfinite(lo)) candidates.push_back(lo);
    if (std::isfinite(hi)) candidates.push_back(hi);
  }
  std::optional<CalibrationCertificate> best;
  for (double a : candidates) {
    Gamble dom = a * nu;
    const double slack = MinSlack(dom, g);
    if (slack >= -tol && (!best || slack > best->slack)) best = CalibrationCertificate{{a}, std::move(dom), slack};
  }
  return best;
}

std::string to_string(DominationStatus status) {
  switch (status) {
    case DominationStatus::kDominated:
      return "dominated";
    case DominationStatus::kNotDominated:
      return "not_dominated";
    case DominationStatus::kInconclusiveClosure:
      return "inconclusive_closure";
  }
  return "?";
}

ScaledRegretVerdict dominated_by_scaled_regret(const Gamble& g, const ScoringFunction& sf, const PropertyValue& gamma,
                                               const ScaledRegretSearch& search) {
  const auto& spec = sf.property();
  if (g.size() != spec.num_outcomes()) throw StructuralError("gamble does not match the outcome space");
  spec.require_in_value_set(gamma);
  const Gamble base = sf.row(gamma);

  ScaledRegretVerdict out;
  for (const auto& c : value_grid(spec, search.resolution)) {
    const Gamble r = base - sf.row(c);
    double lo = 0.0, hi = search.beta_max;
    for (Outcome y = 0; y < g.size(); ++y) {
      if (r[y] > 0.0) lo = std::max(lo, g[y] / r[y]);
      if (r[y] < 0.0) hi = std::min(hi, g[y] / r[y]);
    }
    const double beta = lo;
    if (beta > search.beta_max) continue;
    if (out.certificate && beta >= out.certificate->beta) continue;
    Gamble dom = beta * r;
    const double slack = MinSlack(dom, g);
    if (slack < -search.tol) continue;
    out.certificate = ScaledRegretCertificate{beta, c, std::move(dom), slack};
  }
  if (out.certificate) {
    out.status = DominationStatus::kDominated;
    return out;
  }
  const bool available = is_available(g, level_set(spec, gamma), search.tol).available;
  out.status = available ? DominationStatus::kInconclusiveClosure : DominationStatus::kNotDominated;
  return out;
}

OfferAxiomReport check_offer_axioms(const LevelSetPolytope& ls, std::size_t samples, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  const std::size_t n = ls.dimension();

  auto random_gamble = [&] {
    std::vector<double> v(n);
    for (double& x : v) x = unit(rng);
    return Gamble(std::move(v));
  };
  // Shift a random gamble down until it is available, sometimes strictly.
  auto random_available = [&] {
    Gamble g = random_gamble();
    const double sup = is_available(g, ls, tol).sup_value;
    const double extra = rng() % 4 == 0 ? 0.0 : 0.1 * expo(rng);
    return g - Gamble::Constant(n, sup + extra);
  };

  OfferAxiomReport rep;
  rep.samples = samples;
  auto record = [&](const Gamble& g, std::size_t& counter) {
    const auto v = is_available(g, ls, tol);
    if (!v.available) {
      ++counter;
      rep.worst_residual = std::max(rep.worst_residual, v.sup_value);
    }
  };
  for (std::size_t i = 0; i < samples; ++i) {
    const Gamble g1 = random_available();
    const Gamble g2 = random_available();
    record(g1 + g2, rep.o1_violations);
    record((10.0 * expo(rng)) * g1, rep.o2_violations);
    if (g1.min() > tol) {
      ++rep.o3_violations;
      rep.worst_residual = std::max(rep.worst_residual, g1.min());
    }
    std::vector<double> np(n);
    for (double& x : np) x = -std::abs(unit(rng)) * (rng() % 3 == 0 ? 0.0 : 1.0);
    record(Gamble(std::move(np)), rep.o4_violations);
  }
  return rep;
}

namespace {

template <typename A, typename B>
bool PolarImpl(const A& candidate, std::span<const B> generators, bool cone, double tol) {
  if (generators.empty()) throw PreconditionError("polar of an empty generator set");
  const double bound = cone ? 0.0 : 1.0;
  for (const auto& w : generators) {
    if (w.size() != candidate.size()) throw StructuralError("polar pairing dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += candidate[i] * w[i];
    if (s > bound + tol) return false;
  }
  return true;
}

}  // namespace

bool polar_membership(const SignedMeasure& candidate, std::span<const Gamble> generators, bool cone, double tol) {
  return PolarImpl(candidate, generators, cone, tol);
}

bool polar_membership(const Gamble& candidate, std::span<const SignedMeasure> generators, bool cone, double tol) {
  return PolarImpl(candidate, generators, cone, tol);
}

}  // namespace fairgamble
