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

// Available gambles of a forecast: the availability oracle over level-set
// polytopes, the regret and calibration gamble families, and domination
// certificates against those families.

#ifndef FAIRGAMBLE_AVAILABILITY_HPP_
#define FAIRGAMBLE_AVAILABILITY_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairgamble/core.hpp"
#include "fairgamble/properties.hpp"

namespace fairgamble {

inline constexpr double kAvailabilityTolerance = 1e-9;

struct AvailabilityVerdict {
  bool available = false;
  // max of E_phi[g] over the level set, attained at `witness`.
  double sup_value = 0.0;
  Distribution witness;
};

enum class AvailabilityMethod { kAuto, kVertices, kLp };

// kAuto uses cached vertices when present and the LP otherwise.
AvailabilityVerdict is_available(const Gamble& g, const LevelSetPolytope& ls, double tol = kAvailabilityTolerance,
                                 AvailabilityMethod method = AvailabilityMethod::kAuto);

// y -> l(y, gamma) - l(y, c).
Gamble regret_gamble(const ScoringFunction& sf, const PropertyValue& gamma, const PropertyValue& c);
Gamble scaled_regret_gamble(const ScoringFunction& sf, const PropertyValue& gamma, const PropertyValue& c,
                            double beta);
// y -> alpha * nu(y, gamma). Scalar identification functions only.
Gamble calibration_gamble(const IdentificationFunction& idf, const PropertyValue& gamma, double alpha);
// sum_k alpha_k * nu_k(., gamma), one coefficient per component.
Gamble calibration_gamble(const IdentificationFunction& idf, const PropertyValue& gamma,
                          std::span<const double> alpha);

struct CalibrationCertificate {
  std::vector<double> alpha;
  Gamble dominating;
  // min over outcomes of (dominating - g).
  double slack = 0.0;
};

// Some alpha with g <= alpha . nu_gamma, or nullopt.
std::optional<CalibrationCertificate> dominated_by_calibration(const Gamble& g, const IdentificationFunction& idf,
                                                               const PropertyValue& gamma,
                                                               double tol = kAvailabilityTolerance);

struct ScaledRegretCertificate {
  double beta = 0.0;
  PropertyValue c;
  Gamble dominating;
  double slack = 0.0;
};

enum class DominationStatus { kDominated, kNotDominated, kInconclusiveClosure };
std::string to_string(DominationStatus status);

struct ScaledRegretSearch {
  double beta_max = 1e6;
  double resolution = 1e-3;
  double tol = kAvailabilityTolerance;
};

struct ScaledRegretVerdict {
  DominationStatus status = DominationStatus::kNotDominated;
  std::optional<ScaledRegretCertificate> certificate;
};

// Scans c over the value grid; for each c the admissible beta form an interval
// and the smallest one is kept. Among all c the smallest beta wins, ties to the
// first grid point. Without a certificate the verdict is kNotDominated when g
// is not available and kInconclusiveClosure when it is: the scaled regret
// gambles only reach the available set up to its boundary.
ScaledRegretVerdict dominated_by_scaled_regret(const Gamble& g, const ScoringFunction& sf, const PropertyValue& gamma,
                                               const ScaledRegretSearch& search = {});

struct OfferAxiomReport {
  std::size_t samples = 0;
  // Violation counts for: sums, positive scalings, no sure gain, non-positive gambles.
  std::size_t o1_violations = 0;
  std::size_t o2_violations = 0;
  std::size_t o3_violations = 0;
  std::size_t o4_violations = 0;
  double worst_residual = 0.0;

  bool ok() const { return o1_violations + o2_violations + o3_violations + o4_violations == 0; }
};

OfferAxiomReport check_offer_axioms(const LevelSetPolytope& ls, std::size_t samples, std::uint64_t seed,
                                    double tol = kAvailabilityTolerance);

// <candidate, w> <= 1 + tol for every generator w (<= tol when the generators
// span a cone).
bool polar_membership(const SignedMeasure& candidate, std::span<const Gamble> generators, bool cone = false,
                      double tol = 1e-12);
bool polar_membership(const Gamble& candidate, std::span<const SignedMeasure> generators, bool cone = false,
                      double tol = 1e-12);

}  // namespace fairgamble

#endif  // FAIRGAMBLE_AVAILABILITY_HPP_
