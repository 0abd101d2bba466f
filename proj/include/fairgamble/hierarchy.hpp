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

// Numerical checks of the capital orderings along the restriction and belief
// dimensions, and of the classical regret and calibration orders.
//
// Every check is logged two-sided: the capitals are always computed, and the
// outcome says whether the inequality was asserted under its preconditions.

#ifndef FAIRGAMBLE_HIERARCHY_HPP_
#define FAIRGAMBLE_HIERARCHY_HPP_

#include <span>
#include <string>
#include <vector>

#include "fairgamble/gambler.hpp"
#include "fairgamble/metrics.hpp"
#include "fairgamble/properties.hpp"

namespace fairgamble {

inline constexpr double kHierarchyTolerance = 1e-9;

enum class CheckOutcome { kHolds, kViolated, kPreconditionsViolated };
// "holds", "violated", "preconditions-violated".
std::string to_string(CheckOutcome outcome);

// Asserts lhs <= rhs + tol when every precondition holds.
struct HierarchyCheck {
  std::string name;
  CheckOutcome outcome = CheckOutcome::kHolds;
  double lhs = 0.0;
  double rhs = 0.0;
  double tol = kHierarchyTolerance;
  std::vector<std::string> failed_preconditions;

  bool inequality_holds() const { return lhs <= rhs + tol; }
};

// Whether G_t ⊆ G'_t can be certified at forecast v. Supported pairs: equal
// restrictions, FiniteSet against FiniteSet (explicit subset), NormBall or
// NonPositive, nested norm balls, and RegretGambles(s) against an L1 ball on
// the binary mean with an (affinely scaled) squared loss. Throws
// StructuralError for any other pair.
bool contains(const Restriction& outer, const Restriction& inner, const PropertyValue& v, const PropertyModel& model);

// K(g) <= K(g') for rational gamblers sharing `beliefs`, with restrictions G
// and G' (one, or one per round). lhs = K(g), rhs = K(g').
HierarchyCheck check_restriction_order(const ProtocolRun& run, const PropertyModel& model,
                                       std::span<const Belief> beliefs, std::span<const Restriction> g,
                                       std::span<const Restriction> g_prime, double tol = kHierarchyTolerance);

// K(g) <= K(g') where g' holds the finer beliefs and both share the
// restrictions. lhs = K(g), rhs = K(g').
HierarchyCheck check_refinement_order(const ProtocolRun& run, const PropertyModel& model,
                                      std::span<const Belief> coarse, std::span<const Belief> fine,
                                      std::span<const Restriction> restrictions, double tol = kHierarchyTolerance);

// swap_regret(sf) <= 4 * sum_gamma |T_gamma| * |mean(y - gamma) on T_gamma|
// for a binary mean loss bounded in [-1, 1].
HierarchyCheck check_swap_vs_ece_bound(const ProtocolRun& run, const ScoringFunction& sf,
                                       double tol = kHierarchyTolerance);

// external <= swap <= |T| * zeroed loss, and for the mean also
// bias <= ECE <= individual calibration.
std::vector<HierarchyCheck> check_metric_orders(const ProtocolRun& run, const PropertyModel& model,
                                                double tol = kHierarchyTolerance);

}  // namespace fairgamble

#endif  // FAIRGAMBLE_HIERARCHY_HPP_
