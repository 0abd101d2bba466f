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

// Forecastable properties, their scoring and identification functions, and
// the level sets that a forecast implicitly states.
//
// Three properties ship: the mean (squared loss, nu = y - v), the tau-quantile
// (pinball loss, nu = tau - 1[y <= v]) and the full distribution (Brier score,
// vector-valued nu = e_y - v). The set of admissible distributions is always
// the whole simplex.

#ifndef FAIRGAMBLE_PROPERTIES_HPP_
#define FAIRGAMBLE_PROPERTIES_HPP_

#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairgamble/core.hpp"

namespace fairgamble {

inline constexpr double kValueSetTolerance = 1e-12;

// A property value: a real number for Mean/Quantile, a probability vector for
// FullDistribution.
class PropertyValue {
 public:
  PropertyValue() = default;
  PropertyValue(double scalar) : coords_{scalar} {}  // NOLINT(google-explicit-constructor)
  explicit PropertyValue(const Distribution& d) : coords_(d.weights().begin(), d.weights().end()) {}
  explicit PropertyValue(std::vector<double> coords) : coords_(std::move(coords)) {}

  bool is_scalar() const { return coords_.size() == 1; }
  // Throws StructuralError unless scalar.
  double scalar() const;
  const std::vector<double>& coords() const { return coords_; }
  Distribution as_distribution() const { return Distribution(coords_); }

  std::string to_string() const;

  auto operator<=>(const PropertyValue&) const = default;

 private:
  std::vector<double> coords_;
};

enum class PropertyKind { kMean, kQuantile, kFullDistribution };

class PropertySpec {
 public:
  static PropertySpec Mean(OutcomeSpace space);
  static PropertySpec Quantile(OutcomeSpace space, double tau);
  static PropertySpec FullDistribution(OutcomeSpace space);

  PropertyKind kind() const { return kind_; }
  double tau() const { return tau_; }
  const OutcomeSpace& space() const { return space_; }
  std::size_t num_outcomes() const { return space_.size(); }
  bool is_scalar() const { return kind_ != PropertyKind::kFullDistribution; }

  bool in_value_set(const PropertyValue& v) const;
  // Throws DomainError when v is outside the value set.
  void require_in_value_set(const PropertyValue& v) const;

  std::string name() const;

  bool operator==(const PropertySpec&) const = default;

 private:
  PropertySpec(PropertyKind kind, OutcomeSpace space, double tau);

  PropertyKind kind_;
  OutcomeSpace space_;
  double tau_ = 0.0;
};

// Gamma(phi), as an interval [lo, hi] for scalar properties (a point for the
// mean) or the distribution itself.
struct PropertySet {
  PropertyValue lo;
  PropertyValue hi;

  bool is_singleton() const { return lo == hi; }
  // Announced value when a single element is needed: the interval midpoint.
  PropertyValue representative() const;
  bool contains(const PropertyValue& v, double tol = kValueSetTolerance) const;
};

PropertySet evaluate_property(const PropertySpec& spec, const Distribution& dist);

enum class LossKind { kSquared, kPinball, kBrier };

// A consistent scoring function l(y, v), optionally composed with a positive
// affine map a * l + b (which keeps consistency).
class ScoringFunction {
 public:
  static ScoringFunction Squared(const PropertySpec& spec);
  static ScoringFunction Pinball(const PropertySpec& spec);
  static ScoringFunction Brier(const PropertySpec& spec);
  // The natural loss for the property.
  static ScoringFunction For(const PropertySpec& spec);

  ScoringFunction affine(double scale, double offset) const;

  const PropertySpec& property() const { return spec_; }
  LossKind kind() const { return kind_; }
  double scale() const { return scale_; }
  double offset() const { return offset_; }
  std::string name() const;

  // No value-set check: callers that need one use scoring().
  double operator()(Outcome y, const PropertyValue& v) const;
  // l_v as a gamble over outcomes.
  Gamble row(const PropertyValue& v) const;
  // Declared [min, max] of the loss over outcomes and the value set.
  std::pair<double, double> range() const;

 private:
  ScoringFunction(PropertySpec spec, LossKind kind) : spec_(std::move(spec)), kind_(kind) {}
  PropertySpec spec_;
  LossKind kind_;
  double scale_ = 1.0;
  double offset_ = 0.0;
};

class IdentificationFunction {
 public:
  static IdentificationFunction For(const PropertySpec& spec);

  const PropertySpec& property() const { return spec_; }
  // Number of scalar components (1 for Mean/Quantile, n for FullDistribution).
  std::size_t dimension() const;

  // Scalar kinds only.
  double operator()(Outcome y, const PropertyValue& v) const;
  Gamble row(const PropertyValue& v) const;
  // Every component as a gamble; FullDistribution yields y -> 1[y = k] - v_k.
  std::vector<Gamble> components(const PropertyValue& v) const;

 private:
  explicit IdentificationFunction(PropertySpec spec) : spec_(std::move(spec)) {}
  PropertySpec spec_;
};

double scoring(const ScoringFunction& sf, Outcome y, const PropertyValue& v);
double identification(const IdentificationFunction& idf, Outcome y, const PropertyValue& v);

// H-representation of Gamma^{-1}(v) intersected with the simplex:
//   sum(phi) = 1, phi >= 0, eq_rows phi = eq_rhs, ub_rows phi <= ub_rhs.
// Vertices are enumerated eagerly for n <= kMaxVertexEnumeration.
class LevelSetPolytope {
 public:
  static constexpr std::size_t kMaxVertexEnumeration = 12;

  LevelSetPolytope(std::size_t n, std::vector<std::vector<double>> eq_rows, std::vector<double> eq_rhs,
                   std::vector<std::vector<double>> ub_rows, std::vector<double> ub_rhs);
  // The full simplex (the vacuous forecast).
  static LevelSetPolytope Simplex(std::size_t n);
  // {d}.
  static LevelSetPolytope Singleton(const Distribution& d);

  std::size_t dimension() const { return n_; }
  const std::vector<std::vector<double>>& eq_rows() const { return eq_rows_; }
  const std::vector<double>& eq_rhs() const { return eq_rhs_; }
  const std::vector<std::vector<double>>& ub_rows() const { return ub_rows_; }
  const std::vector<double>& ub_rhs() const { return ub_rhs_; }

  bool has_vertices() const { return vertices_.has_value(); }
  const std::vector<Distribution>& vertices() const;

  // Largest violation of any constraint (simplex included) at phi.
  double residual(std::span<const double> phi) const;
  bool contains(const Distribution& phi, double tol = 1e-9) const { return residual(phi.weights()) <= tol; }

  // A feasible point (first vertex, or an LP solution for large n).
  Distribution any_member() const;

 private:
  std::size_t n_;
  std::vector<std::vector<double>> eq_rows_;
  std::vector<double> eq_rhs_;
  std::vector<std::vector<double>> ub_rows_;
  std::vector<double> ub_rhs_;
  std::optional<std::vector<Distribution>> vertices_;
};

// Throws DomainError when v is outside the value set or the level set is empty.
LevelSetPolytope level_set(const PropertySpec& spec, const PropertyValue& v);

// Uniform grid over the value set. Scalars: [min, max] in steps of
// `resolution` with both endpoints. FullDistribution: the simplex lattice with
// denominator round(1/resolution), coarsened until at most 200000 points.
std::vector<PropertyValue> value_grid(const PropertySpec& spec, double resolution = 1e-3);

// True iff some grid value c has l_c <= g + tol coordinate-wise.
bool superprediction_contains(const ScoringFunction& sf, const Gamble& g, const std::vector<PropertyValue>& grid,
                              double tol = 1e-12);

// A property together with its shipped loss and identification function.
struct PropertyModel {
  PropertySpec spec;
  ScoringFunction loss;
  IdentificationFunction identification;

  std::string id() const;
};

// Parses "mean+squared", "quantile@0.5+pinball", "dist+brier". The loss part
// may be omitted ("mean") and defaults to the property's natural loss.
PropertyModel parse_property_model(const std::string& id, const OutcomeSpace& space);

}  // namespace fairgamble

#endif  // FAIRGAMBLE_PROPERTIES_HPP_
