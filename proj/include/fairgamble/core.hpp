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

// Finite outcome spaces, gambles, distributions and the expectation pairing.
//
// On a finite outcome space both the gambles and the measures are plain
// vectors indexed by outcome, and the pairing is the dot product. Every type
// here is an immutable value: validated once on construction.

#ifndef FAIRGAMBLE_CORE_HPP_
#define FAIRGAMBLE_CORE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fairgamble {

// Index of an outcome inside its OutcomeSpace.
using Outcome = std::size_t;

inline constexpr double kDistributionTolerance = 1e-12;
inline constexpr double kRenormalizeLimit = 1e-9;

class OutcomeSpace {
 public:
  // Labels must be distinct and at least two; numeric values, when given,
  // must match the label count and be finite.
  explicit OutcomeSpace(std::vector<std::string> labels,
                        std::optional<std::vector<double>> numeric_values = std::nullopt);

  // Numeric space whose labels are the shortest round-trip spelling of the
  // values, e.g. {0, 0.5, 1} -> "0", "0.5", "1".
  static OutcomeSpace Numeric(std::vector<double> values);
  static OutcomeSpace Binary() { return Numeric({0.0, 1.0}); }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Outcome y) const;

  bool has_numeric_values() const { return numeric_.has_value(); }
  // Throws StructuralError when the space carries no numeric semantics.
  std::span<const double> numeric_values() const;
  double value(Outcome y) const;
  double min_value() const;
  double max_value() const;

  std::optional<Outcome> find(std::string_view label) const;
  // Throws StructuralError for unknown labels.
  Outcome index_of(std::string_view label) const;

  bool operator==(const OutcomeSpace&) const = default;

 private:
  std::vector<std::string> labels_;
  std::optional<std::vector<double>> numeric_;
};

// A real payoff per outcome. All entries finite.
class Gamble {
 public:
  Gamble() = default;
  explicit Gamble(std::vector<double> values);
  static Gamble Zero(std::size_t n) { return Gamble(std::vector<double>(n, 0.0)); }
  static Gamble Constant(std::size_t n, double c) { return Gamble(std::vector<double>(n, c)); }

  std::size_t size() const { return values_.size(); }
  double operator[](Outcome y) const { return values_[y]; }
  std::span<const double> values() const { return values_; }

  double max() const;
  double min() const;
  bool is_non_positive(double tol = 0.0) const { return max() <= tol; }
  bool is_zero() const;
  double l1_norm() const;
  double sup_norm() const;

  Gamble operator+(const Gamble& other) const;
  Gamble operator-(const Gamble& other) const;
  Gamble operator-() const;
  friend Gamble operator*(double alpha, const Gamble& g);

  bool operator==(const Gamble&) const = default;

 private:
  std::vector<double> values_;
};

// Probability weights over outcomes.
//
// Weights must be non-negative and sum to one within 1e-12. A sum that drifts
// by at most 1e-9 is renormalized; anything further is rejected.
class Distribution {
 public:
  Distribution() = default;
  explicit Distribution(std::vector<double> weights);
  static Distribution Dirac(std::size_t n, Outcome y);
  static Distribution Uniform(std::size_t n);

  std::size_t size() const { return weights_.size(); }
  double operator[](Outcome y) const { return weights_[y]; }
  std::span<const double> weights() const { return weights_; }

  // Maximum absolute coordinate difference.
  double distance(const Distribution& other) const;
  bool approx_equal(const Distribution& other, double tol) const;

  bool operator==(const Distribution&) const = default;

 private:
  std::vector<double> weights_;
};

// General finite signed weights (the dual of gambles).
class SignedMeasure {
 public:
  SignedMeasure() = default;
  explicit SignedMeasure(std::vector<double> weights);
  SignedMeasure(const Distribution& d)  // NOLINT(google-explicit-constructor)
      : weights_(d.weights().begin(), d.weights().end()) {}

  std::size_t size() const { return weights_.size(); }
  double operator[](Outcome y) const { return weights_[y]; }
  std::span<const double> weights() const { return weights_; }

  SignedMeasure operator+(const SignedMeasure& other) const;
  friend SignedMeasure operator*(double alpha, const SignedMeasure& m);

 private:
  std::vector<double> weights_;
};

double expectation(const Distribution& dist, const Gamble& g);
double expectation(const SignedMeasure& measure, const Gamble& g);

Distribution dirac(const OutcomeSpace& space, std::string_view label);
Distribution dirac(const OutcomeSpace& space, Outcome y);

// count(y) / total over a non-empty multiset of outcomes.
Distribution empirical_distribution(const OutcomeSpace& space,
                                    std::span<const std::string> outcomes);
Distribution empirical_distribution(const OutcomeSpace& space,
                                    std::span<const Outcome> outcomes);

// Shortest round-trip decimal spelling of a double.
std::string format_double(double x);

}  // namespace fairgamble

#endif  // FAIRGAMBLE_CORE_HPP_
