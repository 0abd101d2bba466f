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

#include "fairgamble/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "fairgamble/errors.hpp"

namespace fairgamble {
namespace {

void CheckFinite(std::span<const double> xs, const char* what) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw StructuralError(std::string(what) + " has a non-finite entry");
  }
}

void CheckSameSize(std::size_t a, std::size_t b) {
  if (a != b) {
    throw StructuralError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

std::string format_double(double x) {
  if (x == 0.0) return "0";  // also folds -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

// --- OutcomeSpace ---------------------------------------------------------

OutcomeSpace::OutcomeSpace(std::vector<std::string> labels,
                           std::optional<std::vector<double>> numeric_values)
    : labels_(std::move(labels)), numeric_(std::move(numeric_values)) {
  if (labels_.size() < 2) throw StructuralError("outcome space needs at least two outcomes");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) throw StructuralError("outcome labels must be distinct");
  if (numeric_) {
    CheckSameSize(numeric_->size(), labels_.size());
    CheckFinite(*numeric_, "numeric_values");
  }
}

OutcomeSpace OutcomeSpace::Numeric(std::vector<double> values) {
  std::vector<std::string> labels;
  labels.reserve(values.size());
  for (double v : values) labels.push_back(format_double(v));
  return OutcomeSpace(std::move(labels), std::move(values));
}

const std::string& OutcomeSpace::label(Outcome y) const {
  if (y >= labels_.size()) throw StructuralError("outcome index out of range");
  return labels_[y];
}

std::span<const double> OutcomeSpace::numeric_values() const {
  if (!numeric_) throw StructuralError("outcome space has no numeric values");
  return *numeric_;
}

double OutcomeSpace::value(Outcome y) const {
  auto vals = numeric_values();
  if (y >= vals.size()) throw StructuralError("outcome index out of range");
  return vals[y];
}

double OutcomeSpace::min_value() const {
  auto vals = numeric_values();
  return *std::min_element(vals.begin(), vals.end());
}

double OutcomeSpace::max_value() const {
  auto vals = numeric_values();
  return *std::max_element(vals.begin(), vals.end());
}

std::optional<Outcome> OutcomeSpace::find(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

Outcome OutcomeSpace::index_of(std::string_view label) const {
  if (auto y = find(label)) return *y;
  throw StructuralError("unknown outcome label '" + std::string(label) + "'");
}

// --- Gamble ---------------------------------------------------------------

Gamble::Gamble(std::vector<double> values) : values_(std::move(values)) {
  CheckFinite(values_, "gamble");
}

double Gamble::max() const {
  if (values_.empty()) throw StructuralError("empty gamble");
  return *std::max_element(values_.begin(), values_.end());
}

double Gamble::min() const {
  if (values_.empty()) throw StructuralError("empty gamble");
  return *std::min_element(values_.begin(), values_.end());
}

bool Gamble::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0; });
}

double Gamble::l1_norm() const {
  double s = 0.0;
  for (double x : values_) s += std::abs(x);
  return s;
}

double Gamble::sup_norm() const {
  double s = 0.0;
  for (double x : values_) s = std::max(s, std::abs(x));
  return s;
}

Gamble Gamble::operator+(const Gamble& other) const {
  CheckSameSize(size(), other.size());
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = values_[i] + other.values_[i];
  return Gamble(std::move(out));
}

Gamble Gamble::operator-(const Gamble& other) const {
  CheckSameSize(size(), other.size());
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = values_[i] - other.values_[i];
  return Gamble(std::move(out));
}

Gamble Gamble::operator-() const { return -1.0 * *this; }

Gamble operator*(double alpha, const Gamble& g) {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = alpha * g.values_[i];
  return Gamble(std::move(out));
}

// --- Distribution ---------------------------------------------------------

Distribution::Distribution(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw StructuralError("empty distribution");
  CheckFinite(weights_, "distribution");
  for (double& w : weights_) {
    if (w < 0.0) {
      if (w < -kDistributionTolerance) throw StructuralError("negative probability weight");
      w = 0.0;
    }
  }
  double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  double drift = std::abs(sum - 1.0);
  if (drift > kRenormalizeLimit) {
    throw StructuralError("probability weights sum to " + format_double(sum));
  }
  if (drift > kDistributionTolerance) {
    for (double& w : weights_) w /= sum;
  }
}

Distribution Distribution::Dirac(std::size_t n, Outcome y) {
  if (y >= n) throw StructuralError("outcome index out of range");
  std::vector<double> w(n, 0.0);
  w[y] = 1.0;
  return Distribution(std::move(w));
}

Distribution Distribution::Uniform(std::size_t n) {
  return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double Distribution::distance(const Distribution& other) const {
  CheckSameSize(size(), other.size());
  double d = 0.0;
  for (std::size_t i = 0; i < size(); ++i) d = std::max(d, std::abs(weights_[i] - other.weights_[i]));
  return d;
}

bool Distribution::approx_equal(const Distribution& other, double tol) const {
  return size() == other.size() && distance(other) <= tol;
}

// --- SignedMeasure --------------------------------------------------------

SignedMeasure::SignedMeasure(std::vector<double> weights) : weights_(std::move(weights)) {
  CheckFinite(weights_, "signed measure");
}

SignedMeasure SignedMeasure::operator+(const SignedMeasure& other) const {
  CheckSameSize(size(), other.size());
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = weights_[i] + other.weights_[i];
  return SignedMeasure(std::move(out));
}

SignedMeasure operator*(double alpha, const SignedMeasure& m) {
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = alpha * m.weights_[i];
  return SignedMeasure(std::move(out));
}

// --- pairing --------------------------------------------------------------

namespace {
double Dot(std::span<const double> a, std::span<const double> b) {
  CheckSameSize(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
}  // namespace

double expectation(const Distribution& dist, const Gamble& g) { return Dot(dist.weights(), g.values()); }

double expectation(const SignedMeasure& measure, const Gamble& g) {
  return Dot(measure.weights(), g.values());
}

Distribution dirac(const OutcomeSpace& space, std::string_view label) {
  return Distribution::Dirac(space.size(), space.index_of(label));
}

Distribution dirac(const OutcomeSpace& space, Outcome y) { return Distribution::Dirac(space.size(), y); }

Distribution empirical_distribution(const OutcomeSpace& space, std::span<const Outcome> outcomes) {
  if (outcomes.empty()) throw PreconditionError("empirical distribution of an empty multiset");
  std::vector<std::size_t> counts(space.size(), 0);
  for (Outcome y : outcomes) {
    if (y >= space.size()) throw StructuralError("outcome index out of range");
    ++counts[y];
  }
  const double total = static_cast<double>(outcomes.size());
  std::vector<double> w(space.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(counts[i]) / total;
  return Distribution(std::move(w));
}

Distribution empirical_distribution(const OutcomeSpace& space, std::span<const std::string> outcomes) {
  std::vector<Outcome> idx;
  idx.reserve(outcomes.size());
  for (const auto& label : outcomes) idx.push_back(space.index_of(label));
  return empirical_distribution(space, std::span<const Outcome>(idx));
}

}  // namespace fairgamble
