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

#include "fairgamble/properties.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "fairgamble/errors.hpp"
#include "fairgamble/lp.hpp"
#include "linalg.hpp"

namespace fairgamble {
namespace {

constexpr double kVertexTolerance = 1e-9;

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Calls f(indices) for every k-subset of {0..n-1} in lexicographic order.
template <typename F>
void ForEachCombination(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    f(idx);
    if (k == 0) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<Distribution> EnumerateVertices(std::size_t n, const std::vector<std::vector<double>>& eq_rows,
                                            const std::vector<double>& eq_rhs,
                                            const std::vector<std::vector<double>>& ub_rows,
                                            const std::vector<double>& ub_rhs) {
  internal::Matrix a;
  std::vector<double> b;
  a.push_back(std::vector<double>(n, 1.0));
  b.push_back(1.0);
  for (std::size_t i = 0; i < eq_rows.size(); ++i) {
    a.push_back(eq_rows[i]);
    b.push_back(eq_rhs[i]);
  }
  auto affine = internal::SolveAffine(a, b);
  if (!affine) return {};
  const std::size_t d = affine->basis.size();

  // Candidate half-spaces in the reduced coordinates z: coef . z <= rhs.
  std::vector<std::vector<double>> coef;
  std::vector<double> rhs;
  auto add_candidate = [&](const std::vector<double>& row, double r) {
    std::vector<double> c(d);
    for (std::size_t k = 0; k < d; ++k) c[k] = Dot(row, affine->basis[k]);
    coef.push_back(std::move(c));
    rhs.push_back(r - Dot(row, affine->point));
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n, 0.0);
    row[i] = -1.0;
    add_candidate(row, 0.0);
  }
  for (std::size_t i = 0; i < ub_rows.size(); ++i) add_candidate(ub_rows[i], ub_rhs[i]);

  std::vector<Distribution> vertices;
  auto try_point = [&](const std::vector<double>& z) {
    for (std::size_t c = 0; c < coef.size(); ++c) {
      if (Dot(coef[c], z) > rhs[c] + kVertexTolerance) return;
    }
    std::vector<double> phi = affine->point;
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t i = 0; i < n; ++i) phi[i] += z[k] * affine->basis[k][i];
    }
    for (double& w : phi) {
      if (std::abs(w) < 1e-14) w = 0.0;
    }
    Distribution cand(std::move(phi));
    for (const auto& v : vertices) {
      if (v.approx_equal(cand, kVertexTolerance)) return;
    }
    vertices.push_back(std::move(cand));
  };

  if (d == 0) {
    try_point({});
    return vertices;
  }
  ForEachCombination(coef.size(), d, [&](const std::vector<std::size_t>& active) {
    internal::Matrix m;
    std::vector<double> r;
    for (std::size_t c : active) {
      m.push_back(coef[c]);
      r.push_back(rhs[c]);
    }
    if (auto z = internal::SolveSquare(std::move(m), std::move(r), 1e-12)) try_point(*z);
  });
  return vertices;
}

double PinballLoss(double y, double v, double tau) { return ((y <= v ? 1.0 : 0.0) - tau) * (v - y); }

}  // namespace

// --- PropertyValue ---------------------------------------------------------

double PropertyValue::scalar() const {
  if (!is_scalar()) throw StructuralError("property value is not scalar");
  return coords_[0];
}

std::string PropertyValue::to_string() const {
  if (is_scalar()) return format_double(coords_[0]);
  std::string s = "[";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ",";
    s += format_double(coords_[i]);
  }
  return s + "]";
}

// --- PropertySpec ----------------------------------------------------------

PropertySpec::PropertySpec(PropertyKind kind, OutcomeSpace space, double tau)
    : kind_(kind), space_(std::move(space)), tau_(tau) {
  if (kind_ != PropertyKind::kFullDistribution && !space_.has_numeric_values()) {
    throw StructuralError("mean and quantile properties need numeric outcome values");
  }
  if (kind_ == PropertyKind::kQuantile && !(tau_ > 0.0 && tau_ < 1.0)) {
    throw StructuralError("quantile level must lie strictly inside (0, 1)");
  }
}

PropertySpec PropertySpec::Mean(OutcomeSpace space) { return PropertySpec(PropertyKind::kMean, std::move(space), 0.0); }

PropertySpec PropertySpec::Quantile(OutcomeSpace space, double tau) {
  return PropertySpec(PropertyKind::kQuantile, std::move(space), tau);
}

PropertySpec PropertySpec::FullDistribution(OutcomeSpace space) {
  return PropertySpec(PropertyKind::kFullDistribution, std::move(space), 0.0);
}

bool PropertySpec::in_value_set(const PropertyValue& v) const {
  if (kind_ == PropertyKind::kFullDistribution) {
    if (v.coords().size() != space_.size()) return false;
    double sum = 0.0;
    for (double w : v.coords()) {
      if (!std::isfinite(w) || w < -kValueSetTolerance) return false;
      sum += w;
    }
    return std::abs(sum - 1.0) <= kRenormalizeLimit;
  }
  if (!v.is_scalar() || !std::isfinite(v.scalar())) return false;
  return v.scalar() >= space_.min_value() - kValueSetTolerance &&
         v.scalar() <= space_.max_value() + kValueSetTolerance;
}

void PropertySpec::require_in_value_set(const PropertyValue& v) const {
  if (!in_value_set(v)) throw DomainError("value " + v.to_string() + " is outside the value set of " + name());
}

std::string PropertySpec::name() const {
  switch (kind_) {
    case PropertyKind::kMean:
      return "mean";
    case PropertyKind::kQuantile:
      return "quantile@" + format_double(tau_);
    case PropertyKind::kFullDistribution:
      return "dist";
  }
  return "?";
}

// --- evaluate_property -----------------------------------------------------

PropertyValue PropertySet::representative() const {
  if (lo == hi) return lo;
  return PropertyValue(0.5 * (lo.scalar() + hi.scalar()));
}

bool PropertySet::contains(const PropertyValue& v, double tol) const {
  if (!v.is_scalar() || !lo.is_scalar()) {
    if (v.coords().size() != lo.coords().size()) return false;
    for (std::size_t i = 0; i < v.coords().size(); ++i) {
      if (std::abs(v.coords()[i] - lo.coords()[i]) > tol) return false;
    }
    return true;
  }
  return v.scalar() >= lo.scalar() - tol && v.scalar() <= hi.scalar() + tol;
}

PropertySet evaluate_property(const PropertySpec& spec, const Distribution& dist) {
  if (dist.size() != spec.num_outcomes()) throw StructuralError("distribution does not match the outcome space");
  switch (spec.kind()) {
    case PropertyKind::kMean: {
      const double m = Dot(dist.weights(), spec.space().numeric_values());
      return {PropertyValue(m), PropertyValue(m)};
    }
    case PropertyKind::kQuantile: {
      std::map<double, double> mass;  // distinct value -> probability
      auto vals = spec.space().numeric_values();
      for (std::size_t i = 0; i < vals.size(); ++i) mass[vals[i]] += dist[i];
      const double tau = spec.tau();
      double cdf = 0.0;
      for (auto it = mass.begin(); it != mass.end(); ++it) {
        cdf += it->second;
        if (cdf < tau - kDistributionTolerance) continue;
        const double lo = it->first;
        if (cdf > tau + kDistributionTolerance) return {PropertyValue(lo), PropertyValue(lo)};
        // F(lo) == tau: every point up to the next atom is also a quantile.
        for (auto nx = std::next(it); nx != mass.end(); ++nx) {
          if (nx->second > 0.0) return {PropertyValue(lo), PropertyValue(nx->first)};
        }
        return {PropertyValue(lo), PropertyValue(mass.rbegin()->first)};
      }
      const double top = mass.rbegin()->first;
      return {PropertyValue(top), PropertyValue(top)};
    }
    case PropertyKind::kFullDistribution:
      return {PropertyValue(dist), PropertyValue(dist)};
  }
  throw StructuralError("unknown property kind");
}

// --- ScoringFunction -------------------------------------------------------

ScoringFunction ScoringFunction::Squared(const PropertySpec& spec) {
  if (spec.kind() != PropertyKind::kMean) throw StructuralError("squared loss elicits the mean");
  return ScoringFunction(spec, LossKind::kSquared);
}

ScoringFunction ScoringFunction::Pinball(const PropertySpec& spec) {
  if (spec.kind() != PropertyKind::kQuantile) throw StructuralError("pinball loss elicits a quantile");
  return ScoringFunction(spec, LossKind::kPinball);
}

ScoringFunction ScoringFunction::Brier(const PropertySpec& spec) {
  if (spec.kind() != PropertyKind::kFullDistribution) throw StructuralError("Brier score elicits the distribution");
  return ScoringFunction(spec, LossKind::kBrier);
}

ScoringFunction ScoringFunction::For(const PropertySpec& spec) {
  switch (spec.kind()) {
    case PropertyKind::kMean:
      return Squared(spec);
    case PropertyKind::kQuantile:
      return Pinball(spec);
    case PropertyKind::kFullDistribution:
      return Brier(spec);
  }
  throw StructuralError("unknown property kind");
}

ScoringFunction ScoringFunction::affine(double scale, double offset) const {
  if (!(scale > 0.0) || !std::isfinite(offset)) throw StructuralError("affine loss map needs a positive scale");
  ScoringFunction out = *this;
  out.scale_ = scale_ * scale;
  out.offset_ = offset_ * scale + offset;
  return out;
}

std::string ScoringFunction::name() const {
  std::string base;
  switch (kind_) {
    case LossKind::kSquared:
      base = "squared";
      break;
    case LossKind::kPinball:
      base = "pinball";
      break;
    case LossKind::kBrier:
      base = "brier";
      break;
  }
  if (scale_ != 1.0 || offset_ != 0.0) base += "*" + format_double(scale_) + "+" + format_double(offset_);
  return base;
}

double ScoringFunction::operator()(Outcome y, const PropertyValue& v) const {
  double raw = 0.0;
  switch (kind_) {
    case LossKind::kSquared: {
      const double d = spec_.space().value(y) - v.scalar();
      raw = d * d;
      break;
    }
    case LossKind::kPinball:
      raw = PinballLoss(spec_.space().value(y), v.scalar(), spec_.tau());
      break;
    case LossKind::kBrier: {
      const auto& p = v.coords();
      if (p.size() != spec_.num_outcomes()) throw StructuralError("Brier forecast has the wrong dimension");
      if (y >= p.size()) throw StructuralError("outcome index out of range");
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double d = p[k] - (k == y ? 1.0 : 0.0);
        raw += d * d;
      }
      break;
    }
  }
  return scale_ * raw + offset_;
}

Gamble ScoringFunction::row(const PropertyValue& v) const {
  std::vector<double> out(spec_.num_outcomes());
  for (Outcome y = 0; y < out.size(); ++y) out[y] = (*this)(y, v);
  return Gamble(std::move(out));
}

std::pair<double, double> ScoringFunction::range() const {
  double hi = 0.0;
  switch (kind_) {
    case LossKind::kSquared: {
      const double w = spec_.space().max_value() - spec_.space().min_value();
      hi = w * w;
      break;
    }
    case LossKind::kPinball: {
      const double w = spec_.space().max_value() - spec_.space().min_value();
      hi = std::max(spec_.tau(), 1.0 - spec_.tau()) * w;
      break;
    }
    case LossKind::kBrier:
      hi = 2.0;
      break;
  }
  return {offset_, scale_ * hi + offset_};
}

// --- IdentificationFunction ------------------------------------------------

IdentificationFunction IdentificationFunction::For(const PropertySpec& spec) { return IdentificationFunction(spec); }

std::size_t IdentificationFunction::dimension() const { return spec_.is_scalar() ? 1 : spec_.num_outcomes(); }

double IdentificationFunction::operator()(Outcome y, const PropertyValue& v) const {
  switch (spec_.kind()) {
    case PropertyKind::kMean:
      return spec_.space().value(y) - v.scalar();
    case PropertyKind::kQuantile:
      return spec_.tau() - (spec_.space().value(y) <= v.scalar() ? 1.0 : 0.0);
    case PropertyKind::kFullDistribution:
      break;
  }
  throw StructuralError("the distribution's identification function is vector-valued; use components()");
}

Gamble IdentificationFunction::row(const PropertyValue& v) const {
  std::vector<double> out(spec_.num_outcomes());
  for (Outcome y = 0; y < out.size(); ++y) out[y] = (*this)(y, v);
  return Gamble(std::move(out));
}

std::vector<Gamble> IdentificationFunction::components(const PropertyValue& v) const {
  if (spec_.is_scalar()) return {row(v)};
  const std::size_t n = spec_.num_outcomes();
  if (v.coords().size() != n) throw StructuralError("distribution value has the wrong dimension");
  std::vector<Gamble> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> g(n);
    for (Outcome y = 0; y < n; ++y) g[y] = (y == k ? 1.0 : 0.0) - v.coords()[k];
    out.emplace_back(std::move(g));
  }
  return out;
}

double scoring(const ScoringFunction& sf, Outcome y, const PropertyValue& v) {
  if (y >= sf.property().num_outcomes()) throw StructuralError("outcome index out of range");
  sf.property().require_in_value_set(v);
  return sf(y, v);
}

double identification(const IdentificationFunction& idf, Outcome y, const PropertyValue& v) {
  if (y >= idf.property().num_outcomes()) throw StructuralError("outcome index out of range");
  idf.property().require_in_value_set(v);
  return idf(y, v);
}

// --- LevelSetPolytope ------------------------------------------------------

LevelSetPolytope::LevelSetPolytope(std::size_t n, std::vector<std::vector<double>> eq_rows,
                                   std::vector<double> eq_rhs, std::vector<std::vector<double>> ub_rows,
                                   std::vector<double> ub_rhs)
    : n_(n),
      eq_rows_(std::move(eq_rows)),
      eq_rhs_(std::move(eq_rhs)),
      ub_rows_(std::move(ub_rows)),
      ub_rhs_(std::move(ub_rhs)) {
  if (n_ < 1) throw StructuralError("polytope over an empty outcome space");
  if (eq_rows_.size() != eq_rhs_.size() || ub_rows_.size() != ub_rhs_.size()) {
    throw StructuralError("constraint/rhs count mismatch");
  }
  for (const auto& r : eq_rows_) {
    if (r.size() != n_) throw StructuralError("constraint row has the wrong dimension");
  }
  for (const auto& r : ub_rows_) {
    if (r.size() != n_) throw StructuralError("constraint row has the wrong dimension");
  }
  if (n_ <= kMaxVertexEnumeration) {
    vertices_ = EnumerateVertices(n_, eq_rows_, eq_rhs_, ub_rows_, ub_rhs_);
    if (vertices_->empty()) throw DomainError("level set is empty");
  } else {
    LinearProgram lp;
    lp.num_vars = n_;
    lp.objective.assign(n_, 0.0);
    lp.add_eq(std::vector<double>(n_, 1.0), 1.0);
    for (std::size_t i = 0; i < eq_rows_.size(); ++i) lp.add_eq(eq_rows_[i], eq_rhs_[i]);
    for (std::size_t i = 0; i < ub_rows_.size(); ++i) lp.add_ub(ub_rows_[i], ub_rhs_[i]);
    if (solve_lp(lp).status != LpStatus::kOptimal) throw DomainError("level set is empty");
  }
}

LevelSetPolytope LevelSetPolytope::Simplex(std::size_t n) { return LevelSetPolytope(n, {}, {}, {}, {}); }

LevelSetPolytope LevelSetPolytope::Singleton(const Distribution& d) {
  const std::size_t n = d.size();
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> r(n, 0.0);
    r[k] = 1.0;
    rows.push_back(std::move(r));
    rhs.push_back(d[k]);
  }
  return LevelSetPolytope(n, std::move(rows), std::move(rhs), {}, {});
}

const std::vector<Distribution>& LevelSetPolytope::vertices() const {
  if (!vertices_) throw PreconditionError("vertices are only cached for n <= 12");
  return *vertices_;
}

double LevelSetPolytope::residual(std::span<const double> phi) const {
  if (phi.size() != n_) throw StructuralError("point has the wrong dimension");
  double r = std::abs(std::accumulate(phi.begin(), phi.end(), 0.0) - 1.0);
  for (double w : phi) r = std::max(r, -w);
  for (std::size_t i = 0; i < eq_rows_.size(); ++i) r = std::max(r, std::abs(Dot(eq_rows_[i], phi) - eq_rhs_[i]));
  for (std::size_t i = 0; i < ub_rows_.size(); ++i) r = std::max(r, Dot(ub_rows_[i], phi) - ub_rhs_[i]);
  return r;
}

Distribution LevelSetPolytope::any_member() const {
  if (vertices_) return vertices_->front();
  LinearProgram lp;
  lp.num_vars = n_;
  lp.objective.assign(n_, 0.0);
  lp.add_eq(std::vector<double>(n_, 1.0), 1.0);
  for (std::size_t i = 0; i < eq_rows_.size(); ++i) lp.add_eq(eq_rows_[i], eq_rhs_[i]);
  for (std::size_t i = 0; i < ub_rows_.size(); ++i) lp.add_ub(ub_rows_[i], ub_rhs_[i]);
  auto sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) throw NumericError("feasible point search failed", sol.residual);
  for (double& w : sol.x) w = std::max(w, 0.0);
  return Distribution(sol.x);
}

LevelSetPolytope level_set(const PropertySpec& spec, const PropertyValue& v) {
  spec.require_in_value_set(v);
  const std::size_t n = spec.num_outcomes();
  switch (spec.kind()) {
    case PropertyKind::kMean: {
      auto vals = spec.space().numeric_values();
      return LevelSetPolytope(n, {std::vector<double>(vals.begin(), vals.end())}, {v.scalar()}, {}, {});
    }
    case PropertyKind::kQuantile: {
      // F(v-) <= tau <= F(v).
      auto vals = spec.space().numeric_values();
      std::vector<double> below(n, 0.0), at_or_below(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (vals[i] < v.scalar()) below[i] = 1.0;
        if (vals[i] <= v.scalar()) at_or_below[i] = -1.0;
      }
      return LevelSetPolytope(n, {}, {}, {below, at_or_below}, {spec.tau(), -spec.tau()});
    }
    case PropertyKind::kFullDistribution:
      return LevelSetPolytope::Singleton(v.as_distribution());
  }
  throw StructuralError("unknown property kind");
}

// --- grids -----------------------------------------------------------------

namespace {

double Binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

void Compositions(std::size_t parts, std::size_t total, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t k = 0; k <= total; ++k) {
    cur.push_back(k);
    Compositions(parts - 1, total - k, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<PropertyValue> value_grid(const PropertySpec& spec, double resolution) {
  if (!(resolution > 0.0)) throw PreconditionError("grid resolution must be positive");
  std::vector<PropertyValue> grid;
  if (spec.is_scalar()) {
    const double lo = spec.space().min_value();
    const double hi = spec.space().max_value();
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::round((hi - lo) / resolution)));
    grid.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
      grid.emplace_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps));
    }
    return grid;
  }
  const std::size_t n = spec.num_outcomes();
  auto denom = static_cast<std::size_t>(std::max(1.0, std::round(1.0 / resolution)));
  while (denom > 1 && Binomial(denom + n - 1, n - 1) > 200000.0) denom = denom / 2;
  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::size_t> cur;
  Compositions(n, denom, cur, comps);
  for (const auto& c : comps) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<double>(c[i]) / static_cast<double>(denom);
    grid.emplace_back(std::move(w));
  }
  return grid;
}

bool superprediction_contains(const ScoringFunction& sf, const Gamble& g, const std::vector<PropertyValue>& grid,
                              double tol) {
  if (grid.empty()) throw PreconditionError("empty value grid");
  if (g.size() != sf.property().num_outcomes()) throw StructuralError("gamble does not match the outcome space");
  for (const auto& c : grid) {
    bool below = true;
    for (Outcome y = 0; y < g.size() && below; ++y) below = sf(y, c) <= g[y] + tol;
    if (below) return true;
  }
  return false;
}

// --- PropertyModel ---------------------------------------------------------

std::string PropertyModel::id() const { return spec.name() + "+" + loss.name(); }

PropertyModel parse_property_model(const std::string& id, const OutcomeSpace& space) {
  const auto plus = id.find('+');
  const std::string prop = id.substr(0, plus);
  const std::string loss = plus == std::string::npos ? "" : id.substr(plus + 1);

  std::optional<PropertySpec> spec;
  if (prop == "mean") {
    spec = PropertySpec::Mean(space);
  } else if (prop.rfind("quantile@", 0) == 0) {
    double tau = 0.0;
    try {
      std::size_t used = 0;
      tau = std::stod(prop.substr(9), &used);
      if (used != prop.size() - 9) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw StructuralError("bad quantile level in '" + id + "'");
    }
    spec = PropertySpec::Quantile(space, tau);
  } else if (prop == "dist") {
    spec = PropertySpec::FullDistribution(space);
  } else {
    throw StructuralError("unknown property '" + prop + "'");
  }

  ScoringFunction sf = ScoringFunction::For(*spec);
  if (!loss.empty()) {
    if (loss == "squared") {
      sf = ScoringFunction::Squared(*spec);
    } else if (loss == "pinball") {
      sf = ScoringFunction::Pinball(*spec);
    } else if (loss == "brier") {
      sf = ScoringFunction::Brier(*spec);
    } else {
      throw StructuralError("unknown loss '" + loss + "'");
    }
  }
  return PropertyModel{*spec, sf, IdentificationFunction::For(*spec)};
}

}  // namespace fairgamble
