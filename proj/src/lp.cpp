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

#include "fairgamble/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fairgamble/errors.hpp"

namespace fairgamble {
namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-11;
constexpr double kFeasibilityEps = 1e-9;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& cost(std::size_t c) { return at(rows_, c); }
  double value() const { return at(rows_, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

  void drop_row(std::size_t r) {
    // Swap-with-last keeps the layout dense; the objective row moves up.
    for (std::size_t c = 0; c <= cols_; ++c) std::swap(at(r, c), at(rows_ - 1, c));
    for (std::size_t c = 0; c <= cols_; ++c) std::swap(at(rows_ - 1, c), at(rows_, c));
    --rows_;
    data_.resize((rows_ + 1) * (cols_ + 1));
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

// Runs Bland-rule simplex on the z-row (stored as negated reduced costs).
// Columns at or beyond `allowed_cols` never enter the basis.
LpStatus RunSimplex(Tableau& t, std::vector<std::size_t>& basis, std::size_t allowed_cols, int max_iter,
                    int& iterations) {
  while (true) {
    if (iterations >= max_iter) return LpStatus::kIterationLimit;
    std::size_t enter = allowed_cols;
    for (std::size_t c = 0; c < allowed_cols; ++c) {
      if (t.cost(c) < -kCostEps) {
        enter = c;
        break;
      }
    }
    if (enter == allowed_cols) return LpStatus::kOptimal;

    std::size_t leave = t.rows();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= kPivotEps) continue;
      const double ratio = t.rhs(r) / a;
      if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basis[r] < basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave == t.rows()) return LpStatus::kUnbounded;
    t.pivot(leave, enter);
    basis[leave] = enter;
    ++iterations;
  }
}

}  // namespace

void LinearProgram::add_eq(std::vector<double> row, double rhs) {
  eq_rows.push_back(std::move(row));
  eq_rhs.push_back(rhs);
}

void LinearProgram::add_ub(std::vector<double> row, double rhs) {
  ub_rows.push_back(std::move(row));
  ub_rhs.push_back(rhs);
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

LpSolution solve_lp(const LinearProgram& lp, int max_iterations) {
  const std::size_t n = lp.num_vars;
  if (lp.objective.size() != n) throw StructuralError("LP objective size mismatch");
  if (lp.eq_rows.size() != lp.eq_rhs.size() || lp.ub_rows.size() != lp.ub_rhs.size()) {
    throw StructuralError("LP constraint/rhs count mismatch");
  }
  for (const auto& row : lp.eq_rows) {
    if (row.size() != n) throw StructuralError("LP equality row size mismatch");
  }
  for (const auto& row : lp.ub_rows) {
    if (row.size() != n) throw StructuralError("LP inequality row size mismatch");
  }
  if (!lp.is_free.empty() && lp.is_free.size() != n) throw StructuralError("LP free-flag size mismatch");

  // Column layout: [structural (free vars split into +/-) | slacks | artificials].
  std::vector<std::size_t> pos_col(n), neg_col(n, SIZE_MAX);
  std::size_t ncols = 0;
  for (std::size_t j = 0; j < n; ++j) {
    pos_col[j] = ncols++;
    if (!lp.is_free.empty() && lp.is_free[j]) neg_col[j] = ncols++;
  }
  const std::size_t n_struct = ncols;
  const std::size_t m_eq = lp.eq_rows.size();
  const std::size_t m_ub = lp.ub_rows.size();
  const std::size_t m = m_eq + m_ub;
  const std::size_t n_slack = m_ub;
  const std::size_t art0 = n_struct + n_slack;
  const std::size_t total = art0 + m;

  Tableau t(m, total);
  std::vector<std::size_t> basis(m);
  auto fill_row = [&](std::size_t r, const std::vector<double>& row, double rhs, std::ptrdiff_t slack) {
    const double sign = rhs < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      t.at(r, pos_col[j]) = sign * row[j];
      if (neg_col[j] != SIZE_MAX) t.at(r, neg_col[j]) = -sign * row[j];
    }
    if (slack >= 0) t.at(r, n_struct + static_cast<std::size_t>(slack)) = sign;
    t.at(r, art0 + r) = 1.0;
    t.rhs(r) = sign * rhs;
    basis[r] = art0 + r;
  };
  for (std::size_t i = 0; i < m_eq; ++i) fill_row(i, lp.eq_rows[i], lp.eq_rhs[i], -1);
  for (std::size_t i = 0; i < m_ub; ++i) {
    fill_row(m_eq + i, lp.ub_rows[i], lp.ub_rhs[i], static_cast<std::ptrdiff_t>(i));
  }

  LpSolution sol;
  // Phase 1: maximize -sum(artificials).
  for (std::size_t c = 0; c <= total; ++c) t.cost(c) = 0.0;
  for (std::size_t r = 0; r < m; ++r) t.cost(art0 + r) = 1.0;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c <= total; ++c) t.cost(c) -= t.at(r, c);
  }
  LpStatus st = RunSimplex(t, basis, total, max_iterations, sol.iterations);
  if (st == LpStatus::kIterationLimit) {
    sol.status = st;
    return sol;
  }
  if (t.value() < -kFeasibilityEps) {
    sol.status = LpStatus::kInfeasible;
    return sol;
  }

  // Drive remaining artificials out of the basis or drop redundant rows.
  for (std::size_t r = 0; r < t.rows();) {
    if (basis[r] < art0) {
      ++r;
      continue;
    }
    std::size_t pc = art0;
    for (std::size_t c = 0; c < art0; ++c) {
      if (std::abs(t.at(r, c)) > 1e-9) {
        pc = c;
        break;
      }
    }
    if (pc < art0) {
      t.pivot(r, pc);
      basis[r] = pc;
      ++r;
    } else {
      std::swap(basis[r], basis[t.rows() - 1]);
      t.drop_row(r);
      basis.pop_back();
    }
  }

  // Phase 2 on the original objective.
  for (std::size_t c = 0; c <= total; ++c) t.cost(c) = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    t.cost(pos_col[j]) = -lp.objective[j];
    if (neg_col[j] != SIZE_MAX) t.cost(neg_col[j]) = lp.objective[j];
  }
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const double f = t.cost(basis[r]);
    if (f == 0.0) continue;
    for (std::size_t c = 0; c <= total; ++c) t.cost(c) -= f * t.at(r, c);
  }
  st = RunSimplex(t, basis, art0, max_iterations, sol.iterations);
  sol.status = st;
  if (st != LpStatus::kOptimal) return sol;

  std::vector<double> cols(total, 0.0);
  for (std::size_t r = 0; r < t.rows(); ++r) cols[basis[r]] = t.rhs(r);
  sol.x.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    sol.x[j] = cols[pos_col[j]] - (neg_col[j] != SIZE_MAX ? cols[neg_col[j]] : 0.0);
  }
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += lp.objective[j] * sol.x[j];

  double residual = 0.0;
  for (std::size_t i = 0; i < m_eq; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += lp.eq_rows[i][j] * sol.x[j];
    residual = std::max(residual, std::abs(s - lp.eq_rhs[i]));
  }
  for (std::size_t i = 0; i < m_ub; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += lp.ub_rows[i][j] * sol.x[j];
    residual = std::max(residual, s - lp.ub_rhs[i]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (lp.is_free.empty() || !lp.is_free[j]) residual = std::max(residual, -sol.x[j]);
  }
  sol.residual = residual;
  return sol;
}

}  // namespace fairgamble
