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

#include "linalg.hpp"

#include <cmath>
#include <utility>

namespace fairgamble::internal {

std::optional<std::vector<double>> SolveSquare(Matrix a, std::vector<double> b, double eps) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) < eps) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

std::optional<AffineSubspace> SolveAffine(const Matrix& a_in, const std::vector<double>& b_in, double eps) {
  Matrix a = a_in;
  std::vector<double> b = b_in;
  const std::size_t m = a.size();
  const std::size_t n = m == 0 ? 0 : a[0].size();
  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::size_t piv = row;
    for (std::size_t r = row + 1; r < m; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) < eps) continue;
    std::swap(a[piv], a[row]);
    std::swap(b[piv], b[row]);
    const double p = a[row][col];
    for (std::size_t c = 0; c < n; ++c) a[row][c] /= p;
    b[row] /= p;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == row) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) a[r][c] -= f * a[row][c];
      b[r] -= f * b[row];
    }
    pivot_cols.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < m; ++r) {
    if (std::abs(b[r]) > 1e-9) return std::nullopt;
  }

  AffineSubspace out;
  out.point.assign(n, 0.0);
  for (std::size_t k = 0; k < pivot_cols.size(); ++k) out.point[pivot_cols[k]] = b[k];
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : pivot_cols) is_pivot[c] = true;
  for (std::size_t free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<double> dir(n, 0.0);
    dir[free_col] = 1.0;
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) dir[pivot_cols[k]] = -a[k][free_col];
    out.basis.push_back(std::move(dir));
  }
  return out;
}

}  // namespace fairgamble::internal
