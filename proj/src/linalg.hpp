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

// Internal dense helpers for tiny systems. Not part of the public API.

#ifndef FAIRGAMBLE_SRC_LINALG_HPP_
#define FAIRGAMBLE_SRC_LINALG_HPP_

#include <cstddef>
#include <optional>
#include <vector>

namespace fairgamble::internal {

using Matrix = std::vector<std::vector<double>>;

// Solves the square system a x = b by partial pivoting; nullopt if singular.
std::optional<std::vector<double>> SolveSquare(Matrix a, std::vector<double> b, double eps = 1e-12);

// Parametrization {x : a x = b} = {p + N z}. nullopt when inconsistent.
struct AffineSubspace {
  std::vector<double> point;
  Matrix basis;  // columns of N stored as rows: basis[k] is the k-th direction
};
std::optional<AffineSubspace> SolveAffine(const Matrix& a, const std::vector<double>& b, double eps = 1e-12);

}  // namespace fairgamble::internal

#endif  // FAIRGAMBLE_SRC_LINALG_HPP_
