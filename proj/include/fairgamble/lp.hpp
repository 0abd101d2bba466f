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

// Small dense linear programs.
//
// Two-phase tableau simplex with Bland's anti-cycling rule. The problems met
// in this library have a handful of variables, so the solver favours
// determinism over speed: identical input always walks the same pivots.

#ifndef FAIRGAMBLE_LP_HPP_
#define FAIRGAMBLE_LP_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace fairgamble {

//   maximize    objective . x
//   subject to  eq_rows x  = eq_rhs
//               ub_rows x <= ub_rhs
//               x_j >= 0 unless is_free[j]
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<std::vector<double>> eq_rows;
  std::vector<double> eq_rhs;
  std::vector<std::vector<double>> ub_rows;
  std::vector<double> ub_rhs;
  std::vector<bool> is_free;  // empty means every variable is non-negative

  void add_eq(std::vector<double> row, double rhs);
  void add_ub(std::vector<double> row, double rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  // Largest constraint violation of x against the original problem.
  double residual = 0.0;
  int iterations = 0;
};

LpSolution solve_lp(const LinearProgram& lp, int max_iterations = 20000);

}  // namespace fairgamble

#endif  // FAIRGAMBLE_LP_HPP_
