// Copyright 2026 The expertgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EXPERTGAME_SIMPLEX_LP_H_
#define EXPERTGAME_SIMPLEX_LP_H_

#include <vector>

namespace expertgame {

// Dense linear program
//
//   maximize    objective . x
//   subject to  eq_rows x = eq_rhs,  ub_rows x <= ub_rhs,  x >= 0.
//
// Solved exactly by a two-phase primal simplex method on the full tableau
// with Bland's anti-cycling pivot rule (smallest eligible column index;
// ratio ties broken by smallest basic variable index).  The pivot order is a
// pure function of the input, so repeated solves are bitwise reproducible.
// Problems here are tiny (tens of variables), so the dense tableau is the
// simplest exact tool.
struct LpProblem {
  int num_vars = 0;
  std::vector<std::vector<double>> eq_rows;
  std::vector<double> eq_rhs;
  std::vector<std::vector<double>> ub_rows;
  std::vector<double> ub_rhs;
  std::vector<double> objective;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  double objective = 0.0;
  std::vector<double> x;
  // Row multipliers from the optimal basis (B^T y = c_B).  For a maximization
  // problem the inequality multipliers are >= 0 up to roundoff and satisfy
  // objective = eq_rhs . eq_duals + ub_rhs . ub_duals.
  std::vector<double> eq_duals;
  std::vector<double> ub_duals;
  // Largest primal feasibility violation of the reported x (diagnostic).
  double max_residual = 0.0;
};

LpSolution SolveLp(const LpProblem& problem, double tol = 1e-9);

}  // namespace expertgame

#endif  // EXPERTGAME_SIMPLEX_LP_H_
