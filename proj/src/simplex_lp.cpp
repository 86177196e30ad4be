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

#include "expertgame/simplex_lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expertgame {
namespace {

constexpr double kPivotEps = 1e-11;

// Dense tableau with an explicit reduced-cost row.  Columns are laid out as
// [structural x | slacks | artificials | rhs].
struct Tableau {
  int rows = 0;
  int cols = 0;  // excluding rhs
  std::vector<double> data;  // rows x (cols + 1)

  double& At(int r, int c) { return data[static_cast<size_t>(r) * (cols + 1) + c]; }
  double At(int r, int c) const {
    return data[static_cast<size_t>(r) * (cols + 1) + c];
  }
  double& Rhs(int r) { return At(r, cols); }
};

void Pivot(Tableau& t, std::vector<double>& obj_row, double& obj_value,
           int pivot_row, int pivot_col) {
  const double p = t.At(pivot_row, pivot_col);
  const double inv = 1.0 / p;
  for (int c = 0; c <= t.cols; ++c) t.At(pivot_row, c) *= inv;
  t.At(pivot_row, pivot_col) = 1.0;  // kill roundoff on the pivot itself
  for (int r = 0; r < t.rows; ++r) {
    if (r == pivot_row) continue;
    const double factor = t.At(r, pivot_col);
    if (factor == 0.0) continue;
    for (int c = 0; c <= t.cols; ++c) {
      t.At(r, c) -= factor * t.At(pivot_row, c);
    }
    t.At(r, pivot_col) = 0.0;
  }
  const double factor = obj_row[pivot_col];
  if (factor != 0.0) {
    for (int c = 0; c < t.cols; ++c) obj_row[c] -= factor * t.At(pivot_row, c);
    obj_value -= factor * t.Rhs(pivot_row);
    obj_row[pivot_col] = 0.0;
  }
}

// Runs Bland-rule pivoting until no reduced cost exceeds tol among the
// first `num_enterable` columns.  Returns false on unboundedness.
bool Optimize(Tableau& t, std::vector<int>& basis, std::vector<double>& obj_row,
              double& obj_value, int num_enterable, double tol) {
  for (;;) {
    int enter = -1;
    for (int c = 0; c < num_enterable; ++c) {
      if (obj_row[c] > tol) {
        enter = c;
        break;
      }
    }
    if (enter < 0) return true;
    double min_ratio = -1.0;
    for (int r = 0; r < t.rows; ++r) {
      const double a = t.At(r, enter);
      if (a <= kPivotEps) continue;
      const double ratio = std::max(t.Rhs(r), 0.0) / a;
      if (min_ratio < 0.0 || ratio < min_ratio) min_ratio = ratio;
    }
    if (min_ratio < 0.0) return false;  // unbounded direction
    int leave = -1;
    for (int r = 0; r < t.rows; ++r) {
      const double a = t.At(r, enter);
      if (a <= kPivotEps) continue;
      const double ratio = std::max(t.Rhs(r), 0.0) / a;
      if (ratio <= min_ratio + kPivotEps &&
          (leave < 0 || basis[r] < basis[leave])) {
        leave = r;
      }
    }
    Pivot(t, obj_row, obj_value, leave, enter);
    basis[leave] = enter;
  }
}

// Solves B^T y = c_B by Gaussian elimination with partial pivoting, where B
// is assembled from the standardized constraint columns of the basis.
std::vector<double> SolveDuals(const std::vector<std::vector<double>>& columns,
                               const std::vector<int>& basis,
                               const std::vector<double>& basic_costs) {
  const int m = static_cast<int>(basis.size());
  // a[r][c] = coefficient of row c in basis column r (i.e. B^T).
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (int r = 0; r < m; ++r) {
    const std::vector<double>& col = columns[basis[r]];
    for (int c = 0; c < m; ++c) a[r][c] = col[c];
    a[r][m] = basic_costs[r];
  }
  for (int k = 0; k < m; ++k) {
    int piv = k;
    for (int r = k + 1; r < m; ++r) {
      if (std::fabs(a[r][k]) > std::fabs(a[piv][k])) piv = r;
    }
    std::swap(a[k], a[piv]);
    if (std::fabs(a[k][k]) < 1e-13) continue;  // degenerate basis row
    for (int r = k + 1; r < m; ++r) {
      const double f = a[r][k] / a[k][k];
      if (f == 0.0) continue;
      for (int c = k; c <= m; ++c) a[r][c] -= f * a[k][c];
    }
  }
  std::vector<double> y(m, 0.0);
  for (int k = m - 1; k >= 0; --k) {
    if (std::fabs(a[k][k]) < 1e-13) continue;
    double acc = a[k][m];
    for (int c = k + 1; c < m; ++c) acc -= a[k][c] * y[c];
    y[k] = acc / a[k][k];
  }
  return y;
}

}  // namespace

LpSolution SolveLp(const LpProblem& problem, double tol) {
  const int n = problem.num_vars;
  const int m_eq = static_cast<int>(problem.eq_rows.size());
  const int m_ub = static_cast<int>(problem.ub_rows.size());
  const int m = m_eq + m_ub;
  if (static_cast<int>(problem.objective.size()) != n ||
      problem.eq_rhs.size() != problem.eq_rows.size() ||
      problem.ub_rhs.size() != problem.ub_rows.size()) {
    throw std::invalid_argument("inconsistent LP dimensions");
  }

  // Standardized rows: eq rows first, then ub rows with a slack variable.
  // Rows with negative rhs are negated so the rhs is nonnegative; the sign
  // flip is undone when reporting duals.
  std::vector<double> row_sign(m, 1.0);
  Tableau t;
  t.rows = m;
  const int slack_base = n;
  int num_artificial = 0;
  std::vector<int> artificial_of_row(m, -1);
  for (int r = 0; r < m; ++r) {
    const bool is_eq = r < m_eq;
    const double rhs = is_eq ? problem.eq_rhs[r] : problem.ub_rhs[r - m_eq];
    const bool negate = rhs < 0.0;
    if (negate) row_sign[r] = -1.0;
    // An eq row always needs an artificial; a negated ub row's slack has
    // coefficient -1, so it needs one too.
    if (is_eq || negate) artificial_of_row[r] = num_artificial++;
  }
  const int artificial_base = slack_base + m_ub;
  t.cols = n + m_ub + num_artificial;
  t.data.assign(static_cast<size_t>(m) * (t.cols + 1), 0.0);

  std::vector<int> basis(m, -1);
  for (int r = 0; r < m; ++r) {
    const bool is_eq = r < m_eq;
    const std::vector<double>& row =
        is_eq ? problem.eq_rows[r] : problem.ub_rows[r - m_eq];
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("inconsistent LP row length");
    }
    const double rhs = is_eq ? problem.eq_rhs[r] : problem.ub_rhs[r - m_eq];
    for (int c = 0; c < n; ++c) t.At(r, c) = row_sign[r] * row[c];
    if (!is_eq) t.At(r, slack_base + (r - m_eq)) = row_sign[r];
    t.Rhs(r) = row_sign[r] * rhs;
    if (artificial_of_row[r] >= 0) {
      t.At(r, artificial_base + artificial_of_row[r]) = 1.0;
      basis[r] = artificial_base + artificial_of_row[r];
    } else {
      basis[r] = slack_base + (r - m_eq);
    }
  }

  LpSolution solution;

  // Phase 1: maximize minus the sum of artificials.
  if (num_artificial > 0) {
    std::vector<double> obj_row(t.cols, 0.0);
    double obj_value = 0.0;
    for (int c = artificial_base; c < t.cols; ++c) obj_row[c] = -1.0;
    for (int r = 0; r < m; ++r) {
      if (basis[r] >= artificial_base) {
        for (int c = 0; c < t.cols; ++c) obj_row[c] += t.At(r, c);
        obj_value += t.Rhs(r);
      }
    }
    if (!Optimize(t, basis, obj_row, obj_value, artificial_base, tol)) {
      throw std::runtime_error("phase-1 LP reported unbounded");
    }
    // obj_value tracks the negated phase-1 objective, i.e. the total
    // artificial mass still in the solution.
    if (obj_value > 10 * tol) {
      solution.status = LpStatus::kInfeasible;
      // Phase-1 optimum: minus the smallest total constraint violation any
      // nonnegative point can achieve.  Callers report it as an
      // infeasibility certificate.
      solution.objective = -obj_value;
      return solution;
    }
    // Drive any artificial still basic (at level ~0) out of the basis.
    for (int r = 0; r < m; ++r) {
      if (basis[r] < artificial_base) continue;
      int enter = -1;
      for (int c = 0; c < artificial_base; ++c) {
        if (std::fabs(t.At(r, c)) > kPivotEps) {
          enter = c;
          break;
        }
      }
      if (enter >= 0) {
        Pivot(t, obj_row, obj_value, r, enter);
        basis[r] = enter;
      }
      // Otherwise the row is redundant; the artificial stays basic at zero
      // and its column is never eligible to re-enter.
    }
  }

  // Phase 2: the real objective.
  {
    std::vector<double> obj_row(t.cols, 0.0);
    double obj_value = 0.0;
    for (int c = 0; c < n; ++c) obj_row[c] = problem.objective[c];
    for (int r = 0; r < m; ++r) {
      const int b = basis[r];
      if (b < n && problem.objective[b] != 0.0) {
        const double cost = problem.objective[b];
        for (int c = 0; c < t.cols; ++c) obj_row[c] -= cost * t.At(r, c);
        obj_value += cost * t.Rhs(r);
      }
    }
    if (!Optimize(t, basis, obj_row, obj_value, artificial_base, tol)) {
      solution.status = LpStatus::kUnbounded;
      return solution;
    }
  }

  solution.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    if (basis[r] < n) solution.x[basis[r]] = std::max(t.Rhs(r), 0.0);
  }
  double obj = 0.0;
  for (int c = 0; c < n; ++c) obj += problem.objective[c] * solution.x[c];
  solution.objective = obj;

  // Duals from the optimal basis, in standardized space, then mapped back
  // through the row sign flips.
  {
    std::vector<std::vector<double>> columns(
        t.cols, std::vector<double>(m, 0.0));
    for (int r = 0; r < m; ++r) {
      const bool is_eq = r < m_eq;
      const std::vector<double>& row =
          is_eq ? problem.eq_rows[r] : problem.ub_rows[r - m_eq];
      for (int c = 0; c < n; ++c) columns[c][r] = row_sign[r] * row[c];
      if (!is_eq) columns[slack_base + (r - m_eq)][r] = row_sign[r];
    }
    for (int k = 0; k < num_artificial; ++k) {
      for (int r = 0; r < m; ++r) {
        if (artificial_of_row[r] == k) columns[artificial_base + k][r] = 1.0;
      }
    }
    std::vector<double> basic_costs(m, 0.0);
    for (int r = 0; r < m; ++r) {
      if (basis[r] < n) basic_costs[r] = problem.objective[basis[r]];
    }
    std::vector<double> y = SolveDuals(columns, basis, basic_costs);
    solution.eq_duals.assign(m_eq, 0.0);
    solution.ub_duals.assign(m_ub, 0.0);
    for (int r = 0; r < m_eq; ++r) solution.eq_duals[r] = row_sign[r] * y[r];
    for (int r = 0; r < m_ub; ++r) {
      solution.ub_duals[r] = row_sign[m_eq + r] * y[m_eq + r];
    }
  }

  // Primal feasibility residual of the reported point.
  double residual = 0.0;
  for (int c = 0; c < n; ++c) residual = std::max(residual, -solution.x[c]);
  for (int r = 0; r < m_eq; ++r) {
    double lhs = 0.0;
    for (int c = 0; c < n; ++c) lhs += problem.eq_rows[r][c] * solution.x[c];
    residual = std::max(residual, std::fabs(lhs - problem.eq_rhs[r]));
  }
  for (int r = 0; r < m_ub; ++r) {
    double lhs = 0.0;
    for (int c = 0; c < n; ++c) lhs += problem.ub_rows[r][c] * solution.x[c];
    residual = std::max(residual, lhs - problem.ub_rhs[r]);
  }
  solution.max_residual = residual;
  return solution;
}

}  // namespace expertgame
