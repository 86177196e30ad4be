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

#include "expertgame/balance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "expertgame/simplex_lp.hpp"

namespace expertgame {
namespace {

void CheckLevel(double c) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw std::invalid_argument("common gain level c = " + std::to_string(c) +
                                " outside [0, 1]");
  }
}

// Relative corruption mass expert j needs to land exactly at level c.  The
// branches keep the boundary cases mu = 0 and mu = 1 finite: whichever
// denominator would vanish belongs to the branch that cannot be taken.
double ExpertMass(double mu, double c) {
  if (c == mu) return 0.0;
  if (c < mu) return (mu - c) / mu;
  return (c - mu) / (1.0 - mu);
}

// tr(A * S) for symmetric A, S.
double TraceProduct(const Eigen::MatrixXd& a, const Eigen::MatrixXd& s) {
  return a.cwiseProduct(s).sum();
}

void CheckSymmetricSize(const Eigen::MatrixXd& s_matrix, int n,
                        const char* what) {
  if (s_matrix.rows() != n || s_matrix.cols() != n) {
    throw std::invalid_argument(std::string(what) + " must be " +
                                std::to_string(n) + "x" + std::to_string(n) +
                                ", got " + std::to_string(s_matrix.rows()) +
                                "x" + std::to_string(s_matrix.cols()));
  }
}

// (1/2) sum_ij S_ij Q_ij for the corruption event pinning expert k to value
// v, with every other gain an independent Bernoulli(mu).
double EventObjective(int k, int v, const Eigen::MatrixXd& s_matrix,
                      const ExpertModel& model) {
  const int n = model.num_experts();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double qi = (i == k) ? static_cast<double>(v) : model.mu[i];
    sum += s_matrix(i, i) * qi;
    for (int j = i + 1; j < n; ++j) {
      const double qj = (j == k) ? static_cast<double>(v) : model.mu[j];
      sum += 2.0 * s_matrix(i, j) * qi * qj;
    }
  }
  return 0.5 * sum;
}

// Largest gain level strictly separated from the top one, or nothing when
// every expert sits within kTieTol of the maximum.
constexpr double kTieTol = 1e-9;

std::optional<double> DistinctGap(const std::vector<double>& c) {
  const double top = *std::max_element(c.begin(), c.end());
  double second = -std::numeric_limits<double>::infinity();
  for (double ci : c) {
    if (ci <= top - kTieTol) second = std::max(second, ci);
  }
  if (!std::isfinite(second)) return std::nullopt;
  return top - second;
}

std::vector<double> GainsFromMass(const std::vector<double>& mass,
                                  const ExpertModel& model) {
  const int n = model.num_experts();
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) {
    c[i] = model.mu[i] - model.mu[i] * mass[i] + (1.0 - model.mu[i]) * mass[n + i];
  }
  return c;
}

AdversaryControl ControlFromMass(const std::vector<double>& mass, int n) {
  AdversaryControl control;
  control.a.assign(mass.begin(), mass.begin() + n);
  control.b.assign(mass.begin() + n, mass.end());
  return control;
}

}  // namespace

SigmaPair MakeSigmaPair(const ExpertModel& model) {
  ValidateModel(model);
  const int n = model.num_experts();
  SigmaPair sigmas;
  sigmas.sigma1 = Eigen::MatrixXd::Zero(n, n);
  sigmas.sigma2 = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    sigmas.sigma1(i, i) = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      sigmas.sigma1(i, j) = model.mu[i] + model.mu[j];
      sigmas.sigma2(i, j) = model.mu[i] * model.mu[j];
    }
  }
  return sigmas;
}

double Dispersion(double c, const ExpertModel& model) {
  ValidateModel(model);
  CheckLevel(c);
  double s = 0.0;
  for (double mu : model.mu) s += ExpertMass(mu, c);
  return s;
}

BalancedAnalysis AnalyzeBalanced(const ExpertModel& model,
                                 double cross_check_tol) {
  ValidateModel(model);

  std::set<double> points(model.mu.begin(), model.mu.end());
  points.insert(0.0);
  points.insert(1.0);
  std::vector<double> bp(points.begin(), points.end());
  std::vector<double> sv(bp.size());
  for (size_t k = 0; k < bp.size(); ++k) sv[k] = Dispersion(bp[k], model);

  BalancedAnalysis analysis;
  size_t best = 0;
  for (size_t k = 1; k < bp.size(); ++k) {
    if (sv[k] < sv[best]) best = k;
  }
  analysis.s_min = sv[best];
  analysis.argmin_c = bp[best];
  analysis.feasible = analysis.s_min <= 1.0;
  if (!analysis.feasible) return analysis;

  // The dispersion is convex and piecewise linear between the breakpoints,
  // so the boundary of {s <= 1} lies on a single piece each side and the
  // roots come out exactly.
  if (sv.front() <= 1.0) {
    analysis.c_min = bp.front();
  } else {
    size_t k = 0;
    while (sv[k + 1] > 1.0) ++k;
    const double t = (sv[k] - 1.0) / (sv[k] - sv[k + 1]);
    analysis.c_min = bp[k] + t * (bp[k + 1] - bp[k]);
  }
  if (sv.back() <= 1.0) {
    analysis.c_max = bp.back();
  } else {
    size_t k = bp.size() - 1;
    while (sv[k - 1] > 1.0) --k;
    const double t = (sv[k] - 1.0) / (sv[k] - sv[k - 1]);
    analysis.c_max = bp[k] + t * (bp[k - 1] - bp[k]);
  }

  // Independent route: extremize c over {controls with all gains equal},
  // written as a linear program in (a, b, c).  The two computations share no
  // machinery, so agreement is a real check on both.
  const int n = model.num_experts();
  LpProblem lp;
  lp.num_vars = 2 * n + 1;
  lp.eq_rows.emplace_back(lp.num_vars, 0.0);
  for (int i = 0; i < 2 * n; ++i) lp.eq_rows.back()[i] = 1.0;
  lp.eq_rhs.push_back(1.0);
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(lp.num_vars, 0.0);
    row[i] = -model.mu[i];
    row[n + i] = 1.0 - model.mu[i];
    row[2 * n] = -1.0;
    lp.eq_rows.push_back(std::move(row));
    lp.eq_rhs.push_back(-model.mu[i]);
  }
  lp.objective.assign(lp.num_vars, 0.0);

  for (int direction : {+1, -1}) {
    lp.objective[2 * n] = direction;
    const LpSolution sol = SolveLp(lp);
    if (sol.status != LpStatus::kOptimal) {
      throw std::runtime_error(
          "balanced-range cross-check: linear program did not solve a range "
          "the dispersion scan found feasible");
    }
    const double lp_c = direction > 0 ? sol.objective : -sol.objective;
    const double scan_c = direction > 0 ? analysis.c_max : analysis.c_min;
    if (std::abs(lp_c - scan_c) > cross_check_tol) {
      throw std::runtime_error(
          "balanced-range cross-check failed: dispersion scan gives " +
          std::to_string(scan_c) + ", linear program gives " +
          std::to_string(lp_c));
    }
  }
  return analysis;
}

AdversaryControl ConstructBalanced(double c, const ExpertModel& model) {
  ValidateModel(model);
  CheckLevel(c);
  const int n = model.num_experts();

  std::vector<double> t(n);
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    t[j] = ExpertMass(model.mu[j], c);
    s += t[j];
  }
  if (s > 1.0 + 1e-12) {
    throw std::invalid_argument(
        "no balanced control reaches level " + std::to_string(c) +
        ": required corruption mass " + std::to_string(s) + " exceeds 1");
  }

  AdversaryControl control;
  control.a.assign(n, 0.0);
  control.b.assign(n, 0.0);
  if (s == 0.0) {
    // Every expert already sits at c.  Spend the mandatory unit of corruption
    // on expert 1 with its own gain law, which changes nothing in
    // distribution.
    control.a[0] = 1.0 - c;
    control.b[0] = c;
    return control;
  }

  // Expert j gets mass t_j / s, split so that its expected gain lands on c
  // while the slack (1 - s) of uncommitted mass is spent in proportion on
  // distribution-preserving corruption.
  for (int j = 0; j < n; ++j) {
    const double mu = model.mu[j];
    if (c > mu) {
      control.a[j] = (c - mu) * (1.0 / s - 1.0);
      control.b[j] = (c - mu) * (1.0 + mu / (s * (1.0 - mu)));
    } else if (c < mu) {
      control.a[j] = (mu - c) * (1.0 + (1.0 - mu) / (s * mu));
      control.b[j] = (mu - c) * (1.0 / s - 1.0);
    }
  }
  return SanitizeControl(std::move(control), 1e-9);
}

BalancedHamiltonian HamiltonianBalanced(const Eigen::MatrixXd& s_matrix,
                                        const BalancedAnalysis& analysis,
                                        const SigmaPair& sigmas) {
  CheckSymmetricSize(s_matrix, static_cast<int>(sigmas.sigma1.rows()),
                     "Hessian argument");
  if (!analysis.feasible) {
    throw std::domain_error(
        "balanced diffusion coefficient undefined: no control equalizes the "
        "expected gains (minimum dispersion " +
        std::to_string(analysis.s_min) + " > 1)");
  }
  const double tr1 = TraceProduct(sigmas.sigma1, s_matrix);
  const double tr2 = TraceProduct(sigmas.sigma2, s_matrix);
  BalancedHamiltonian h;
  h.c_star = tr1 > 0.0 ? analysis.c_max : analysis.c_min;
  h.value = 0.5 * (h.c_star * tr1 - tr2);
  return h;
}

double HamiltonianAtGradient(const std::vector<double>& p,
                             const Eigen::MatrixXd& s_matrix,
                             const ExpertModel& model) {
  ValidateModel(model);
  const int n = model.num_experts();
  if (static_cast<int>(p.size()) != n) {
    throw std::invalid_argument("gradient has " + std::to_string(p.size()) +
                                " entries, model has " + std::to_string(n) +
                                " experts");
  }
  CheckSymmetricSize(s_matrix, n, "Hessian argument");
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(p[i]) || p[i] < 0.0) {
      throw std::invalid_argument(
          "gradient entry " + std::to_string(i) +
          " must be finite and nonnegative for the support rule");
    }
  }

  // Only the support of p matters: the constraint set keeps every expert
  // the gradient charges (weakly) in the lead, whatever the masses are.
  std::vector<int> support;
  for (int i = 0; i < n; ++i) {
    if (p[i] > 1e-12) support.push_back(i);
  }

  // Maximize the diffusion objective over controls keeping every supported
  // expert (weakly) in the lead.  Gain differences are linear in the control,
  // so the whole feasible set is polyhedral.
  LpProblem lp;
  lp.num_vars = 2 * n;
  lp.eq_rows.emplace_back(lp.num_vars, 1.0);
  lp.eq_rhs.push_back(1.0);
  for (int i : support) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      std::vector<double> row(lp.num_vars, 0.0);
      row[j] = -model.mu[j];
      row[n + j] = 1.0 - model.mu[j];
      row[i] += model.mu[i];
      row[n + i] -= 1.0 - model.mu[i];
      lp.ub_rows.push_back(std::move(row));
      lp.ub_rhs.push_back(model.mu[i] - model.mu[j]);
    }
  }
  lp.objective.resize(lp.num_vars);
  for (int k = 0; k < n; ++k) {
    lp.objective[k] = EventObjective(k, 0, s_matrix, model);
    lp.objective[n + k] = EventObjective(k, 1, s_matrix, model);
  }

  const LpSolution sol = SolveLp(lp);
  if (sol.status == LpStatus::kInfeasible) {
    std::ostringstream msg;
    msg << "diffusion coefficient undefined at this gradient: no control "
           "lets experts {";
    for (size_t k = 0; k < support.size(); ++k) {
      msg << (k ? ", " : "") << support[k];
    }
    msg << "} all attain the maximal expected gain (infeasibility residual "
        << -sol.objective << ")";
    throw std::domain_error(msg.str());
  }
  if (sol.status != LpStatus::kOptimal) {
    throw std::runtime_error(
        "diffusion-coefficient linear program unbounded; the control simplex "
        "is compact, so this indicates a solver failure");
  }
  return sol.objective;
}

PosdefReport CheckPosdef(double c, const SigmaPair& sigmas) {
  CheckLevel(c);
  const Eigen::MatrixXd covariance = c * sigmas.sigma1 - sigmas.sigma2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition of the balanced covariance "
                             "failed to converge");
  }
  PosdefReport report;
  report.eigenvalues.assign(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + covariance.rows());
  report.min_eigenvalue = report.eigenvalues.front();
  report.positive_definite = report.min_eigenvalue > 0.0;
  return report;
}

DistinctGapEstimate ComputeDelta(const ExpertModel& model, int grid,
                                 int refine_iters) {
  ValidateModel(model);
  if (grid < 1) throw std::invalid_argument("grid resolution must be >= 1");
  if (refine_iters < 0) {
    throw std::invalid_argument("refinement round count must be >= 0");
  }
  if (AnalyzeBalanced(model).feasible) {
    throw std::invalid_argument(
        "panel admits a balanced control, so the trailing-expert gap is "
        "zero by construction; the drained-regime scan only applies when "
        "no balanced control exists");
  }
  const int n = model.num_experts();
  const int dims = 2 * n;

  // Refuse hopeless enumerations up front: the grid holds
  // C(grid + 2N - 1, 2N - 1) compositions.
  double count = 1.0;
  for (int k = 1; k < dims; ++k) {
    count *= static_cast<double>(grid + k) / static_cast<double>(k);
  }
  if (count > 2e7) {
    throw std::invalid_argument(
        "grid scan would enumerate about " + std::to_string(count) +
        " controls; lower the resolution or the expert count");
  }

  double best_gap = std::numeric_limits<double>::infinity();
  std::vector<double> best_mass;

  // Walk all compositions of `grid` units over the 2N control coordinates.
  std::vector<int> units(dims, 0);
  units[0] = grid;
  std::vector<double> mass(dims);
  while (true) {
    for (int k = 0; k < dims; ++k) {
      mass[k] = static_cast<double>(units[k]) / static_cast<double>(grid);
    }
    const auto gap = DistinctGap(GainsFromMass(mass, model));
    if (gap && *gap < best_gap) {
      best_gap = *gap;
      best_mass = mass;
    }

    // Next composition in colex order: move one unit from the first nonzero
    // prefix coordinate rightward.
    int k = 0;
    while (k < dims - 1 && units[k] == 0) ++k;
    if (k == dims - 1) break;
    const int carry = units[k] - 1;
    units[k] = 0;
    units[k + 1] += 1;
    units[0] = carry;
  }

  if (best_mass.empty()) {
    // Every grid control ties all experts (possible only for tiny grids on
    // fully symmetric models); report an empty estimate.
    throw std::runtime_error(
        "grid scan found no control with two distinct gain levels; raise the "
        "resolution");
  }

  // Local refinement: shift mass between coordinate pairs at geometrically
  // shrinking steps, keeping only moves that preserve a second distinct
  // level.  This is a descent heuristic, not an exact minimization.
  for (int round = 1; round <= refine_iters; ++round) {
    const double step =
        1.0 / (static_cast<double>(grid) * std::pow(2.0, round));
    for (int sweep = 0; sweep < 25; ++sweep) {
      bool improved = false;
      for (int from = 0; from < dims; ++from) {
        if (best_mass[from] < step) continue;
        for (int to = 0; to < dims; ++to) {
          if (to == from) continue;
          std::vector<double> candidate = best_mass;
          candidate[from] -= step;
          candidate[to] += step;
          const auto gap = DistinctGap(GainsFromMass(candidate, model));
          if (gap && *gap < best_gap) {
            best_gap = *gap;
            best_mass = std::move(candidate);
            improved = true;
          }
        }
      }
      if (!improved) break;
    }
  }

  DistinctGapEstimate estimate;
  estimate.delta_hat = best_gap;
  estimate.argmin = ControlFromMass(best_mass, n);
  estimate.grid_certificate =
      std::max(0.0, best_gap - 4.0 * static_cast<double>(n) /
                                   static_cast<double>(grid));
  return estimate;
}

DrainEstimate MinTotalDrain(const ExpertModel& model) {
  ValidateModel(model);
  const int n = model.num_experts();
  double mu_sum = 0.0;
  for (double mu : model.mu) mu_sum += mu;

  // Variables (a, b, u) with u an upper bound on every expected gain; the
  // objective pins u to the maximum, so maximizing sum_i c_i - N u minimizes
  // the total shortfall below the leader.
  LpProblem lp;
  lp.num_vars = 2 * n + 1;
  lp.eq_rows.emplace_back(lp.num_vars, 1.0);
  lp.eq_rows.back()[2 * n] = 0.0;
  lp.eq_rhs.push_back(1.0);
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(lp.num_vars, 0.0);
    row[i] = -model.mu[i];
    row[n + i] = 1.0 - model.mu[i];
    row[2 * n] = -1.0;
    lp.ub_rows.push_back(std::move(row));
    lp.ub_rhs.push_back(-model.mu[i]);
  }
  lp.objective.assign(lp.num_vars, 0.0);
  for (int i = 0; i < n; ++i) {
    lp.objective[i] = -model.mu[i];
    lp.objective[n + i] = 1.0 - model.mu[i];
  }
  lp.objective[2 * n] = -static_cast<double>(n);

  const LpSolution sol = SolveLp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw std::runtime_error(
        "total-shortfall linear program failed over the compact control "
        "simplex");
  }
  DrainEstimate estimate;
  estimate.value = std::max(0.0, -(sol.objective + mu_sum));
  estimate.argmin = ControlFromMass(
      std::vector<double>(sol.x.begin(), sol.x.begin() + 2 * n), n);
  return estimate;
}

}  // namespace expertgame
