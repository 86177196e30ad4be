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

#ifndef EXPERTGAME_BALANCE_H_
#define EXPERTGAME_BALANCE_H_

#include <vector>

#include <Eigen/Dense>

#include "expertgame/game.hpp"

namespace expertgame {

// Model-level covariance building blocks.  For a one-round control with
// common expected gain c, the gain second moments contract against any
// symmetric S as
//   sum_ij S_ij Q_ij = c * tr(sigma1 S) - tr(sigma2 S) ,
// so sigma1 (ones on the diagonal, mu_i + mu_j off it) and sigma2 (zero
// diagonal, mu_i * mu_j off it) carry everything the diffusion limit needs.
struct SigmaPair {
  Eigen::MatrixXd sigma1;
  Eigen::MatrixXd sigma2;
};

SigmaPair MakeSigmaPair(const ExpertModel& model);

// Total relative corruption mass needed to pull every expert's expected gain
// to the common level c:
//   s(c) = sum_i max((mu_i - c) / mu_i, (c - mu_i) / (1 - mu_i)) ,
// with 0/0 read as 0, so a boundary expert contributes c (mu_i = 0) or 1 - c
// (mu_i = 1).  Convex and piecewise linear in c; a balanced control with
// level c exists iff s(c) <= 1.
double Dispersion(double c, const ExpertModel& model);

// Exact minimization of the dispersion over c in [0, 1].
struct BalancedAnalysis {
  bool feasible = false;   // does any balanced control exist?
  double c_min = 0.0;      // smallest achievable common gain (if feasible)
  double c_max = 0.0;      // largest achievable common gain (if feasible)
  double argmin_c = 0.0;   // leftmost minimizer of the dispersion
  double s_min = 0.0;      // minimum dispersion value
};

// Scans the dispersion's breakpoints ({mu_i} plus the interval ends) and
// solves the two linear pieces crossing level 1 exactly.  When feasible, the
// interval ends are cross-checked against an independent linear program over
// the control simplex; a disagreement beyond cross_check_tol throws, since
// it would mean one of the two routes is wrong.
BalancedAnalysis AnalyzeBalanced(const ExpertModel& model,
                                 double cross_check_tol = 1e-8);

// Builds a balanced control with common expected gain c by distributing the
// unit corruption budget across experts in proportion to their required
// relative mass.  Throws std::invalid_argument if s(c) > 1.
AdversaryControl ConstructBalanced(double c, const ExpertModel& model);

// Diffusion coefficient restricted to balanced controls:
//   H_B(S) = (1/2) * (c* tr(sigma1 S) - tr(sigma2 S)) ,
// where c* is whichever of c_max / c_min maximizes the expression (c_min on
// a tie).  Throws std::domain_error when no balanced control exists.
struct BalancedHamiltonian {
  double value = 0.0;
  double c_star = 0.0;
};

BalancedHamiltonian HamiltonianBalanced(const Eigen::MatrixXd& s_matrix,
                                        const BalancedAnalysis& analysis,
                                        const SigmaPair& sigmas);

// Unrestricted diffusion coefficient at a forecaster gradient p: maximizes
// (1/2) sum_ij S_ij Q_ij(alpha) over controls under which every expert in
// the support of p attains the maximal expected gain.  The objective is
// linear in alpha (second moments mix over corruption events), so this is a
// single linear program.  Throws std::domain_error, with the infeasibility
// residual in the message, when no control lets the support lead.
double HamiltonianAtGradient(const std::vector<double>& p,
                             const Eigen::MatrixXd& s_matrix,
                             const ExpertModel& model);

// Spectrum of the balanced covariance c * sigma1 - sigma2.
struct PosdefReport {
  double min_eigenvalue = 0.0;
  bool positive_definite = false;
  std::vector<double> eigenvalues;  // ascending
};

PosdefReport CheckPosdef(double c, const SigmaPair& sigmas);

// Numerical search for the smallest spread between the best and second-best
// expected gain over controls that leave at least two distinct levels.
// Scans all controls on the resolution-g simplex grid, then locally refines
// the best one by moving mass between coordinates at geometrically shrinking
// step sizes.
struct DistinctGapEstimate {
  double delta_hat = 0.0;
  AdversaryControl argmin;
  // Heuristic grid bound max(0, delta_hat - 4N/g) from the gains' modulus of
  // continuity over one grid cell.  Indicative only - it is not a certified
  // lower bound on the true infimum, which the refinement stage routinely
  // pushes below the initial grid value.
  double grid_certificate = 0.0;
};

DistinctGapEstimate ComputeDelta(const ExpertModel& model, int grid,
                                 int refine_iters);

// Smallest achievable total shortfall sum_i (max_j c_j - c_i), found by a
// linear program.  Zero exactly when a balanced control exists.
struct DrainEstimate {
  double value = 0.0;
  AdversaryControl argmin;
};

DrainEstimate MinTotalDrain(const ExpertModel& model);

}  // namespace expertgame

#endif  // EXPERTGAME_BALANCE_H_
