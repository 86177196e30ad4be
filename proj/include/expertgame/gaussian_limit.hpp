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

#ifndef EXPERTGAME_GAUSSIAN_LIMIT_H_
#define EXPERTGAME_GAUSSIAN_LIMIT_H_

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "expertgame/game.hpp"

namespace expertgame {

// Interaction regime in which the long-horizon value has a Gaussian
// description: greedy when every pair of experts has mu_i + mu_j >= 1 (the
// adversary pins the common gain at c_min), generous when every pair has
// mu_i + mu_j <= 1 (c_max).  Mixed panels fall outside this description.
enum class LimitRegime { kGreedy, kGenerous };

// Frozen ingredients of the limit: the optimal balanced covariance
// sigma_bar = c* sigma1 - sigma2 and a symmetric factor with
// factor * factor^T = sigma_bar, so sampling factor * Z with standard
// normal Z reproduces the covariance.  factor_inv inverts the factor on its
// positive eigenspace and feeds the derivative estimators.
struct GaussianLimit {
  int num_experts = 0;
  double theta = 0.0;
  LimitRegime regime = LimitRegime::kGreedy;
  double c_star = 0.0;
  Eigen::MatrixXd sigma_bar;
  Eigen::MatrixXd factor;
  Eigen::MatrixXd factor_inv;
  double min_eigenvalue = 0.0;
};

// Throws std::domain_error when no balanced control exists or the panel is
// neither uniformly greedy nor uniformly generous.
GaussianLimit BuildGaussianLimit(const ExpertModel& model, double theta);

struct McValue {
  double value = 0.0;
  double std_error = 0.0;
};

// The limit value
//   u(t, x) = E[ phi_theta(x + sqrt(1 - t) * factor * Z) ] .
// For two experts this reduces to the scalar difference and is returned in
// closed form with std_error = 0; larger panels fall back to the sampled
// estimate below.  At t = 1 the exact terminal payoff is returned for any
// panel size.
McValue EvaluateU(const GaussianLimit& limit, double t,
                  const std::vector<double>& x, int64_t samples,
                  uint64_t seed);

// Monte Carlo estimate of the same expectation, any panel size.  Samples
// are drawn in fixed-size chunks with per-chunk generator streams and
// combined in chunk order, so the result is bitwise independent of the
// thread count.  Serves as the independent cross-check of the closed form.
McValue EvaluateUSampled(const GaussianLimit& limit, double t,
                         const std::vector<double>& x, int64_t samples,
                         uint64_t seed);

// Gradient of u: (1 - theta) times the probability that coordinate i leads
// at maturity, plus theta/N.  Closed form (normal CDF of the difference)
// for two experts; leader frequencies over Monte Carlo draws otherwise
// (ties resolved to the lowest index).  Components sum to one.  Throws
// std::invalid_argument at t = 1, where the payoff has kinks at ties.
std::vector<double> GradientU(const GaussianLimit& limit, double t,
                              const std::vector<double>& x, int64_t samples,
                              uint64_t seed);

// Hessian of u.  Two experts: the Gaussian density of the difference puts
// curvature (1 - theta) pdf / spread on the [[1,-1],[-1,1]] pattern.
// Larger panels use Gaussian integration by parts:
//   H_ij = (1 - theta) E[ 1{leader = i} (factor_inv Z)_j ] / sqrt(1 - t) ,
// symmetrized.  Requires t < 1 and a positive definite covariance.
Eigen::MatrixXd HessianU(const GaussianLimit& limit, double t,
                         const std::vector<double>& x, int64_t samples,
                         uint64_t seed);

// Log-log growth rates of finite-difference derivatives of u as the
// remaining time tau = 1 - t shrinks: max |u_tt| over probe states against
// tau yields exponent_tt, and similarly for the mixed and third space
// derivative along the difference of the first two coordinates.  A heat
// profile gives roughly -3/2, -1, -1; the probe quantifies how singular
// the value becomes near the horizon.
struct DerivativeExponents {
  double exponent_tt = 0.0;
  double exponent_tx = 0.0;
  double exponent_xxx = 0.0;
};

// t_grid lists the remaining times to probe: at least four points inside
// (0, 1) spanning a decade, so the power law is identifiable.  At each one,
// stencils with steps scaled to the diffusive length are evaluated at the
// origin plus x_samples - 1 randomly placed states.  Two-expert limits
// only, where the closed form makes the stencils exact.
DerivativeExponents ProbeDerivativeBounds(const GaussianLimit& limit,
                                          const std::vector<double>& t_grid,
                                          int x_samples, uint64_t seed);

// Same stencils applied to the diffusion of smooth quadratic terminal data
// (closed form z^2 + variance(tau)).  All exponents come back ~0,
// confirming that the singular growth above is a property of the value and
// not of the probing machinery.
DerivativeExponents ProbeQuadraticDiagnostic(const GaussianLimit& limit,
                                             const std::vector<double>& t_grid,
                                             int x_samples, uint64_t seed);

// Explicit finite-difference solution of the one-dimensional backward
// equation for the reduced two-expert value
//   w_t + max_c (s^2(c) / 2) w_zz = 0 ,  s^2(c)/2 = c (1 - mu1 - mu2) + mu1 mu2
// over c in {c_min, c_max}, marched from the terminal payoff at t = 1 down
// to t = 0 on [z_min, z_max] with the terminal's end values as Dirichlet
// data.
struct Grid1D {
  double z_min = 0.0;
  double z_max = 0.0;
  int nz = 0;
  int nt = 0;
  std::vector<double> values;  // solution at t = 0, node i at z_min + i dz

  double ValueAt(double z) const;  // nearest-node lookup
};

// Smallest stable time-step count for the explicit scheme on this grid.
int SuggestedTimeSteps(const ExpertModel& model, double theta, double z_min,
                       double z_max, int nz);

// nt = 0 picks the suggested count; an explicitly unstable nt is refused
// with the stable count in the message.
Grid1D SolveReducedFd(const ExpertModel& model, double theta, double z_min,
                      double z_max, int nz, int nt);

// Override the terminal data (diagnostics: constant or linear data must be
// reproduced exactly).  Boundary values are pinned to the terminal's ends.
Grid1D SolveReducedFd(const ExpertModel& model, double theta, double z_min,
                      double z_max, int nz, int nt,
                      const std::function<double(double)>& terminal);

// Effective diffusion coefficient of the fully symmetric panel (every
// expert at the same mu): half the variance rate of each coordinate's
// independent part under the optimally corrupted gains, in closed form.
// Nonnegative across the whole (mu, N) range.
double SymmetricHeatConstant(double mu, int num_experts);

// Value of the embedded two-expert game on experts (i, j) at time t and
// full state x, with the pure-max payoff: a lower bound for the N-expert
// scaled value.  Uses the pair's own balanced range and closed form.
double TwoExpertLowerBound(const ExpertModel& model, int i, int j, double t,
                           const std::vector<double>& x);

}  // namespace expertgame

#endif  // EXPERTGAME_GAUSSIAN_LIMIT_H_
