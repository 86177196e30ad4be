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

#include "expertgame/gaussian_limit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "expertgame/balance.hpp"
#include "expertgame/numeric.hpp"
#include "expertgame/parallel.hpp"
#include "expertgame/rng.hpp"

namespace expertgame {
namespace {

constexpr int64_t kMcChunk = 4096;
constexpr double kHorizonTol = 1e-12;

int LeaderIndex(const std::vector<double>& y) {
  int leader = 0;
  for (int i = 1; i < static_cast<int>(y.size()); ++i) {
    if (y[i] > y[leader]) leader = i;
  }
  return leader;
}

double BlendedPayoff(const std::vector<double>& y, double theta) {
  double best = y[0];
  double sum = 0.0;
  for (double v : y) {
    best = std::max(best, v);
    sum += v;
  }
  return (1.0 - theta) * best + theta * sum / static_cast<double>(y.size());
}

void CheckStateTime(const GaussianLimit& limit, double t,
                    const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != limit.num_experts) {
    throw std::invalid_argument("state has " + std::to_string(x.size()) +
                                " coordinates, limit describes " +
                                std::to_string(limit.num_experts) +
                                " experts");
  }
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("time " + std::to_string(t) +
                                " outside [0, 1]");
  }
}

void CheckSampleCount(int64_t samples) {
  if (samples < 1) {
    throw std::invalid_argument("sample count must be positive");
  }
}

// Variance rate of the difference of the first two coordinates.
double PairVarianceRate(const GaussianLimit& limit) {
  return limit.sigma_bar(0, 0) + limit.sigma_bar(1, 1) -
         2.0 * limit.sigma_bar(0, 1);
}

// E[(z + N(0, variance))^+]: the smoothed hinge carrying the whole
// nonlinearity of the two-expert payoff.
double SmoothedHinge(double z, double variance) {
  if (variance <= 0.0) return std::max(z, 0.0);
  const double spread = std::sqrt(variance);
  return z * NormalCdf(z / spread) + spread * NormalPdf(z / spread);
}

// Shared probing machinery: evaluates the reduced profile q(tau, z) -- tau
// is time remaining to maturity -- on the supplied ladder of times, at the
// origin plus diffusively placed states, and fits the log-log growth of
// each stencil's worst magnitude.  The floor keeps vanishing derivatives
// (smooth terminal data) from producing -inf logs; they fit to slope 0.
DerivativeExponents ProbeLadder(
    double variance_rate, const std::vector<double>& t_grid, int x_samples,
    uint64_t seed, const std::function<double(double, double)>& q) {
  constexpr double kFloor = 1e-8;
  if (t_grid.size() < 4) {
    throw std::invalid_argument(
        "derivative probing needs at least four remaining-time points");
  }
  double tau_min = t_grid.front();
  double tau_max = t_grid.front();
  for (double tau : t_grid) {
    if (!(tau > 0.0 && tau < 1.0)) {
      throw std::invalid_argument("remaining time " + std::to_string(tau) +
                                  " outside (0, 1)");
    }
    tau_min = std::min(tau_min, tau);
    tau_max = std::max(tau_max, tau);
  }
  if (tau_max < 10.0 * tau_min * (1.0 - 1e-9)) {
    throw std::invalid_argument(
        "remaining-time ladder must span at least a decade to separate "
        "power-law growth from noise");
  }
  if (x_samples < 1) {
    throw std::invalid_argument("need at least one probe state");
  }

  RandomStream rng(seed, /*stream=*/0);
  std::vector<double> zeta(x_samples - 1);
  for (double& value : zeta) value = rng.NextNormal();

  const int ladder = static_cast<int>(t_grid.size());
  std::vector<double> log_tau(ladder);
  std::vector<double> log_tt(ladder), log_tx(ladder), log_xxx(ladder);
  for (int k = 0; k < ladder; ++k) {
    const double tau = t_grid[k];
    const double spread = std::sqrt(variance_rate * tau);
    const double ht = 0.05 * std::min(tau, 1.0 - tau);
    const double hx = 0.1 * spread;

    double worst_tt = 0.0, worst_tx = 0.0, worst_xxx = 0.0;
    for (int p = 0; p < x_samples; ++p) {
      const double z = (p == 0) ? 0.0 : 0.5 * spread * zeta[p - 1];
      const double tt = (q(tau + ht, z) - 2.0 * q(tau, z) + q(tau - ht, z)) /
                        (ht * ht);
      const double tx = (q(tau + ht, z + hx) - q(tau + ht, z - hx) -
                         q(tau - ht, z + hx) + q(tau - ht, z - hx)) /
                        (4.0 * ht * hx);
      const double xxx = (q(tau, z + 2.0 * hx) - 2.0 * q(tau, z + hx) +
                          2.0 * q(tau, z - hx) - q(tau, z - 2.0 * hx)) /
                         (2.0 * hx * hx * hx);
      worst_tt = std::max(worst_tt, std::abs(tt));
      worst_tx = std::max(worst_tx, std::abs(tx));
      worst_xxx = std::max(worst_xxx, std::abs(xxx));
    }
    log_tau[k] = std::log(tau);
    log_tt[k] = std::log(std::max(worst_tt, kFloor));
    log_tx[k] = std::log(std::max(worst_tx, kFloor));
    log_xxx[k] = std::log(std::max(worst_xxx, kFloor));
  }

  DerivativeExponents exponents;
  exponents.exponent_tt = FitLine(log_tau, log_tt).slope;
  exponents.exponent_tx = FitLine(log_tau, log_tx).slope;
  exponents.exponent_xxx = FitLine(log_tau, log_xxx).slope;
  return exponents;
}

void RequireTwoExpertLimit(const GaussianLimit& limit) {
  if (limit.num_experts != 2) {
    throw std::invalid_argument(
        "derivative probing relies on the two-expert closed form");
  }
}

}  // namespace

GaussianLimit BuildGaussianLimit(const ExpertModel& model, double theta) {
  ValidateModel(model);
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("payoff blend theta = " +
                                std::to_string(theta) + " outside [0, 1]");
  }
  const int n = model.num_experts();

  bool all_greedy = true;
  bool all_generous = true;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double pair_sum = model.mu[i] + model.mu[j];
      if (pair_sum < 1.0 - 1e-12) all_greedy = false;
      if (pair_sum > 1.0 + 1e-12) all_generous = false;
    }
  }
  if (!all_greedy && !all_generous) {
    throw std::domain_error(
        "panel is neither uniformly greedy nor uniformly generous; the "
        "Gaussian description does not cover mixed pair regimes");
  }

  const BalancedAnalysis analysis = AnalyzeBalanced(model);
  if (!analysis.feasible) {
    throw std::domain_error(
        "no balanced control exists (minimum dispersion " +
        std::to_string(analysis.s_min) +
        " > 1); the Gaussian description needs a balanced adversary");
  }

  GaussianLimit limit;
  limit.num_experts = n;
  limit.theta = theta;
  limit.regime = all_greedy ? LimitRegime::kGreedy : LimitRegime::kGenerous;
  limit.c_star = all_greedy ? analysis.c_min : analysis.c_max;

  const SigmaPair sigmas = MakeSigmaPair(model);
  limit.sigma_bar = limit.c_star * sigmas.sigma1 - sigmas.sigma2;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(limit.sigma_bar);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error(
        "eigendecomposition of the balanced covariance failed to converge");
  }
  limit.min_eigenvalue = solver.eigenvalues().minCoeff();
  if (limit.min_eigenvalue < -1e-9) {
    throw std::domain_error(
        "optimal balanced covariance has eigenvalue " +
        std::to_string(limit.min_eigenvalue) +
        "; the Gaussian description needs positive semidefiniteness");
  }
  Eigen::VectorXd root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::VectorXd inv_root = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (solver.eigenvalues()[i] > 1e-12) inv_root[i] = 1.0 / root[i];
  }
  limit.factor = solver.eigenvectors() * root.asDiagonal() *
                 solver.eigenvectors().transpose();
  limit.factor_inv = solver.eigenvectors() * inv_root.asDiagonal() *
                     solver.eigenvectors().transpose();
  return limit;
}

McValue EvaluateU(const GaussianLimit& limit, double t,
                  const std::vector<double>& x, int64_t samples,
                  uint64_t seed) {
  CheckStateTime(limit, t, x);
  const double tau = 1.0 - t;
  if (tau <= kHorizonTol) {
    return {BlendedPayoff(x, limit.theta), 0.0};
  }
  if (limit.num_experts == 2) {
    // Two experts collapse to the scalar difference: the common mode is
    // killed by translation invariance, so only the variance of X1 - X2
    // enters and the expectation is exact.
    const double theta = limit.theta;
    const double z = x[0] - x[1];
    const double hinge = SmoothedHinge(z, PairVarianceRate(limit) * tau);
    return {(1.0 - theta) * (x[1] + hinge) + 0.5 * theta * (x[0] + x[1]),
            0.0};
  }
  return EvaluateUSampled(limit, t, x, samples, seed);
}

McValue EvaluateUSampled(const GaussianLimit& limit, double t,
                         const std::vector<double>& x, int64_t samples,
                         uint64_t seed) {
  CheckStateTime(limit, t, x);
  CheckSampleCount(samples);
  const int n = limit.num_experts;
  const double tau = 1.0 - t;
  if (tau <= kHorizonTol) {
    return {BlendedPayoff(x, limit.theta), 0.0};
  }
  const double sqrt_tau = std::sqrt(tau);

  const int64_t num_chunks = (samples + kMcChunk - 1) / kMcChunk;
  std::vector<double> sums(num_chunks, 0.0);
  std::vector<double> square_sums(num_chunks, 0.0);
  ParallelChunks(num_chunks, [&](int64_t chunk) {
    RandomStream rng(seed, static_cast<uint64_t>(chunk));
    const int64_t count = std::min(kMcChunk, samples - chunk * kMcChunk);
    KahanSum sum, square_sum;
    std::vector<double> z(n), y(n);
    for (int64_t s = 0; s < count; ++s) {
      for (int i = 0; i < n; ++i) z[i] = rng.NextNormal();
      for (int i = 0; i < n; ++i) {
        double drift = 0.0;
        for (int j = 0; j < n; ++j) drift += limit.factor(i, j) * z[j];
        y[i] = x[i] + sqrt_tau * drift;
      }
      const double value = BlendedPayoff(y, limit.theta);
      sum.Add(value);
      square_sum.Add(value * value);
    }
    sums[chunk] = sum.Value();
    square_sums[chunk] = square_sum.Value();
  });

  KahanSum total, total_squares;
  for (int64_t chunk = 0; chunk < num_chunks; ++chunk) {
    total.Add(sums[chunk]);
    total_squares.Add(square_sums[chunk]);
  }
  McValue result;
  result.value = total.Value() / static_cast<double>(samples);
  const double second_moment =
      total_squares.Value() / static_cast<double>(samples);
  const double variance =
      std::max(0.0, second_moment - result.value * result.value);
  result.std_error = std::sqrt(variance / static_cast<double>(samples));
  return result;
}

std::vector<double> GradientU(const GaussianLimit& limit, double t,
                              const std::vector<double>& x, int64_t samples,
                              uint64_t seed) {
  CheckStateTime(limit, t, x);
  const int n = limit.num_experts;
  const double tau = 1.0 - t;
  if (tau <= kHorizonTol) {
    throw std::invalid_argument(
        "gradient undefined at maturity: the terminal payoff has kinks "
        "where scores tie");
  }
  const double uniform_part = limit.theta / static_cast<double>(n);
  std::vector<double> gradient(n, uniform_part);
  if (n == 2) {
    const double variance = PairVarianceRate(limit) * tau;
    const double z = x[0] - x[1];
    double lead_probability;
    if (variance <= 0.0) {
      lead_probability = z > 0.0 ? 1.0 : (z < 0.0 ? 0.0 : 0.5);
    } else {
      lead_probability = NormalCdf(z / std::sqrt(variance));
    }
    gradient[0] += (1.0 - limit.theta) * lead_probability;
    gradient[1] += (1.0 - limit.theta) * (1.0 - lead_probability);
    return gradient;
  }
  CheckSampleCount(samples);
  const double sqrt_tau = std::sqrt(tau);

  const int64_t num_chunks = (samples + kMcChunk - 1) / kMcChunk;
  std::vector<int64_t> counts(num_chunks * n, 0);
  ParallelChunks(num_chunks, [&](int64_t chunk) {
    RandomStream rng(seed, static_cast<uint64_t>(chunk));
    const int64_t count = std::min(kMcChunk, samples - chunk * kMcChunk);
    std::vector<double> z(n), y(n);
    for (int64_t s = 0; s < count; ++s) {
      for (int i = 0; i < n; ++i) z[i] = rng.NextNormal();
      for (int i = 0; i < n; ++i) {
        double drift = 0.0;
        for (int j = 0; j < n; ++j) drift += limit.factor(i, j) * z[j];
        y[i] = x[i] + sqrt_tau * drift;
      }
      ++counts[chunk * n + LeaderIndex(y)];
    }
  });

  for (int i = 0; i < n; ++i) {
    int64_t leader_count = 0;
    for (int64_t chunk = 0; chunk < num_chunks; ++chunk) {
      leader_count += counts[chunk * n + i];
    }
    gradient[i] += (1.0 - limit.theta) * static_cast<double>(leader_count) /
                   static_cast<double>(samples);
  }
  return gradient;
}

Eigen::MatrixXd HessianU(const GaussianLimit& limit, double t,
                         const std::vector<double>& x, int64_t samples,
                         uint64_t seed) {
  CheckStateTime(limit, t, x);
  const int n = limit.num_experts;
  const double tau = 1.0 - t;
  if (tau <= kHorizonTol) {
    throw std::invalid_argument(
        "Hessian undefined at maturity; t must be below 1");
  }
  if (limit.min_eigenvalue <= 1e-12) {
    throw std::domain_error(
        "Hessian needs a positive definite covariance");
  }
  if (n == 2) {
    const double rate = PairVarianceRate(limit);
    const double spread = std::sqrt(rate * tau);
    const double z = x[0] - x[1];
    const double curvature =
        (1.0 - limit.theta) * NormalPdf(z / spread) / spread;
    Eigen::MatrixXd hessian(2, 2);
    hessian << curvature, -curvature, -curvature, curvature;
    return hessian;
  }
  CheckSampleCount(samples);
  const double sqrt_tau = std::sqrt(tau);

  const int64_t num_chunks = (samples + kMcChunk - 1) / kMcChunk;
  std::vector<Eigen::MatrixXd> partials(
      num_chunks, Eigen::MatrixXd::Zero(n, n));
  ParallelChunks(num_chunks, [&](int64_t chunk) {
    RandomStream rng(seed, static_cast<uint64_t>(chunk));
    const int64_t count = std::min(kMcChunk, samples - chunk * kMcChunk);
    Eigen::MatrixXd& acc = partials[chunk];
    std::vector<double> z(n), y(n);
    for (int64_t s = 0; s < count; ++s) {
      for (int i = 0; i < n; ++i) z[i] = rng.NextNormal();
      for (int i = 0; i < n; ++i) {
        double drift = 0.0;
        for (int j = 0; j < n; ++j) drift += limit.factor(i, j) * z[j];
        y[i] = x[i] + sqrt_tau * drift;
      }
      const int leader = LeaderIndex(y);
      for (int j = 0; j < n; ++j) {
        double whitened = 0.0;
        for (int k = 0; k < n; ++k) whitened += limit.factor_inv(j, k) * z[k];
        acc(leader, j) += whitened;
      }
    }
  });

  Eigen::MatrixXd hessian(n, n);
  const double scale =
      (1.0 - limit.theta) / (static_cast<double>(samples) * sqrt_tau);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      KahanSum sum;
      for (int64_t chunk = 0; chunk < num_chunks; ++chunk) {
        sum.Add(partials[chunk](i, j));
      }
      hessian(i, j) = scale * sum.Value();
    }
  }
  return 0.5 * (hessian + hessian.transpose());
}

DerivativeExponents ProbeDerivativeBounds(const GaussianLimit& limit,
                                          const std::vector<double>& t_grid,
                                          int x_samples, uint64_t seed) {
  RequireTwoExpertLimit(limit);
  const double rate = PairVarianceRate(limit);
  if (rate <= 0.0) {
    throw std::domain_error(
        "no diffusion along the pair difference; nothing to probe");
  }
  const auto q = [&limit](double tau, double z) {
    return EvaluateU(limit, 1.0 - tau, {z, 0.0}, /*samples=*/1, /*seed=*/0)
        .value;
  };
  return ProbeLadder(rate, t_grid, x_samples, seed, q);
}

DerivativeExponents ProbeQuadraticDiagnostic(const GaussianLimit& limit,
                                             const std::vector<double>& t_grid,
                                             int x_samples, uint64_t seed) {
  RequireTwoExpertLimit(limit);
  const double rate = PairVarianceRate(limit);
  if (rate <= 0.0) {
    throw std::domain_error(
        "no diffusion along the pair difference; nothing to probe");
  }
  // Same stencils, but run on the diffusion of smooth quadratic terminal
  // data, whose closed form is z^2 plus the accumulated variance.  All
  // three exponents should come back near zero; anything else points at
  // the stencils rather than the payoff.
  const auto q = [rate](double tau, double z) { return z * z + rate * tau; };
  return ProbeLadder(rate, t_grid, x_samples, seed, q);
}

double Grid1D::ValueAt(double z) const {
  const double dz = (z_max - z_min) / static_cast<double>(nz - 1);
  const double position = (z - z_min) / dz;
  const int64_t index = std::llround(position);
  if (index < 0 || index >= nz || std::abs(position - index) > 0.5 + 1e-9) {
    throw std::out_of_range("z = " + std::to_string(z) +
                            " has no node on the grid");
  }
  return values[index];
}

namespace {

struct FdCoefficients {
  double low = 0.0;   // s^2(c_min) / 2
  double high = 0.0;  // s^2(c_max) / 2
};

FdCoefficients ReducedCoefficients(const ExpertModel& model) {
  if (model.num_experts() != 2) {
    throw std::invalid_argument(
        "the reduced equation is one-dimensional; two experts only");
  }
  const BalancedAnalysis analysis = AnalyzeBalanced(model);
  if (!analysis.feasible) {
    throw std::domain_error(
        "no balanced control exists; the reduced equation does not apply");
  }
  const double cross = 1.0 - model.mu[0] - model.mu[1];
  const double product = model.mu[0] * model.mu[1];
  return {analysis.c_min * cross + product, analysis.c_max * cross + product};
}

void CheckFdGrid(double z_min, double z_max, int nz, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("payoff blend theta = " +
                                std::to_string(theta) + " outside [0, 1]");
  }
  if (!(z_min < z_max)) {
    throw std::invalid_argument("need z_min < z_max");
  }
  if (nz < 3) {
    throw std::invalid_argument("need at least three space nodes");
  }
}

}  // namespace

int SuggestedTimeSteps(const ExpertModel& model, double theta, double z_min,
                       double z_max, int nz) {
  CheckFdGrid(z_min, z_max, nz, theta);
  const FdCoefficients coef = ReducedCoefficients(model);
  const double dz = (z_max - z_min) / static_cast<double>(nz - 1);
  const double top = std::max(coef.low, coef.high);
  return std::max(1, static_cast<int>(std::ceil(2.02 * top / (dz * dz))));
}

Grid1D SolveReducedFd(const ExpertModel& model, double theta, double z_min,
                      double z_max, int nz, int nt,
                      const std::function<double(double)>& terminal) {
  CheckFdGrid(z_min, z_max, nz, theta);
  if (!terminal) throw std::invalid_argument("terminal data is empty");
  const FdCoefficients coef = ReducedCoefficients(model);
  const double dz = (z_max - z_min) / static_cast<double>(nz - 1);
  const double top = std::max(coef.low, coef.high);

  if (nt == 0) {
    nt = SuggestedTimeSteps(model, theta, z_min, z_max, nz);
  } else if (nt < 0) {
    throw std::invalid_argument("time step count must be >= 0");
  }
  const double dt = 1.0 / static_cast<double>(nt);
  if (dt * top / (dz * dz) > 0.5 + 1e-12) {
    throw std::invalid_argument(
        "explicit scheme unstable at nt = " + std::to_string(nt) +
        "; needs nt >= " +
        std::to_string(SuggestedTimeSteps(model, theta, z_min, z_max, nz)));
  }

  Grid1D grid;
  grid.z_min = z_min;
  grid.z_max = z_max;
  grid.nz = nz;
  grid.nt = nt;
  grid.values.resize(nz);
  for (int i = 0; i < nz; ++i) {
    grid.values[i] = terminal(z_min + i * dz);
  }

  // March the terminal data backward with the worst-case diffusion picked
  // pointwise: the adversary takes whichever admissible level amplifies the
  // local curvature.
  std::vector<double> next(nz);
  for (int step = 0; step < nt; ++step) {
    next[0] = grid.values[0];
    next[nz - 1] = grid.values[nz - 1];
    for (int i = 1; i + 1 < nz; ++i) {
      const double curvature =
          (grid.values[i + 1] - 2.0 * grid.values[i] + grid.values[i - 1]) /
          (dz * dz);
      next[i] = grid.values[i] +
                dt * std::max(coef.low * curvature, coef.high * curvature);
    }
    grid.values.swap(next);
  }
  return grid;
}

Grid1D SolveReducedFd(const ExpertModel& model, double theta, double z_min,
                      double z_max, int nz, int nt) {
  const double blend = theta;
  return SolveReducedFd(model, theta, z_min, z_max, nz, nt,
                        [blend](double z) {
                          return (1.0 - blend) * std::max(z, 0.0) +
                                 0.5 * blend * z;
                        });
}

double SymmetricHeatConstant(double mu, int num_experts) {
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw std::invalid_argument("success probability " + std::to_string(mu) +
                                " outside [0, 1]");
  }
  if (num_experts < 2) {
    throw std::invalid_argument("need at least two experts");
  }
  const double n = static_cast<double>(num_experts);
  // Half the variance of the independent part of the optimally corrupted
  // gains; the balanced range of the symmetric panel ends at
  // mu + (1 - mu)/N (generous side) and mu - mu/N (greedy side).
  if (mu <= 0.5) {
    return 0.5 * (1.0 - 2.0 * mu) * (mu + (1.0 - mu) / n) + 0.5 * mu * mu;
  }
  return 0.5 * (1.0 - 2.0 * mu) * (mu - mu / n) + 0.5 * mu * mu;
}

double TwoExpertLowerBound(const ExpertModel& model, int i, int j, double t,
                           const std::vector<double>& x) {
  ValidateModel(model);
  const int n = model.num_experts();
  if (i < 0 || i >= n || j < 0 || j >= n || i == j) {
    throw std::invalid_argument("expert pair (" + std::to_string(i) + ", " +
                                std::to_string(j) + ") invalid for " +
                                std::to_string(n) + " experts");
  }
  if (static_cast<int>(x.size()) != n) {
    throw std::invalid_argument("state has " + std::to_string(x.size()) +
                                " coordinates, expected " + std::to_string(n));
  }
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("time " + std::to_string(t) +
                                " outside [0, 1]");
  }

  ExpertModel pair;
  pair.mu = {model.mu[i], model.mu[j]};
  const BalancedAnalysis analysis = AnalyzeBalanced(pair);
  // Two experts always admit a balanced control (pull the farther one to the
  // nearer one's level), so feasibility cannot fail here.
  const double cross = 1.0 - pair.mu[0] - pair.mu[1];
  const double c_star = cross > 0.0 ? analysis.c_max : analysis.c_min;
  const double variance =
      (1.0 - t) * 2.0 * (c_star * cross + pair.mu[0] * pair.mu[1]);
  return x[j] + SmoothedHinge(x[i] - x[j], variance);
}

}  // namespace expertgame
