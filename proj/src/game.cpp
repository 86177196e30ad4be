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

#include "expertgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "expertgame/rng.hpp"

namespace expertgame {
namespace {

double SimplexDeviation(const std::vector<double>& mass) {
  double sum = 0.0;
  double worst = 0.0;
  for (double m : mass) {
    if (!std::isfinite(m)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, -m);
    sum += m;
  }
  return std::max(worst, std::abs(sum - 1.0));
}

void Renormalize(std::vector<double>& mass) {
  double sum = 0.0;
  for (double& m : mass) {
    m = std::max(m, 0.0);
    sum += m;
  }
  for (double& m : mass) m /= sum;
}

}  // namespace

void ValidateModel(const ExpertModel& model) {
  if (model.num_experts() < 2) {
    throw std::invalid_argument("expert model needs at least two experts, got " +
                                std::to_string(model.num_experts()));
  }
  for (int i = 0; i < model.num_experts(); ++i) {
    const double mu = model.mu[i];
    if (!(mu >= 0.0 && mu <= 1.0)) {
      throw std::invalid_argument("success probability mu[" +
                                  std::to_string(i) + "] = " +
                                  std::to_string(mu) + " outside [0, 1]");
    }
  }
}

double ControlDeviation(const AdversaryControl& control) {
  std::vector<double> mass = control.a;
  mass.insert(mass.end(), control.b.begin(), control.b.end());
  return SimplexDeviation(mass);
}

double WeightDeviation(const ForecasterControl& control) {
  return SimplexDeviation(control.phi);
}

AdversaryControl SanitizeControl(AdversaryControl control, double tol) {
  if (control.a.size() != control.b.size()) {
    throw std::invalid_argument("corruption control has " +
                                std::to_string(control.a.size()) +
                                " zero-entries but " +
                                std::to_string(control.b.size()) +
                                " one-entries");
  }
  const double dev = ControlDeviation(control);
  if (!(dev <= tol)) {
    throw std::invalid_argument(
        "corruption control deviates from the probability simplex by " +
        std::to_string(dev));
  }
  const int n = control.num_experts();
  std::vector<double> mass = control.a;
  mass.insert(mass.end(), control.b.begin(), control.b.end());
  Renormalize(mass);
  std::copy(mass.begin(), mass.begin() + n, control.a.begin());
  std::copy(mass.begin() + n, mass.end(), control.b.begin());
  return control;
}

ForecasterControl SanitizeWeights(ForecasterControl control, double tol) {
  if (control.phi.empty()) {
    throw std::invalid_argument("forecaster weights are empty");
  }
  const double dev = WeightDeviation(control);
  if (!(dev <= tol)) {
    throw std::invalid_argument(
        "forecaster weights deviate from the probability simplex by " +
        std::to_string(dev));
  }
  Renormalize(control.phi);
  return control;
}

std::vector<double> ExpectedGains(const AdversaryControl& alpha,
                                  const ExpertModel& model) {
  const int n = model.num_experts();
  if (alpha.num_experts() != n) {
    throw std::invalid_argument("control is for " +
                                std::to_string(alpha.num_experts()) +
                                " experts, model has " + std::to_string(n));
  }
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) {
    c[i] = (1.0 - alpha.a[i] - alpha.b[i]) * model.mu[i] + alpha.b[i];
  }
  return c;
}

GainDistribution JointGainDistribution(const AdversaryControl& alpha,
                                       const ExpertModel& model) {
  ValidateModel(model);
  const int n = model.num_experts();
  if (alpha.num_experts() != n) {
    throw std::invalid_argument("control is for " +
                                std::to_string(alpha.num_experts()) +
                                " experts, model has " + std::to_string(n));
  }
  if (n > 20) {
    throw std::invalid_argument(
        "exact joint gain distribution enumerates 2^(N-1) outcomes per "
        "corruption event and is capped at N = 20; use the Monte Carlo "
        "simulator for larger panels");
  }

  // Accumulate atom probabilities keyed by the gain bitmask.  Each corruption
  // event (expert k pinned to value v) contributes the product measure of the
  // other experts' Bernoulli draws.
  std::unordered_map<uint32_t, double> atoms;
  const uint32_t free_count = static_cast<uint32_t>(1) << (n - 1);
  for (int k = 0; k < n; ++k) {
    for (int v = 0; v < 2; ++v) {
      const double event_prob = (v == 0) ? alpha.a[k] : alpha.b[k];
      if (event_prob == 0.0) continue;
      for (uint32_t rest = 0; rest < free_count; ++rest) {
        // Spread the N-1 free bits around position k and compute their joint
        // probability.
        uint32_t gains = (v == 1) ? (static_cast<uint32_t>(1) << k) : 0;
        double prob = event_prob;
        int bit = 0;
        for (int i = 0; i < n; ++i) {
          if (i == k) continue;
          const bool up = (rest >> bit) & 1u;
          ++bit;
          if (up) {
            gains |= static_cast<uint32_t>(1) << i;
            prob *= model.mu[i];
          } else {
            prob *= 1.0 - model.mu[i];
          }
        }
        if (prob != 0.0) atoms[gains] += prob;
      }
    }
  }

  GainDistribution dist;
  dist.num_experts = n;
  dist.atom_gains.reserve(atoms.size());
  for (const auto& [gains, prob] : atoms) {
    dist.atom_gains.push_back(gains);
    dist.atom_probs.push_back(prob);
  }
  // Deterministic atom order regardless of hash-map iteration.
  std::vector<int> order(dist.atom_gains.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    return dist.atom_gains[lhs] < dist.atom_gains[rhs];
  });
  GainDistribution sorted;
  sorted.num_experts = n;
  sorted.atom_gains.reserve(order.size());
  sorted.atom_probs.reserve(order.size());
  for (int idx : order) {
    sorted.atom_gains.push_back(dist.atom_gains[idx]);
    sorted.atom_probs.push_back(dist.atom_probs[idx]);
  }

  sorted.mean.assign(n, 0.0);
  sorted.second_moment = Eigen::MatrixXd::Zero(n, n);
  for (size_t t = 0; t < sorted.atom_gains.size(); ++t) {
    const uint32_t gains = sorted.atom_gains[t];
    const double prob = sorted.atom_probs[t];
    for (int i = 0; i < n; ++i) {
      if (!((gains >> i) & 1u)) continue;
      sorted.mean[i] += prob;
      for (int j = 0; j < n; ++j) {
        if ((gains >> j) & 1u) sorted.second_moment(i, j) += prob;
      }
    }
  }
  return sorted;
}

FinalCondition FinalCondition::Max() {
  FinalCondition phi;
  phi.kind = Kind::kMax;
  return phi;
}

FinalCondition FinalCondition::MaxTheta(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("payoff blend theta = " +
                                std::to_string(theta) + " outside [0, 1]");
  }
  FinalCondition phi;
  phi.kind = Kind::kMaxTheta;
  phi.theta = theta;
  return phi;
}

FinalCondition FinalCondition::Custom(
    std::function<double(const std::vector<double>&)> evaluator) {
  if (!evaluator) {
    throw std::invalid_argument("custom payoff evaluator is empty");
  }
  FinalCondition phi;
  phi.kind = Kind::kCustom;
  phi.custom = std::move(evaluator);
  return phi;
}

double FinalCondition::Value(const std::vector<double>& x) const {
  if (x.empty()) throw std::invalid_argument("payoff evaluated on empty state");
  switch (kind) {
    case Kind::kMax:
      return *std::max_element(x.begin(), x.end());
    case Kind::kMaxTheta: {
      double best = x[0];
      double sum = 0.0;
      for (double xi : x) {
        best = std::max(best, xi);
        sum += xi;
      }
      return (1.0 - theta) * best + theta * sum / static_cast<double>(x.size());
    }
    case Kind::kCustom:
      return custom(x);
  }
  throw std::logic_error("unreachable payoff kind");
}

double FinalCondition::ValueReduced(const std::vector<double>& z) const {
  std::vector<double> x(z.size() + 1, 0.0);
  std::copy(z.begin(), z.end(), x.begin());
  return Value(x);
}

FinalConditionReport CheckFinalCondition(const FinalCondition& phi,
                                         int num_experts, int sample_count,
                                         double radius, uint64_t seed) {
  if (num_experts < 2) {
    throw std::invalid_argument("payoff audit needs at least two experts");
  }
  if (sample_count < 1) {
    throw std::invalid_argument("payoff audit needs a positive sample count");
  }
  if (!(radius > 0.0)) {
    throw std::invalid_argument("payoff audit needs a positive radius");
  }

  const int n = num_experts;
  RandomStream rng(seed, /*stream=*/0);
  constexpr double kCheckTol = 1e-9;

  FinalConditionReport report;
  report.lipschitz_est = 0.0;
  report.theta_lower_bound_est = std::numeric_limits<double>::infinity();

  std::vector<double> x(n), y(n), shifted(n);
  for (int s = 0; s < sample_count; ++s) {
    for (int i = 0; i < n; ++i) {
      x[i] = radius * (2.0 * rng.NextUniform() - 1.0);
    }
    const double base = phi.Value(x);

    // Lipschitz estimate and monotonicity: perturb a single coordinate up.
    const int coord = static_cast<int>(rng.NextU64() % static_cast<uint64_t>(n));
    const double bump = radius * rng.NextUniform();
    shifted = x;
    shifted[coord] += bump;
    const double bumped = phi.Value(shifted);
    if (bumped < base - kCheckTol) report.monotone_ok = false;
    if (bump > 0.0) {
      report.lipschitz_est =
          std::max(report.lipschitz_est, std::abs(bumped - base) / bump);
    }

    // Positive homogeneity: phi(lambda x) = lambda phi(x) for lambda > 0.
    const double lambda = 0.25 + 1.5 * rng.NextUniform();
    shifted = x;
    for (double& v : shifted) v *= lambda;
    if (std::abs(phi.Value(shifted) - lambda * base) >
        kCheckTol * (1.0 + std::abs(lambda * base))) {
      report.homogeneous_ok = false;
    }

    // Translation equivariance: phi(x + c 1) = phi(x) + c.
    const double c = radius * (2.0 * rng.NextUniform() - 1.0);
    shifted = x;
    for (double& v : shifted) v += c;
    if (std::abs(phi.Value(shifted) - (base + c)) >
        kCheckTol * (1.0 + std::abs(base + c))) {
      report.translation_ok = false;
    }

    // Largest theta with phi(x + y) >= phi(x) + (theta / N) sum(y) over
    // sampled nonnegative bumps y.  For the blended max payoff this recovers
    // its theta.
    double ysum = 0.0;
    for (int i = 0; i < n; ++i) {
      y[i] = radius * rng.NextUniform();
      ysum += y[i];
    }
    if (ysum > kCheckTol) {
      shifted = x;
      for (int i = 0; i < n; ++i) shifted[i] += y[i];
      const double gain = phi.Value(shifted) - base;
      report.theta_lower_bound_est =
          std::min(report.theta_lower_bound_est,
                   static_cast<double>(n) * gain / ysum);
    }
  }
  if (!std::isfinite(report.theta_lower_bound_est)) {
    report.theta_lower_bound_est = 0.0;
  }
  report.theta_lower_bound_est = std::max(report.theta_lower_bound_est, 0.0);
  return report;
}

}  // namespace expertgame
