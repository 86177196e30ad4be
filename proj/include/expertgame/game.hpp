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

#ifndef EXPERTGAME_GAME_H_
#define EXPERTGAME_GAME_H_

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace expertgame {

// Tolerance for probability-simplex membership.  Inputs within this
// deviation are renormalized; anything farther off is rejected, since silent
// renormalization of badly scaled controls would hide caller bugs.
inline constexpr double kSimplexTol = 1e-12;

// The experts' per-round success probabilities.  Expert i scores a {0,1}
// gain drawn Bernoulli(mu[i]) each round unless corrupted.
struct ExpertModel {
  std::vector<double> mu;
  int num_experts() const { return static_cast<int>(mu.size()); }
};

// Throws std::invalid_argument unless N >= 2 and every mu[i] is in [0,1].
void ValidateModel(const ExpertModel& model);

// One-round mixed corruption strategy.  Exactly one expert is corrupted per
// round: a[i] is the probability of forcing expert i's gain to 0, b[i] of
// forcing it to 1.  The 2N entries form a probability vector.
struct AdversaryControl {
  std::vector<double> a;
  std::vector<double> b;
  int num_experts() const { return static_cast<int>(a.size()); }
};

// Mixed strategy of the forecaster over experts.
struct ForecasterControl {
  std::vector<double> phi;
};

// Largest simplex violation (negative mass or |sum - 1|).
double ControlDeviation(const AdversaryControl& control);
double WeightDeviation(const ForecasterControl& control);

// Renormalizes controls whose deviation is within tol; throws
// std::invalid_argument otherwise.
AdversaryControl SanitizeControl(AdversaryControl control,
                                 double tol = kSimplexTol);
ForecasterControl SanitizeWeights(ForecasterControl control,
                                  double tol = kSimplexTol);

// Expected one-round gain of each expert under the control:
//   c[i] = (1 - a[i] - b[i]) * mu[i] + b[i].
std::vector<double> ExpectedGains(const AdversaryControl& alpha,
                                  const ExpertModel& model);

// Exact one-round joint gain distribution: a mixture, over corruption
// events (which expert, pinned value), of independent Bernoulli coordinates
// with the corrupted coordinate pinned.  Atoms with identical gain vectors
// are merged.  Gains are stored as bitmasks (bit i = expert i's gain).
struct GainDistribution {
  int num_experts = 0;
  std::vector<uint32_t> atom_gains;
  std::vector<double> atom_probs;
  std::vector<double> mean;        // per-expert expected gain
  Eigen::MatrixXd second_moment;   // Q[i][j] = E[gain_i * gain_j]
};

// Enumerates the full atom set; refuses N > 20 (2^(N-1) outcomes per event)
// and directs such callers to the Monte Carlo simulator instead.
GainDistribution JointGainDistribution(const AdversaryControl& alpha,
                                       const ExpertModel& model);

// Terminal payoff applied to the vector of relative cumulative gains.  The
// built-in kinds are the max coordinate and its blend with the coordinate
// average,
//   (1 - theta) * max_i x[i] + (theta / N) * sum_i x[i] ,
// both positively homogeneous and translation-equivariant — the two
// properties the lattice reduction of the dynamic program relies on.
// Custom evaluators are accepted unverified; CheckFinalCondition is the
// gatekeeper for them.
struct FinalCondition {
  enum class Kind { kMax, kMaxTheta, kCustom };

  Kind kind = Kind::kMax;
  double theta = 0.0;
  std::function<double(const std::vector<double>&)> custom;

  static FinalCondition Max();
  static FinalCondition MaxTheta(double theta);
  static FinalCondition Custom(
      std::function<double(const std::vector<double>&)> evaluator);

  double Value(const std::vector<double>& x) const;
  // Evaluates on the embedded state (z, 0): the reduced coordinates with the
  // reference expert appended at zero.
  double ValueReduced(const std::vector<double>& z) const;
};

// Sampled audit of the payoff assumptions: monotonicity in each coordinate,
// positive homogeneity, translation equivariance, an empirical Lipschitz
// constant, and the largest theta_hat with
//   phi(x + y) >= phi(x) + (theta_hat / N) * (y . 1)   for sampled y >= 0.
struct FinalConditionReport {
  double lipschitz_est = 0.0;
  bool monotone_ok = true;
  bool homogeneous_ok = true;
  bool translation_ok = true;
  double theta_lower_bound_est = 0.0;
};

FinalConditionReport CheckFinalCondition(const FinalCondition& phi,
                                         int num_experts, int sample_count,
                                         double radius, uint64_t seed);

}  // namespace expertgame

#endif  // EXPERTGAME_GAME_H_
