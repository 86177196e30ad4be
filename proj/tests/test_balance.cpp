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
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <doctest.h>

#include "expertgame/rng.hpp"

namespace expertgame {
namespace {

bool Near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

const ExpertModel kSkewed{{0.75, 0.25}};
const ExpertModel kFair{{0.5, 0.5}};
const ExpertModel kSpread{{0.1, 0.3, 0.5, 0.7, 0.9}};

Eigen::MatrixXd RandomSymmetric(int n, RandomStream& rng) {
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double v = 2.0 * rng.NextUniform() - 1.0;
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

double Contract(const Eigen::MatrixXd& s, const Eigen::MatrixXd& q) {
  return (s.array() * q.array()).sum();
}

TEST_CASE("dispersion matches hand values and boundary rates") {
  CHECK(Near(Dispersion(0.0, kSkewed), 2.0, 1e-12));
  CHECK(Near(Dispersion(1.0, kSkewed), 2.0, 1e-12));
  CHECK(Near(Dispersion(0.25, kSkewed), 2.0 / 3.0, 1e-12));
  CHECK(Near(Dispersion(0.5, kSkewed), 2.0 / 3.0, 1e-12));
  CHECK(Near(Dispersion(0.75, kSkewed), 2.0 / 3.0, 1e-12));

  // A certain loser costs c and a certain winner costs 1 - c.
  ExpertModel extremes{{0.0, 1.0}};
  CHECK(Near(Dispersion(0.3, extremes), 1.0, 1e-12));
  CHECK(Near(Dispersion(0.9, extremes), 1.0, 1e-12));
}

TEST_CASE("dispersion is midpoint convex on a fine grid") {
  for (int k = 0; k + 2 < 1001; ++k) {
    double left = static_cast<double>(k) / 1000.0;
    double mid = static_cast<double>(k + 1) / 1000.0;
    double right = static_cast<double>(k + 2) / 1000.0;
    double bound = 0.5 * (Dispersion(left, kSpread) + Dispersion(right, kSpread));
    CHECK(Dispersion(mid, kSpread) <= bound + 1e-12);
  }
}

TEST_CASE("balanced range of the skewed pair") {
  BalancedAnalysis analysis = AnalyzeBalanced(kSkewed);
  REQUIRE(analysis.feasible);
  CHECK(Near(analysis.c_min, 0.1875, 1e-9));
  CHECK(Near(analysis.c_max, 0.8125, 1e-9));
  CHECK(Near(analysis.argmin_c, 0.25, 1e-9));
  CHECK(Near(analysis.s_min, 2.0 / 3.0, 1e-12));
}

TEST_CASE("spread panel admits no balanced control") {
  BalancedAnalysis analysis = AnalyzeBalanced(kSpread);
  CHECK_FALSE(analysis.feasible);
  CHECK(Near(analysis.s_min, 92.0 / 63.0, 1e-9));
  CHECK(Near(analysis.argmin_c, 0.5, 1e-9));
}

TEST_CASE("degenerate panel pins the range to a point") {
  ExpertModel edge{{0.0, 1.0, 1.0}};
  BalancedAnalysis analysis = AnalyzeBalanced(edge);
  REQUIRE(analysis.feasible);
  CHECK(Near(analysis.c_min, 1.0, 1e-12));
  CHECK(Near(analysis.c_max, 1.0, 1e-12));
  CHECK(Near(analysis.argmin_c, 1.0, 1e-12));
  CHECK(Near(analysis.s_min, 1.0, 1e-12));

  AdversaryControl control = ConstructBalanced(1.0, edge);
  CHECK(Near(control.b[0], 1.0, 1e-12));
  CHECK(Near(control.a[0] + control.a[1] + control.a[2] + control.b[1] +
                 control.b[2],
             0.0, 1e-12));
}

TEST_CASE("balanced construction: pinned examples") {
  // Zero dispersion needs no pinning budget split: one expert absorbs both
  // directions.
  ExpertModel symmetric{{0.6, 0.6, 0.6}};
  AdversaryControl idle = ConstructBalanced(0.6, symmetric);
  CHECK(Near(idle.a[0], 0.4, 1e-12));
  CHECK(Near(idle.b[0], 0.6, 1e-12));

  AdversaryControl halve = ConstructBalanced(0.25, kFair);
  CHECK(Near(halve.a[0], 0.5, 1e-12));
  CHECK(Near(halve.a[1], 0.5, 1e-12));
  CHECK(Near(halve.b[0], 0.0, 1e-12));
  std::vector<double> gains = ExpectedGains(halve, kFair);
  CHECK(Near(gains[0], 0.25, 1e-12));
  CHECK(Near(gains[1], 0.25, 1e-12));

  CHECK_THROWS_AS(ConstructBalanced(0.5, kSpread), std::invalid_argument);
}

TEST_CASE("balanced construction meets its contract on random feasible draws") {
  RandomStream rng(31, 0);
  int accepted = 0;
  while (accepted < 1000) {
    int num_experts = 2 + accepted % 3;
    ExpertModel model{std::vector<double>(num_experts)};
    for (int i = 0; i < num_experts; ++i) model.mu[i] = rng.NextUniform();
    BalancedAnalysis analysis = AnalyzeBalanced(model);
    if (!analysis.feasible) continue;
    ++accepted;

    double c = analysis.c_min +
               rng.NextUniform() * (analysis.c_max - analysis.c_min);
    AdversaryControl control = ConstructBalanced(c, model);
    CHECK(ControlDeviation(control) <= 1e-12);
    std::vector<double> gains = ExpectedGains(control, model);
    for (double gain : gains) {
      CHECK(Near(gain, c, 1e-10));
    }
  }
}

TEST_CASE("second moments of balanced controls contract through the sigma pair") {
  RandomStream rng(47, 0);
  int accepted = 0;
  while (accepted < 500) {
    int num_experts = 2 + accepted % 2;
    ExpertModel model{std::vector<double>(num_experts)};
    for (int i = 0; i < num_experts; ++i) model.mu[i] = rng.NextUniform();
    BalancedAnalysis analysis = AnalyzeBalanced(model);
    if (!analysis.feasible) continue;
    ++accepted;

    double c = analysis.c_min +
               rng.NextUniform() * (analysis.c_max - analysis.c_min);
    AdversaryControl control = ConstructBalanced(c, model);
    std::vector<double> gains = ExpectedGains(control, model);
    double level = 0.0;
    for (double gain : gains) level += gain / num_experts;

    SigmaPair sigmas = MakeSigmaPair(model);
    Eigen::MatrixXd s_matrix = RandomSymmetric(num_experts, rng);
    GainDistribution dist = JointGainDistribution(control, model);
    double direct = Contract(s_matrix, dist.second_moment);
    double via_pair = level * Contract(s_matrix, sigmas.sigma1) -
                      Contract(s_matrix, sigmas.sigma2);
    CHECK(Near(direct, via_pair, 1e-10));
  }
}

TEST_CASE("balanced diffusion coefficient: pinned values") {
  Eigen::MatrixXd s_matrix(2, 2);
  s_matrix << 1.0, -1.0, -1.0, 1.0;

  BalancedAnalysis skewed = AnalyzeBalanced(kSkewed);
  BalancedHamiltonian h = HamiltonianBalanced(s_matrix, skewed,
                                              MakeSigmaPair(kSkewed));
  CHECK(Near(h.value, 3.0 / 16.0, 1e-12));
  CHECK(Near(h.c_star, skewed.c_min, 1e-12));

  BalancedAnalysis fair = AnalyzeBalanced(kFair);
  h = HamiltonianBalanced(s_matrix, fair, MakeSigmaPair(kFair));
  CHECK(Near(h.value, 0.25, 1e-12));
  CHECK(Near(h.c_star, 0.25, 1e-12));

  BalancedAnalysis spread = AnalyzeBalanced(kSpread);
  CHECK_THROWS_AS(
      HamiltonianBalanced(Eigen::MatrixXd::Identity(5, 5), spread,
                          MakeSigmaPair(kSpread)),
      std::domain_error);
}

TEST_CASE("balanced diffusion coefficient matches a sampled maximization") {
  RandomStream rng(53, 0);
  std::vector<ExpertModel> models = {kSkewed, ExpertModel{{0.2, 0.4, 0.3}}};
  for (const ExpertModel& model : models) {
    BalancedAnalysis analysis = AnalyzeBalanced(model);
    REQUIRE(analysis.feasible);
    SigmaPair sigmas = MakeSigmaPair(model);
    for (int repeat = 0; repeat < 2; ++repeat) {
      Eigen::MatrixXd s_matrix = RandomSymmetric(model.num_experts(), rng);
      double best = -1e300;
      for (int k = 0; k < 500; ++k) {
        double c = analysis.c_min +
                   (analysis.c_max - analysis.c_min) * k / 499.0;
        GainDistribution dist =
            JointGainDistribution(ConstructBalanced(c, model), model);
        best = std::max(best, 0.5 * Contract(s_matrix, dist.second_moment));
      }
      BalancedHamiltonian h = HamiltonianBalanced(s_matrix, analysis, sigmas);
      CHECK(Near(h.value, best, 1e-8));
    }
  }
}

TEST_CASE("gradient Hamiltonian: pinned degenerate example") {
  ExpertModel edge{{0.0, 1.0, 1.0}};
  Eigen::MatrixXd s_matrix = Eigen::MatrixXd::Zero(3, 3);
  s_matrix(1, 1) = 1.0;
  s_matrix(2, 2) = 1.0;
  s_matrix(1, 2) = -1.0;
  s_matrix(2, 1) = -1.0;
  double value = HamiltonianAtGradient({0.0, 1.0, 1.0}, s_matrix, edge);
  CHECK(Near(value, 0.5, 1e-9));
}

TEST_CASE("gradient Hamiltonian depends on the support only") {
  Eigen::MatrixXd s_matrix(2, 2);
  s_matrix << 1.0, -1.0, -1.0, 1.0;
  double narrow = HamiltonianAtGradient({0.3, 0.7}, s_matrix, kSkewed);
  double scaled = HamiltonianAtGradient({0.6, 1.4}, s_matrix, kSkewed);
  CHECK(narrow == scaled);
  CHECK_THROWS_AS(HamiltonianAtGradient({-0.1, 1.1}, s_matrix, kSkewed),
                  std::invalid_argument);
}

TEST_CASE("gradient Hamiltonian dominates the balanced restriction") {
  Eigen::MatrixXd s_matrix(2, 2);
  s_matrix << 1.0, -1.0, -1.0, 1.0;
  BalancedAnalysis analysis = AnalyzeBalanced(kSkewed);
  double restricted =
      HamiltonianBalanced(s_matrix, analysis, MakeSigmaPair(kSkewed)).value;

  // Full support forces every expert to tie, which is exactly the balanced
  // family; a smaller support can only enlarge the feasible set.
  double full = HamiltonianAtGradient({0.5, 0.5}, s_matrix, kSkewed);
  CHECK(full >= restricted - 1e-9);
  CHECK(Near(full, restricted, 1e-8));
  double partial = HamiltonianAtGradient({1.0, 0.0}, s_matrix, kSkewed);
  CHECK(partial >= restricted - 1e-9);
}

TEST_CASE("gradient Hamiltonian refuses supports that cannot lead") {
  ExpertModel rigid{{1.0, 0.0, 1.0, 0.0}};
  Eigen::MatrixXd s_matrix = Eigen::MatrixXd::Identity(4, 4);
  CHECK_THROWS_AS(
      HamiltonianAtGradient({0.25, 0.25, 0.25, 0.25}, s_matrix, rigid),
      std::domain_error);
}

TEST_CASE("balanced covariance spectrum at pinned levels") {
  PosdefReport report = CheckPosdef(0.5, MakeSigmaPair(kSkewed));
  REQUIRE(report.eigenvalues.size() == 2);
  CHECK(Near(report.eigenvalues[0], 3.0 / 16.0, 1e-12));
  CHECK(Near(report.eigenvalues[1], 13.0 / 16.0, 1e-12));
  CHECK(report.positive_definite);
  CHECK(Near(report.min_eigenvalue, 3.0 / 16.0, 1e-12));

  report = CheckPosdef(0.25, MakeSigmaPair(kFair));
  CHECK(Near(report.eigenvalues[0], 0.25, 1e-12));
  CHECK(Near(report.eigenvalues[1], 0.25, 1e-12));
}

TEST_CASE("balanced covariance stays positive across the feasible range") {
  BalancedAnalysis analysis = AnalyzeBalanced(kSkewed);
  SigmaPair sigmas = MakeSigmaPair(kSkewed);
  for (int k = 0; k <= 20; ++k) {
    double c = analysis.c_min + (analysis.c_max - analysis.c_min) * k / 20.0;
    CHECK(CheckPosdef(c, sigmas).min_eigenvalue > 0.0);
  }
}

TEST_CASE("distinct-gap scan refuses balanced panels") {
  CHECK_THROWS_AS(ComputeDelta(kSkewed, 8, 0), std::invalid_argument);
}

TEST_CASE("distinct-gap scan finds a positive spread on drained panels") {
  DistinctGapEstimate coarse = ComputeDelta(kSpread, 8, 0);
  CHECK(coarse.delta_hat > 0.0);
  CHECK(ControlDeviation(coarse.argmin) <= 1e-9);

  DistinctGapEstimate other =
      ComputeDelta(ExpertModel{{0.05, 0.2, 0.5, 0.8, 0.95}}, 8, 0);
  CHECK(other.delta_hat > 0.0);

  // The resolution-8 grid contains every resolution-4 control, so the
  // minimum cannot rise; local refinement can only lower it further.
  DistinctGapEstimate finer = ComputeDelta(kSpread, 4, 0);
  CHECK(coarse.delta_hat <= finer.delta_hat + 1e-12);
  DistinctGapEstimate refined = ComputeDelta(kSpread, 8, 12);
  CHECK(refined.delta_hat <= coarse.delta_hat + 1e-12);
  CHECK(refined.delta_hat > 0.0);
  CHECK(refined.grid_certificate >= 0.0);
}

TEST_CASE("distinct-gap scan refuses grids too large to enumerate") {
  CHECK_THROWS_AS(ComputeDelta(kSpread, 40, 0), std::invalid_argument);
}

TEST_CASE("minimum total drain is zero iff a balanced control exists") {
  DrainEstimate balanced = MinTotalDrain(kSkewed);
  CHECK(Near(balanced.value, 0.0, 1e-9));

  DrainEstimate drained = MinTotalDrain(kSpread);
  CHECK(Near(drained.value, 5.0 / 14.0, 1e-9));

  std::vector<double> gains = ExpectedGains(drained.argmin, kSpread);
  double top = *std::max_element(gains.begin(), gains.end());
  double shortfall = 0.0;
  for (double gain : gains) shortfall += top - gain;
  CHECK(Near(shortfall, drained.value, 1e-9));
}

}  // namespace
}  // namespace expertgame
