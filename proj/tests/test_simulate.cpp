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

#include "expertgame/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "expertgame/balance.hpp"
#include "expertgame/gaussian_limit.hpp"
#include "expertgame/parallel.hpp"
#include "expertgame/value_dp.hpp"

namespace expertgame {
namespace {

bool Near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

const ExpertModel kSkewed{{0.75, 0.25}};
const ExpertModel kSpread{{0.1, 0.3, 0.5, 0.7, 0.9}};

TEST_CASE("identical runs produce identical reports") {
  SimulationReport first =
      Simulate(kSkewed, HatAdversary(2), FollowTheLeaderForecaster(2),
               FinalCondition::MaxTheta(0.1), 64, 2000, 9, true);
  SimulationReport second =
      Simulate(kSkewed, HatAdversary(2), FollowTheLeaderForecaster(2),
               FinalCondition::MaxTheta(0.1), 64, 2000, 9, true);
  CHECK(first.regret.mean == second.regret.mean);
  CHECK(first.regret.variance == second.regret.variance);
  CHECK(first.regret.ci95_low == second.regret.ci95_low);
  CHECK(first.difference.step_mean == second.difference.step_mean);
  CHECK(first.difference.step_variance == second.difference.step_variance);
  REQUIRE(first.terminal_regrets.size() == second.terminal_regrets.size());
  CHECK(first.terminal_regrets[17] == second.terminal_regrets[17]);
}

TEST_CASE("reports do not depend on the worker count") {
  SetThreadCount(1);
  SimulationReport serial =
      Simulate(kSkewed, HatAdversary(2), GradientForecaster(kSkewed, 0.1),
               FinalCondition::MaxTheta(0.1), 32, 3000, 4, true);
  SetThreadCount(4);
  SimulationReport parallel =
      Simulate(kSkewed, HatAdversary(2), GradientForecaster(kSkewed, 0.1),
               FinalCondition::MaxTheta(0.1), 32, 3000, 4, true);
  SetThreadCount(0);
  CHECK(serial.regret.mean == parallel.regret.mean);
  CHECK(serial.regret.variance == parallel.regret.variance);
  CHECK(serial.difference.step_mean == parallel.difference.step_mean);
  CHECK(serial.difference.step_variance == parallel.difference.step_variance);
}

TEST_CASE("pointwise corruption drives the score difference as computed") {
  // Forcing expert 1 up half the time and expert 2 down half the time makes
  // the one-step difference 1 with probability 3/4 and 0 otherwise: drift
  // 3/4, variance 3/16.
  SimulationReport report =
      Simulate(kSkewed, HatAdversary(2), GradientForecaster(kSkewed, 0.1),
               FinalCondition::MaxTheta(0.1), 512, 4000, 11, true);
  REQUIRE(report.has_difference);
  CHECK(Near(report.difference.step_mean, 0.75,
             4.0 * report.difference.step_mean_std_error));
  CHECK(Near(report.difference.step_variance, 0.1875,
             4.0 * report.difference.step_variance_std_error));
}

TEST_CASE("replaying the solved saddle reproduces the exact value") {
  ExpertModel model{{0.6, 0.3}};
  FinalCondition final_condition = FinalCondition::MaxTheta(0.1);
  ValueTable table = SolveValue(12, model, final_condition, true);
  SimulationReport report =
      Simulate(model, ReplayAdversary(table), ReplayForecaster(table),
               final_condition, 12, 60000, 21, false);
  double exact = table.Value(0, {0});
  double std_error = std::sqrt(report.regret.variance / 60000.0);
  CHECK(Near(report.regret.mean, exact, 4.0 * std_error));
  CHECK(Near(report.regret.ci95_low, report.regret.mean - 1.96 * std_error,
             0.01 * std_error));
  CHECK(Near(report.regret.ci95_high, report.regret.mean + 1.96 * std_error,
             0.01 * std_error));
}

TEST_CASE("replay refuses a table solved for a different horizon") {
  ExpertModel model{{0.6, 0.3}};
  ValueTable table = SolveValue(12, model, FinalCondition::MaxTheta(0.1), true);
  CHECK_THROWS_AS(
      Simulate(model, ReplayAdversary(table), ReplayForecaster(table),
               FinalCondition::MaxTheta(0.1), 10, 4, 1, false),
      std::invalid_argument);
}

TEST_CASE("a balanced adversary makes every forecaster equivalent") {
  BalancedAnalysis analysis = AnalyzeBalanced(kSkewed);
  AdversaryPolicy balanced =
      ConstantAdversary(ConstructBalanced(analysis.c_min, kSkewed));
  SimulationReport leader =
      Simulate(kSkewed, balanced, FollowTheLeaderForecaster(2),
               FinalCondition::MaxTheta(0.1), 256, 30000, 5, false);
  SimulationReport uniform =
      Simulate(kSkewed, balanced, UniformForecaster(2),
               FinalCondition::MaxTheta(0.1), 256, 30000, 5, false);
  double joint = std::sqrt(leader.regret.variance / 30000.0 +
                           uniform.regret.variance / 30000.0);
  CHECK(Near(leader.regret.mean, uniform.regret.mean, 4.0 * joint));
}

TEST_CASE("forecaster policies: weights at pinned states") {
  AdversaryControl dummy{{0.5, 0.5}, {0.0, 0.0}};

  ForecasterControl mw =
      MultiplicativeWeightsForecaster(2, 1.0).act(1, 4, {1, 0}, dummy);
  double expected = std::exp(1.0) / (std::exp(1.0) + 1.0);
  CHECK(Near(mw.phi[0], expected, 1e-12));
  CHECK(Near(mw.phi[0] + mw.phi[1], 1.0, 1e-12));

  ForecasterControl auto_eta =
      MultiplicativeWeightsForecaster(2).act(1, 100, {1, 0}, dummy);
  CHECK(auto_eta.phi[0] > 0.5);
  CHECK(auto_eta.phi[0] < expected);

  ForecasterControl tied = FollowTheLeaderForecaster(2).act(1, 8, {2, 2}, dummy);
  CHECK(Near(tied.phi[0], 0.5, 1e-12));
  ForecasterControl ahead = FollowTheLeaderForecaster(2).act(1, 8, {3, 1}, dummy);
  CHECK(Near(ahead.phi[0], 1.0, 1e-12));

  ForecasterControl flat = UniformForecaster(2).act(1, 8, {3, 1}, dummy);
  CHECK(Near(flat.phi[0], 0.5, 1e-12));
}

TEST_CASE("best response follows the corrupted rates, ties to the lowest index") {
  ForecasterPolicy policy = BestResponseForecaster(kSkewed);
  AdversaryControl boost_second{{0.0, 0.0}, {0.0, 1.0}};
  ForecasterControl picked = policy.act(1, 8, {0, 0}, boost_second);
  CHECK(Near(picked.phi[1], 1.0, 1e-12));

  AdversaryControl kill_second{{0.0, 1.0}, {0.0, 0.0}};
  picked = policy.act(1, 8, {0, 0}, kill_second);
  CHECK(Near(picked.phi[0], 1.0, 1e-12));

  ExpertModel fair{{0.5, 0.5}};
  ForecasterControl tie = BestResponseForecaster(fair).act(
      1, 8, {0, 0}, ConstructBalanced(0.25, fair));
  CHECK(Near(tie.phi[0], 1.0, 1e-12));
}

TEST_CASE("the gradient forecaster plays the limit gradient at the scaled state") {
  ForecasterPolicy policy = GradientForecaster(kSkewed, 0.1);
  AdversaryControl dummy{{0.5, 0.5}, {0.0, 0.0}};
  ForecasterControl start = policy.act(1, 4, {0, 0}, dummy);
  CHECK(Near(start.phi[0], 0.5, 1e-12));

  GaussianLimit limit = BuildGaussianLimit(kSkewed, 0.1);
  ForecasterControl mid = policy.act(3, 4, {2, -1}, dummy);
  std::vector<double> gradient =
      GradientU(limit, 0.5, {2.0 / 2.0, -1.0 / 2.0}, 1, 0);
  CHECK(Near(mid.phi[0], gradient[0], 1e-12));
  CHECK(Near(mid.phi[1], gradient[1], 1e-12));
}

TEST_CASE("zero diffusion collapses the gradient forecaster onto the leaders") {
  ForecasterPolicy policy = GradientForecaster(ExpertModel{{0.0, 1.0}}, 0.1);
  AdversaryControl dummy{{0.5, 0.5}, {0.0, 0.0}};
  ForecasterControl weights = policy.act(1, 4, {2, -2}, dummy);
  CHECK(Near(weights.phi[0], 0.95, 1e-12));
  CHECK(Near(weights.phi[1], 0.05, 1e-12));
}

TEST_CASE("closed-form policies are restricted to two experts") {
  ExpertModel trio{{0.3, 0.3, 0.3}};
  CHECK_THROWS_AS(AsymptoticAdversary(trio, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(GradientForecaster(trio, 0.1), std::invalid_argument);
}

TEST_CASE("the curvature-driven adversary stays balanced at the greedy end") {
  // The skewed pair has no cross term, so the tie rule keeps the greedy end
  // at every state and round.
  AdversaryPolicy policy = AsymptoticAdversary(kSkewed, 0.1);
  AdversaryControl expected = ConstructBalanced(0.1875, kSkewed);
  for (int round : {1, 3, 5}) {
    AdversaryControl control = policy.act(round, 8, {round - 1, 0});
    for (int i = 0; i < 2; ++i) {
      CHECK(Near(control.a[i], expected.a[i], 1e-12));
      CHECK(Near(control.b[i], expected.b[i], 1e-12));
    }
  }
}

TEST_CASE("the myopic saddle adversary solves the one-round program") {
  AdversaryPolicy policy =
      MyopicSaddleAdversary(ExpertModel{{1.0, 1.0}}, FinalCondition::Max());
  AdversaryControl control = policy.act(1, 1, {0, 0});
  CHECK(Near(control.a[0], 0.5, 1e-9));
  CHECK(Near(control.a[1], 0.5, 1e-9));

  AdversaryControl repeat = policy.act(1, 1, {0, 0});
  CHECK(control.a[0] == repeat.a[0]);
  CHECK(control.b[1] == repeat.b[1]);
}

TEST_CASE("the pair adversary levels the best pair above the field") {
  AdversaryPolicy policy = BalancedPairAdversary(kSpread);
  AdversaryControl control = policy.act(1, 8, {0, 0, 0, 0, 0});
  CHECK(ControlDeviation(control) <= 1e-9);
  std::vector<double> gains = ExpectedGains(control, kSpread);
  double top = *std::max_element(gains.begin(), gains.end());
  CHECK(Near(top, 0.5, 1e-9));
  CHECK(Near(gains[3], top, 1e-9));
  CHECK(Near(gains[4], top, 1e-9));
}

TEST_CASE("the engine rejects policies that emit invalid controls") {
  AdversaryPolicy broken = CustomAdversary(
      "broken", [](int, int, const std::vector<int>&) {
        return AdversaryControl{{1.0, 0.5}, {0.0, 0.0}};
      });
  CHECK_THROWS_AS(Simulate(kSkewed, broken, UniformForecaster(2),
                           FinalCondition::Max(), 2, 2, 1, false),
                  std::invalid_argument);
}

TEST_CASE("difference tracking requires exactly two experts") {
  ExpertModel trio{{0.3, 0.3, 0.3}};
  AdversaryControl idle{{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  CHECK_THROWS_AS(Simulate(trio, ConstantAdversary(idle),
                           UniformForecaster(3), FinalCondition::Max(), 2, 2,
                           1, true),
                  std::invalid_argument);
}

TEST_CASE("convergence experiment lines exact values up against the limit") {
  ConvergenceReport report =
      ExperimentConvergence(kSkewed, FinalCondition::MaxTheta(0.1), {4, 8}, 1);
  REQUIRE(report.rows.size() == 2);
  CHECK(Near(report.limit_value, 0.21987113035631398, 1e-9));
  CHECK(Near(report.theta, 0.1, 1e-15));
  for (const ConvergenceRow& row : report.rows) {
    ValueTable table = SolveValue(row.num_rounds, kSkewed,
                                  FinalCondition::MaxTheta(0.1), false);
    double expected = ScaledValue(table, 0.0, {0.0, 0.0});
    CHECK(Near(row.scaled_value, expected, 1e-12));
    CHECK(Near(row.gap, row.scaled_value - report.limit_value, 1e-12));
  }

  // The comparison is two-expert only, and every two-expert model admits a
  // balanced control, so the size screen is the one that can fire.
  CHECK_THROWS_AS(
      ExperimentConvergence(kSpread, FinalCondition::MaxTheta(0.1), {2}, 1),
      std::invalid_argument);
}

TEST_CASE("counter-example experiment wires its arms together coherently") {
  CounterexampleReport report = ExperimentCounterexample(64, 2000, 3, 0.1);
  CHECK(report.num_rounds == 64);
  CHECK(report.replications == 2000);
  CHECK(Near(report.theta, 0.1, 1e-15));
  CHECK(Near(report.limit_value, 0.21987113035631398, 1e-9));
  CHECK(Near(report.gap, report.scaled_regret.mean - report.limit_value,
             1e-12));
  CHECK(report.gap_ci_low <= report.gap);
  CHECK(report.gap_ci_high >= report.gap);
  CHECK(Near(report.difference.step_mean, 0.75,
             5.0 * report.difference.step_mean_std_error));
  CHECK(report.best_response_scaled.ci95_low <=
        report.best_response_scaled.mean);
  CHECK(report.balanced_scaled.ci95_high >= report.balanced_scaled.mean);
}

TEST_CASE("drained-regime experiment refuses balanced panels") {
  CHECK_THROWS_AS(ExperimentEmptyRegime(kSkewed, 0.1, {4}, 10, 1),
                  std::invalid_argument);
}

TEST_CASE("drained-regime experiment, blended payoff arm") {
  EmptyRegimeReport report = ExperimentEmptyRegime(kSpread, 0.1, {4, 8}, 300, 2);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].num_rounds == 4);
  for (const EmptyRegimeRow& row : report.rows) {
    CHECK(Near(row.scaled_regret,
               row.mean_regret / std::sqrt(row.num_rounds), 1e-12));
  }
  CHECK(Near(report.drain, 5.0 / 14.0, 1e-9));
  CHECK(report.delta_hat > 0.0);
  CHECK(report.band_low < report.band_high);
}

TEST_CASE("drained-regime experiment, pure max arm") {
  EmptyRegimeReport report = ExperimentEmptyRegime(kSpread, 0.0, {4, 8}, 300, 2);
  std::vector<double> origin(5, 0.0);
  double best_pair = TwoExpertLowerBound(kSpread, 3, 4, 0.0, origin);
  CHECK(Near(report.two_expert_bound, best_pair, 1e-12));
  CHECK(Near(report.bound_tolerance, 0.05, 1e-15));
}

}  // namespace
}  // namespace expertgame
