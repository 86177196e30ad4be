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

#ifndef EXPERTGAME_SIMULATE_H_
#define EXPERTGAME_SIMULATE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "expertgame/balance.hpp"
#include "expertgame/game.hpp"
#include "expertgame/value_dp.hpp"

namespace expertgame {

// A deterministic corruption strategy: given the round (1-based), the horizon
// and the integer score state X (per-expert gain minus forecaster gain), emit
// the mixed control to play.  Policies must be pure functions of their
// arguments - the engine runs replications in parallel and re-invokes them
// freely - and every emitted control must pass SanitizeControl.
struct AdversaryPolicy {
  std::string name;
  std::function<AdversaryControl(int round, int num_rounds,
                                 const std::vector<int>& state)>
      act;
};

// Forecaster counterpart.  The adversary's control for the current round is
// passed in because the forecaster moves knowing the corruption law (the
// round's saddle point is in mixed strategies); most policies ignore it.
struct ForecasterPolicy {
  std::string name;
  std::function<ForecasterControl(int round, int num_rounds,
                                  const std::vector<int>& state,
                                  const AdversaryControl& control)>
      act;
};

// ---- Adversary factories ----

// Plays the same control every round.
AdversaryPolicy ConstantAdversary(const AdversaryControl& control);

// The two-expert pointwise-corruption strategy that defeats the gradient
// forecaster: force expert 1 up half the time, expert 2 down half the time
// (b[0] = a[1] = 1/2).  Balanced it is not - that is the point.
AdversaryPolicy HatAdversary(int num_experts);

// The balanced strategy driven by the curvature of the limit value: each
// round evaluate the limit Hessian at the scaled state, and play the
// constructed balanced control at the greedy or generous end of the range
// according to the sign of its contraction with sigma1 (ties and the final
// round fall to the greedy end).  Exact closed-form evaluation; two experts
// only, and the model must admit balanced controls.
AdversaryPolicy AsymptoticAdversary(const ExpertModel& model, double theta);

// Solves the one-round adversary program exactly each round, with the final
// payoff as the continuation (the true value function is out of reach at
// simulation sizes).  This is the saddle-seeking policy for models where no
// balanced control exists.
AdversaryPolicy MyopicSaddleAdversary(const ExpertModel& model,
                                      const FinalCondition& final_condition);

// Restricts corruption to the best pair of experts: the constant embedded
// pair control maximizing the pair difference variance subject to the pair's
// common gain staying at or above every uncorrupted expert's rate.  Throws if
// no pair admits such a control.
AdversaryPolicy BalancedPairAdversary(const ExpertModel& model);

AdversaryPolicy CustomAdversary(
    std::string name,
    std::function<AdversaryControl(int, int, const std::vector<int>&)> act);

// ---- Forecaster factories ----

// Follows the gradient of the limit value at the scaled state.  Exact
// closed-form evaluation; two experts only, model must admit balanced
// controls.  At the final round (zero time to go) the gradient degenerates to
// uniform weight over the leaders, blended with theta/N floor weight.
ForecasterPolicy GradientForecaster(const ExpertModel& model, double theta);

// Uniform weight over the experts with the (exactly) largest score.
ForecasterPolicy FollowTheLeaderForecaster(int num_experts);

// Exponential weights on scores.  eta <= 0 selects sqrt(8 ln N / M).
ForecasterPolicy MultiplicativeWeightsForecaster(int num_experts,
                                                 double eta = 0.0);

// Puts all weight on the lowest-indexed expert with the highest corrupted
// expected gain under the control the adversary just committed to.
ForecasterPolicy BestResponseForecaster(const ExpertModel& model);

ForecasterPolicy UniformForecaster(int num_experts);

ForecasterPolicy CustomForecaster(
    std::string name,
    std::function<ForecasterControl(int, int, const std::vector<int>&,
                                    const AdversaryControl&)>
        act);

// Saddle controls from a solved table replayed as policies (the table must
// have been built with store_saddles and must outlive the policy).  Useful
// for checking the game engine against the exact backward induction.
AdversaryPolicy ReplayAdversary(const ValueTable& table);
ForecasterPolicy ReplayForecaster(const ValueTable& table);

// ---- Engine ----

struct SummaryStats {
  double mean = 0.0;
  double variance = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
};

// Per-step statistics of the score difference Z = X^1 - X^2 (two experts),
// pooled over rounds and replications.  Standard errors come from the
// across-replication spread of the per-replication round averages; the
// variance estimate is the plug-in second moment minus squared mean with a
// delta-method standard error.
struct DifferenceStats {
  double step_mean = 0.0;
  double step_mean_std_error = 0.0;
  double step_variance = 0.0;
  double step_variance_std_error = 0.0;
};

struct SimulationReport {
  int num_rounds = 0;
  int64_t replications = 0;
  SummaryStats regret;
  std::vector<double> terminal_regrets;  // one entry per replication
  bool has_difference = false;
  DifferenceStats difference;
};

// Runs the repeated game: each round the adversary commits a control, the
// forecaster commits weights, one corruption event fires, gains realize, and
// scores update.  Fixed per-round draw order and per-replication streams
// keyed by (seed, replication) make the report bitwise independent of the
// thread count.  track_difference requires two experts.
SimulationReport Simulate(const ExpertModel& model,
                          const AdversaryPolicy& adversary,
                          const ForecasterPolicy& forecaster,
                          const FinalCondition& final_condition,
                          int num_rounds, int64_t replications, uint64_t seed,
                          bool track_difference = false);

// ---- Experiments ----

struct ConvergenceRow {
  int num_rounds = 0;
  double scaled_value = 0.0;  // V(0, 0) / sqrt(M) from the exact recursion
  double limit_value = 0.0;   // closed-form limit at (t, x) = (0, 0)
  double gap = 0.0;
};

struct ConvergenceReport {
  double theta = 0.0;
  double limit_value = 0.0;
  std::vector<ConvergenceRow> rows;
};

// Exact finite-game values against the limit, two experts.  The seed is
// accepted for interface stability but unused: both sides are deterministic.
ConvergenceReport ExperimentConvergence(const ExpertModel& model,
                                        const FinalCondition& final_condition,
                                        const std::vector<int>& m_values,
                                        uint64_t seed);

struct CounterexampleReport {
  int num_rounds = 0;
  int64_t replications = 0;
  double theta = 0.0;
  // Gradient forecaster against the hat adversary, regret scaled by sqrt(M).
  SummaryStats scaled_regret;
  double limit_value = 0.0;  // what the scaled regret would be if the
                             // gradient forecaster were optimal here
  double gap = 0.0;          // scaled mean minus limit
  double gap_ci_low = 0.0;
  double gap_ci_high = 0.0;
  bool gap_significant = false;  // gap confidence interval strictly positive
  DifferenceStats difference;    // per-step drift and variance of X^1 - X^2
  // Control arms: the same adversary against its best response, and the
  // greedy balanced adversary against the gradient forecaster.
  SummaryStats best_response_scaled;
  SummaryStats balanced_scaled;
};

// The fixed mu = (3/4, 1/4) counter-example: the gradient forecaster is not
// asymptotically optimal against pointwise corruption, and the measured
// scaled regret exceeds the limit value by a margin the confidence interval
// certifies.
CounterexampleReport ExperimentCounterexample(int num_rounds,
                                              int64_t replications,
                                              uint64_t seed,
                                              double theta = 0.1);

struct EmptyRegimeRow {
  int num_rounds = 0;
  double mean_regret = 0.0;
  double scaled_regret = 0.0;  // mean / sqrt(M)
};

struct EmptyRegimeReport {
  double theta = 0.0;
  std::vector<EmptyRegimeRow> rows;
  // theta > 0: scaled regret behaves like a - kappa * sqrt(M); kappa_hat is
  // the fitted decay rate, compared against a band anchored at the smallest
  // total drain any control must concede (theta * drain / N per round).
  double kappa_hat = 0.0;
  double delta_hat = 0.0;
  double drain = 0.0;
  double band_low = 0.0;
  double band_high = 0.0;
  bool kappa_in_band = false;
  // theta = 0: the best-pair closed-form bound and whether the largest-M
  // scaled regret clears it (within the stated tolerance).
  double two_expert_bound = 0.0;
  double bound_tolerance = 0.0;
  bool bound_satisfied = false;
};

// Behaviour of the game when no balanced control exists.  Refuses models
// that admit one.  For theta > 0 the best-response forecaster faces the
// myopic saddle adversary across the given horizons; for theta = 0 it faces
// the best-pair adversary and the final row is checked against the
// two-expert lower bound.
EmptyRegimeReport ExperimentEmptyRegime(const ExpertModel& model, double theta,
                                        const std::vector<int>& m_values,
                                        int64_t replications, uint64_t seed);

}  // namespace expertgame

#endif  // EXPERTGAME_SIMULATE_H_
