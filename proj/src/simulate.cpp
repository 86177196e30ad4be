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
#include <utility>

#include "expertgame/gaussian_limit.hpp"
#include "expertgame/numeric.hpp"
#include "expertgame/parallel.hpp"
#include "expertgame/rng.hpp"
#include "step_lp.hpp"

namespace expertgame {
namespace {

// Replications are batched so the scheduler hands out reasonably sized work
// items; results land in per-replication slots, so batching cannot affect
// the output.
constexpr int64_t kRepChunk = 256;

// Inverse-CDF draw over nonnegative weights that sum to one up to rounding.
// If u falls into the floating-point tail past the accumulated sum, the last
// positive-weight index wins; a fresh uniform per draw keeps the consumed
// stream length fixed.
template <typename WeightAt>
int PickIndex(double u, int count, const WeightAt& weight_at) {
  int chosen = -1;
  int last_positive = -1;
  double acc = 0.0;
  for (int e = 0; e < count; ++e) {
    const double w = weight_at(e);
    if (w <= 0.0) continue;
    last_positive = e;
    acc += w;
    if (u < acc) {
      chosen = e;
      break;
    }
  }
  return chosen >= 0 ? chosen : last_positive;
}

std::vector<int> ReducedState(const std::vector<int>& state) {
  const int n = static_cast<int>(state.size());
  std::vector<int> z(n - 1);
  for (int i = 0; i + 1 < n; ++i) z[i] = state[i] - state[n - 1];
  return z;
}

// Difference-quotient rate of the reduced one-dimensional limit: the
// variance per unit time of X^1 - X^2 under the regime-optimal balanced
// control.
double PairRate(const GaussianLimit& limit) {
  return limit.sigma_bar(0, 0) + limit.sigma_bar(1, 1) -
         2.0 * limit.sigma_bar(0, 1);
}

SummaryStats Summarize(const std::vector<double>& values) {
  SummaryStats stats;
  const int64_t count = static_cast<int64_t>(values.size());
  if (count == 0) return stats;
  KahanSum total;
  for (double v : values) total.Add(v);
  stats.mean = total.Value() / static_cast<double>(count);
  if (count >= 2) {
    KahanSum squares;
    for (double v : values) {
      const double d = v - stats.mean;
      squares.Add(d * d);
    }
    stats.variance = squares.Value() / static_cast<double>(count - 1);
  }
  const double std_error =
      std::sqrt(stats.variance / static_cast<double>(count));
  stats.ci95_low = stats.mean - kNormalQuantile95 * std_error;
  stats.ci95_high = stats.mean + kNormalQuantile95 * std_error;
  return stats;
}

SummaryStats ScaleStats(SummaryStats stats, double factor) {
  stats.mean *= factor;
  stats.variance *= factor * factor;
  stats.ci95_low *= factor;
  stats.ci95_high *= factor;
  return stats;
}

// Pooled per-step statistics from per-replication round averages.  The
// variance estimate is second moment minus squared mean; its standard error
// comes from the delta method on the across-replication covariance of the
// two averages.
DifferenceStats SummarizeDifference(const std::vector<double>& means,
                                    const std::vector<double>& squares) {
  DifferenceStats diff;
  const int64_t count = static_cast<int64_t>(means.size());
  if (count == 0) return diff;
  KahanSum mean_total;
  KahanSum square_total;
  for (int64_t r = 0; r < count; ++r) {
    mean_total.Add(means[r]);
    square_total.Add(squares[r]);
  }
  const double mean_bar = mean_total.Value() / static_cast<double>(count);
  const double square_bar = square_total.Value() / static_cast<double>(count);
  diff.step_mean = mean_bar;
  diff.step_variance = square_bar - mean_bar * mean_bar;
  if (count >= 2) {
    KahanSum var_mean;
    KahanSum var_square;
    KahanSum covar;
    for (int64_t r = 0; r < count; ++r) {
      const double dm = means[r] - mean_bar;
      const double dq = squares[r] - square_bar;
      var_mean.Add(dm * dm);
      var_square.Add(dq * dq);
      covar.Add(dm * dq);
    }
    const double denom = static_cast<double>(count - 1);
    const double vm = var_mean.Value() / denom;
    const double vq = var_square.Value() / denom;
    const double cv = covar.Value() / denom;
    diff.step_mean_std_error =
        std::sqrt(std::max(0.0, vm / static_cast<double>(count)));
    const double est_variance =
        (vq + 4.0 * mean_bar * mean_bar * vm - 4.0 * mean_bar * cv) /
        static_cast<double>(count);
    diff.step_variance_std_error = std::sqrt(std::max(0.0, est_variance));
  }
  return diff;
}

std::vector<double> LeaderBlend(const std::vector<int>& state, double theta) {
  const int n = static_cast<int>(state.size());
  const int top = *std::max_element(state.begin(), state.end());
  int leaders = 0;
  for (int v : state) leaders += v == top ? 1 : 0;
  std::vector<double> phi(n, theta / n);
  for (int i = 0; i < n; ++i) {
    if (state[i] == top) phi[i] += (1.0 - theta) / leaders;
  }
  return phi;
}

}  // namespace

AdversaryPolicy ConstantAdversary(const AdversaryControl& control) {
  const AdversaryControl fixed = SanitizeControl(control, 1e-9);
  AdversaryPolicy policy;
  policy.name = "constant";
  policy.act = [fixed](int, int, const std::vector<int>&) { return fixed; };
  return policy;
}

AdversaryPolicy HatAdversary(int num_experts) {
  if (num_experts != 2) {
    throw std::invalid_argument(
        "the pointwise corruption strategy is defined for two experts");
  }
  AdversaryControl control;
  control.a = {0.0, 0.5};
  control.b = {0.5, 0.0};
  AdversaryPolicy policy;
  policy.name = "hat_counterexample";
  policy.act = [control](int, int, const std::vector<int>&) {
    return control;
  };
  return policy;
}

AdversaryPolicy AsymptoticAdversary(const ExpertModel& model, double theta) {
  ValidateModel(model);
  if (model.num_experts() != 2) {
    throw std::invalid_argument(
        "the curvature-driven adversary uses the closed-form limit, which "
        "this build provides for two experts only");
  }
  const GaussianLimit limit = BuildGaussianLimit(model, theta);
  const BalancedAnalysis analysis = AnalyzeBalanced(model);
  const AdversaryControl greedy = ConstructBalanced(analysis.c_min, model);
  const AdversaryControl generous = ConstructBalanced(analysis.c_max, model);
  const double rate = PairRate(limit);
  const double cross = 1.0 - model.mu[0] - model.mu[1];
  AdversaryPolicy policy;
  policy.name = "asymptotic_star";
  policy.act = [=](int round, int num_rounds,
                   const std::vector<int>& state) -> AdversaryControl {
    // Curvature signal at the scaled state one step back.  The contraction
    // of the limit Hessian with sigma1 reduces to
    //   2 (1 - mu1 - mu2) * d^2/dz^2 of the one-dimensional profile,
    // and the second factor is a positive Gaussian bump, so only the sign
    // of the cross term and the distance from the tie line matter.
    const double t =
        num_rounds > 0
            ? static_cast<double>(round - 1) / static_cast<double>(num_rounds)
            : 1.0;
    const double horizon = 1.0 - std::min(1.0, std::max(0.0, t));
    const double v = rate * horizon;
    if (v <= 0.0) return greedy;
    const double z =
        static_cast<double>(state[0] - state[1]) / std::sqrt(num_rounds);
    const double bump = (1.0 - theta) * NormalPdf(z / std::sqrt(v)) /
                        std::sqrt(v);
    const double signal = 2.0 * bump * cross;
    return signal > 1e-12 ? generous : greedy;
  };
  return policy;
}

AdversaryPolicy MyopicSaddleAdversary(const ExpertModel& model,
                                      const FinalCondition& final_condition) {
  ValidateModel(model);
  AdversaryPolicy policy;
  policy.name = "myopic_saddle";
  policy.act = [model, final_condition](
                   int, int, const std::vector<int>& state) {
    const int n = model.num_experts();
    std::vector<double> reduced(n - 1);
    const auto continuation = [&](const std::vector<int>& z) {
      for (int i = 0; i + 1 < n; ++i) reduced[i] = z[i];
      return final_condition.ValueReduced(reduced);
    };
    const std::vector<double> f =
        internal::EventContinuations(continuation, ReducedState(state), model);
    const auto [value, alpha] = internal::SolvePrimalStep(f, model);
    (void)value;
    AdversaryControl control;
    control.a.assign(alpha.begin(), alpha.begin() + n);
    control.b.assign(alpha.begin() + n, alpha.end());
    return SanitizeControl(control, 1e-6);
  };
  return policy;
}

AdversaryPolicy BalancedPairAdversary(const ExpertModel& model) {
  ValidateModel(model);
  const int n = model.num_experts();
  // For every pair, the embedded control must hold the pair's common gain at
  // or above every uncorrupted expert's rate, and within the pair's own
  // feasible range.  The difference variance 2 (c (1 - mu_i - mu_j) +
  // mu_i mu_j) is linear in c, so the best level sits at an endpoint.
  double best_variance = -1.0;
  int best_i = -1;
  int best_j = -1;
  double best_c = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double other_max = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k != i && k != j) other_max = std::max(other_max, model.mu[k]);
      }
      ExpertModel pair;
      pair.mu = {model.mu[i], model.mu[j]};
      const BalancedAnalysis analysis = AnalyzeBalanced(pair);
      const double lo = std::max(analysis.c_min, other_max);
      const double hi = analysis.c_max;
      if (lo > hi + 1e-12) continue;
      const double cross = 1.0 - model.mu[i] - model.mu[j];
      for (double c : {lo, hi}) {
        const double variance = 2.0 * (c * cross + model.mu[i] * model.mu[j]);
        if (variance > best_variance + 1e-15) {
          best_variance = variance;
          best_i = i;
          best_j = j;
          best_c = c;
        }
      }
    }
  }
  if (best_i < 0) {
    throw std::invalid_argument(
        "no pair of experts admits an embedded balanced control");
  }
  ExpertModel pair;
  pair.mu = {model.mu[best_i], model.mu[best_j]};
  const AdversaryControl pair_control = ConstructBalanced(best_c, pair);
  AdversaryControl control;
  control.a.assign(n, 0.0);
  control.b.assign(n, 0.0);
  control.a[best_i] = pair_control.a[0];
  control.a[best_j] = pair_control.a[1];
  control.b[best_i] = pair_control.b[0];
  control.b[best_j] = pair_control.b[1];
  AdversaryPolicy policy;
  policy.name = "balanced_pair";
  policy.act = [control](int, int, const std::vector<int>&) {
    return control;
  };
  return policy;
}

AdversaryPolicy CustomAdversary(
    std::string name,
    std::function<AdversaryControl(int, int, const std::vector<int>&)> act) {
  AdversaryPolicy policy;
  policy.name = std::move(name);
  policy.act = std::move(act);
  return policy;
}

ForecasterPolicy GradientForecaster(const ExpertModel& model, double theta) {
  ValidateModel(model);
  if (model.num_experts() != 2) {
    throw std::invalid_argument(
        "the gradient forecaster uses the closed-form limit, which this "
        "build provides for two experts only");
  }
  const GaussianLimit limit = BuildGaussianLimit(model, theta);
  const double rate = PairRate(limit);
  ForecasterPolicy policy;
  policy.name = "gradient_U";
  policy.act = [rate, theta](int round, int num_rounds,
                             const std::vector<int>& state,
                             const AdversaryControl&) -> ForecasterControl {
    const double t =
        num_rounds > 0
            ? static_cast<double>(round - 1) / static_cast<double>(num_rounds)
            : 1.0;
    const double v = rate * (1.0 - std::min(1.0, std::max(0.0, t)));
    if (v <= 0.0) {
      // Zero time to go: the gradient collapses onto the leaders, softened
      // by the averaged part of the payoff.
      return ForecasterControl{LeaderBlend(state, theta)};
    }
    const double z =
        static_cast<double>(state[0] - state[1]) / std::sqrt(num_rounds);
    const double p = (1.0 - theta) * NormalCdf(z / std::sqrt(v)) + 0.5 * theta;
    return ForecasterControl{{p, 1.0 - p}};
  };
  return policy;
}

ForecasterPolicy FollowTheLeaderForecaster(int num_experts) {
  if (num_experts < 2) {
    throw std::invalid_argument("need at least two experts");
  }
  ForecasterPolicy policy;
  policy.name = "follow_the_leader";
  policy.act = [](int, int, const std::vector<int>& state,
                  const AdversaryControl&) {
    return ForecasterControl{LeaderBlend(state, 0.0)};
  };
  return policy;
}

ForecasterPolicy MultiplicativeWeightsForecaster(int num_experts, double eta) {
  if (num_experts < 2) {
    throw std::invalid_argument("need at least two experts");
  }
  ForecasterPolicy policy;
  policy.name = "multiplicative_weights";
  policy.act = [eta](int, int num_rounds, const std::vector<int>& state,
                     const AdversaryControl&) {
    const int n = static_cast<int>(state.size());
    const double rate =
        eta > 0.0 ? eta
                  : std::sqrt(8.0 * std::log(static_cast<double>(n)) /
                              std::max(1, num_rounds));
    const int top = *std::max_element(state.begin(), state.end());
    std::vector<double> phi(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      phi[i] = std::exp(rate * static_cast<double>(state[i] - top));
      total += phi[i];
    }
    for (double& w : phi) w /= total;
    return ForecasterControl{std::move(phi)};
  };
  return policy;
}

ForecasterPolicy BestResponseForecaster(const ExpertModel& model) {
  ValidateModel(model);
  ForecasterPolicy policy;
  policy.name = "best_response";
  policy.act = [model](int, int, const std::vector<int>&,
                       const AdversaryControl& control) {
    const std::vector<double> gains = ExpectedGains(control, model);
    int best = 0;
    for (int i = 1; i < static_cast<int>(gains.size()); ++i) {
      if (gains[i] > gains[best]) best = i;
    }
    std::vector<double> phi(gains.size(), 0.0);
    phi[best] = 1.0;
    return ForecasterControl{std::move(phi)};
  };
  return policy;
}

ForecasterPolicy UniformForecaster(int num_experts) {
  if (num_experts < 2) {
    throw std::invalid_argument("need at least two experts");
  }
  ForecasterPolicy policy;
  policy.name = "uniform";
  policy.act = [num_experts](int, int, const std::vector<int>&,
                             const AdversaryControl&) {
    return ForecasterControl{
        std::vector<double>(num_experts, 1.0 / num_experts)};
  };
  return policy;
}

ForecasterPolicy CustomForecaster(
    std::string name,
    std::function<ForecasterControl(int, int, const std::vector<int>&,
                                    const AdversaryControl&)>
        act) {
  ForecasterPolicy policy;
  policy.name = std::move(name);
  policy.act = std::move(act);
  return policy;
}

AdversaryPolicy ReplayAdversary(const ValueTable& table) {
  if (!table.has_saddles()) {
    throw std::invalid_argument("replay needs a table with stored saddles");
  }
  const ValueTable* source = &table;
  AdversaryPolicy policy;
  policy.name = "replay";
  policy.act = [source](int round, int num_rounds,
                        const std::vector<int>& state) {
    if (num_rounds != source->num_rounds()) {
      throw std::invalid_argument(
          "replay table was solved for a different horizon");
    }
    return source->Saddle(round - 1, ReducedState(state)).alpha_star;
  };
  return policy;
}

ForecasterPolicy ReplayForecaster(const ValueTable& table) {
  if (!table.has_saddles()) {
    throw std::invalid_argument("replay needs a table with stored saddles");
  }
  const ValueTable* source = &table;
  ForecasterPolicy policy;
  policy.name = "replay";
  policy.act = [source](int round, int num_rounds,
                        const std::vector<int>& state,
                        const AdversaryControl&) {
    if (num_rounds != source->num_rounds()) {
      throw std::invalid_argument(
          "replay table was solved for a different horizon");
    }
    return source->Saddle(round - 1, ReducedState(state)).phi_star;
  };
  return policy;
}

SimulationReport Simulate(const ExpertModel& model,
                          const AdversaryPolicy& adversary,
                          const ForecasterPolicy& forecaster,
                          const FinalCondition& final_condition,
                          int num_rounds, int64_t replications, uint64_t seed,
                          bool track_difference) {
  ValidateModel(model);
  if (num_rounds < 0) {
    throw std::invalid_argument("the horizon cannot be negative");
  }
  if (replications < 1) {
    throw std::invalid_argument("need at least one replication");
  }
  if (!adversary.act || !forecaster.act) {
    throw std::invalid_argument("policy without an act function");
  }
  const int n = model.num_experts();
  if (track_difference && n != 2) {
    throw std::invalid_argument(
        "difference tracking follows X^1 - X^2 and needs two experts");
  }

  SimulationReport report;
  report.num_rounds = num_rounds;
  report.replications = replications;
  report.terminal_regrets.assign(replications, 0.0);
  std::vector<double> diff_mean(track_difference ? replications : 0, 0.0);
  std::vector<double> diff_square(track_difference ? replications : 0, 0.0);

  const int64_t num_chunks = (replications + kRepChunk - 1) / kRepChunk;
  ParallelChunks(num_chunks, [&](int64_t chunk) {
    std::vector<int> state(n);
    std::vector<int> gains(n);
    std::vector<double> x(n);
    const int64_t rep_end =
        std::min<int64_t>(replications, (chunk + 1) * kRepChunk);
    for (int64_t rep = chunk * kRepChunk; rep < rep_end; ++rep) {
      RandomStream rng(seed, static_cast<uint64_t>(rep));
      std::fill(state.begin(), state.end(), 0);
      int64_t dz_total = 0;
      int64_t dz_square_total = 0;
      for (int m = 1; m <= num_rounds; ++m) {
        const AdversaryControl alpha =
            SanitizeControl(adversary.act(m, num_rounds, state), 1e-9);
        if (static_cast<int>(alpha.a.size()) != n ||
            static_cast<int>(alpha.b.size()) != n) {
          throw std::invalid_argument(
              "adversary policy emitted a control of the wrong size");
        }
        const ForecasterControl weights = SanitizeWeights(
            forecaster.act(m, num_rounds, state, alpha), 1e-9);
        if (static_cast<int>(weights.phi.size()) != n) {
          throw std::invalid_argument(
              "forecaster policy emitted weights of the wrong size");
        }
        // Fixed draw order, N + 2 uniforms per round: corruption event,
        // every natural gain (the pinned one is overwritten, its draw still
        // consumed), forecaster pick.
        const double u_event = rng.NextUniform();
        const int event = PickIndex(u_event, 2 * n, [&](int e) {
          return e < n ? alpha.a[e] : alpha.b[e - n];
        });
        for (int i = 0; i < n; ++i) {
          gains[i] = rng.NextUniform() < model.mu[i] ? 1 : 0;
        }
        gains[event % n] = event < n ? 0 : 1;
        const double u_pick = rng.NextUniform();
        const int followed =
            PickIndex(u_pick, n, [&](int i) { return weights.phi[i]; });
        const int forecaster_gain = gains[followed];
        for (int i = 0; i < n; ++i) state[i] += gains[i] - forecaster_gain;
        if (track_difference) {
          const int dz = gains[0] - gains[1];
          dz_total += dz;
          dz_square_total += dz * dz;
        }
      }
      for (int i = 0; i < n; ++i) x[i] = static_cast<double>(state[i]);
      report.terminal_regrets[rep] = final_condition.Value(x);
      if (track_difference && num_rounds > 0) {
        diff_mean[rep] =
            static_cast<double>(dz_total) / static_cast<double>(num_rounds);
        diff_square[rep] = static_cast<double>(dz_square_total) /
                           static_cast<double>(num_rounds);
      }
    }
  });

  report.regret = Summarize(report.terminal_regrets);
  if (track_difference) {
    report.has_difference = true;
    report.difference = SummarizeDifference(diff_mean, diff_square);
  }
  return report;
}

ConvergenceReport ExperimentConvergence(const ExpertModel& model,
                                        const FinalCondition& final_condition,
                                        const std::vector<int>& m_values,
                                        uint64_t seed) {
  (void)seed;  // both sides of the comparison are exact
  ValidateModel(model);
  if (model.num_experts() != 2) {
    throw std::invalid_argument(
        "the exact recursion comparison runs on two experts");
  }
  if (final_condition.kind == FinalCondition::Kind::kCustom) {
    throw std::invalid_argument(
        "no closed-form limit for a custom final payoff");
  }
  if (m_values.empty()) {
    throw std::invalid_argument("need at least one horizon");
  }
  for (int m : m_values) {
    if (m < 1) throw std::invalid_argument("horizons must be positive");
  }
  const double theta = final_condition.kind == FinalCondition::Kind::kMax
                           ? 0.0
                           : final_condition.theta;
  const GaussianLimit limit = BuildGaussianLimit(model, theta);
  ConvergenceReport report;
  report.theta = theta;
  report.limit_value =
      (1.0 - theta) * std::sqrt(PairRate(limit)) * NormalPdf(0.0);
  for (int m : m_values) {
    const ValueTable table = SolveValue(m, model, final_condition, false);
    ConvergenceRow row;
    row.num_rounds = m;
    row.scaled_value = ScaledValue(table, 0.0, std::vector<double>(2, 0.0));
    row.limit_value = report.limit_value;
    row.gap = row.scaled_value - row.limit_value;
    report.rows.push_back(row);
  }
  return report;
}

CounterexampleReport ExperimentCounterexample(int num_rounds,
                                              int64_t replications,
                                              uint64_t seed, double theta) {
  if (num_rounds < 1) {
    throw std::invalid_argument("the horizon must be positive");
  }
  if (replications < 2) {
    throw std::invalid_argument("need at least two replications");
  }
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument(
        "the averaged payoff weight must lie strictly between 0 and 1");
  }
  ExpertModel model;
  model.mu = {0.75, 0.25};
  const FinalCondition final_condition = FinalCondition::MaxTheta(theta);
  const double scale = 1.0 / std::sqrt(static_cast<double>(num_rounds));

  CounterexampleReport report;
  report.num_rounds = num_rounds;
  report.replications = replications;
  report.theta = theta;

  const GaussianLimit limit = BuildGaussianLimit(model, theta);
  report.limit_value =
      (1.0 - theta) * std::sqrt(PairRate(limit)) * NormalPdf(0.0);

  // Main arm: the gradient forecaster against pointwise corruption, with the
  // score difference tracked for the drift and variance checks.
  const SimulationReport main_arm = Simulate(
      model, HatAdversary(2), GradientForecaster(model, theta),
      final_condition, num_rounds, replications, seed, true);
  report.scaled_regret = ScaleStats(main_arm.regret, scale);
  report.difference = main_arm.difference;
  report.gap = report.scaled_regret.mean - report.limit_value;
  const double gap_std_error = std::sqrt(
      report.scaled_regret.variance / static_cast<double>(replications));
  report.gap_ci_low = report.gap - kNormalQuantile95 * gap_std_error;
  report.gap_ci_high = report.gap + kNormalQuantile95 * gap_std_error;
  report.gap_significant = report.gap_ci_low > 0.0;

  // Control arms share the seed: the same adversary loses its edge against
  // its best response, and a balanced adversary restores the limit value
  // against the gradient forecaster.
  const SimulationReport best_response_arm = Simulate(
      model, HatAdversary(2), BestResponseForecaster(model), final_condition,
      num_rounds, replications, seed, false);
  report.best_response_scaled = ScaleStats(best_response_arm.regret, scale);

  const BalancedAnalysis analysis = AnalyzeBalanced(model);
  const SimulationReport balanced_arm = Simulate(
      model, ConstantAdversary(ConstructBalanced(analysis.c_min, model)),
      GradientForecaster(model, theta), final_condition, num_rounds,
      replications, seed, false);
  report.balanced_scaled = ScaleStats(balanced_arm.regret, scale);
  return report;
}

EmptyRegimeReport ExperimentEmptyRegime(const ExpertModel& model, double theta,
                                        const std::vector<int>& m_values,
                                        int64_t replications, uint64_t seed) {
  ValidateModel(model);
  if (!(theta >= 0.0 && theta < 1.0)) {
    throw std::invalid_argument(
        "the averaged payoff weight must lie in [0, 1)");
  }
  if (m_values.empty()) {
    throw std::invalid_argument("need at least one horizon");
  }
  for (int m : m_values) {
    if (m < 1) throw std::invalid_argument("horizons must be positive");
  }
  if (replications < 2) {
    throw std::invalid_argument("need at least two replications");
  }
  const BalancedAnalysis analysis = AnalyzeBalanced(model);
  if (analysis.feasible) {
    throw std::invalid_argument(
        "the model admits balanced controls (minimum dispersion " +
        std::to_string(analysis.s_min) +
        " <= 1); this experiment studies the regime without them");
  }
  const int n = model.num_experts();

  EmptyRegimeReport report;
  report.theta = theta;

  if (theta > 0.0) {
    if (m_values.size() < 2) {
      throw std::invalid_argument("the decay fit needs at least two horizons");
    }
    const FinalCondition final_condition = FinalCondition::MaxTheta(theta);
    const AdversaryPolicy adversary =
        MyopicSaddleAdversary(model, final_condition);
    const ForecasterPolicy forecaster = BestResponseForecaster(model);
    std::vector<double> roots;
    std::vector<double> scaled;
    for (int m : m_values) {
      const SimulationReport sim = Simulate(
          model, adversary, forecaster, final_condition, m, replications,
          seed, false);
      EmptyRegimeRow row;
      row.num_rounds = m;
      row.mean_regret = sim.regret.mean;
      row.scaled_regret =
          sim.regret.mean / std::sqrt(static_cast<double>(m));
      report.rows.push_back(row);
      roots.push_back(std::sqrt(static_cast<double>(m)));
      scaled.push_back(row.scaled_regret);
    }
    // Scaled regret falls off linearly in sqrt(M): every round concedes at
    // least the minimum total drain through the averaged part of the payoff,
    // so the decay rate should sit near theta * drain / N.  The band is
    // deliberately wide; the policy is myopic, not optimal.
    report.kappa_hat = -FitLine(roots, scaled).slope;
    report.delta_hat = ComputeDelta(model, 8, 12).delta_hat;
    report.drain = MinTotalDrain(model).value;
    report.band_low = 0.5 * theta * report.drain / n;
    report.band_high = 2.0 * theta * report.drain / n;
    report.kappa_in_band =
        report.kappa_hat >= report.band_low &&
        report.kappa_hat <= report.band_high;
    return report;
  }

  const FinalCondition final_condition = FinalCondition::Max();
  const AdversaryPolicy adversary = BalancedPairAdversary(model);
  const ForecasterPolicy forecaster = BestResponseForecaster(model);
  int largest = m_values.front();
  double largest_scaled = 0.0;
  for (int m : m_values) {
    const SimulationReport sim = Simulate(model, adversary, forecaster,
                                          final_condition, m, replications,
                                          seed, false);
    EmptyRegimeRow row;
    row.num_rounds = m;
    row.mean_regret = sim.regret.mean;
    row.scaled_regret = sim.regret.mean / std::sqrt(static_cast<double>(m));
    report.rows.push_back(row);
    if (m >= largest) {
      largest = m;
      largest_scaled = row.scaled_regret;
    }
  }
  const std::vector<double> origin(n, 0.0);
  double bound = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      bound = std::max(bound, TwoExpertLowerBound(model, i, j, 0.0, origin));
    }
  }
  report.two_expert_bound = bound;
  report.bound_tolerance = 0.05;
  report.bound_satisfied = largest_scaled >= bound - report.bound_tolerance;
  return report;
}

}  // namespace expertgame
