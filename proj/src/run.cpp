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

#include "expertgame/run.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "expertgame/balance.hpp"
#include "expertgame/game.hpp"
#include "expertgame/gaussian_limit.hpp"
#include "expertgame/numeric.hpp"
#include "expertgame/simulate.hpp"
#include "expertgame/value_dp.hpp"
#include "json_writer.hpp"

namespace expertgame {
namespace {

constexpr const char* kVersion = "expertgame 1.0.0";

ExpertModel RequireModel(const ExperimentConfig& config,
                         const std::string& subcommand) {
  if (config.mu.empty()) {
    throw ConfigError("experts.mu: required for " + subcommand);
  }
  ExpertModel model;
  model.mu = config.mu;
  ValidateModel(model);
  return model;
}

FinalCondition FinalFrom(const ExperimentConfig& config) {
  return config.final_kind == "max" ? FinalCondition::Max()
                                    : FinalCondition::MaxTheta(config.theta);
}

double ThetaFrom(const ExperimentConfig& config) {
  return config.final_kind == "max" ? 0.0 : config.theta;
}

AdversaryPolicy BuildAdversary(const ExperimentConfig& config,
                               const ExpertModel& model,
                               const FinalCondition& final_condition,
                               double theta) {
  const int n = model.num_experts();
  if (config.adversary == "asymptotic_star") {
    return AsymptoticAdversary(model, theta);
  }
  if (config.adversary == "constant") {
    AdversaryControl control;
    control.a = config.adversary_a;
    control.b = config.adversary_b;
    if (control.a.empty()) control.a.assign(control.b.size(), 0.0);
    if (control.b.empty()) control.b.assign(control.a.size(), 0.0);
    if (static_cast<int>(control.a.size()) != n) {
      throw ConfigError(
          "strategy.adversary_params: corruption masses must have one entry "
          "per expert");
    }
    return ConstantAdversary(control);
  }
  if (config.adversary == "hat_counterexample") {
    return HatAdversary(n);
  }
  if (config.adversary == "balanced") {
    const double level = config.has_balanced_c
                             ? config.balanced_c
                             : AnalyzeBalanced(model).argmin_c;
    return ConstantAdversary(ConstructBalanced(level, model));
  }
  if (config.adversary == "myopic_saddle") {
    return MyopicSaddleAdversary(model, final_condition);
  }
  // Kinds are validated at parse time, so this is the last one.
  return BalancedPairAdversary(model);
}

ForecasterPolicy BuildForecaster(const ExperimentConfig& config,
                                 const ExpertModel& model, double theta) {
  const int n = model.num_experts();
  if (config.forecaster == "gradient_U") {
    return GradientForecaster(model, theta);
  }
  if (config.forecaster == "follow_the_leader") {
    return FollowTheLeaderForecaster(n);
  }
  if (config.forecaster == "multiplicative_weights") {
    return MultiplicativeWeightsForecaster(n, config.eta);
  }
  if (config.forecaster == "best_response") {
    return BestResponseForecaster(model);
  }
  return UniformForecaster(n);
}

void CsvCell(std::string* out, double v) { *out += FormatG17(v); }

void CsvEnd(std::string* out) { *out += '\n'; }

std::string MakeEnvelope(const std::string& subcommand,
                         const ExperimentConfig& config,
                         const std::string& payload) {
  internal::JsonWriter w;
  w.BeginObject();
  w.Key("version");
  w.String(kVersion);
  w.Key("subcommand");
  w.String(subcommand);
  w.Key("config");
  w.Raw(NormalizeConfig(config));
  w.Key("payload");
  w.Raw(payload);
  w.EndObject();
  return w.str();
}

void WriteSummary(internal::JsonWriter* w, const char* key,
                  const SummaryStats& stats) {
  w->Key(key);
  w->BeginObject();
  w->Key("mean");
  w->Number(stats.mean);
  w->Key("variance");
  w->Number(stats.variance);
  w->Key("ci95_low");
  w->Number(stats.ci95_low);
  w->Key("ci95_high");
  w->Number(stats.ci95_high);
  w->EndObject();
}

void WriteDifference(internal::JsonWriter* w, const DifferenceStats& diff) {
  w->Key("difference");
  w->BeginObject();
  w->Key("step_mean");
  w->Number(diff.step_mean);
  w->Key("step_mean_std_error");
  w->Number(diff.step_mean_std_error);
  w->Key("step_variance");
  w->Number(diff.step_variance);
  w->Key("step_variance_std_error");
  w->Number(diff.step_variance_std_error);
  w->EndObject();
}

RunOutput RunAnalyze(const ExperimentConfig& config) {
  const ExpertModel model = RequireModel(config, "analyze");
  const BalancedAnalysis analysis = AnalyzeBalanced(model);

  internal::JsonWriter w;
  w.BeginObject();
  w.Key("feasible");
  w.Bool(analysis.feasible);
  w.Key("s_min");
  w.Number(analysis.s_min);
  w.Key("argmin_c");
  w.Number(analysis.argmin_c);
  if (analysis.feasible) {
    w.Key("c_min");
    w.Number(analysis.c_min);
    w.Key("c_max");
    w.Number(analysis.c_max);
  } else {
    const DistinctGapEstimate gap = ComputeDelta(model, 8, 12);
    w.Key("delta");
    w.BeginObject();
    w.Key("delta_hat");
    w.Number(gap.delta_hat);
    w.Key("grid_certificate");
    w.Number(gap.grid_certificate);
    w.EndObject();
    w.Key("drain");
    w.Number(MinTotalDrain(model).value);
  }
  w.EndObject();

  RunOutput out;
  out.envelope = MakeEnvelope("analyze", config, w.str());
  return out;
}

RunOutput RunDp(const ExperimentConfig& config) {
  const ExpertModel model = RequireModel(config, "dp");
  const FinalCondition final_condition = FinalFrom(config);
  const int num_rounds = config.num_rounds;
  const int n = model.num_experts();
  const ValueTable table = SolveValue(num_rounds, model, final_condition, true);

  std::string csv = "m";
  for (int i = 1; i < n; ++i) csv += ",z" + std::to_string(i);
  csv += ",value";
  for (int i = 1; i <= n; ++i) csv += ",a" + std::to_string(i);
  for (int i = 1; i <= n; ++i) csv += ",b" + std::to_string(i);
  for (int i = 1; i <= n; ++i) csv += ",phi" + std::to_string(i);
  csv += ",duality_gap";
  CsvEnd(&csv);

  double max_gap = 0.0;
  for (int m = 0; m <= num_rounds; ++m) {
    const bool has_saddle = m < num_rounds;
    for (int64_t index = 0; index < table.StateCount(m); ++index) {
      const std::vector<int> z = table.DecodeState(m, index);
      csv += std::to_string(m);
      for (int zi : z) csv += "," + std::to_string(zi);
      csv += ',';
      CsvCell(&csv, table.ValueByIndex(m, index));
      if (has_saddle) {
        const SaddleResult& saddle = table.SaddleByIndex(m, index);
        for (double v : saddle.alpha_star.a) {
          csv += ',';
          CsvCell(&csv, v);
        }
        for (double v : saddle.alpha_star.b) {
          csv += ',';
          CsvCell(&csv, v);
        }
        for (double v : saddle.phi_star.phi) {
          csv += ',';
          CsvCell(&csv, v);
        }
        csv += ',';
        CsvCell(&csv, saddle.duality_gap);
        max_gap = std::max(max_gap, saddle.duality_gap);
      } else {
        // Terminal slice: the payoff itself, no controls to report.
        for (int i = 0; i < 3 * n + 1; ++i) csv += ',';
      }
      CsvEnd(&csv);
    }
  }

  internal::JsonWriter w;
  w.BeginObject();
  w.Key("num_rounds");
  w.Int(num_rounds);
  w.Key("value_at_origin");
  w.Number(table.Value(0, std::vector<int>(n - 1, 0)));
  w.Key("max_duality_gap");
  w.Number(max_gap);
  w.EndObject();

  RunOutput out;
  out.csv = std::move(csv);
  out.envelope = MakeEnvelope("dp", config, w.str());
  return out;
}

RunOutput RunPde(const ExperimentConfig& config) {
  const ExpertModel model = RequireModel(config, "pde");
  const double theta = ThetaFrom(config);
  const int n = model.num_experts();
  const GaussianLimit limit = BuildGaussianLimit(model, theta);
  const McValue mc = EvaluateUSampled(limit, 0.0, std::vector<double>(n, 0.0),
                                      config.replications, config.seed);

  RunOutput out;
  internal::JsonWriter w;
  w.BeginObject();
  if (n == 2) {
    const GridConfig& g = config.grid;
    const Grid1D grid =
        SolveReducedFd(model, theta, g.z_min, g.z_max, g.nz, g.nt);
    std::string csv = "t,z,w";
    CsvEnd(&csv);
    const double dz = (g.z_max - g.z_min) / (g.nz - 1);
    for (int i = 0; i < g.nz; ++i) {
      csv += "0,";
      CsvCell(&csv, g.z_min + i * dz);
      csv += ',';
      CsvCell(&csv, grid.values[i]);
      CsvEnd(&csv);
    }
    out.csv = std::move(csv);
    w.Key("grid");
    w.BeginObject();
    w.Key("z_min");
    w.Number(g.z_min);
    w.Key("z_max");
    w.Number(g.z_max);
    w.Key("nz");
    w.Int(g.nz);
    w.Key("nt");
    w.Int(grid.nt);
    w.EndObject();
    if (g.z_min <= 0.0 && 0.0 <= g.z_max) {
      w.Key("w_at_origin");
      w.Number(grid.ValueAt(0.0));
    }
  } else {
    std::string csv = "t";
    for (int i = 1; i <= n; ++i) csv += ",x" + std::to_string(i);
    csv += ",U,stderr";
    CsvEnd(&csv);
    csv += "0";
    for (int i = 0; i < n; ++i) csv += ",0";
    csv += ',';
    CsvCell(&csv, mc.value);
    csv += ',';
    CsvCell(&csv, mc.std_error);
    CsvEnd(&csv);
    out.csv = std::move(csv);
  }
  w.Key("mc_value");
  w.Number(mc.value);
  w.Key("mc_std_error");
  w.Number(mc.std_error);
  w.Key("mc_samples");
  w.Int(config.replications);
  w.EndObject();
  out.envelope = MakeEnvelope("pde", config, w.str());
  return out;
}

RunOutput RunSimulate(const ExperimentConfig& config) {
  const ExpertModel model = RequireModel(config, "simulate");
  const FinalCondition final_condition = FinalFrom(config);
  const double theta = ThetaFrom(config);
  const AdversaryPolicy adversary =
      BuildAdversary(config, model, final_condition, theta);
  const ForecasterPolicy forecaster =
      BuildForecaster(config, model, theta);
  const bool track = model.num_experts() == 2;
  const SimulationReport report =
      Simulate(model, adversary, forecaster, final_condition,
               config.num_rounds, config.replications, config.seed, track);

  std::string csv = "rep,regret";
  CsvEnd(&csv);
  for (int64_t rep = 0; rep < report.replications; ++rep) {
    csv += std::to_string(rep);
    csv += ',';
    CsvCell(&csv, report.terminal_regrets[rep]);
    CsvEnd(&csv);
  }

  internal::JsonWriter w;
  w.BeginObject();
  w.Key("num_rounds");
  w.Int(report.num_rounds);
  w.Key("replications");
  w.Int(report.replications);
  w.Key("adversary");
  w.String(adversary.name);
  w.Key("forecaster");
  w.String(forecaster.name);
  WriteSummary(&w, "regret", report.regret);
  if (report.has_difference) {
    WriteDifference(&w, report.difference);
  }
  w.EndObject();

  RunOutput out;
  out.csv = std::move(csv);
  out.envelope = MakeEnvelope("simulate", config, w.str());
  return out;
}

RunOutput RunConverge(const ExperimentConfig& config) {
  const ExpertModel model = RequireModel(config, "converge");
  const FinalCondition final_condition = FinalFrom(config);
  const std::vector<int> m_values =
      config.m_values.empty() ? std::vector<int>{16, 64, 256}
                              : config.m_values;
  const ConvergenceReport report =
      ExperimentConvergence(model, final_condition, m_values, config.seed);

  std::string csv = "M,u_M,U,gap";
  CsvEnd(&csv);
  for (const ConvergenceRow& row : report.rows) {
    csv += std::to_string(row.num_rounds);
    csv += ',';
    CsvCell(&csv, row.scaled_value);
    csv += ',';
    CsvCell(&csv, row.limit_value);
    csv += ',';
    CsvCell(&csv, row.gap);
    CsvEnd(&csv);
  }

  internal::JsonWriter w;
  w.BeginObject();
  w.Key("theta");
  w.Number(report.theta);
  w.Key("limit_value");
  w.Number(report.limit_value);
  w.Key("rows");
  w.BeginArray();
  for (const ConvergenceRow& row : report.rows) {
    w.BeginObject();
    w.Key("M");
    w.Int(row.num_rounds);
    w.Key("u_M");
    w.Number(row.scaled_value);
    w.Key("U");
    w.Number(row.limit_value);
    w.Key("gap");
    w.Number(row.gap);
    w.EndObject();
  }
  w.EndArray();
  w.EndObject();

  RunOutput out;
  out.csv = std::move(csv);
  out.envelope = MakeEnvelope("converge", config, w.str());
  return out;
}

RunOutput RunCounterexample(const ExperimentConfig& config) {
  if (!config.mu.empty()) {
    const bool matches = config.mu.size() == 2 &&
                         std::abs(config.mu[0] - 0.75) < 1e-12 &&
                         std::abs(config.mu[1] - 0.25) < 1e-12;
    if (!matches) {
      throw ConfigError(
          "experts.mu: the counter-example runs the fixed model (0.75, 0.25)");
    }
  }
  if (config.final_kind == "max") {
    throw ConfigError(
        "final.kind: the counter-example needs the averaged payoff "
        "(max_theta with theta in (0, 1))");
  }
  const CounterexampleReport report = ExperimentCounterexample(
      config.num_rounds, config.replications, config.seed, config.theta);

  internal::JsonWriter w;
  w.BeginObject();
  w.Key("num_rounds");
  w.Int(report.num_rounds);
  w.Key("replications");
  w.Int(report.replications);
  w.Key("theta");
  w.Number(report.theta);
  w.Key("scaled_regret_mean");
  w.Number(report.scaled_regret.mean);
  w.Key("scaled_regret_ci_low");
  w.Number(report.scaled_regret.ci95_low);
  w.Key("scaled_regret_ci_high");
  w.Number(report.scaled_regret.ci95_high);
  w.Key("U0");
  w.Number(report.limit_value);
  w.Key("gap");
  w.Number(report.gap);
  w.Key("gap_ci_low");
  w.Number(report.gap_ci_low);
  w.Key("gap_ci_high");
  w.Number(report.gap_ci_high);
  w.Key("gap_significant");
  w.Bool(report.gap_significant);
  WriteDifference(&w, report.difference);
  WriteSummary(&w, "best_response_scaled", report.best_response_scaled);
  WriteSummary(&w, "balanced_scaled", report.balanced_scaled);
  w.EndObject();

  RunOutput out;
  out.envelope = MakeEnvelope("counterexample", config, w.str());
  return out;
}

RunOutput RunEmptyRegime(const ExperimentConfig& config) {
  const ExpertModel model = RequireModel(config, "empty-regime");
  const double theta = ThetaFrom(config);
  const std::vector<int> m_values =
      config.m_values.empty() ? std::vector<int>{64, 256, 1024}
                              : config.m_values;
  const EmptyRegimeReport report = ExperimentEmptyRegime(
      model, theta, m_values, config.replications, config.seed);

  std::string csv = "M,mean_regret,scaled_regret";
  CsvEnd(&csv);
  for (const EmptyRegimeRow& row : report.rows) {
    csv += std::to_string(row.num_rounds);
    csv += ',';
    CsvCell(&csv, row.mean_regret);
    csv += ',';
    CsvCell(&csv, row.scaled_regret);
    CsvEnd(&csv);
  }

  internal::JsonWriter w;
  w.BeginObject();
  w.Key("theta");
  w.Number(report.theta);
  w.Key("rows");
  w.BeginArray();
  for (const EmptyRegimeRow& row : report.rows) {
    w.BeginObject();
    w.Key("M");
    w.Int(row.num_rounds);
    w.Key("mean_regret");
    w.Number(row.mean_regret);
    w.Key("scaled_regret");
    w.Number(row.scaled_regret);
    w.EndObject();
  }
  w.EndArray();
  if (report.theta > 0.0) {
    w.Key("kappa_hat");
    w.Number(report.kappa_hat);
    w.Key("delta_hat");
    w.Number(report.delta_hat);
    w.Key("drain");
    w.Number(report.drain);
    w.Key("band_low");
    w.Number(report.band_low);
    w.Key("band_high");
    w.Number(report.band_high);
    w.Key("kappa_in_band");
    w.Bool(report.kappa_in_band);
  } else {
    w.Key("two_expert_bound");
    w.Number(report.two_expert_bound);
    w.Key("bound_tolerance");
    w.Number(report.bound_tolerance);
    w.Key("bound_satisfied");
    w.Bool(report.bound_satisfied);
  }
  w.EndObject();

  RunOutput out;
  out.csv = std::move(csv);
  out.envelope = MakeEnvelope("empty-regime", config, w.str());
  return out;
}

}  // namespace

const char* ArtifactVersion() { return kVersion; }

RunOutput Run(const std::string& subcommand, const ExperimentConfig& config) {
  if (subcommand == "analyze") return RunAnalyze(config);
  if (subcommand == "dp") return RunDp(config);
  if (subcommand == "pde") return RunPde(config);
  if (subcommand == "simulate") return RunSimulate(config);
  if (subcommand == "converge") return RunConverge(config);
  if (subcommand == "counterexample") return RunCounterexample(config);
  if (subcommand == "empty-regime") return RunEmptyRegime(config);
  throw ConfigError("unknown subcommand: " + subcommand);
}

}  // namespace expertgame
