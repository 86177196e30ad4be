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

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "expertgame/config.hpp"
#include "expertgame/parallel.hpp"
#include "expertgame/run.hpp"

namespace {

constexpr const char* kHelpFooter = R"(Configuration schema (JSON, defaults in parentheses):
  experts.mu          success rates in [0, 1], one per expert; required by
                      every subcommand except counterexample, which fixes
                      mu = [0.75, 0.25]
  game.M              horizon, integer >= 0 (64)
  game.theta          averaged-payoff weight in [0, 1) (0.1)
  final.kind          "max" or "max_theta" ("max_theta")
  strategy.adversary  asymptotic_star | constant | hat_counterexample |
                      balanced | myopic_saddle | balanced_pair
                      (asymptotic_star)
  strategy.adversary_params.a, .b       corruption masses for "constant"
  strategy.adversary_params.balanced_c  common gain for "balanced"
                                        (the dispersion minimizer)
  strategy.forecaster gradient_U | follow_the_leader |
                      multiplicative_weights | best_response | uniform
                      (gradient_U)
  strategy.forecaster_params.eta        learning rate, 0 = automatic (0)
  sim.replications    integer >= 1 (100000)
  sim.seed            unsigned 64-bit integer (1)
  pde.grid.z_min, .z_max, .nz, .nt      (-6, 6, 801, 0 = stable choice)
  experiment.m_values horizons; default {16, 64, 256} for converge and
                      {64, 256, 1024} for empty-regime
  output.path         file path; empty prints to stdout ("")
  output.format       "csv" or "json" ("csv")
Unknown keys are rejected with the offending key path.

CSV columns, fixed per subcommand (header row included, 17 significant
digits):
  dp            m, z1..z{N-1}, value, a1..aN, b1..bN, phi1..phiN,
                duality_gap   (terminal rows leave the control columns empty)
  pde, N = 2    t, z, w   (backward solution at t = 0 on the z grid)
  pde, N >= 3   t, x1..xN, U, stderr
  simulate      rep, regret   (one row per replication)
  converge      M, u_M, U, gap
  empty-regime  M, mean_regret, scaled_regret
analyze and counterexample produce the JSON summary only.

Output routing: with format "csv" and a path, the table goes to the path and
the JSON summary to <path>.summary.json (subcommands without a table write
the summary to the path); with format "json" the summary alone goes to the
path.  An empty path prints the primary output to stdout.

Threads: --threads, else EXPERTGAME_THREADS, else all cores.  Outputs are
byte-identical across thread counts and repeated runs.

Exit codes: 0 success, 2 validation error, 3 structural or numerical
failure.)";

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw expertgame::ConfigError("cannot read config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) {
    throw std::runtime_error("cannot write output file: " + path);
  }
}

struct CliOptions {
  std::string config_path;
  std::string out_path;
  uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
};

int Execute(const std::string& subcommand, const CliOptions& options) {
  try {
    expertgame::ExperimentConfig config;
    if (!options.config_path.empty()) {
      config = expertgame::ParseConfig(ReadFile(options.config_path));
    }
    if (options.seed_given) config.seed = options.seed;
    if (!options.out_path.empty()) config.output_path = options.out_path;
    if (options.threads > 0) expertgame::SetThreadCount(options.threads);

    const auto start = std::chrono::steady_clock::now();
    const expertgame::RunOutput result = expertgame::Run(subcommand, config);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();

    const bool json_only = config.output_format == "json";
    const std::string& primary =
        (json_only || result.csv.empty()) ? result.envelope : result.csv;
    if (config.output_path.empty()) {
      std::cout << primary;
    } else {
      WriteFile(config.output_path, primary);
      if (!json_only && !result.csv.empty()) {
        WriteFile(config.output_path + ".summary.json", result.envelope);
      }
    }
    // Timing stays on stderr so result files are byte-stable.
    std::cerr << subcommand << ": done in " << elapsed << " s\n";
    return 0;
  } catch (const expertgame::ConfigError& error) {
    std::cerr << "configuration error: " << error.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& error) {
    std::cerr << "validation error: " << error.what() << "\n";
    return 2;
  } catch (const std::domain_error& error) {
    std::cerr << "structural error: " << error.what() << "\n";
    return 3;
  } catch (const std::exception& error) {
    std::cerr << "numerical failure: " << error.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "expertgame: repeated expert prediction against an adversary who can "
      "corrupt one expert per round"};
  app.footer(kHelpFooter);
  app.require_subcommand(1);

  CliOptions options;
  int exit_code = 0;

  const struct {
    const char* name;
    const char* description;
  } subcommands[] = {
      {"analyze", "balanced-control range and dispersion of a model"},
      {"dp", "exact game values and saddle controls by backward induction"},
      {"pde", "diffusion-limit value: finite differences and Monte Carlo"},
      {"simulate", "Monte Carlo play of chosen adversary and forecaster"},
      {"converge", "scaled exact values against the limit value"},
      {"counterexample",
       "the gradient forecaster against pointwise corruption"},
      {"empty-regime", "long-run behaviour when no balanced control exists"},
  };
  for (const auto& entry : subcommands) {
    CLI::App* sub = app.add_subcommand(entry.name, entry.description);
    sub->add_option("--config", options.config_path,
                    "JSON configuration file");
    sub->add_option("--out", options.out_path,
                    "output path (overrides output.path)");
    CLI::Option* seed_option = sub->add_option(
        "--seed", options.seed, "RNG seed (overrides sim.seed)");
    sub->add_option("--threads", options.threads,
                    "worker threads (overrides EXPERTGAME_THREADS)");
    const std::string name = entry.name;
    sub->callback([&options, &exit_code, name, seed_option]() {
      options.seed_given = seed_option->count() > 0;
      exit_code = Execute(name, options);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForAllHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 2;
  }
  return exit_code;
}
