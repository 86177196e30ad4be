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

#ifndef EXPERTGAME_CONFIG_H_
#define EXPERTGAME_CONFIG_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace expertgame {

// Raised for malformed documents, unknown keys and out-of-range values; the
// message names the offending key path (e.g. "experts.mu[0]").
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridConfig {
  double z_min = -6.0;
  double z_max = 6.0;
  int nz = 801;
  int nt = 0;  // 0 selects the stable step count automatically
};

// Parsed experiment configuration with defaults filled in.  Empty mu means
// the document did not provide experts; subcommands that need a model reject
// that.  Empty m_values selects the subcommand's default schedule.
struct ExperimentConfig {
  std::vector<double> mu;

  int num_rounds = 64;  // game.M
  double theta = 0.1;   // game.theta

  std::string final_kind = "max_theta";  // "max" or "max_theta"

  std::string adversary = "asymptotic_star";
  std::vector<double> adversary_a;  // constant-adversary corruption masses
  std::vector<double> adversary_b;
  bool has_balanced_c = false;
  double balanced_c = 0.0;  // common gain for the "balanced" adversary

  std::string forecaster = "gradient_U";
  double eta = 0.0;  // multiplicative-weights rate, 0 = automatic

  int64_t replications = 100000;
  uint64_t seed = 1;

  GridConfig grid;

  std::vector<int> m_values;

  std::string output_path;  // empty = stdout
  std::string output_format = "csv";
};

// Parses a UTF-8 JSON document.  Unknown keys are rejected at every level;
// every referenced strategy kind must exist.
ExperimentConfig ParseConfig(const std::string& text);

// Canonical serialization: fixed key order, every number with 17 significant
// digits.  parse(normalize(c)) reproduces c, and the result is what run
// embeds as the config echo.
std::string NormalizeConfig(const ExperimentConfig& config);

}  // namespace expertgame

#endif  // EXPERTGAME_CONFIG_H_
