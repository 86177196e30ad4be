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

#include "expertgame/config.hpp"

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string>

#include <json.hpp>

#include "json_writer.hpp"

namespace expertgame {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void CheckKeys(const json& object, const std::string& path,
               std::initializer_list<const char*> allowed) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      Fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
    }
  }
}

const json& GetObject(const json& value, const std::string& path) {
  if (!value.is_object()) Fail(path, "expected an object");
  return value;
}

double GetDouble(const json& value, const std::string& path) {
  if (!value.is_number()) Fail(path, "expected a number");
  return value.get<double>();
}

int64_t GetInt(const json& value, const std::string& path) {
  if (value.is_number_integer() || value.is_number_unsigned()) {
    return value.get<int64_t>();
  }
  if (value.is_number_float()) {
    const double d = value.get<double>();
    if (d == std::floor(d) && std::abs(d) < 9.2e18) {
      return static_cast<int64_t>(d);
    }
  }
  Fail(path, "expected an integer");
}

int GetBoundedInt(const json& value, const std::string& path, int64_t low,
                  int64_t high) {
  const int64_t v = GetInt(value, path);
  if (v < low || v > high) {
    Fail(path, "out of range [" + std::to_string(low) + ", " +
                   std::to_string(high) + "]");
  }
  return static_cast<int>(v);
}

uint64_t GetSeed(const json& value, const std::string& path) {
  if (value.is_number_unsigned()) return value.get<uint64_t>();
  if (value.is_number_integer()) {
    const int64_t v = value.get<int64_t>();
    if (v >= 0) return static_cast<uint64_t>(v);
  }
  if (value.is_number_float()) {
    const double d = value.get<double>();
    if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) {
      return static_cast<uint64_t>(d);
    }
  }
  Fail(path, "expected a nonnegative integer");
}

std::string GetString(const json& value, const std::string& path) {
  if (!value.is_string()) Fail(path, "expected a string");
  return value.get<std::string>();
}

std::vector<double> GetMassList(const json& value, const std::string& path) {
  if (!value.is_array()) Fail(path, "expected an array");
  std::vector<double> result;
  for (size_t i = 0; i < value.size(); ++i) {
    const std::string item = path + "[" + std::to_string(i) + "]";
    const double v = GetDouble(value[i], item);
    if (!(v >= 0.0 && v <= 1.0)) Fail(item, "masses lie in [0, 1]");
    result.push_back(v);
  }
  return result;
}

void RequireOneOf(const std::string& value, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  for (const char* option : allowed) {
    if (value == option) return;
  }
  std::string known;
  for (const char* option : allowed) {
    if (!known.empty()) known += ", ";
    known += option;
  }
  Fail(path, "unknown kind \"" + value + "\" (one of: " + known + ")");
}

}  // namespace

ExperimentConfig ParseConfig(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& error) {
    throw ConfigError(std::string("malformed JSON: ") + error.what());
  }
  if (!doc.is_object()) Fail("top level", "expected an object");

  ExperimentConfig config;
  CheckKeys(doc, "", {"experts", "game", "final", "strategy", "sim", "pde",
                      "experiment", "output"});

  if (doc.contains("experts")) {
    const json& experts = GetObject(doc["experts"], "experts");
    CheckKeys(experts, "experts", {"mu"});
    if (experts.contains("mu")) {
      const json& mu = experts["mu"];
      if (!mu.is_array()) Fail("experts.mu", "expected an array");
      for (size_t i = 0; i < mu.size(); ++i) {
        const std::string path = "experts.mu[" + std::to_string(i) + "]";
        const double v = GetDouble(mu[i], path);
        if (!(v >= 0.0 && v <= 1.0)) Fail(path, "success rates lie in [0, 1]");
        config.mu.push_back(v);
      }
      if (!config.mu.empty() && config.mu.size() < 2) {
        Fail("experts.mu", "need at least two experts");
      }
    }
  }

  if (doc.contains("game")) {
    const json& game = GetObject(doc["game"], "game");
    CheckKeys(game, "game", {"M", "theta"});
    if (game.contains("M")) {
      config.num_rounds = GetBoundedInt(game["M"], "game.M", 0, 100000000);
    }
    if (game.contains("theta")) {
      config.theta = GetDouble(game["theta"], "game.theta");
      if (!(config.theta >= 0.0 && config.theta < 1.0)) {
        Fail("game.theta", "the averaged payoff weight lies in [0, 1)");
      }
    }
  }

  if (doc.contains("final")) {
    const json& final_section = GetObject(doc["final"], "final");
    CheckKeys(final_section, "final", {"kind"});
    if (final_section.contains("kind")) {
      config.final_kind = GetString(final_section["kind"], "final.kind");
      RequireOneOf(config.final_kind, "final.kind", {"max", "max_theta"});
    }
  }

  if (doc.contains("strategy")) {
    const json& strategy = GetObject(doc["strategy"], "strategy");
    CheckKeys(strategy, "strategy",
              {"adversary", "adversary_params", "forecaster",
               "forecaster_params"});
    if (strategy.contains("adversary")) {
      config.adversary = GetString(strategy["adversary"], "strategy.adversary");
      RequireOneOf(config.adversary, "strategy.adversary",
                   {"asymptotic_star", "constant", "hat_counterexample",
                    "balanced", "myopic_saddle", "balanced_pair"});
    }
    if (strategy.contains("adversary_params")) {
      const json& params = GetObject(strategy["adversary_params"],
                                     "strategy.adversary_params");
      CheckKeys(params, "strategy.adversary_params", {"a", "b", "balanced_c"});
      if (params.contains("a")) {
        config.adversary_a =
            GetMassList(params["a"], "strategy.adversary_params.a");
      }
      if (params.contains("b")) {
        config.adversary_b =
            GetMassList(params["b"], "strategy.adversary_params.b");
      }
      if (params.contains("balanced_c")) {
        config.balanced_c = GetDouble(params["balanced_c"],
                                      "strategy.adversary_params.balanced_c");
        if (!(config.balanced_c >= 0.0 && config.balanced_c <= 1.0)) {
          Fail("strategy.adversary_params.balanced_c",
               "common gains lie in [0, 1]");
        }
        config.has_balanced_c = true;
      }
    }
    if (strategy.contains("forecaster")) {
      config.forecaster =
          GetString(strategy["forecaster"], "strategy.forecaster");
      RequireOneOf(config.forecaster, "strategy.forecaster",
                   {"gradient_U", "follow_the_leader",
                    "multiplicative_weights", "best_response", "uniform"});
    }
    if (strategy.contains("forecaster_params")) {
      const json& params = GetObject(strategy["forecaster_params"],
                                     "strategy.forecaster_params");
      CheckKeys(params, "strategy.forecaster_params", {"eta"});
      if (params.contains("eta")) {
        config.eta = GetDouble(params["eta"], "strategy.forecaster_params.eta");
        if (!(config.eta >= 0.0)) {
          Fail("strategy.forecaster_params.eta",
               "the learning rate cannot be negative");
        }
      }
    }
  }

  if (doc.contains("sim")) {
    const json& sim = GetObject(doc["sim"], "sim");
    CheckKeys(sim, "sim", {"replications", "seed"});
    if (sim.contains("replications")) {
      config.replications = GetInt(sim["replications"], "sim.replications");
      if (config.replications < 1) {
        Fail("sim.replications", "need at least one replication");
      }
    }
    if (sim.contains("seed")) {
      config.seed = GetSeed(sim["seed"], "sim.seed");
    }
  }

  if (doc.contains("pde")) {
    const json& pde = GetObject(doc["pde"], "pde");
    CheckKeys(pde, "pde", {"grid"});
    if (pde.contains("grid")) {
      const json& grid = GetObject(pde["grid"], "pde.grid");
      CheckKeys(grid, "pde.grid", {"z_min", "z_max", "nz", "nt"});
      if (grid.contains("z_min")) {
        config.grid.z_min = GetDouble(grid["z_min"], "pde.grid.z_min");
      }
      if (grid.contains("z_max")) {
        config.grid.z_max = GetDouble(grid["z_max"], "pde.grid.z_max");
      }
      if (!(config.grid.z_min < config.grid.z_max)) {
        Fail("pde.grid.z_min", "the interval must be nonempty");
      }
      if (grid.contains("nz")) {
        config.grid.nz = GetBoundedInt(grid["nz"], "pde.grid.nz", 3, 10000000);
      }
      if (grid.contains("nt")) {
        config.grid.nt =
            GetBoundedInt(grid["nt"], "pde.grid.nt", 0, 1000000000);
      }
    }
  }

  if (doc.contains("experiment")) {
    const json& experiment = GetObject(doc["experiment"], "experiment");
    CheckKeys(experiment, "experiment", {"m_values"});
    if (experiment.contains("m_values")) {
      const json& values = experiment["m_values"];
      if (!values.is_array()) Fail("experiment.m_values", "expected an array");
      for (size_t i = 0; i < values.size(); ++i) {
        const std::string path =
            "experiment.m_values[" + std::to_string(i) + "]";
        config.m_values.push_back(GetBoundedInt(values[i], path, 1, 100000000));
      }
    }
  }

  if (doc.contains("output")) {
    const json& output = GetObject(doc["output"], "output");
    CheckKeys(output, "output", {"path", "format"});
    if (output.contains("path")) {
      config.output_path = GetString(output["path"], "output.path");
    }
    if (output.contains("format")) {
      config.output_format = GetString(output["format"], "output.format");
      RequireOneOf(config.output_format, "output.format", {"csv", "json"});
    }
  }

  if (config.adversary == "constant" && config.adversary_a.empty() &&
      config.adversary_b.empty()) {
    Fail("strategy.adversary_params",
         "the constant adversary needs corruption masses a and/or b");
  }
  if (!config.adversary_a.empty() && !config.adversary_b.empty() &&
      config.adversary_a.size() != config.adversary_b.size()) {
    Fail("strategy.adversary_params.b", "length must match a");
  }
  if (!config.mu.empty()) {
    for (const auto* masses : {&config.adversary_a, &config.adversary_b}) {
      if (!masses->empty() && masses->size() != config.mu.size()) {
        Fail("strategy.adversary_params",
             "corruption masses must have one entry per expert");
      }
    }
  }
  return config;
}

std::string NormalizeConfig(const ExperimentConfig& config) {
  internal::JsonWriter w;
  w.BeginObject();

  w.Key("experts");
  w.BeginObject();
  w.Key("mu");
  w.BeginArray();
  for (double v : config.mu) w.Number(v);
  w.EndArray();
  w.EndObject();

  w.Key("game");
  w.BeginObject();
  w.Key("M");
  w.Int(config.num_rounds);
  w.Key("theta");
  w.Number(config.theta);
  w.EndObject();

  w.Key("final");
  w.BeginObject();
  w.Key("kind");
  w.String(config.final_kind);
  w.EndObject();

  w.Key("strategy");
  w.BeginObject();
  w.Key("adversary");
  w.String(config.adversary);
  if (!config.adversary_a.empty() || !config.adversary_b.empty() ||
      config.has_balanced_c) {
    w.Key("adversary_params");
    w.BeginObject();
    if (!config.adversary_a.empty()) {
      w.Key("a");
      w.BeginArray();
      for (double v : config.adversary_a) w.Number(v);
      w.EndArray();
    }
    if (!config.adversary_b.empty()) {
      w.Key("b");
      w.BeginArray();
      for (double v : config.adversary_b) w.Number(v);
      w.EndArray();
    }
    if (config.has_balanced_c) {
      w.Key("balanced_c");
      w.Number(config.balanced_c);
    }
    w.EndObject();
  }
  w.Key("forecaster");
  w.String(config.forecaster);
  w.Key("forecaster_params");
  w.BeginObject();
  w.Key("eta");
  w.Number(config.eta);
  w.EndObject();
  w.EndObject();

  w.Key("sim");
  w.BeginObject();
  w.Key("replications");
  w.Int(config.replications);
  w.Key("seed");
  w.UInt(config.seed);
  w.EndObject();

  w.Key("pde");
  w.BeginObject();
  w.Key("grid");
  w.BeginObject();
  w.Key("z_min");
  w.Number(config.grid.z_min);
  w.Key("z_max");
  w.Number(config.grid.z_max);
  w.Key("nz");
  w.Int(config.grid.nz);
  w.Key("nt");
  w.Int(config.grid.nt);
  w.EndObject();
  w.EndObject();

  w.Key("experiment");
  w.BeginObject();
  w.Key("m_values");
  w.BeginArray();
  for (int m : config.m_values) w.Int(m);
  w.EndArray();
  w.EndObject();

  w.Key("output");
  w.BeginObject();
  w.Key("path");
  w.String(config.output_path);
  w.Key("format");
  w.String(config.output_format);
  w.EndObject();

  w.EndObject();
  return w.str();
}

}  // namespace expertgame
