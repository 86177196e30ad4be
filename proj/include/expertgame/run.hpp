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

#ifndef EXPERTGAME_RUN_H_
#define EXPERTGAME_RUN_H_

#include <string>

#include "expertgame/config.hpp"

namespace expertgame {

struct RunOutput {
  // Bulk table for the subcommand; empty when it produces none (analyze,
  // counterexample).  Header row first, RFC 4180 fields, \n separators.
  std::string csv;
  // Byte-stable JSON summary: version, subcommand, config echo, payload.
  std::string envelope;
};

// Executes one subcommand against a parsed configuration.  Deterministic:
// identical (subcommand, config) produce identical bytes regardless of
// thread count.  Validation problems raise ConfigError or
// std::invalid_argument; structural and numerical failures raise
// std::domain_error or std::runtime_error.
RunOutput Run(const std::string& subcommand, const ExperimentConfig& config);

const char* ArtifactVersion();

}  // namespace expertgame

#endif  // EXPERTGAME_RUN_H_
