// Copyright 2026 The kernelrl Authors
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

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "krl/evaluator.hpp"
#include "krl/loop.hpp"

namespace krl {

// One policy slot in the run configuration.
struct PolicyBackendConfig {
  std::string backend = "scripted";  // scripted | toy | remote
  SamplingConfig sampling;
  ChatEndpointConfig endpoint;           // remote backend
  std::vector<std::string> vocabulary;   // toy backend
  int solve_from_iteration = 2;          // scripted student schedule
};

struct OracleSelection {
  std::string kind = "stub";  // stub | remote
  ChatEndpointConfig endpoint;
};

// Full run configuration. Loaded from a JSON file with unknown keys rejected;
// secrets stay out of the file (endpoints name the environment variable that
// carries their token). Command-line flags override file values.
struct RunConfig {
  std::filesystem::path corpus_path;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  TrainingSchedule schedule;
  PolicyBackendConfig teacher;
  PolicyBackendConfig student;
  OracleSelection oracle;
  JudgeConfig judge;
  GrpoConfig grpo;
  EvalConfig eval;
};

RunConfig load_run_config(const std::filesystem::path& path);

// Policy factory; scripted backends receive the corpus snapshot for the
// built-in demo scripts.
std::shared_ptr<Policy> make_policy(const PolicyBackendConfig& config, Phase role,
                                    std::shared_ptr<const std::vector<ProblemTriplet>> corpus);

std::unique_ptr<EquivalenceOracle> make_equivalence_oracle(const OracleSelection& selection);

// Human-readable resolved schedule for --dry-run.
std::string describe_run_config(const RunConfig& config);

}  // namespace krl
