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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "krl/judge.hpp"
#include "krl/oracle.hpp"

namespace krl {

// One dataset record: a kernel problem statement, a seed-driven input
// generator, a trusted reference solution, the materialized test cases, and
// the narrative revisions produced for this kernel (index t = adversarial
// iteration t, append-only).
struct ProblemTriplet {
  std::string id;
  std::string kernel_text;
  std::string generator_source;
  std::string reference_source;
  std::vector<TestCase> test_cases;
  std::vector<std::string> revision_history;
  std::uint64_t seed = 0;
};

enum class FailureStage { None, GeneratorCompile, GeneratorRun, ReferenceCompile, ReferenceRun };

const char* to_string(FailureStage stage);

struct ValidationReport {
  std::string triplet_id;
  bool generator_ok = false;
  bool reference_ok = false;
  bool discarded = false;
  FailureStage failure_stage = FailureStage::None;
};

// Corpus files are JSON Lines, one triplet per line. Text fields are UTF-8
// strings; test bytes are base64. Malformed lines raise MalformedRecordError
// with the 1-based line number.
std::vector<ProblemTriplet> load_corpus(const std::filesystem::path& path);

// Atomic write (temp file + rename): readers never see a partial corpus.
void save_corpus(const std::vector<ProblemTriplet>& corpus, const std::filesystem::path& path);

// Compiles the generator and reference, then produces `count` test cases with
// per-test seeds seed+0 .. seed+count-1; expected outputs come from running
// the reference on each generated input. Deterministic for a fixed seed and
// deterministic sources.
ProblemTriplet materialize_tests(const ProblemTriplet& triplet, int count, std::uint64_t seed,
                                 const Judge& judge);

// Checks generator compile/run and reference compile/run. When the triplet
// already has test cases the reference must be Accepted on them; otherwise
// the reference is probed on freshly generated inputs. Failures are reported,
// never thrown.
ValidationReport validate_triplet(const ProblemTriplet& triplet, const Judge& judge);

struct CorpusBuildResult {
  std::vector<ProblemTriplet> corpus;   // only the non-discarded triplets
  std::vector<ValidationReport> reports;  // one per input problem
};

// Full construction pipeline: the oracle synthesizes a generator/reference
// pair per kernel text, tests are materialized, and any problem whose
// generator or reference fails validation is discarded (no retries).
CorpusBuildResult build_corpus(const std::vector<std::string>& raw_problems,
                               SynthesisOracle& oracle, const Judge& judge,
                               int tests_per_problem = 20, std::uint64_t seed = 0);

}  // namespace krl
