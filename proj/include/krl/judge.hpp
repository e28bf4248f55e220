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
#include <memory>
#include <string>
#include <vector>

#include "krl/util.hpp"

namespace krl {

// One test: bytes fed on stdin and the bytes expected on stdout. Outputs are
// compared after normalize_output on both sides.
struct TestCase {
  std::string input;
  std::string expected_output;
};

struct ResourceLimits {
  double compile_timeout_s = 10.0;
  double run_timeout_per_test_s = 2.0;
  std::uint64_t memory_limit_bytes = 256ull << 20;
  std::uint64_t output_limit_bytes = 1ull << 20;

  // Throws ContractViolation unless every field is strictly positive.
  void validate() const;
};

enum class TestOutcome { Pass, WrongAnswer, TimeLimit, RuntimeError, OutputLimit };

struct TestResult {
  TestOutcome outcome = TestOutcome::RuntimeError;
  double runtime_s = 0.0;
};

// One execution of an artifact on a given stdin, with captured stdout.
// outcome is Pass for a clean exit (no output comparison involved).
struct RunCapture {
  TestOutcome outcome = TestOutcome::RuntimeError;
  double runtime_s = 0.0;
  std::string output;
};

enum class Verdict { Accepted, Failed, CompileError };

struct VerdictReport {
  bool compile_ok = false;
  std::string compile_log;
  std::vector<TestResult> per_test;
  Verdict aggregate = Verdict::CompileError;

  bool accepted() const { return aggregate == Verdict::Accepted; }
};

struct CompileResult {
  bool ok = false;
  std::string log;
  std::filesystem::path artifact;
};

struct JudgeConfig {
  // Command template; {source} and {output} are substituted. Split on spaces,
  // executed without a shell.
  std::string compiler_command = "g++ -std=c++17 -O0 -x c++ {source} -o {output}";
  // Root for per-job sandbox directories; empty = system temp dir. Also
  // settable via the KRL_SANDBOX_DIR environment variable (config wins).
  std::filesystem::path sandbox_root;
  // Max concurrent subprocesses; 0 = logical CPU count.
  int max_parallel = 0;
  // When true, run_tests stops at the first non-passing test.
  bool fail_fast = false;
  ResourceLimits limits;
};

const char* to_string(TestOutcome outcome);
const char* to_string(Verdict verdict);

// Compiles and executes untrusted programs in per-job temp directories with
// a scrubbed environment and rlimit caps. Shareable across threads; each job
// owns its sandbox directory exclusively.
class Judge {
 public:
  explicit Judge(JudgeConfig config = {});

  const JudgeConfig& config() const { return config_; }

  // Compiles source inside workdir. Failure to compile is data (ok=false with
  // the diagnostic log); only environment problems throw SandboxSetupError.
  CompileResult compile(const std::string& source, const ResourceLimits& limits,
                        const std::filesystem::path& workdir) const;

  // Runs the artifact once with the given stdin in a fresh temp directory.
  RunCapture run_once(const std::filesystem::path& artifact, const std::string& input,
                      const ResourceLimits& limits) const;

  // Runs the artifact once per test, each in a fresh subdirectory of its own.
  std::vector<TestResult> run_tests(const std::filesystem::path& artifact,
                                    const std::vector<TestCase>& tests,
                                    const ResourceLimits& limits) const;

  VerdictReport judge(const std::string& source, const std::vector<TestCase>& tests,
                      const ResourceLimits& limits) const;
  VerdictReport judge(const std::string& source, const std::vector<TestCase>& tests) const;

  // Runs a test-case generator with the seed as its sole argument and returns
  // captured stdout. Throws GeneratorError on nonzero exit, timeout, or
  // output cap.
  std::string run_generator(const std::filesystem::path& artifact, std::uint64_t seed,
                            const ResourceLimits& limits) const;

 private:
  JudgeConfig config_;
  mutable std::shared_ptr<Semaphore> slots_;
};

}  // namespace krl
