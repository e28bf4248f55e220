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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace krl {

// Base class for every error raised by the library. Failures that are data
// (judge verdicts, validation reports, malformed policy responses) are never
// exceptions; only contract and environment violations are.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem / OS level failure.
struct IoError : Error {
  using Error::Error;
};

// A corpus or log record that cannot be parsed; carries the 1-based line.
struct MalformedRecordError : Error {
  MalformedRecordError(std::size_t line_number, const std::string& detail)
      : Error("line " + std::to_string(line_number) + ": " + detail),
        line(line_number) {}
  std::size_t line;
};

// Invalid configuration or command usage.
struct ConfigError : Error {
  using Error::Error;
};

// A caller broke a documented precondition.
struct ContractViolation : Error {
  using Error::Error;
};

// Argument outside its mathematical domain.
struct DomainError : Error {
  using Error::Error;
};

// The judge could not set up its environment (distinct from a submission
// failing to compile or run).
struct SandboxSetupError : Error {
  using Error::Error;
};

// Test-case generator failed (compile, nonzero exit, timeout, output cap).
// at_compile distinguishes the compile stage from the run stage.
struct GeneratorError : Error {
  explicit GeneratorError(const std::string& what, bool compile_stage = false)
      : Error(what), at_compile(compile_stage) {}
  bool at_compile;
};

// Reference solution failed while materializing expected outputs.
struct ReferenceError : Error {
  explicit ReferenceError(const std::string& what, bool compile_stage = false)
      : Error(what), at_compile(compile_stage) {}
  bool at_compile;
};

struct OracleUnavailableError : Error {
  using Error::Error;
};

// Oracle replied but the verdict token could not be parsed.
struct OracleMalformedReplyError : Error {
  using Error::Error;
};

struct BackendUnavailableError : Error {
  using Error::Error;
};

struct AuthError : Error {
  using Error::Error;
};

struct RateLimitedError : Error {
  using Error::Error;
};

struct ContextOverflowError : Error {
  using Error::Error;
};

// Token not in the toy policy vocabulary.
struct UnknownTokenError : Error {
  using Error::Error;
};

// A GRPO group with fewer than two completions.
struct DegenerateGroupError : Error {
  using Error::Error;
};

struct ShapeMismatchError : Error {
  using Error::Error;
};

struct EmptyCorpusError : Error {
  using Error::Error;
};

}  // namespace krl
