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
#include <functional>
#include <string>
#include <vector>

#include "krl/corpus.hpp"
#include "krl/judge.hpp"
#include "krl/policy.hpp"

namespace krl {

struct EvalConfig {
  int n = 128;               // candidate solutions per problem
  int k = 1;
  double temperature = 0.2;  // evaluation sampling temperature
  int max_completion_length = 1700;
  std::uint64_t seed = 0;
};

struct ProblemEval {
  std::string problem_id;
  int n = 0;
  int c = 0;  // candidates judged Accepted
  double pass_at_k = 0.0;
  // Failure-mode tallies; malformed and non-compiling samples count toward n
  // with zero contribution to c.
  int malformed = 0;
  int compile_errors = 0;
  int failed = 0;
};

struct EvalReport {
  std::vector<ProblemEval> per_problem;
  double aggregate = 0.0;  // mean pass@k over problems, as a percentage
  int k = 1;
};

// Unbiased estimator 1 - C(n-c, k) / C(n, k), computed in product form with
// no large factorials. Throws DomainError outside 0 <= c <= n, 1 <= k <= n.
double pass_at_k(int n, int c, int k);

// Samples cfg.n candidates per problem, runs each through the full solver
// pipeline (parse tags, extract code, compile, judge on the problem's tests),
// counts Accepted candidates, and aggregates pass@k. on_problem, when given,
// observes each finished problem so callers can persist partial reports.
EvalReport evaluate(Policy& policy, const std::vector<ProblemTriplet>& problems,
                    const EvalConfig& cfg, const Judge& judge,
                    const std::function<void(const ProblemEval&)>& on_problem = {});

std::string eval_report_to_json(const EvalReport& report);

// One row per problem plus the aggregate, percentage-scaled like the report.
std::string eval_report_to_csv(const EvalReport& report, const std::string& method,
                               const std::string& benchmark);

}  // namespace krl
