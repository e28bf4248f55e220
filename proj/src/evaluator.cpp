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

#include "krl/evaluator.hpp"

#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "krl/errors.hpp"
#include "krl/response.hpp"
#include "krl/util.hpp"

namespace krl {

double pass_at_k(int n, int c, int k) {
  if (n < 0 || c < 0 || c > n || k < 1 || k > n) {
    throw DomainError("pass@k requires 0 <= c <= n and 1 <= k <= n");
  }
  // 1 - prod_{i=0}^{k-1} (n - c - i) / (n - i); any zero factor means the
  // failures cannot fill all k draws.
  double prod = 1.0;
  for (int i = 0; i < k; ++i) {
    const int numerator = n - c - i;
    if (numerator <= 0) return 1.0;
    prod *= static_cast<double>(numerator) / static_cast<double>(n - i);
  }
  return 1.0 - prod;
}

EvalReport evaluate(Policy& policy, const std::vector<ProblemTriplet>& problems,
                    const EvalConfig& cfg, const Judge& judge,
                    const std::function<void(const ProblemEval&)>& on_problem) {
  if (cfg.n < 1) throw ConfigError("eval requires n >= 1");
  if (cfg.k < 1 || cfg.k > cfg.n) throw ConfigError("eval requires 1 <= k <= n");

  EvalReport report;
  report.k = cfg.k;

  for (std::size_t pi = 0; pi < problems.size(); ++pi) {
    const ProblemTriplet& problem = problems[pi];
    ProblemEval pe;
    pe.problem_id = problem.id;
    pe.n = cfg.n;

    SamplingConfig sampling;
    sampling.temperature = cfg.temperature;
    sampling.max_completion_length = cfg.max_completion_length;
    sampling.group_size = cfg.n;
    const std::uint64_t seed = derive_seed(cfg.seed, {stream_tag("evaluation"), pi});

    const std::vector<Completion> samples =
        policy.sample_group(problem.kernel_text, sampling, seed);

    // Identical sources share one verdict; sampling at low temperature
    // repeats candidates constantly and compilation dominates cost.
    std::unordered_map<std::string, VerdictReport> memo;
    for (const Completion& sample : samples) {
      const ParsedResponse parsed = parse_tagged_response(sample.text);
      if (!parsed.well_formed) {
        ++pe.malformed;
        continue;
      }
      const std::string source = extract_code(*parsed.answer);
      auto it = memo.find(source);
      if (it == memo.end()) {
        it = memo.emplace(source, judge.judge(source, problem.test_cases)).first;
      }
      const VerdictReport& verdict = it->second;
      if (verdict.aggregate == Verdict::Accepted) {
        ++pe.c;
      } else if (verdict.aggregate == Verdict::CompileError) {
        ++pe.compile_errors;
      } else {
        ++pe.failed;
      }
    }
    pe.pass_at_k = pass_at_k(pe.n, pe.c, cfg.k);
    if (on_problem) on_problem(pe);
    report.per_problem.push_back(std::move(pe));
  }

  double sum = 0.0;
  for (const ProblemEval& pe : report.per_problem) sum += pe.pass_at_k;
  report.aggregate = report.per_problem.empty()
                         ? 0.0
                         : sum / static_cast<double>(report.per_problem.size()) * 100.0;
  return report;
}

std::string eval_report_to_json(const EvalReport& report) {
  nlohmann::json problems = nlohmann::json::array();
  for (const ProblemEval& pe : report.per_problem) {
    problems.push_back({{"id", pe.problem_id},
                        {"n", pe.n},
                        {"c", pe.c},
                        {"pass_at_k", pe.pass_at_k},
                        {"malformed", pe.malformed},
                        {"compile_errors", pe.compile_errors},
                        {"failed", pe.failed}});
  }
  nlohmann::json doc = {
      {"k", report.k}, {"aggregate", report.aggregate}, {"problems", std::move(problems)}};
  return doc.dump(2);
}

std::string eval_report_to_csv(const EvalReport& report, const std::string& method,
                               const std::string& benchmark) {
  std::ostringstream out;
  out << "method,benchmark,problem_id,n,c,pass_at_" << report.k << "\n";
  for (const ProblemEval& pe : report.per_problem) {
    out << method << ',' << benchmark << ',' << pe.problem_id << ',' << pe.n << ',' << pe.c << ','
        << pe.pass_at_k << "\n";
  }
  out << method << ',' << benchmark << ",aggregate,,," << report.aggregate << "\n";
  return out.str();
}

}  // namespace krl
