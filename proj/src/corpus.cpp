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

#include "krl/corpus.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "krl/errors.hpp"
#include "krl/util.hpp"

namespace krl {

using nlohmann::json;

const char* to_string(FailureStage stage) {
  switch (stage) {
    case FailureStage::None: return "None";
    case FailureStage::GeneratorCompile: return "GeneratorCompile";
    case FailureStage::GeneratorRun: return "GeneratorRun";
    case FailureStage::ReferenceCompile: return "ReferenceCompile";
    case FailureStage::ReferenceRun: return "ReferenceRun";
  }
  return "?";
}

namespace {

json triplet_to_json(const ProblemTriplet& t) {
  json tests = json::array();
  for (const TestCase& tc : t.test_cases) {
    tests.push_back(json{{"input", base64_encode(tc.input)},
                         {"output", base64_encode(tc.expected_output)}});
  }
  return json{{"id", t.id},
              {"kernel_text", t.kernel_text},
              {"generator_source", t.generator_source},
              {"reference_source", t.reference_source},
              {"tests", std::move(tests)},
              {"revisions", t.revision_history},
              {"seed", t.seed}};
}

ProblemTriplet triplet_from_json(const json& rec, std::size_t line_number) {
  auto fail = [&](const std::string& detail) -> MalformedRecordError {
    return MalformedRecordError(line_number, detail);
  };
  if (!rec.is_object()) throw fail("record is not a JSON object");

  ProblemTriplet t;
  try {
    t.id = rec.at("id").get<std::string>();
    t.kernel_text = rec.at("kernel_text").get<std::string>();
    t.generator_source = rec.at("generator_source").get<std::string>();
    t.reference_source = rec.at("reference_source").get<std::string>();
    if (rec.contains("tests")) {
      for (const json& tc : rec.at("tests")) {
        t.test_cases.push_back(TestCase{base64_decode(tc.at("input").get<std::string>()),
                                        base64_decode(tc.at("output").get<std::string>())});
      }
    }
    if (rec.contains("revisions")) {
      t.revision_history = rec.at("revisions").get<std::vector<std::string>>();
    }
    if (rec.contains("seed")) t.seed = rec.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw fail(e.what());
  } catch (const Error& e) {
    throw fail(e.what());
  }
  if (t.id.empty()) throw fail("empty id");
  return t;
}

}  // namespace

std::vector<ProblemTriplet> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus " + path.string());

  std::vector<ProblemTriplet> corpus;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded()) throw MalformedRecordError(line_number, "invalid JSON");
    corpus.push_back(triplet_from_json(rec, line_number));
  }
  if (in.bad()) throw IoError("read failed for " + path.string());
  return corpus;
}

void save_corpus(const std::vector<ProblemTriplet>& corpus, const std::filesystem::path& path) {
  std::ostringstream out;
  for (const ProblemTriplet& t : corpus) out << triplet_to_json(t).dump() << '\n';
  write_text_file_atomic(path, out.str());
}

ProblemTriplet materialize_tests(const ProblemTriplet& triplet, int count, std::uint64_t seed,
                                 const Judge& judge) {
  if (count <= 0) throw DomainError("test count must be positive");

  const ResourceLimits& limits = judge.config().limits;
  TempDir workdir("krl-mat-", judge.config().sandbox_root);

  CompileResult gen = judge.compile(triplet.generator_source, limits, workdir.path() / "gen");
  if (!gen.ok) {
    throw GeneratorError("generator failed to compile:\n" + gen.log, /*compile_stage=*/true);
  }
  CompileResult ref = judge.compile(triplet.reference_source, limits, workdir.path() / "ref");
  if (!ref.ok) {
    throw ReferenceError("reference failed to compile:\n" + ref.log, /*compile_stage=*/true);
  }

  ProblemTriplet out = triplet;
  out.seed = seed;
  out.test_cases.clear();
  for (int i = 0; i < count; ++i) {
    const std::uint64_t test_seed = seed + static_cast<std::uint64_t>(i);
    std::string input = judge.run_generator(gen.artifact, test_seed, limits);
    RunCapture run = judge.run_once(ref.artifact, input, limits);
    if (run.outcome != TestOutcome::Pass) {
      throw ReferenceError(std::string("reference ") + to_string(run.outcome) +
                           " on generated input (seed " + std::to_string(test_seed) + ")");
    }
    out.test_cases.push_back(TestCase{std::move(input), std::move(run.output)});
  }
  return out;
}

ValidationReport validate_triplet(const ProblemTriplet& triplet, const Judge& judge) {
  ValidationReport report;
  report.triplet_id = triplet.id;

  const ResourceLimits& limits = judge.config().limits;
  TempDir workdir("krl-val-", judge.config().sandbox_root);

  CompileResult gen = judge.compile(triplet.generator_source, limits, workdir.path() / "gen");
  if (!gen.ok) {
    report.discarded = true;
    report.failure_stage = FailureStage::GeneratorCompile;
    return report;
  }

  // Probe a few seeds; enough to catch crashes and hangs without re-running
  // the full materialization.
  constexpr int kProbeCount = 3;
  std::vector<std::string> probe_inputs;
  for (int i = 0; i < kProbeCount; ++i) {
    try {
      probe_inputs.push_back(
          judge.run_generator(gen.artifact, triplet.seed + static_cast<std::uint64_t>(i), limits));
    } catch (const GeneratorError&) {
      report.discarded = true;
      report.failure_stage = FailureStage::GeneratorRun;
      return report;
    }
  }
  report.generator_ok = true;

  CompileResult ref = judge.compile(triplet.reference_source, limits, workdir.path() / "ref");
  if (!ref.ok) {
    report.discarded = true;
    report.failure_stage = FailureStage::ReferenceCompile;
    return report;
  }

  if (!triplet.test_cases.empty()) {
    // Self-consistency: the reference must be Accepted on the stored tests.
    std::vector<TestResult> runs = judge.run_tests(ref.artifact, triplet.test_cases, limits);
    for (const TestResult& r : runs) {
      if (r.outcome != TestOutcome::Pass) {
        report.discarded = true;
        report.failure_stage = FailureStage::ReferenceRun;
        return report;
      }
    }
  } else {
    for (const std::string& input : probe_inputs) {
      if (judge.run_once(ref.artifact, input, limits).outcome != TestOutcome::Pass) {
        report.discarded = true;
        report.failure_stage = FailureStage::ReferenceRun;
        return report;
      }
    }
  }

  report.reference_ok = true;
  report.failure_stage = FailureStage::None;
  return report;
}

CorpusBuildResult build_corpus(const std::vector<std::string>& raw_problems,
                               SynthesisOracle& oracle, const Judge& judge, int tests_per_problem,
                               std::uint64_t seed) {
  if (tests_per_problem <= 0) throw DomainError("tests_per_problem must be positive");

  CorpusBuildResult result;
  for (std::size_t i = 0; i < raw_problems.size(); ++i) {
    ProblemTriplet t;
    t.id = "p" + std::to_string(i + 1);
    t.kernel_text = raw_problems[i];

    SynthesizedSources sources = oracle.synthesize(t.kernel_text);  // OracleUnavailable propagates
    t.generator_source = std::move(sources.generator_source);
    t.reference_source = std::move(sources.reference_source);

    const std::uint64_t problem_seed = derive_seed(seed, {stream_tag("test-generation"), i});
    ValidationReport report;
    report.triplet_id = t.id;
    try {
      ProblemTriplet materialized = materialize_tests(t, tests_per_problem, problem_seed, judge);
      report.generator_ok = true;
      report.reference_ok = true;
      result.corpus.push_back(std::move(materialized));
    } catch (const GeneratorError& e) {
      report.failure_stage =
          e.at_compile ? FailureStage::GeneratorCompile : FailureStage::GeneratorRun;
      report.discarded = true;
    } catch (const ReferenceError& e) {
      report.generator_ok = true;
      report.failure_stage =
          e.at_compile ? FailureStage::ReferenceCompile : FailureStage::ReferenceRun;
      report.discarded = true;
    }
    result.reports.push_back(std::move(report));
  }
  return result;
}

}  // namespace krl
