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

#include "krl/config.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

#include "krl/errors.hpp"
#include "krl/util.hpp"

namespace krl {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& context) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* candidate : allowed) {
      if (key == candidate) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError("unknown key '" + key + "' in " + context);
  }
}

ChatEndpointConfig parse_endpoint(const json& obj, const std::string& context) {
  check_keys(obj,
             {"base_url", "path", "model", "auth_token_env", "max_retries", "backoff_base_s",
              "request_timeout_s", "max_in_flight"},
             context);
  ChatEndpointConfig cfg;
  cfg.base_url = obj.value("base_url", cfg.base_url);
  cfg.path = obj.value("path", cfg.path);
  cfg.model = obj.value("model", cfg.model);
  cfg.auth_token_env = obj.value("auth_token_env", cfg.auth_token_env);
  cfg.max_retries = obj.value("max_retries", cfg.max_retries);
  cfg.backoff_base_s = obj.value("backoff_base_s", cfg.backoff_base_s);
  cfg.request_timeout_s = obj.value("request_timeout_s", cfg.request_timeout_s);
  cfg.max_in_flight = obj.value("max_in_flight", cfg.max_in_flight);
  return cfg;
}

PolicyBackendConfig parse_policy(const json& obj, Phase role, const std::string& context) {
  check_keys(obj,
             {"backend", "temperature", "max_completion_length", "group_size", "endpoint",
              "vocabulary", "solve_from_iteration"},
             context);
  PolicyBackendConfig cfg;
  cfg.sampling = role == Phase::Teacher ? SamplingConfig::teacher_defaults()
                                        : SamplingConfig::student_defaults();
  cfg.backend = obj.value("backend", cfg.backend);
  if (cfg.backend != "scripted" && cfg.backend != "toy" && cfg.backend != "remote") {
    throw ConfigError("backend must be scripted, toy, or remote in " + context);
  }
  cfg.sampling.temperature = obj.value("temperature", cfg.sampling.temperature);
  cfg.sampling.max_completion_length =
      obj.value("max_completion_length", cfg.sampling.max_completion_length);
  cfg.sampling.group_size = obj.value("group_size", cfg.sampling.group_size);
  if (obj.contains("endpoint")) cfg.endpoint = parse_endpoint(obj.at("endpoint"), context + ".endpoint");
  if (obj.contains("vocabulary")) {
    cfg.vocabulary = obj.at("vocabulary").get<std::vector<std::string>>();
  }
  cfg.solve_from_iteration = obj.value("solve_from_iteration", cfg.solve_from_iteration);
  return cfg;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");

  check_keys(doc,
             {"corpus", "output", "seed", "schedule", "teacher", "student", "oracle", "judge",
              "grpo", "eval"},
             "config");

  RunConfig cfg;
  try {
    if (doc.contains("corpus")) cfg.corpus_path = doc.at("corpus").get<std::string>();
    if (doc.contains("output")) cfg.output_dir = doc.at("output").get<std::string>();
    cfg.seed = doc.value("seed", cfg.seed);

    if (doc.contains("schedule")) {
      const json& s = doc.at("schedule");
      check_keys(s,
                 {"iterations", "teacher_steps", "student_steps", "problems_per_step",
                  "pretrain_teacher_steps"},
                 "schedule");
      cfg.schedule.iterations = s.value("iterations", cfg.schedule.iterations);
      cfg.schedule.teacher_steps = s.value("teacher_steps", cfg.schedule.teacher_steps);
      cfg.schedule.student_steps = s.value("student_steps", cfg.schedule.student_steps);
      cfg.schedule.problems_per_step = s.value("problems_per_step", cfg.schedule.problems_per_step);
      cfg.schedule.pretrain_teacher_steps =
          s.value("pretrain_teacher_steps", cfg.schedule.pretrain_teacher_steps);
    }
    cfg.schedule.seed = cfg.seed;

    cfg.teacher.sampling = SamplingConfig::teacher_defaults();
    cfg.student.sampling = SamplingConfig::student_defaults();
    if (doc.contains("teacher")) cfg.teacher = parse_policy(doc.at("teacher"), Phase::Teacher, "teacher");
    if (doc.contains("student")) cfg.student = parse_policy(doc.at("student"), Phase::Student, "student");

    if (doc.contains("oracle")) {
      const json& o = doc.at("oracle");
      check_keys(o, {"kind", "endpoint"}, "oracle");
      cfg.oracle.kind = o.value("kind", cfg.oracle.kind);
      if (cfg.oracle.kind != "stub" && cfg.oracle.kind != "remote") {
        throw ConfigError("oracle.kind must be stub or remote");
      }
      if (o.contains("endpoint")) cfg.oracle.endpoint = parse_endpoint(o.at("endpoint"), "oracle.endpoint");
    }

    if (doc.contains("judge")) {
      const json& j = doc.at("judge");
      check_keys(j,
                 {"compiler_command", "sandbox_root", "max_parallel", "fail_fast",
                  "compile_timeout_s", "run_timeout_per_test_s", "memory_limit_mib",
                  "output_limit_kib"},
                 "judge");
      cfg.judge.compiler_command = j.value("compiler_command", cfg.judge.compiler_command);
      if (j.contains("sandbox_root")) cfg.judge.sandbox_root = j.at("sandbox_root").get<std::string>();
      cfg.judge.max_parallel = j.value("max_parallel", cfg.judge.max_parallel);
      cfg.judge.fail_fast = j.value("fail_fast", cfg.judge.fail_fast);
      cfg.judge.limits.compile_timeout_s =
          j.value("compile_timeout_s", cfg.judge.limits.compile_timeout_s);
      cfg.judge.limits.run_timeout_per_test_s =
          j.value("run_timeout_per_test_s", cfg.judge.limits.run_timeout_per_test_s);
      if (j.contains("memory_limit_mib")) {
        cfg.judge.limits.memory_limit_bytes = j.at("memory_limit_mib").get<std::uint64_t>() << 20;
      }
      if (j.contains("output_limit_kib")) {
        cfg.judge.limits.output_limit_bytes = j.at("output_limit_kib").get<std::uint64_t>() << 10;
      }
    }

    if (doc.contains("grpo")) {
      const json& g = doc.at("grpo");
      check_keys(g, {"epsilon", "learning_rate", "length_normalization"}, "grpo");
      cfg.grpo.epsilon = g.value("epsilon", cfg.grpo.epsilon);
      cfg.grpo.learning_rate = g.value("learning_rate", cfg.grpo.learning_rate);
      cfg.grpo.length_normalization =
          g.value("length_normalization", cfg.grpo.length_normalization);
    }

    if (doc.contains("eval")) {
      const json& e = doc.at("eval");
      check_keys(e, {"n", "k", "temperature", "max_completion_length"}, "eval");
      cfg.eval.n = e.value("n", cfg.eval.n);
      cfg.eval.k = e.value("k", cfg.eval.k);
      cfg.eval.temperature = e.value("temperature", cfg.eval.temperature);
      cfg.eval.max_completion_length =
          e.value("max_completion_length", cfg.eval.max_completion_length);
    }
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  cfg.eval.seed = cfg.seed;
  return cfg;
}

std::shared_ptr<Policy> make_policy(const PolicyBackendConfig& config, Phase role,
                                    std::shared_ptr<const std::vector<ProblemTriplet>> corpus) {
  if (config.backend == "scripted") {
    if (corpus == nullptr) throw ConfigError("scripted backend requires a corpus");
    if (role == Phase::Teacher) {
      return std::make_shared<ScriptedPolicy>(demo_teacher_script(std::move(corpus)));
    }
    return std::make_shared<ScriptedPolicy>(
        demo_student_script(std::move(corpus), config.solve_from_iteration));
  }
  if (config.backend == "toy") {
    if (config.vocabulary.empty()) {
      throw ConfigError("toy backend requires a non-empty vocabulary");
    }
    return std::make_shared<ToyPolicy>(ToyVocabulary(config.vocabulary));
  }
  if (config.backend == "remote") {
    if (config.endpoint.base_url.empty()) {
      throw ConfigError("remote backend requires endpoint.base_url");
    }
    return std::make_shared<RemotePolicy>(config.endpoint);
  }
  throw ConfigError("unknown policy backend " + config.backend);
}

std::unique_ptr<EquivalenceOracle> make_equivalence_oracle(const OracleSelection& selection) {
  if (selection.kind == "stub") return std::make_unique<StubEquivalenceOracle>();
  if (selection.kind == "remote") {
    if (selection.endpoint.base_url.empty()) {
      throw ConfigError("remote oracle requires endpoint.base_url");
    }
    return std::make_unique<RemoteEquivalenceOracle>(selection.endpoint);
  }
  throw ConfigError("unknown oracle kind " + selection.kind);
}

std::string describe_run_config(const RunConfig& config) {
  std::ostringstream out;
  out << "corpus: " << config.corpus_path.string() << "\n"
      << "output: " << config.output_dir.string() << "\n"
      << "seed: " << config.seed << "\n"
      << "schedule: T=" << config.schedule.iterations
      << " teacher_steps=" << config.schedule.teacher_steps
      << " student_steps=" << config.schedule.student_steps
      << " problems_per_step=" << config.schedule.problems_per_step
      << " pretrain_teacher_steps=" << config.schedule.pretrain_teacher_steps << "\n"
      << "teacher: backend=" << config.teacher.backend
      << " g=" << config.teacher.sampling.group_size
      << " temperature=" << config.teacher.sampling.temperature
      << " max_len=" << config.teacher.sampling.max_completion_length << "\n"
      << "student: backend=" << config.student.backend
      << " g=" << config.student.sampling.group_size
      << " temperature=" << config.student.sampling.temperature
      << " max_len=" << config.student.sampling.max_completion_length << "\n"
      << "oracle: " << config.oracle.kind << "\n"
      << "grpo: epsilon=" << config.grpo.epsilon
      << " learning_rate=" << config.grpo.learning_rate
      << " length_normalization=" << (config.grpo.length_normalization ? "true" : "false") << "\n"
      << "judge: compile_timeout_s=" << config.judge.limits.compile_timeout_s
      << " run_timeout_per_test_s=" << config.judge.limits.run_timeout_per_test_s
      << " memory_limit_bytes=" << config.judge.limits.memory_limit_bytes
      << " output_limit_bytes=" << config.judge.limits.output_limit_bytes << "\n"
      << "eval: n=" << config.eval.n << " k=" << config.eval.k
      << " temperature=" << config.eval.temperature << "\n";
  return out.str();
}

}  // namespace krl
