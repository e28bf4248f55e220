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

#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "krl/config.hpp"
#include "krl/corpus.hpp"
#include "krl/errors.hpp"
#include "krl/evaluator.hpp"
#include "krl/loop.hpp"
#include "krl/util.hpp"

namespace {

using nlohmann::json;

// Exit-code classes: 0 success, 1 domain failure, 2 configuration/usage,
// 3 backend/environment.
constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsage = 2;
constexpr int kEnvironment = 3;

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const krl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const krl::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kUsage;
  } catch (const krl::OracleUnavailableError& e) {
    std::cerr << "oracle unavailable: " << e.what() << "\n";
    return kEnvironment;
  } catch (const krl::BackendUnavailableError& e) {
    std::cerr << "backend unavailable: " << e.what() << "\n";
    return kEnvironment;
  } catch (const krl::AuthError& e) {
    std::cerr << "auth error: " << e.what() << "\n";
    return kEnvironment;
  } catch (const krl::RateLimitedError& e) {
    std::cerr << "rate limited: " << e.what() << "\n";
    return kEnvironment;
  } catch (const krl::SandboxSetupError& e) {
    std::cerr << "sandbox error: " << e.what() << "\n";
    return kEnvironment;
  } catch (const krl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
}

json report_to_json(const krl::ValidationReport& report) {
  return json{{"triplet_id", report.triplet_id},
              {"generator_ok", report.generator_ok},
              {"reference_ok", report.reference_ok},
              {"discarded", report.discarded},
              {"failure_stage", krl::to_string(report.failure_stage)}};
}

int cmd_validate_dataset(const std::filesystem::path& corpus_path,
                         const std::filesystem::path& output_dir, const krl::JudgeConfig& jcfg) {
  const auto corpus = krl::load_corpus(corpus_path);
  const krl::Judge judge(jcfg);

  json reports = json::array();
  bool any_discarded = false;
  for (const krl::ProblemTriplet& triplet : corpus) {
    const krl::ValidationReport report = krl::validate_triplet(triplet, judge);
    any_discarded |= report.discarded;
    std::cout << report.triplet_id << ": "
              << (report.discarded ? std::string("DISCARDED at ") + krl::to_string(report.failure_stage)
                                   : std::string("ok"))
              << "\n";
    reports.push_back(report_to_json(report));
  }
  std::filesystem::create_directories(output_dir);
  krl::write_text_file_atomic(output_dir / "validation_reports.json", reports.dump(2));
  std::cout << corpus.size() << " triplets, " << (any_discarded ? "some" : "none") << " discarded\n";
  return any_discarded ? kDomainFailure : kOk;
}

int cmd_judge(const std::filesystem::path& corpus_path, const std::string& problem_id,
              const std::filesystem::path& source_path, const krl::JudgeConfig& jcfg) {
  const auto corpus = krl::load_corpus(corpus_path);
  const krl::ProblemTriplet* problem = nullptr;
  for (const auto& t : corpus) {
    if (t.id == problem_id) {
      problem = &t;
      break;
    }
  }
  if (problem == nullptr) throw krl::ConfigError("no problem with id " + problem_id);

  const krl::Judge judge(jcfg);
  const krl::VerdictReport verdict =
      judge.judge(krl::read_text_file(source_path), problem->test_cases);

  json per_test = json::array();
  for (const krl::TestResult& tr : verdict.per_test) {
    per_test.push_back(json{{"outcome", krl::to_string(tr.outcome)}, {"runtime_s", tr.runtime_s}});
  }
  json doc = {{"aggregate", krl::to_string(verdict.aggregate)},
              {"compile_ok", verdict.compile_ok},
              {"per_test", std::move(per_test)}};
  if (!verdict.compile_ok) doc["compile_log"] = verdict.compile_log;
  std::cout << doc.dump(2) << "\n";
  return verdict.accepted() ? kOk : kDomainFailure;
}

int cmd_train(const std::filesystem::path& config_path, std::optional<std::uint64_t> seed_override,
              std::optional<std::string> output_override, bool dry_run,
              const std::optional<std::string>& resume_from) {
  krl::RunConfig cfg = krl::load_run_config(config_path);
  if (seed_override) {
    cfg.seed = *seed_override;
    cfg.schedule.seed = *seed_override;
    cfg.eval.seed = *seed_override;
  }
  if (output_override) cfg.output_dir = *output_override;
  if (cfg.corpus_path.empty()) throw krl::ConfigError("train requires a corpus path");

  auto corpus = krl::load_corpus(cfg.corpus_path);
  cfg.schedule.validate(corpus.size());

  if (dry_run) {
    std::cout << krl::describe_run_config(cfg);
    return kOk;
  }

  auto snapshot = std::make_shared<const std::vector<krl::ProblemTriplet>>(corpus);
  auto teacher = krl::make_policy(cfg.teacher, krl::Phase::Teacher, snapshot);
  auto student = krl::make_policy(cfg.student, krl::Phase::Student, snapshot);
  auto oracle = krl::make_equivalence_oracle(cfg.oracle);
  const krl::Judge judge(cfg.judge);

  krl::LoopServices services;
  services.judge = &judge;
  services.oracle = oracle.get();
  services.teacher_grpo = cfg.grpo;
  services.teacher_grpo.temperature = cfg.teacher.sampling.temperature;
  services.teacher_grpo.group_size = cfg.teacher.sampling.group_size;
  services.student_grpo = cfg.grpo;
  services.student_grpo.temperature = cfg.student.sampling.temperature;
  services.student_grpo.group_size = cfg.student.sampling.group_size;
  services.teacher_sampling = cfg.teacher.sampling;
  services.student_sampling = cfg.student.sampling;

  krl::Trainer trainer(std::move(corpus), teacher, student, cfg.schedule, services,
                       cfg.output_dir);
  if (resume_from) trainer.restore(*resume_from);
  const krl::TrainingLog log = trainer.run();
  std::cout << "training complete: " << log.summaries.size() << " step records in "
            << trainer.log_path().string() << "\n";
  return kOk;
}

int cmd_eval(const std::filesystem::path& config_path, std::optional<std::uint64_t> seed_override,
             std::optional<std::string> output_override) {
  krl::RunConfig cfg = krl::load_run_config(config_path);
  if (seed_override) {
    cfg.seed = *seed_override;
    cfg.eval.seed = *seed_override;
  }
  if (output_override) cfg.output_dir = *output_override;
  if (cfg.corpus_path.empty()) throw krl::ConfigError("eval requires a corpus path");

  const auto corpus = krl::load_corpus(cfg.corpus_path);
  auto snapshot = std::make_shared<const std::vector<krl::ProblemTriplet>>(corpus);
  auto policy = krl::make_policy(cfg.student, krl::Phase::Student, snapshot);
  const krl::Judge judge(cfg.judge);

  std::filesystem::create_directories(cfg.output_dir);
  const std::filesystem::path partial_path = cfg.output_dir / "eval_partial.jsonl";
  krl::write_text_file_atomic(partial_path, "");

  // Per-problem results stream to disk so an aborted run leaves a partial
  // report behind.
  auto on_problem = [&](const krl::ProblemEval& pe) {
    std::ofstream out(partial_path, std::ios::app);
    out << json{{"id", pe.problem_id}, {"n", pe.n}, {"c", pe.c}, {"pass_at_k", pe.pass_at_k}}.dump()
        << "\n";
  };

  krl::EvalReport report;
  try {
    report = krl::evaluate(*policy, corpus, cfg.eval, judge, on_problem);
  } catch (...) {
    std::cerr << "evaluation aborted; partial per-problem results in " << partial_path.string()
              << "\n";
    throw;
  }

  krl::write_text_file_atomic(cfg.output_dir / "eval_report.json", krl::eval_report_to_json(report));
  krl::write_text_file_atomic(
      cfg.output_dir / "eval_report.csv",
      krl::eval_report_to_csv(report, cfg.student.backend, cfg.corpus_path.stem().string()));
  std::cout << "aggregate pass@" << report.k << ": " << report.aggregate << "\n";
  return kOk;
}

int cmd_export_curves(const std::filesystem::path& log_path,
                      const std::optional<std::string>& output_file) {
  const std::string csv = krl::export_curves_csv(log_path);
  if (output_file) {
    krl::write_text_file_atomic(*output_file, csv);
  } else {
    std::cout << csv;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernelrl: adversarial problem-rewriting RL with a sandboxed code judge"};
  app.require_subcommand(1);

  std::string config_path;
  std::string corpus_path;
  std::string output_dir = "out";
  std::string problem_id;
  std::string source_path;
  std::string log_file;
  std::optional<std::string> output_override;
  std::optional<std::string> curve_output;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> resume_from;
  bool dry_run = false;

  auto* validate = app.add_subcommand("validate-dataset", "Validate a corpus of problem triplets");
  validate->add_option("--corpus", corpus_path, "Corpus JSONL path")->required();
  validate->add_option("--output", output_dir, "Output directory for reports");
  validate->add_option("--config", config_path, "Run config (judge settings)");

  auto* judge_cmd = app.add_subcommand("judge", "Judge one source file against a corpus problem");
  judge_cmd->add_option("--corpus", corpus_path, "Corpus JSONL path")->required();
  judge_cmd->add_option("--id", problem_id, "Problem id")->required();
  judge_cmd->add_option("--source", source_path, "Source file to judge")->required();
  judge_cmd->add_option("--config", config_path, "Run config (judge settings)");

  auto* train = app.add_subcommand("train", "Run adversarial training");
  train->add_option("--config", config_path, "Run config JSON")->required();
  train->add_option("--seed", seed_override, "Override the config seed");
  train->add_option("--output", output_override, "Override the output directory");
  train->add_flag("--dry-run", dry_run, "Validate the config and print the resolved schedule");
  train->add_option("--resume", resume_from, "Checkpoint directory to resume from");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a policy with pass@k");
  eval_cmd->add_option("--config", config_path, "Run config JSON")->required();
  eval_cmd->add_option("--seed", seed_override, "Override the config seed");
  eval_cmd->add_option("--output", output_override, "Override the output directory");

  auto* curves = app.add_subcommand("export-curves", "Export per-step mean rewards as CSV");
  curves->add_option("--log", log_file, "Run log JSONL path")->required();
  curves->add_option("--output", curve_output, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  return guarded([&]() -> int {
    krl::JudgeConfig jcfg;
    if (!config_path.empty()) jcfg = krl::load_run_config(config_path).judge;

    if (validate->parsed()) return cmd_validate_dataset(corpus_path, output_dir, jcfg);
    if (judge_cmd->parsed()) return cmd_judge(corpus_path, problem_id, source_path, jcfg);
    if (train->parsed()) {
      return cmd_train(config_path, seed_override, output_override, dry_run, resume_from);
    }
    if (eval_cmd->parsed()) return cmd_eval(config_path, seed_override, output_override);
    if (curves->parsed()) return cmd_export_curves(log_file, curve_output);
    return kUsage;
  });
}
