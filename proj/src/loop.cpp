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

#include "krl/loop.hpp"

#include <chrono>
#include <fstream>
#include <future>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "krl/errors.hpp"
#include "krl/response.hpp"
#include "krl/util.hpp"

namespace krl {

using nlohmann::json;

namespace {

std::uint64_t u64(int v) { return static_cast<std::uint64_t>(v); }

double now_minus(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void append_log_line(const std::filesystem::path& path, const std::string& line,
                     std::uint64_t& byte_counter) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot append to run log " + path.string());
  out << line << '\n';
  out.flush();
  if (!out) throw IoError("write failed for run log " + path.string());
  byte_counter += line.size() + 1;
}

json giver_to_json(const GiverRewardBreakdown& b) {
  return json{{"r_pfm", b.r_pfm}, {"r_eqv", b.r_eqv}, {"r_dvg", b.r_dvg},
              {"r_nvt", b.r_nvt}, {"r_adv", b.r_adv}, {"total", b.total}};
}

json solver_to_json(const SolverRewardBreakdown& b) {
  return json{{"r_sfm", b.r_sfm}, {"r_cmp", b.r_cmp}, {"r_acc", b.r_acc}, {"total", b.total}};
}

}  // namespace

void TrainingSchedule::validate(std::size_t corpus_size) const {
  if (iterations < 1) throw ConfigError("iterations (T) must be >= 1");
  if (teacher_steps < 1) throw ConfigError("teacher_steps must be >= 1");
  if (student_steps < 1) throw ConfigError("student_steps must be >= 1");
  if (problems_per_step < 1) throw ConfigError("problems_per_step must be >= 1");
  if (pretrain_teacher_steps < 0) throw ConfigError("pretrain_teacher_steps must be >= 0");
  if (corpus_size == 0) throw ConfigError("training requires a non-empty corpus");
  if (static_cast<std::size_t>(problems_per_step) > corpus_size) {
    throw ConfigError("problems_per_step exceeds the corpus size");
  }
}

double TrainingLog::mean_component(Phase phase, int iteration, const std::string& component) const {
  double sum = 0.0;
  std::size_t count = 0;
  for (const CandidateLogRecord& rec : candidates) {
    if (rec.phase != phase || rec.iteration != iteration) continue;
    double value = 0.0;
    if (rec.giver) {
      const GiverRewardBreakdown& g = *rec.giver;
      if (component == "r_pfm") value = g.r_pfm;
      else if (component == "r_eqv") value = g.r_eqv;
      else if (component == "r_dvg") value = g.r_dvg;
      else if (component == "r_nvt") value = g.r_nvt;
      else if (component == "r_adv") value = g.r_adv;
      else if (component == "total") value = g.total;
      else continue;
    } else if (rec.solver) {
      const SolverRewardBreakdown& s = *rec.solver;
      if (component == "r_sfm") value = s.r_sfm;
      else if (component == "r_cmp") value = s.r_cmp;
      else if (component == "r_acc") value = s.r_acc;
      else if (component == "total") value = s.total;
      else continue;
    } else {
      continue;
    }
    sum += value;
    ++count;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

namespace {
constexpr std::string_view kKernelOpen = "[KERNEL]\n";
constexpr std::string_view kKernelClose = "\n[/KERNEL]";
}  // namespace

std::string teacher_prompt(const std::string& kernel_text, const std::string& prev_revision) {
  std::string out;
  out.reserve(kernel_text.size() + prev_revision.size() + 512);
  out.append(
      "Rewrite the kernel problem below into a narrative-rich problem statement that is "
      "computationally equivalent: the original test cases must remain valid. The statement "
      "must include Description, Input Format, Output Format, Examples, and Constraints "
      "sections, all inside the <answer> block, and differ in wording from the previous "
      "revision. Respond as <think>...</think><answer>...</answer>.\n");
  out.append(kKernelOpen);
  out.append(kernel_text);
  out.append(kKernelClose);
  out.append("\n[PREVIOUS_REVISION]\n");
  out.append(prev_revision);
  out.append("\n[/PREVIOUS_REVISION]\n");
  return out;
}

std::string kernel_from_teacher_prompt(const std::string& prompt) {
  const std::size_t open = prompt.find(kKernelOpen);
  if (open == std::string::npos) return {};
  const std::size_t begin = open + kKernelOpen.size();
  const std::size_t close = prompt.find(kKernelClose, begin);
  if (close == std::string::npos) return {};
  return prompt.substr(begin, close - begin);
}

ScriptedPolicy::ScriptFn demo_teacher_script(
    std::shared_ptr<const std::vector<ProblemTriplet>> corpus) {
  return [corpus](const StepContext& ctx, const std::string& prompt, int sample_index) {
    std::string kernel = kernel_from_teacher_prompt(prompt);
    if (kernel.empty() && !corpus->empty()) kernel = corpus->front().kernel_text;
    std::ostringstream answer;
    answer << "Description\n"
           << "In scenario setting" << ctx.iteration << "x" << ctx.step << "y" << sample_index
           << " an operator faces the following task.\n"
           << kernel << "\n"
           << "Input Format\nExactly as in the embedded task statement.\n"
           << "Output Format\nExactly as in the embedded task statement.\n"
           << "Examples\nSee the embedded task statement.\n"
           << "Constraints\nAs stated in the embedded task statement.\n";
    return render_tagged_response(" reframing the task with a fresh setting ", answer.str());
  };
}

ScriptedPolicy::ScriptFn demo_student_script(
    std::shared_ptr<const std::vector<ProblemTriplet>> corpus, int solve_from_iteration) {
  return [corpus, solve_from_iteration](const StepContext& ctx, const std::string& prompt,
                                        int /*sample_index*/) {
    const ProblemTriplet* match = nullptr;
    for (const ProblemTriplet& t : *corpus) {
      if (prompt.find(t.kernel_text) != std::string::npos) {
        match = &t;
        break;
      }
    }
    if (match != nullptr && ctx.iteration >= solve_from_iteration) {
      return render_tagged_response(" recovered the kernel and reused its solution ",
                                    "\n```\n" + match->reference_source + "\n```\n");
    }
    // Compiles but exits nonzero: a deliberate Failed verdict.
    return render_tagged_response(" could not identify the kernel ",
                                  "\n```\nint main() { return 1; }\n```\n");
  };
}

Trainer::Trainer(std::vector<ProblemTriplet> corpus, std::shared_ptr<Policy> teacher,
                 std::shared_ptr<Policy> student, TrainingSchedule schedule, LoopServices services,
                 std::filesystem::path output_dir)
    : corpus_(std::move(corpus)),
      teacher_(std::move(teacher)),
      student_(std::move(student)),
      schedule_(schedule),
      services_(std::move(services)),
      output_dir_(std::move(output_dir)) {
  if (services_.judge == nullptr || services_.oracle == nullptr) {
    throw ConfigError("trainer requires a judge and an equivalence oracle");
  }
  if (teacher_ == nullptr || student_ == nullptr) {
    throw ConfigError("trainer requires both policies");
  }
  if (services_.teacher_sampling.group_size < 2 || services_.student_sampling.group_size < 2) {
    throw ConfigError("training group sizes must be >= 2 (singleton groups are degenerate)");
  }
  schedule_.validate(corpus_.size());
}

std::filesystem::path Trainer::log_path() const { return output_dir_ / "run_log.jsonl"; }

std::vector<Trainer::PhaseSlot> Trainer::phase_sequence() const {
  std::vector<PhaseSlot> seq;
  if (schedule_.pretrain_teacher_steps > 0) seq.push_back({0, Phase::Teacher});
  for (int t = 1; t <= schedule_.iterations; ++t) {
    seq.push_back({t, Phase::Teacher});
    seq.push_back({t, Phase::Student});
  }
  return seq;
}

void Trainer::refit_similarity() {
  // IDF corpus: every kernel plus every revision generated so far in this run.
  std::vector<std::string> documents;
  documents.reserve(corpus_.size() * 2);
  for (const ProblemTriplet& t : corpus_) {
    documents.push_back(t.kernel_text);
    for (const std::string& rev : t.revision_history) documents.push_back(rev);
  }
  similarity_ = fit_tfidf(documents);
}

std::vector<std::size_t> Trainer::sample_problem_indices(int iteration, Phase phase,
                                                         int step) const {
  const std::uint64_t seed =
      derive_seed(schedule_.seed, {stream_tag("corpus-sampling"), u64(iteration),
                                   phase == Phase::Teacher ? 0ull : 1ull, u64(step)});
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> indices(corpus_.size());
  std::iota(indices.begin(), indices.end(), 0);
  const std::size_t k =
      std::min(static_cast<std::size_t>(schedule_.problems_per_step), indices.size());
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (indices.size() - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(k);
  return indices;
}

std::string Trainer::previous_revision(const ProblemTriplet& triplet, int iteration) const {
  // y_0 is the kernel itself; iteration t compares against y_{t-1}.
  if (iteration <= 1 || triplet.revision_history.empty()) return triplet.kernel_text;
  const std::size_t have = triplet.revision_history.size();
  const std::size_t want = static_cast<std::size_t>(iteration - 1);
  return triplet.revision_history[std::min(have, want) - 1];
}

const VerdictReport& Trainer::judged(const std::string& problem_id, const std::string& source,
                                     const std::vector<TestCase>& tests) {
  std::string key;
  key.reserve(problem_id.size() + source.size() + 1);
  key.append(problem_id);
  key.push_back('\x1f');
  key.append(source);
  {
    std::lock_guard lock(verdict_mutex_);
    auto it = verdict_cache_.find(key);
    if (it != verdict_cache_.end()) return it->second;
  }
  VerdictReport verdict = services_.judge->judge(source, tests);
  std::lock_guard lock(verdict_mutex_);
  return verdict_cache_.emplace(std::move(key), std::move(verdict)).first->second;
}

bool Trainer::student_attempt_accepted(const ProblemTriplet& triplet,
                                       const std::string& revision_text, int iteration, int step,
                                       int candidate_index) {
  SamplingConfig cfg = services_.student_sampling;
  cfg.group_size = 1;
  const std::uint64_t seed =
      derive_seed(schedule_.seed, {stream_tag("student-attempt"), u64(iteration), u64(step),
                                   stream_tag(triplet.id), u64(candidate_index)});
  const std::vector<Completion> attempt = student_->sample_group(revision_text, cfg, seed);
  const ParsedResponse parsed = parse_tagged_response(attempt.front().text);
  if (!parsed.well_formed) return false;
  const VerdictReport& verdict =
      judged(triplet.id, extract_code(*parsed.answer), triplet.test_cases);
  return verdict.aggregate == Verdict::Accepted;
}

void Trainer::log_candidate(const CandidateLogRecord& record) {
  json rewards;
  if (record.giver) rewards = giver_to_json(*record.giver);
  if (record.solver) rewards = solver_to_json(*record.solver);
  json line = {{"type", "candidate"},
               {"iteration", record.iteration},
               {"phase", to_string(record.phase)},
               {"step", record.step},
               {"problem_id", record.problem_id},
               {"candidate", record.candidate_index},
               {"well_formed", record.well_formed},
               {"rewards", std::move(rewards)},
               {"advantage", record.advantage}};
  if (record.phase == Phase::Teacher) {
    line["equivalent"] = record.equivalent;
    if (record.student_accepted) line["student_accepted"] = *record.student_accepted;
  } else {
    line["verdict"] = record.verdict;
  }
  append_log_line(log_path(), line.dump(), log_bytes_);
  log_.candidates.push_back(record);
}

void Trainer::log_summary(const StepSummary& summary) {
  json line = {{"type", "summary"},
               {"iteration", summary.iteration},
               {"phase", to_string(summary.phase)},
               {"step", summary.step},
               {"problem_ids", summary.problem_ids},
               {"candidates", summary.candidates},
               {"mean_reward", summary.mean_reward},
               {"mean_components", summary.mean_components}};
  append_log_line(log_path(), line.dump(), log_bytes_);
  log_.summaries.push_back(summary);

  // Wall clock stays out of the canonical log so reruns reproduce it byte for
  // byte; timings go to a sidecar.
  const std::filesystem::path timing = output_dir_ / "timings.csv";
  const bool fresh = !std::filesystem::exists(timing);
  std::ofstream out(timing, std::ios::app);
  if (out) {
    if (fresh) out << "iteration,phase,step,wall_s\n";
    out << summary.iteration << ',' << to_string(summary.phase) << ',' << summary.step << ','
        << summary.wall_clock_s << '\n';
  }
}

void Trainer::log_skipped_revision(int iteration, int step, const std::string& problem_id,
                                   const std::string& reason) {
  json line = {{"type", "skipped_revision"}, {"iteration", iteration},
               {"phase", "student"},         {"step", step},
               {"problem_id", problem_id},   {"reason", reason}};
  append_log_line(log_path(), line.dump(), log_bytes_);
}

void Trainer::append_phase_revisions(
    int iteration, const std::map<std::string, std::pair<double, std::string>>& best) {
  // Every kernel gets an entry for iteration t: the best equivalent revision
  // seen this phase, or a carry-forward of y_{t-1} so indices stay aligned.
  for (ProblemTriplet& triplet : corpus_) {
    auto it = best.find(triplet.id);
    if (it != best.end()) {
      triplet.revision_history.push_back(it->second.second);
    } else {
      triplet.revision_history.push_back(previous_revision(triplet, iteration));
    }
  }
}

void Trainer::run_teacher_phase(int iteration, int steps) {
  refit_similarity();
  std::map<std::string, std::pair<double, std::string>> best_revisions;

  auto* toy_teacher = dynamic_cast<ToyPolicy*>(teacher_.get());

  for (int step = 0; step < steps; ++step) {
    const auto step_start = std::chrono::steady_clock::now();
    const StepContext ctx{iteration, Phase::Teacher, step};
    teacher_->on_step(ctx);
    student_->on_step(ctx);

    const std::vector<std::size_t> indices = sample_problem_indices(iteration, Phase::Teacher, step);
    std::vector<GroupSample> groups;
    StepSummary summary;
    summary.iteration = iteration;
    summary.phase = Phase::Teacher;
    summary.step = step;
    double reward_sum = 0.0;
    std::map<std::string, double> component_sums;

    for (const std::size_t index : indices) {
      const ProblemTriplet& problem = corpus_[index];
      summary.problem_ids.push_back(problem.id);
      const std::string prev = previous_revision(problem, iteration);
      const std::string prompt = teacher_prompt(problem.kernel_text, prev);
      const std::uint64_t sample_seed =
          derive_seed(schedule_.seed, {stream_tag("teacher-sampling"), u64(iteration), u64(step),
                                       static_cast<std::uint64_t>(index)});
      const std::vector<Completion> completions =
          teacher_->sample_group(prompt, services_.teacher_sampling, sample_seed);

      struct CandidateOutcome {
        CandidateLogRecord record;
        std::string revision_text;
      };
      std::vector<std::future<CandidateOutcome>> futures;
      futures.reserve(completions.size());
      for (int i = 0; i < static_cast<int>(completions.size()); ++i) {
        futures.push_back(std::async(std::launch::async, [&, i]() -> CandidateOutcome {
          const auto start = std::chrono::steady_clock::now();
          const Completion& candidate = completions[static_cast<std::size_t>(i)];
          const ParsedResponse parsed = parse_tagged_response(candidate.text);
          const std::string revision = parsed.answer.value_or("");
          const ProblemStructure structure = validate_problem_structure(revision);
          const bool format_ok = parsed.well_formed && structure.complete();

          EquivalenceResult eqv;
          if (format_ok) {
            eqv = equivalence_check(problem.kernel_text, revision, *services_.oracle,
                                    &equivalence_cache_);
          }
          std::optional<bool> accepted;
          if (format_ok && eqv.equivalent) {
            accepted = student_attempt_accepted(problem, revision, iteration, step, i);
          }
          const GiverRewardBreakdown breakdown =
              giver_reward(similarity_, problem.kernel_text, revision, prev, structure, parsed,
                           eqv.equivalent, accepted);

          CandidateOutcome out;
          out.revision_text = revision;
          out.record.iteration = iteration;
          out.record.phase = Phase::Teacher;
          out.record.step = step;
          out.record.problem_id = problem.id;
          out.record.candidate_index = i;
          out.record.well_formed = parsed.well_formed;
          out.record.giver = breakdown;
          out.record.reward_total = breakdown.total;
          out.record.equivalent = format_ok && eqv.equivalent;
          out.record.student_accepted = accepted;
          out.record.wall_clock_s = now_minus(start);
          return out;
        }));
      }

      std::vector<CandidateOutcome> outcomes;
      outcomes.reserve(futures.size());
      for (auto& f : futures) outcomes.push_back(f.get());

      std::vector<double> rewards;
      rewards.reserve(outcomes.size());
      for (const CandidateOutcome& o : outcomes) rewards.push_back(o.record.reward_total);
      const std::vector<double> advantages = group_advantages(rewards);

      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        CandidateLogRecord rec = outcomes[i].record;
        rec.advantage = advantages[i];
        log_candidate(rec);
        reward_sum += rec.reward_total;
        const GiverRewardBreakdown& b = *rec.giver;
        component_sums["r_pfm"] += b.r_pfm;
        component_sums["r_eqv"] += b.r_eqv;
        component_sums["r_dvg"] += b.r_dvg;
        component_sums["r_nvt"] += b.r_nvt;
        component_sums["r_adv"] += b.r_adv;
        ++summary.candidates;

        if (rec.equivalent) {
          auto& slot = best_revisions[problem.id];
          if (slot.second.empty() || rec.reward_total > slot.first) {
            slot = {rec.reward_total, outcomes[i].revision_text};
          }
        }
      }

      if (toy_teacher != nullptr) {
        bool have_logprobs = true;
        for (const Completion& c : completions) have_logprobs &= c.logprobs.has_value();
        if (have_logprobs) groups.push_back(make_group_sample(prompt, completions, rewards));
      }
    }

    if (toy_teacher != nullptr && !groups.empty()) {
      toy_teacher->set_params(grpo_step(toy_teacher->vocabulary(), toy_teacher->params(), groups,
                                        services_.teacher_grpo));
    }

    summary.mean_reward = summary.candidates > 0 ? reward_sum / summary.candidates : 0.0;
    for (const auto& [name, sum] : component_sums) {
      summary.mean_components[name] = summary.candidates > 0 ? sum / summary.candidates : 0.0;
    }
    summary.wall_clock_s = now_minus(step_start);
    log_summary(summary);
  }

  if (iteration >= 1) append_phase_revisions(iteration, best_revisions);
}

void Trainer::run_student_phase(int iteration) {
  auto* toy_student = dynamic_cast<ToyPolicy*>(student_.get());

  for (int step = 0; step < schedule_.student_steps; ++step) {
    const auto step_start = std::chrono::steady_clock::now();
    const StepContext ctx{iteration, Phase::Student, step};
    teacher_->on_step(ctx);
    student_->on_step(ctx);

    const std::vector<std::size_t> indices = sample_problem_indices(iteration, Phase::Student, step);
    std::vector<GroupSample> groups;
    StepSummary summary;
    summary.iteration = iteration;
    summary.phase = Phase::Student;
    summary.step = step;
    double reward_sum = 0.0;
    std::map<std::string, double> component_sums;

    for (const std::size_t index : indices) {
      const ProblemTriplet& problem = corpus_[index];
      summary.problem_ids.push_back(problem.id);

      // G_t produces one rewrite; only equivalence-passing rewrites become
      // training prompts (kernel tests would mis-score anything else).
      const std::string prompt_prev = problem.revision_history.empty()
                                          ? problem.kernel_text
                                          : problem.revision_history.back();
      SamplingConfig rewrite_cfg = services_.teacher_sampling;
      rewrite_cfg.group_size = 1;
      const std::uint64_t rewrite_seed =
          derive_seed(schedule_.seed, {stream_tag("student-phase-rewrite"), u64(iteration),
                                       u64(step), static_cast<std::uint64_t>(index)});
      const Completion rewrite =
          teacher_
              ->sample_group(teacher_prompt(problem.kernel_text, prompt_prev), rewrite_cfg,
                             rewrite_seed)
              .front();
      const ParsedResponse parsed = parse_tagged_response(rewrite.text);
      const std::string revision = parsed.answer.value_or("");
      const ProblemStructure structure = validate_problem_structure(revision);
      const bool format_ok = parsed.well_formed && structure.complete();
      bool equivalent = false;
      if (format_ok) {
        equivalent = equivalence_check(problem.kernel_text, revision, *services_.oracle,
                                       &equivalence_cache_)
                         .equivalent;
      }
      if (!format_ok || !equivalent) {
        log_skipped_revision(iteration, step, problem.id,
                             format_ok ? "not equivalent" : "malformed rewrite");
        continue;
      }

      const std::uint64_t sample_seed =
          derive_seed(schedule_.seed, {stream_tag("student-sampling"), u64(iteration), u64(step),
                                       static_cast<std::uint64_t>(index)});
      const std::vector<Completion> completions =
          student_->sample_group(revision, services_.student_sampling, sample_seed);

      std::vector<std::future<CandidateLogRecord>> futures;
      futures.reserve(completions.size());
      for (int i = 0; i < static_cast<int>(completions.size()); ++i) {
        futures.push_back(std::async(std::launch::async, [&, i]() -> CandidateLogRecord {
          const auto start = std::chrono::steady_clock::now();
          const Completion& candidate = completions[static_cast<std::size_t>(i)];
          const ParsedResponse sparsed = parse_tagged_response(candidate.text);
          std::optional<VerdictReport> verdict;
          if (sparsed.well_formed) {
            verdict = judged(problem.id, extract_code(*sparsed.answer), problem.test_cases);
          }
          const SolverRewardBreakdown breakdown = solver_reward(sparsed, verdict);

          CandidateLogRecord rec;
          rec.iteration = iteration;
          rec.phase = Phase::Student;
          rec.step = step;
          rec.problem_id = problem.id;
          rec.candidate_index = i;
          rec.well_formed = sparsed.well_formed;
          rec.solver = breakdown;
          rec.reward_total = breakdown.total;
          rec.verdict = verdict ? to_string(verdict->aggregate) : "NotJudged";
          rec.wall_clock_s = now_minus(start);
          return rec;
        }));
      }

      std::vector<CandidateLogRecord> records;
      records.reserve(futures.size());
      for (auto& f : futures) records.push_back(f.get());

      std::vector<double> rewards;
      rewards.reserve(records.size());
      for (const CandidateLogRecord& rec : records) rewards.push_back(rec.reward_total);
      const std::vector<double> advantages = group_advantages(rewards);

      for (std::size_t i = 0; i < records.size(); ++i) {
        records[i].advantage = advantages[i];
        log_candidate(records[i]);
        reward_sum += records[i].reward_total;
        const SolverRewardBreakdown& b = *records[i].solver;
        component_sums["r_sfm"] += b.r_sfm;
        component_sums["r_cmp"] += b.r_cmp;
        component_sums["r_acc"] += b.r_acc;
        ++summary.candidates;
      }

      if (toy_student != nullptr) {
        bool have_logprobs = true;
        for (const Completion& c : completions) have_logprobs &= c.logprobs.has_value();
        if (have_logprobs) groups.push_back(make_group_sample(revision, completions, rewards));
      }
    }

    if (toy_student != nullptr && !groups.empty()) {
      toy_student->set_params(grpo_step(toy_student->vocabulary(), toy_student->params(), groups,
                                        services_.student_grpo));
    }

    summary.mean_reward = summary.candidates > 0 ? reward_sum / summary.candidates : 0.0;
    for (const auto& [name, sum] : component_sums) {
      summary.mean_components[name] = summary.candidates > 0 ? sum / summary.candidates : 0.0;
    }
    summary.wall_clock_s = now_minus(step_start);
    log_summary(summary);
  }
}

namespace {

json toy_params_to_json(const Policy* policy) {
  const auto* toy = dynamic_cast<const ToyPolicy*>(policy);
  if (toy == nullptr) return nullptr;
  return json{{"logits", toy->params().logits}, {"vocabulary", toy->vocabulary().tokens()}};
}

void restore_toy_params(Policy* policy, const json& state) {
  auto* toy = dynamic_cast<ToyPolicy*>(policy);
  if (toy == nullptr || state.is_null()) return;
  ToyPolicyParams params;
  params.logits = state.at("logits").get<std::vector<std::vector<double>>>();
  toy->set_params(std::move(params));
}

}  // namespace

void Trainer::write_checkpoint(int completed_phases, const PhaseSlot& slot) {
  char name[64];
  std::snprintf(name, sizeof(name), "phase_%04d_iter%d_%s", completed_phases, slot.iteration,
                to_string(slot.phase));
  const std::filesystem::path dir = output_dir_ / "checkpoints" / name;
  std::filesystem::create_directories(dir);

  json revisions = json::object();
  for (const ProblemTriplet& t : corpus_) revisions[t.id] = t.revision_history;

  json similarity = nullptr;
  if (similarity_.document_count > 0) {
    std::vector<std::string> vocab(similarity_.vocabulary.size());
    for (const auto& [token, index] : similarity_.vocabulary) {
      vocab[static_cast<std::size_t>(index)] = token;
    }
    similarity = json{{"vocabulary", vocab},
                      {"idf", similarity_.idf},
                      {"document_count", similarity_.document_count}};
  }

  json state = {{"schema", 1},
                {"completed_phases", completed_phases},
                {"iteration", slot.iteration},
                {"phase", to_string(slot.phase)},
                {"log_bytes", log_bytes_},
                {"seed", schedule_.seed},
                {"revisions", std::move(revisions)},
                {"teacher_params", toy_params_to_json(teacher_.get())},
                {"student_params", toy_params_to_json(student_.get())},
                {"similarity", std::move(similarity)}};
  write_text_file_atomic(dir / "state.json", state.dump(2));
}

void Trainer::restore(const std::filesystem::path& checkpoint_dir) {
  const json state = json::parse(read_text_file(checkpoint_dir / "state.json"));
  completed_phases_ = state.at("completed_phases").get<int>();
  log_bytes_ = state.at("log_bytes").get<std::uint64_t>();

  for (ProblemTriplet& t : corpus_) {
    if (state.at("revisions").contains(t.id)) {
      t.revision_history = state.at("revisions").at(t.id).get<std::vector<std::string>>();
    }
  }
  restore_toy_params(teacher_.get(), state.at("teacher_params"));
  restore_toy_params(student_.get(), state.at("student_params"));

  if (!state.at("similarity").is_null()) {
    const json& sim = state.at("similarity");
    similarity_ = TfidfModel{};
    const auto vocab = sim.at("vocabulary").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      similarity_.vocabulary.emplace(vocab[i], static_cast<int>(i));
    }
    similarity_.idf = sim.at("idf").get<std::vector<double>>();
    similarity_.document_count = sim.at("document_count").get<std::size_t>();
  }

  // Continue the run log exactly where the checkpoint left it.
  std::error_code ec;
  const auto current = std::filesystem::file_size(log_path(), ec);
  if (ec || current < log_bytes_) {
    throw IoError("run log is shorter than the checkpoint cursor");
  }
  std::filesystem::resize_file(log_path(), log_bytes_, ec);
  if (ec) throw IoError("cannot truncate run log to the checkpoint cursor");
}

TrainingLog Trainer::run() {
  std::filesystem::create_directories(output_dir_);
  if (completed_phases_ == 0) {
    write_text_file_atomic(log_path(), "");
    log_bytes_ = 0;
    std::error_code ec;
    std::filesystem::remove(output_dir_ / "timings.csv", ec);
  }

  const std::vector<PhaseSlot> sequence = phase_sequence();
  for (std::size_t i = static_cast<std::size_t>(completed_phases_); i < sequence.size(); ++i) {
    const PhaseSlot slot = sequence[i];
    if (slot.phase == Phase::Teacher) {
      run_teacher_phase(slot.iteration, slot.iteration == 0 ? schedule_.pretrain_teacher_steps
                                                            : schedule_.teacher_steps);
    } else {
      run_student_phase(slot.iteration);
    }
    completed_phases_ = static_cast<int>(i) + 1;
    write_checkpoint(completed_phases_, slot);
    if (services_.after_phase) services_.after_phase(slot.iteration, slot.phase);
  }
  return log_;
}

std::string export_curves_csv(const std::filesystem::path& run_log_path) {
  std::ifstream in(run_log_path, std::ios::binary);
  if (!in) throw IoError("cannot open run log " + run_log_path.string());

  static const std::vector<std::string> kComponents = {"r_sfm", "r_cmp", "r_acc", "r_pfm",
                                                       "r_eqv", "r_dvg", "r_nvt", "r_adv"};
  std::ostringstream csv;
  csv << "iteration,phase,step,candidates,mean_reward";
  for (const std::string& c : kComponents) csv << ",mean_" << c;
  csv << "\n";

  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded()) throw MalformedRecordError(line_number, "invalid JSON in run log");
    if (rec.value("type", "") != "summary") continue;
    try {
      csv << rec.at("iteration").get<int>() << ',' << rec.at("phase").get<std::string>() << ','
          << rec.at("step").get<int>() << ',' << rec.at("candidates").get<int>() << ','
          << rec.at("mean_reward").get<double>();
      const json& comps = rec.at("mean_components");
      for (const std::string& c : kComponents) {
        csv << ',';
        if (comps.contains(c)) csv << comps.at(c).get<double>();
      }
      csv << "\n";
    } catch (const json::exception& e) {
      throw MalformedRecordError(line_number, e.what());
    }
  }
  return csv.str();
}

}  // namespace krl
