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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "krl/corpus.hpp"
#include "krl/grpo.hpp"
#include "krl/judge.hpp"
#include "krl/policy.hpp"
#include "krl/rewards.hpp"
#include "krl/tfidf.hpp"

namespace krl {

struct TrainingSchedule {
  int iterations = 0;  // T; required, no default
  int teacher_steps = 40;
  int student_steps = 100;
  int problems_per_step = 1;
  // When positive, a teacher-only warmup runs as iteration 0 before the
  // alternating iterations.
  int pretrain_teacher_steps = 0;
  std::uint64_t seed = 0;

  void validate(std::size_t corpus_size) const;
};

// One logged candidate. wall_clock_s stays in memory and in the timing
// sidecar; the canonical JSONL log holds only deterministic fields so a rerun
// with the same seed reproduces it byte for byte.
struct CandidateLogRecord {
  int iteration = 0;
  Phase phase = Phase::Teacher;
  int step = 0;
  std::string problem_id;
  int candidate_index = 0;
  bool well_formed = false;
  std::optional<GiverRewardBreakdown> giver;
  std::optional<SolverRewardBreakdown> solver;
  double reward_total = 0.0;
  double advantage = 0.0;
  std::string verdict;  // student candidates: Accepted / Failed / CompileError
  bool equivalent = false;
  std::optional<bool> student_accepted;
  double wall_clock_s = 0.0;
};

struct StepSummary {
  int iteration = 0;
  Phase phase = Phase::Teacher;
  int step = 0;
  std::vector<std::string> problem_ids;
  int candidates = 0;
  double mean_reward = 0.0;
  std::map<std::string, double> mean_components;
  double wall_clock_s = 0.0;
};

struct TrainingLog {
  std::vector<CandidateLogRecord> candidates;
  std::vector<StepSummary> summaries;

  // Mean of one reward component over all candidates of a phase/iteration.
  double mean_component(Phase phase, int iteration, const std::string& component) const;
};

struct LoopServices {
  const Judge* judge = nullptr;
  EquivalenceOracle* oracle = nullptr;
  GrpoConfig teacher_grpo;
  GrpoConfig student_grpo;
  SamplingConfig teacher_sampling = SamplingConfig::teacher_defaults();
  SamplingConfig student_sampling = SamplingConfig::student_defaults();
  // Similarity documents are the answer segments (problem texts), not the
  // full responses.
  bool similarity_on_answer_only = true;
  // Test hook, called after each completed phase (checkpoint already
  // written). Throwing here simulates a crash between phases.
  std::function<void(int iteration, Phase phase)> after_phase;
};

// Prompt shown to the teacher: the kernel plus the previous revision between
// explicit markers (the teacher needs the previous revision to pursue
// novelty). The student prompt is the revision text alone.
std::string teacher_prompt(const std::string& kernel_text, const std::string& prev_revision);
// Extracts the kernel block back out of a teacher prompt (scripted backends).
std::string kernel_from_teacher_prompt(const std::string& prompt);

// Built-in scripted behaviors used by the CLI's "scripted" backend and the
// desk-scale smoke runs. The teacher wraps the kernel into a structurally
// complete narrative with iteration-salted wording; the student answers with
// the reference solution of whichever kernel its prompt embeds, starting at
// solve_from_iteration (earlier iterations fail deliberately).
ScriptedPolicy::ScriptFn demo_teacher_script(std::shared_ptr<const std::vector<ProblemTriplet>> corpus);
ScriptedPolicy::ScriptFn demo_student_script(std::shared_ptr<const std::vector<ProblemTriplet>> corpus,
                                             int solve_from_iteration = 2);

// Orchestrates the alternating teacher/student training: samples problems,
// generates candidates, scores them through the reward engine, applies GRPO
// updates to toy policies, appends accepted revisions, writes the run log and
// per-phase checkpoints, and supports resuming from any checkpoint.
class Trainer {
 public:
  Trainer(std::vector<ProblemTriplet> corpus, std::shared_ptr<Policy> teacher,
          std::shared_ptr<Policy> student, TrainingSchedule schedule, LoopServices services,
          std::filesystem::path output_dir);

  // Restores revision histories, toy parameters, the phase cursor, and the
  // log cursor from a checkpoint directory produced by an identical
  // configuration.
  void restore(const std::filesystem::path& checkpoint_dir);

  // Runs every remaining phase; returns the in-memory log of records produced
  // by this call.
  TrainingLog run();

  const std::vector<ProblemTriplet>& corpus() const { return corpus_; }
  std::filesystem::path log_path() const;

 private:
  struct PhaseSlot {
    int iteration;
    Phase phase;
  };

  std::vector<PhaseSlot> phase_sequence() const;
  void run_teacher_phase(int iteration, int steps);
  void run_student_phase(int iteration);
  void refit_similarity();
  std::vector<std::size_t> sample_problem_indices(int iteration, Phase phase, int step) const;
  std::string previous_revision(const ProblemTriplet& triplet, int iteration) const;
  const VerdictReport& judged(const std::string& problem_id, const std::string& source,
                              const std::vector<TestCase>& tests);
  bool student_attempt_accepted(const ProblemTriplet& triplet, const std::string& revision_text,
                                int iteration, int step, int candidate_index);
  void write_checkpoint(int completed_phases, const PhaseSlot& slot);
  void log_candidate(const CandidateLogRecord& record);
  void log_summary(const StepSummary& summary);
  void log_skipped_revision(int iteration, int step, const std::string& problem_id,
                            const std::string& reason);
  void append_phase_revisions(int iteration,
                              const std::map<std::string, std::pair<double, std::string>>& best);

  std::vector<ProblemTriplet> corpus_;
  std::shared_ptr<Policy> teacher_;
  std::shared_ptr<Policy> student_;
  TrainingSchedule schedule_;
  LoopServices services_;
  std::filesystem::path output_dir_;

  TfidfModel similarity_;
  EquivalenceCache equivalence_cache_;
  std::map<std::string, VerdictReport> verdict_cache_;
  std::mutex verdict_mutex_;

  int completed_phases_ = 0;
  std::uint64_t log_bytes_ = 0;
  TrainingLog log_;
};

// Per-step mean-reward curves from a run log, as CSV (header always present).
// Throws MalformedRecordError naming the offending line on corrupt input.
std::string export_curves_csv(const std::filesystem::path& run_log_path);

}  // namespace krl
