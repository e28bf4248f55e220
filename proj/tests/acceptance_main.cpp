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
//
// Acceptance suite: every release criterion with its runtime budget, one
// pass/fail line each. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "krl/corpus.hpp"
#include "krl/evaluator.hpp"
#include "krl/grpo.hpp"
#include "krl/loop.hpp"
#include "krl/response.hpp"
#include "krl/rewards.hpp"
#include "krl/util.hpp"

using namespace krl;
using namespace krl::testing;

namespace {

struct Criterion {
  std::vector<std::string> failures;

  void expect(bool condition, const std::string& message) {
    if (!condition) failures.push_back(message);
  }
};

#define EXPECT(c, cond) (c).expect((cond), std::string(#cond) + "  [" + __FILE__ + ":" + std::to_string(__LINE__) + "]")

// ---------------------------------------------------------------------------
// Independent oracles local to the acceptance suite
// ---------------------------------------------------------------------------

std::vector<std::string> oracle_tokenize(const std::string& doc) {
  std::vector<std::string> out;
  std::string cur;
  for (char raw : doc) {
    char c = raw;
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      cur.push_back(c);
    } else {
      if (cur.size() >= 2) out.push_back(cur);
      cur.clear();
    }
  }
  if (cur.size() >= 2) out.push_back(cur);
  return out;
}

double oracle_cosine(const std::vector<std::string>& corpus, const std::string& a,
                     const std::string& b) {
  std::map<std::string, double> df;
  for (const std::string& doc : corpus) {
    std::set<std::string> seen;
    for (const auto& t : oracle_tokenize(doc)) seen.insert(t);
    for (const auto& t : seen) df[t] += 1.0;
  }
  const double n = static_cast<double>(corpus.size());
  auto weights = [&](const std::string& doc) {
    std::map<std::string, double> tf;
    for (const auto& t : oracle_tokenize(doc)) {
      if (df.count(t)) tf[t] += 1.0;
    }
    for (auto& [t, w] : tf) w *= std::log((1.0 + n) / (1.0 + df[t])) + 1.0;
    return tf;
  };
  const auto wa = weights(a);
  const auto wb = weights(b);
  double dot = 0, na = 0, nb = 0;
  for (const auto& [t, w] : wa) na += w * w;
  for (const auto& [t, w] : wb) nb += w * w;
  for (const auto& [t, w] : wa) {
    if (auto it = wb.find(t); it != wb.end()) dot += w * it->second;
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double binomial_pass_at_k(int n, int c, int k) {
  auto choose = [](int a, int b) -> double {
    if (b < 0 || b > a) return 0.0;
    double result = 1.0;
    for (int i = 0; i < b; ++i) result = result * (a - i) / (i + 1);
    return result;
  };
  return 1.0 - choose(n - c, k) / choose(n, k);
}

ToyPolicyParams fd_gradient(const ToyVocabulary& vocab, const ToyPolicyParams& params,
                            const std::vector<GroupSample>& groups, const GrpoConfig& cfg,
                            double h = 1e-5) {
  ToyPolicyParams grad = ToyPolicyParams::uniform(vocab.size());
  for (std::size_t c = 0; c < params.logits.size(); ++c) {
    for (std::size_t v = 0; v < params.logits[c].size(); ++v) {
      ToyPolicyParams plus = params;
      plus.logits[c][v] += h;
      ToyPolicyParams minus = params;
      minus.logits[c][v] -= h;
      grad.logits[c][v] =
          (grpo_objective(vocab, plus, groups, cfg) - grpo_objective(vocab, minus, groups, cfg)) /
          (2.0 * h);
    }
  }
  return grad;
}

ParsedResponse formed() { return parse_tagged_response("<think>t</think><answer>a</answer>"); }
ParsedResponse unformed() { return parse_tagged_response("free text"); }

VerdictReport verdict_of(bool compile_ok, Verdict aggregate) {
  VerdictReport v;
  v.compile_ok = compile_ok;
  v.aggregate = aggregate;
  return v;
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

void criterion_reward_tables(Criterion& c) {
  // Solver: the four reachable outcomes, integer components bit-exact.
  {
    const SolverRewardBreakdown b = solver_reward(unformed(), std::nullopt);
    EXPECT(c, b.r_sfm == -1 && b.r_cmp == 0 && b.r_acc == 0 && b.total == -1);
  }
  {
    const SolverRewardBreakdown b = solver_reward(formed(), verdict_of(false, Verdict::CompileError));
    EXPECT(c, b.r_sfm == 1 && b.r_cmp == -2 && b.r_acc == 0 && b.total == -1);
  }
  {
    const SolverRewardBreakdown b = solver_reward(formed(), verdict_of(true, Verdict::Failed));
    EXPECT(c, b.r_sfm == 1 && b.r_cmp == 2 && b.r_acc == -3 && b.total == 0);
  }
  {
    const SolverRewardBreakdown b = solver_reward(formed(), verdict_of(true, Verdict::Accepted));
    EXPECT(c, b.r_sfm == 1 && b.r_cmp == 2 && b.r_acc == 3 && b.total == 6);
  }

  // Giver gate states.
  {
    const GiverRewardBreakdown b = giver_reward_from_similarities(false, false, 0, 0, std::nullopt);
    EXPECT(c, b.r_pfm == 0 && b.r_eqv == 0 && b.r_dvg == 0.0 && b.r_nvt == 0.0 && b.r_adv == 0.0 &&
                  b.total == 0.0);
  }
  {
    const GiverRewardBreakdown b = giver_reward_from_similarities(true, false, 0, 0, std::nullopt);
    EXPECT(c, b.r_pfm == 1 && b.r_eqv == 0 && b.total == 1.0);
  }
  {
    const GiverRewardBreakdown b = giver_reward_from_similarities(true, true, 1.0, 1.0, true);
    EXPECT(c, b.r_pfm == 1 && b.r_eqv == 1 && b.r_adv == 0.0);
    EXPECT(c, std::abs(b.total - 2.0) <= 1e-9);
  }

  // Divergence components against independently computed cosines.
  const std::string kernel = "count the good subarrays with exactly kk distinct integers";
  const std::string revision =
      "count the good connected subgraphs with exactly kk distinct node labels";
  const std::string prev = "count the good subarrays";
  const std::vector<std::string> docs = {kernel, "an unrelated graph shortest path task"};
  const TfidfModel model = fit_tfidf(docs);
  const ProblemStructure structure = validate_problem_structure(
      "Description\nx\nInput\nx\nOutput\nx\nExamples\nx\nConstraints\nx\n");

  const double s_kernel = oracle_cosine(docs, kernel, revision);
  const double s_prev = oracle_cosine(docs, revision, prev);
  const GiverRewardBreakdown b =
      giver_reward(model, kernel, revision, prev, structure, formed(), true, false);
  EXPECT(c, std::abs(b.r_dvg - (1.0 - s_kernel)) <= 1e-9);
  EXPECT(c, std::abs(b.r_nvt - (1.0 - s_prev)) <= 1e-9);
  EXPECT(c, b.r_adv == 1.0);
  EXPECT(c, std::abs(b.total - (2.0 + (1.0 - s_kernel) + (1.0 - s_prev) + 1.0)) <= 1e-9);
}

void criterion_gate_chain(Criterion& c) {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 10000; ++trial) {
    const bool well = rng() % 2 == 0;
    std::optional<VerdictReport> verdict;
    if (well) {
      switch (rng() % 3) {
        case 0: verdict = verdict_of(false, Verdict::CompileError); break;
        case 1: verdict = verdict_of(true, Verdict::Failed); break;
        default: verdict = verdict_of(true, Verdict::Accepted); break;
      }
    }
    const SolverRewardBreakdown b = solver_reward(well ? formed() : unformed(), verdict);
    if (b.r_acc != 0 && b.r_cmp != 2) {
      c.failures.push_back("solver gate violated: r_acc nonzero without r_cmp=+2");
      return;
    }
    if (b.r_cmp != 0 && b.r_sfm != 1) {
      c.failures.push_back("solver gate violated: r_cmp nonzero without r_sfm=+1");
      return;
    }
  }
  for (int trial = 0; trial < 10000; ++trial) {
    const bool format_ok = rng() % 2 == 0;
    const bool equivalent = rng() % 2 == 0;
    const double s1 = static_cast<double>(rng() % 1001) / 1000.0;
    const double s2 = static_cast<double>(rng() % 1001) / 1000.0;
    const bool gate = format_ok && equivalent;
    const GiverRewardBreakdown b = giver_reward_from_similarities(
        format_ok, equivalent, s1, s2, gate ? std::optional<bool>(rng() % 2 == 0) : std::nullopt);
    if (b.r_eqv == 0 && (b.r_dvg != 0.0 || b.r_nvt != 0.0 || b.r_adv != 0.0)) {
      c.failures.push_back("giver gate violated: component nonzero while r_eqv=0");
      return;
    }
    if (b.r_pfm == 0 && b.r_eqv != 0) {
      c.failures.push_back("giver gate violated: r_eqv without r_pfm");
      return;
    }
  }
}

void criterion_grpo_math(Criterion& c) {
  std::mt19937 rng(202);

  // (a) mean-centering and shift invariance on 10^3 random groups
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t g = 2 + rng() % 8;
    std::vector<double> rewards(g);
    for (double& r : rewards) r = static_cast<double>(static_cast<int>(rng() % 1201) - 600) / 100.0;
    const auto adv = group_advantages(rewards);
    double sum = 0;
    for (double a : adv) sum += a;
    if (std::abs(sum) > 1e-9) {
      c.failures.push_back("advantages not mean-centered");
      return;
    }
    const double shift = static_cast<double>(static_cast<int>(rng() % 401) - 200) / 10.0;
    std::vector<double> shifted = rewards;
    for (double& r : shifted) r += shift;
    const auto adv2 = group_advantages(shifted);
    for (std::size_t i = 0; i < g; ++i) {
      if (std::abs(adv[i] - adv2[i]) > 1e-9) {
        c.failures.push_back("advantages not shift invariant");
        return;
      }
    }
  }

  // (b) surrogate is zero at the old policy
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t g = 2 + rng() % 5;
    std::vector<std::vector<double>> lps(g);
    std::vector<double> rewards(g);
    for (std::size_t i = 0; i < g; ++i) {
      const std::size_t len = 1 + rng() % 5;
      for (std::size_t t = 0; t < len; ++t) lps[i].push_back(-static_cast<double>(rng() % 400) / 100.0);
      rewards[i] = static_cast<double>(static_cast<int>(rng() % 13) - 6);
    }
    EXPECT(c, std::abs(clipped_surrogate(lps, lps, group_advantages(rewards), 0.2)) <= 1e-9);
  }

  // (c) analytic gradient vs central finite differences on 20+ fixtures
  const ToyVocabulary vocab({"t0", "t1", "t2", "t3", "t4", "t5", "t6", "t7"});
  GrpoConfig cfg;
  cfg.temperature = 0.9;
  static const std::vector<double> kRewardMenu = {6.0, 0.0, -1.0, 2.0};
  for (int fixture = 0; fixture < 20; ++fixture) {
    ToyPolicyParams params = ToyPolicyParams::uniform(8);
    for (auto& row : params.logits) {
      for (double& v : row) v = static_cast<double>(static_cast<int>(rng() % 200) - 100) / 100.0;
    }
    ToyPolicy policy(vocab, params);
    std::vector<GroupSample> groups;
    for (int g = 0; g < 2; ++g) {
      SamplingConfig sampling{cfg.temperature, 2 + static_cast<int>(rng() % 3),
                              3 + static_cast<int>(rng() % 2)};
      const std::string prompt = g == 0 ? "" : "t" + std::to_string(rng() % 8);
      const auto completions = policy.sample_group(prompt, sampling, rng());
      std::vector<double> rewards;
      for (std::size_t i = 0; i < completions.size(); ++i) {
        rewards.push_back(kRewardMenu[rng() % kRewardMenu.size()]);
      }
      groups.push_back(make_group_sample(prompt, completions, rewards));
    }
    ToyPolicyParams eval_point = params;
    for (auto& row : eval_point.logits) {
      for (double& v : row) v += static_cast<double>(static_cast<int>(rng() % 100) - 50) / 2000.0;
    }
    const ToyPolicyParams analytic = grpo_gradient(vocab, eval_point, groups, cfg);
    const ToyPolicyParams numeric = fd_gradient(vocab, eval_point, groups, cfg);
    double worst = 0;
    for (std::size_t cc = 0; cc < analytic.logits.size(); ++cc) {
      for (std::size_t v = 0; v < analytic.logits[cc].size(); ++v) {
        const double x = analytic.logits[cc][v];
        const double y = numeric.logits[cc][v];
        worst = std::max(worst, std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-6}));
      }
    }
    EXPECT(c, worst <= 1e-4);
  }

  // (d) all-equal rewards leave params bit-identical over 100 steps
  {
    ToyPolicy policy(vocab);
    SamplingConfig sampling{0.7, 3, 4};
    const auto completions = policy.sample_group("", sampling, 5);
    const auto group = make_group_sample("", completions, {2.0, 2.0, 2.0, 2.0});
    GrpoConfig step_cfg;
    step_cfg.learning_rate = 0.5;
    step_cfg.temperature = 0.7;
    ToyPolicyParams params = policy.params();
    for (int i = 0; i < 100; ++i) params = grpo_step(vocab, params, {group}, step_cfg);
    bool identical = true;
    for (std::size_t cc = 0; cc < params.logits.size(); ++cc) {
      for (std::size_t v = 0; v < params.logits[cc].size(); ++v) {
        identical &= params.logits[cc][v] == policy.params().logits[cc][v];
      }
    }
    EXPECT(c, identical);
  }
}

void criterion_judge(Criterion& c) {
  const Judge judge(fast_judge_config());
  const std::vector<TestCase> tests = {{"1\n", "1\n"}, {"2\n", "2\n"}, {"3\n", "3\n"}};

  const VerdictReport good = judge.judge(kEchoProgram, tests, fast_limits());
  EXPECT(c, good.aggregate == Verdict::Accepted);

  const VerdictReport bad = judge.judge(kSyntaxErrorProgram, tests, fast_limits());
  EXPECT(c, bad.aggregate == Verdict::CompileError);
  EXPECT(c, bad.per_test.empty());
  EXPECT(c, !bad.compile_log.empty());

  const VerdictReport off = judge.judge(kWrongOnTwoProgram, tests, fast_limits());
  EXPECT(c, off.aggregate == Verdict::Failed);
  EXPECT(c, off.per_test.size() == 3);
  EXPECT(c, off.per_test[0].outcome == TestOutcome::Pass);
  EXPECT(c, off.per_test[1].outcome == TestOutcome::WrongAnswer);
  EXPECT(c, off.per_test[2].outcome == TestOutcome::Pass);

  ResourceLimits limits = fast_limits();
  limits.run_timeout_per_test_s = 1.0;
  const VerdictReport loop = judge.judge(kInfiniteLoopProgram, {{"1\n", "1\n"}}, limits);
  EXPECT(c, loop.aggregate == Verdict::Failed);
  EXPECT(c, loop.per_test.size() == 1);
  EXPECT(c, loop.per_test[0].outcome == TestOutcome::TimeLimit);
  EXPECT(c, loop.per_test[0].runtime_s >= 1.0);
  EXPECT(c, loop.per_test[0].runtime_s <= 1.5);

  const VerdictReport again = judge.judge(kWrongOnTwoProgram, tests, fast_limits());
  EXPECT(c, again.aggregate == off.aggregate);
  EXPECT(c, again.per_test.size() == off.per_test.size());
  for (std::size_t i = 0; i < again.per_test.size(); ++i) {
    EXPECT(c, again.per_test[i].outcome == off.per_test[i].outcome);
  }
}

void criterion_pass_at_k(Criterion& c) {
  EXPECT(c, pass_at_k(10, 0, 3) == 0.0);
  EXPECT(c, pass_at_k(10, 10, 3) == 1.0);
  EXPECT(c, pass_at_k(128, 64, 1) == 0.5);
  EXPECT(c, std::abs(pass_at_k(10, 3, 3) - 17.0 / 24.0) <= 1e-12);
  EXPECT(c, std::abs(pass_at_k(10, 3, 3) - binomial_pass_at_k(10, 3, 3)) <= 1e-12);
}

void criterion_dataset_pipeline(Criterion& c) {
  const Judge judge(fast_judge_config());
  StubSynthesisOracle oracle([](const std::string& kernel) -> SynthesizedSources {
    if (kernel.find("BROKEN_GENERATOR") != std::string::npos) {
      return {kSyntaxErrorProgram, kEchoProgram};
    }
    if (kernel.find("BROKEN_REFERENCE") != std::string::npos) {
      return {kSeedPrinterGenerator, kReturnOneProgram};  // compiles, crashes at run
    }
    return {kSeedPrinterGenerator, kEchoProgram};
  });

  const std::vector<std::string> raw = {
      "echo task one", "echo task two", "BROKEN_GENERATOR task", "echo task three",
      "BROKEN_REFERENCE task", "echo task four"};
  const CorpusBuildResult result = build_corpus(raw, oracle, judge, 2, 11);

  EXPECT(c, result.corpus.size() == 4);
  EXPECT(c, result.reports.size() == 6);
  EXPECT(c, !result.reports[0].discarded);
  EXPECT(c, !result.reports[1].discarded);
  EXPECT(c, result.reports[2].discarded);
  EXPECT(c, result.reports[2].failure_stage == FailureStage::GeneratorCompile);
  EXPECT(c, !result.reports[3].discarded);
  EXPECT(c, result.reports[4].discarded);
  EXPECT(c, result.reports[4].failure_stage == FailureStage::ReferenceRun);
  EXPECT(c, !result.reports[5].discarded);

  // Self-consistency of the retained triplets.
  for (const ProblemTriplet& t : result.corpus) {
    EXPECT(c, !t.test_cases.empty());
    EXPECT(c, judge.judge(t.reference_source, t.test_cases, fast_limits()).accepted());
  }
}

void criterion_adversarial_run(Criterion& c) {
  auto run_once = [](const std::filesystem::path& out, TrainingLog* log_out) {
    std::vector<ProblemTriplet> corpus = {echo_triplet("a1"), echo_triplet("a2")};
    Judge judge(fast_judge_config());
    StubEquivalenceOracle oracle;
    LoopServices services;
    services.judge = &judge;
    services.oracle = &oracle;
    services.teacher_sampling = SamplingConfig{0.7, 500, 3};
    services.student_sampling = SamplingConfig{0.7, 500, 3};

    TrainingSchedule schedule;
    schedule.iterations = 3;
    schedule.teacher_steps = 4;
    schedule.student_steps = 10;
    schedule.problems_per_step = 1;
    schedule.seed = 77;

    auto snapshot = std::make_shared<const std::vector<ProblemTriplet>>(corpus);
    // Engineered accuracy schedule: the student cannot solve anything until
    // iteration 3, then solves everything.
    Trainer trainer(corpus, std::make_shared<ScriptedPolicy>(demo_teacher_script(snapshot)),
                    std::make_shared<ScriptedPolicy>(demo_student_script(snapshot, 3)), schedule,
                    services, out);
    *log_out = trainer.run();
    return read_text_file(out / "run_log.jsonl");
  };

  TempDir dir("krl-acc7-");
  TrainingLog log_a, log_b;
  const std::string bytes_a = run_once(dir.path() / "a", &log_a);
  const std::string bytes_b = run_once(dir.path() / "b", &log_b);
  EXPECT(c, !bytes_a.empty());
  EXPECT(c, bytes_a == bytes_b);

  EXPECT(c, log_a.summaries.size() == 3 * (4 + 10));
  const double adv_early = log_a.mean_component(Phase::Teacher, 1, "r_adv");
  const double adv_late = log_a.mean_component(Phase::Teacher, 3, "r_adv");
  EXPECT(c, adv_late < adv_early);
  EXPECT(c, adv_early == 1.0);  // iteration 1: equivalent revisions, student always fails
  EXPECT(c, adv_late == 0.0);   // iteration 3: student always solves
}

void criterion_toy_learning(Criterion& c) {
  const ToyVocabulary vocab({"pp", "qq", "aa", "bb", "cc", "dd"});
  struct Task {
    std::string prompt;
    std::vector<std::string> target;
  };
  const std::vector<Task> tasks = {{"pp", {"aa", "bb"}}, {"qq", {"cc", "dd"}}};

  GrpoConfig cfg;
  cfg.temperature = 1.0;
  cfg.learning_rate = 0.5;
  SamplingConfig sampling{1.0, 2, 6};

  ToyPolicy policy(vocab);  // uniform start
  std::vector<double> initial;
  for (const Task& task : tasks) {
    initial.push_back(policy.sequence_probability(task.prompt, task.target, cfg.temperature));
  }

  for (int step = 0; step < 200; ++step) {
    std::vector<GroupSample> groups;
    for (std::size_t p = 0; p < tasks.size(); ++p) {
      const std::uint64_t seed = derive_seed(31, {static_cast<std::uint64_t>(step), p});
      const auto completions = policy.sample_group(tasks[p].prompt, sampling, seed);
      std::vector<double> rewards;
      for (const Completion& completion : completions) {
        // Accepted exactly when the emitted sequence is the target.
        rewards.push_back(completion.tokens == tasks[p].target ? 6.0 : -1.0);
      }
      groups.push_back(make_group_sample(tasks[p].prompt, completions, rewards));
    }
    policy.set_params(grpo_step(policy.vocabulary(), policy.params(), groups, cfg));
  }

  for (std::size_t p = 0; p < tasks.size(); ++p) {
    const double now = policy.sequence_probability(tasks[p].prompt, tasks[p].target, cfg.temperature);
    EXPECT(c, now >= 10.0 * initial[p]);
  }
}

struct CriterionSpec {
  int number;
  const char* name;
  double budget_s;
  std::function<void(Criterion&)> body;
};

}  // namespace

int main() {
  const std::vector<CriterionSpec> criteria = {
      {1, "reward tables exact", 1.0, criterion_reward_tables},
      {2, "gate-chain property suite (10^4 randomized cases)", 10.0, criterion_gate_chain},
      {3, "GRPO math (advantages, surrogate, gradient check, fixed point)", 30.0,
       criterion_grpo_math},
      {4, "judge correctness and determinism", 60.0, criterion_judge},
      {5, "pass@k estimator", 1.0, criterion_pass_at_k},
      {6, "dataset pipeline discard rule (6 problems: 4 valid, 2 broken)", 30.0,
       criterion_dataset_pipeline},
      {7, "desk-scale adversarial run (reproducible, adversarial reward falls)", 120.0,
       criterion_adversarial_run},
      {8, "toy-policy learning sanity (>=10x probability gain)", 120.0, criterion_toy_learning},
  };

  int failed = 0;
  for (const CriterionSpec& spec : criteria) {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    try {
      spec.body(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > spec.budget_s) {
      std::ostringstream msg;
      msg << "runtime " << elapsed << " s exceeds the " << spec.budget_s << " s budget";
      c.failures.push_back(msg.str());
    }
    if (c.failures.empty()) {
      std::printf("[PASS] criterion %d: %s (%.2f s)\n", spec.number, spec.name, elapsed);
    } else {
      ++failed;
      std::printf("[FAIL] criterion %d: %s (%.2f s)\n", spec.number, spec.name, elapsed);
      for (const std::string& f : c.failures) std::printf("       - %s\n", f.c_str());
    }
  }
  if (failed > 0) {
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
