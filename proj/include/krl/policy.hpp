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
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "krl/http_client.hpp"

namespace krl {

enum class Phase { Teacher, Student };

const char* to_string(Phase phase);

// One sampled completion. logprobs are per-token log-probabilities under the
// generating policy; absent for backends that cannot report them (such
// completions can drive reward logging but not toy GRPO updates).
struct Completion {
  std::vector<std::string> tokens;
  std::string text;
  std::optional<std::vector<double>> logprobs;
};

struct SamplingConfig {
  double temperature = 0.7;
  int max_completion_length = 1700;
  int group_size = 24;

  static SamplingConfig teacher_defaults() { return {0.7, 2000, 21}; }
  static SamplingConfig student_defaults() { return {0.7, 1700, 24}; }
};

// Where in the training loop a sample is being drawn; the loop sets this
// before sampling so scripted fixtures can key behavior off it.
struct StepContext {
  int iteration = 0;
  Phase phase = Phase::Teacher;
  int step = 0;
};

class Policy {
 public:
  virtual ~Policy() = default;

  // Exactly cfg.group_size completions, each at most
  // cfg.max_completion_length tokens. Deterministic per seed for the scripted
  // and toy backends.
  virtual std::vector<Completion> sample_group(const std::string& prompt,
                                               const SamplingConfig& cfg, std::uint64_t seed) = 0;

  virtual void on_step(const StepContext&) {}
};

// Deterministic policy defined by a pure function of (context, prompt, sample
// index). Used in tests and desk-scale loop runs.
class ScriptedPolicy : public Policy {
 public:
  using ScriptFn = std::function<std::string(const StepContext&, const std::string& prompt,
                                             int sample_index)>;

  explicit ScriptedPolicy(ScriptFn script);

  std::vector<Completion> sample_group(const std::string& prompt, const SamplingConfig& cfg,
                                       std::uint64_t seed) override;
  void on_step(const StepContext& ctx) override { ctx_ = ctx; }

  const StepContext& context() const { return ctx_; }

 private:
  ScriptFn script_;
  StepContext ctx_;
};

// Closed whitespace vocabulary of at most 64 tokens.
class ToyVocabulary {
 public:
  explicit ToyVocabulary(std::vector<std::string> tokens);

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::string& token(int id) const { return tokens_[static_cast<std::size_t>(id)]; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  // Throws UnknownTokenError.
  int id(const std::string& token) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// Bigram policy parameters: one logit row per context, where context 0 is the
// sequence start and context 1+v follows token v. softmax(row / temperature)
// is the next-token distribution.
struct ToyPolicyParams {
  std::vector<std::vector<double>> logits;  // (V+1) x V

  static ToyPolicyParams uniform(int vocab_size);
};

// Differentiable softmax policy over the toy vocabulary; the backend that
// exercises the GRPO math end to end. The context feature is the previous
// token only (the last prompt token for the first generated position).
class ToyPolicy : public Policy {
 public:
  ToyPolicy(ToyVocabulary vocab, ToyPolicyParams params);
  // Uniform start: all logits zero.
  explicit ToyPolicy(ToyVocabulary vocab);

  std::vector<Completion> sample_group(const std::string& prompt, const SamplingConfig& cfg,
                                       std::uint64_t seed) override;

  // Log-probabilities of the given tokens after the prompt, under the
  // temperature-scaled softmax. Throws UnknownTokenError for completion
  // tokens outside the vocabulary; an out-of-vocabulary prompt ending maps to
  // the start context.
  std::vector<double> logprobs(const std::string& prompt, const std::vector<std::string>& tokens,
                               double temperature) const;

  // Probability of emitting exactly this token sequence after the prompt.
  double sequence_probability(const std::string& prompt, const std::vector<std::string>& tokens,
                              double temperature) const;

  const ToyVocabulary& vocabulary() const { return vocab_; }
  const ToyPolicyParams& params() const { return params_; }
  void set_params(ToyPolicyParams params);

  // Optional stop token: sampling it ends the completion (excluded from the
  // output, so an immediate stop yields an empty completion).
  void set_stop_token(const std::string& token);

 private:
  int context_for_prompt(const std::string& prompt) const;

  ToyVocabulary vocab_;
  ToyPolicyParams params_;
  std::optional<int> stop_id_;
};

// Chat-completion endpoint backend.
class RemotePolicy : public Policy {
 public:
  explicit RemotePolicy(ChatEndpointConfig config);

  std::vector<Completion> sample_group(const std::string& prompt, const SamplingConfig& cfg,
                                       std::uint64_t seed) override;

 private:
  ChatClient client_;
};

}  // namespace krl
