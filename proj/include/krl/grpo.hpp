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

#include <string>
#include <vector>

#include "krl/policy.hpp"

namespace krl {

// A prompt with its g sampled completions, sequence-level rewards, the
// per-token log-probabilities under the sampling policy, and the group
// advantages (mean-centered rewards, broadcast to every token of their
// completion).
struct GroupSample {
  std::string prompt;
  std::vector<std::vector<std::string>> completions;  // tokens per completion
  std::vector<double> rewards;
  std::vector<std::vector<double>> old_logprobs;
  std::vector<double> advantages;
};

struct GrpoConfig {
  double epsilon = 0.2;          // clip radius
  double learning_rate = 1e-6;   // plain ascent, no gradient clipping
  int group_size = 0;            // 0 = accept any group size >= 2
  double temperature = 0.7;      // softmax scale the completions were sampled at
  // The displayed objective averages per-completion token sums by 1/|o_i|;
  // this flag allows dropping that factor for ablation.
  bool length_normalization = true;
};

// Unstandardized group-relative advantages: R_i - mean(R). No division by the
// group standard deviation. Groups need at least two members.
std::vector<double> group_advantages(const std::vector<double>& rewards);

// Builds a GroupSample from sampled completions; completions must carry
// logprobs (ContractViolation otherwise).
GroupSample make_group_sample(const std::string& prompt, const std::vector<Completion>& completions,
                              const std::vector<double>& rewards);

// Token-level clipped surrogate:
//   (1/g) sum_i (1/|o_i|) sum_t min(r_it * A_i, clip(r_it, 1-eps, 1+eps) * A_i)
// with r_it = exp(new - old). No KL term, no reward standardization.
double clipped_surrogate(const std::vector<std::vector<double>>& new_logprobs,
                         const std::vector<std::vector<double>>& old_logprobs,
                         const std::vector<double>& advantages, double epsilon,
                         bool length_normalization = true);

// Surrogate value for a toy policy at the given parameters, averaged over
// groups.
double grpo_objective(const ToyVocabulary& vocab, const ToyPolicyParams& params,
                      const std::vector<GroupSample>& groups, const GrpoConfig& cfg);

// Exact analytic gradient of grpo_objective with respect to every logit.
// Tokens on a binding clipped branch contribute zero gradient.
ToyPolicyParams grpo_gradient(const ToyVocabulary& vocab, const ToyPolicyParams& params,
                              const std::vector<GroupSample>& groups, const GrpoConfig& cfg);

// One gradient-ascent application: params + learning_rate * gradient. The
// input is left unchanged.
ToyPolicyParams grpo_step(const ToyVocabulary& vocab, const ToyPolicyParams& params,
                          const std::vector<GroupSample>& groups, const GrpoConfig& cfg);

}  // namespace krl
