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

#include "krl/grpo.hpp"

#include <algorithm>
#include <cmath>

#include "krl/errors.hpp"
#include "krl/util.hpp"

namespace krl {

std::vector<double> group_advantages(const std::vector<double>& rewards) {
  if (rewards.size() < 2) {
    throw DegenerateGroupError("a group needs at least two completions; got " +
                               std::to_string(rewards.size()));
  }
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(rewards.size());

  std::vector<double> advantages;
  advantages.reserve(rewards.size());
  for (double r : rewards) advantages.push_back(r - mean);
  return advantages;
}

GroupSample make_group_sample(const std::string& prompt,
                              const std::vector<Completion>& completions,
                              const std::vector<double>& rewards) {
  if (completions.size() != rewards.size()) {
    throw ShapeMismatchError("one reward per completion required");
  }
  GroupSample g;
  g.prompt = prompt;
  g.rewards = rewards;
  g.advantages = group_advantages(rewards);
  for (const Completion& c : completions) {
    if (!c.logprobs.has_value()) {
      throw ContractViolation("completion lacks logprobs; ratio unavailable for GRPO");
    }
    if (c.logprobs->size() != c.tokens.size()) {
      throw ShapeMismatchError("logprobs/token length mismatch");
    }
    g.completions.push_back(c.tokens);
    g.old_logprobs.push_back(*c.logprobs);
  }
  return g;
}

double clipped_surrogate(const std::vector<std::vector<double>>& new_logprobs,
                         const std::vector<std::vector<double>>& old_logprobs,
                         const std::vector<double>& advantages, double epsilon,
                         bool length_normalization) {
  const std::size_t g = advantages.size();
  if (new_logprobs.size() != g || old_logprobs.size() != g) {
    throw ShapeMismatchError("group size mismatch between logprobs and advantages");
  }

  double objective = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    if (new_logprobs[i].size() != old_logprobs[i].size()) {
      throw ShapeMismatchError("completion length mismatch between new and old logprobs");
    }
    if (new_logprobs[i].empty()) continue;
    const double adv = advantages[i];
    double completion_sum = 0.0;
    for (std::size_t t = 0; t < new_logprobs[i].size(); ++t) {
      if (!std::isfinite(old_logprobs[i][t])) {
        throw ContractViolation("old logprobs must be finite");
      }
      const double ratio = std::exp(new_logprobs[i][t] - old_logprobs[i][t]);
      const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
      completion_sum += std::min(ratio * adv, clipped * adv);
    }
    if (length_normalization) {
      completion_sum /= static_cast<double>(new_logprobs[i].size());
    }
    objective += completion_sum;
  }
  return objective / static_cast<double>(g);
}

namespace {

void check_param_shape_against(const ToyPolicyParams& params, int vocab_size) {
  if (params.logits.size() != static_cast<std::size_t>(vocab_size) + 1) {
    throw ShapeMismatchError("params must have vocab_size + 1 context rows");
  }
  for (const auto& row : params.logits) {
    if (row.size() != static_cast<std::size_t>(vocab_size)) {
      throw ShapeMismatchError("each context row must have vocab_size logits");
    }
  }
}

void check_group(const GroupSample& group, const GrpoConfig& cfg) {
  if (group.completions.size() < 2) {
    throw DegenerateGroupError("a group needs at least two completions");
  }
  if (cfg.group_size > 0 && static_cast<int>(group.completions.size()) != cfg.group_size) {
    throw ShapeMismatchError("group size differs from the configured g");
  }
  if (group.old_logprobs.size() != group.completions.size() ||
      group.advantages.size() != group.completions.size()) {
    throw ShapeMismatchError("inconsistent GroupSample field sizes");
  }
}

std::vector<std::vector<double>> new_logprobs_for(const ToyVocabulary& vocab,
                                                  const ToyPolicyParams& params,
                                                  const GroupSample& group,
                                                  const GrpoConfig& cfg) {
  ToyPolicy policy(vocab, params);
  std::vector<std::vector<double>> out;
  out.reserve(group.completions.size());
  for (const auto& tokens : group.completions) {
    out.push_back(policy.logprobs(group.prompt, tokens, cfg.temperature));
  }
  return out;
}

}  // namespace

double grpo_objective(const ToyVocabulary& vocab, const ToyPolicyParams& params,
                      const std::vector<GroupSample>& groups, const GrpoConfig& cfg) {
  double total = 0.0;
  for (const GroupSample& group : groups) {
    check_group(group, cfg);
    total += clipped_surrogate(new_logprobs_for(vocab, params, group, cfg), group.old_logprobs,
                               group.advantages, cfg.epsilon, cfg.length_normalization);
  }
  return groups.empty() ? 0.0 : total / static_cast<double>(groups.size());
}

ToyPolicyParams grpo_gradient(const ToyVocabulary& vocab, const ToyPolicyParams& params,
                              const std::vector<GroupSample>& groups, const GrpoConfig& cfg) {
  const int vocab_size = vocab.size();
  ToyPolicyParams grad = ToyPolicyParams::uniform(vocab_size);
  if (groups.empty()) return grad;

  check_param_shape_against(params, vocab_size);
  const double group_weight = 1.0 / static_cast<double>(groups.size());

  for (const GroupSample& group : groups) {
    check_group(group, cfg);
    const double completion_weight =
        group_weight / static_cast<double>(group.completions.size());

    const std::vector<std::string> prompt_tokens = split_whitespace(group.prompt);
    const int start_context = prompt_tokens.empty() ? 0 : 1 + vocab.id(prompt_tokens.back());

    for (std::size_t i = 0; i < group.completions.size(); ++i) {
      const auto& tokens = group.completions[i];
      const auto& old_lps = group.old_logprobs[i];
      if (tokens.size() != old_lps.size()) {
        throw ShapeMismatchError("logprobs/token length mismatch");
      }
      if (tokens.empty()) continue;
      const double adv = group.advantages[i];
      const double token_weight =
          cfg.length_normalization
              ? completion_weight / static_cast<double>(tokens.size())
              : completion_weight;

      int context = start_context;
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        const int token_id = vocab.id(tokens[t]);
        const auto& row = params.logits[static_cast<std::size_t>(context)];

        // softmax probabilities under the scaled logits at this context
        double max_v = -1e300;
        for (double v : row) max_v = std::max(max_v, v / cfg.temperature);
        double z = 0.0;
        std::vector<double> p(row.size());
        for (std::size_t v = 0; v < row.size(); ++v) {
          p[v] = std::exp(row[v] / cfg.temperature - max_v);
          z += p[v];
        }
        const double new_lp = std::log(p[static_cast<std::size_t>(token_id)] / z);
        for (double& pv : p) pv /= z;

        const double ratio = std::exp(new_lp - old_lps[t]);
        // The min selects the unclipped branch unless the clipped branch is
        // strictly better-bounded: for adv > 0 the gradient flows while
        // ratio <= 1+eps, for adv < 0 while ratio >= 1-eps.
        const bool gradient_flows = (adv > 0 && ratio <= 1.0 + cfg.epsilon) ||
                                    (adv < 0 && ratio >= 1.0 - cfg.epsilon);
        if (gradient_flows) {
          // d(ratio * adv)/d logit[c][v] = adv * ratio * (1[v=token] - p_v)/T
          const double coeff = token_weight * adv * ratio / cfg.temperature;
          auto& grad_row = grad.logits[static_cast<std::size_t>(context)];
          for (std::size_t v = 0; v < grad_row.size(); ++v) {
            const double indicator = (static_cast<int>(v) == token_id) ? 1.0 : 0.0;
            grad_row[v] += coeff * (indicator - p[v]);
          }
        }
        context = 1 + token_id;
      }
    }
  }
  return grad;
}

ToyPolicyParams grpo_step(const ToyVocabulary& vocab, const ToyPolicyParams& params,
                          const std::vector<GroupSample>& groups, const GrpoConfig& cfg) {
  const ToyPolicyParams grad = grpo_gradient(vocab, params, groups, cfg);
  ToyPolicyParams next = params;
  for (std::size_t c = 0; c < next.logits.size(); ++c) {
    for (std::size_t v = 0; v < next.logits[c].size(); ++v) {
      next.logits[c][v] += cfg.learning_rate * grad.logits[c][v];
    }
  }
  return next;
}

}  // namespace krl
