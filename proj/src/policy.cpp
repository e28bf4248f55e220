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

#include "krl/policy.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "krl/errors.hpp"
#include "krl/util.hpp"

namespace krl {

const char* to_string(Phase phase) { return phase == Phase::Teacher ? "teacher" : "student"; }

namespace {

void check_sampling_config(const SamplingConfig& cfg) {
  if (cfg.group_size < 1) throw ContractViolation("group_size must be >= 1");
  if (cfg.temperature <= 0) throw ContractViolation("temperature must be positive");
  if (cfg.max_completion_length < 1) {
    throw ContractViolation("max_completion_length must be >= 1");
  }
}

// log softmax(logits / temperature)
std::vector<double> log_softmax_scaled(const std::vector<double>& logits, double temperature) {
  std::vector<double> scaled(logits.size());
  double max_v = -1e300;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    scaled[i] = logits[i] / temperature;
    max_v = std::max(max_v, scaled[i]);
  }
  double sum = 0.0;
  for (double v : scaled) sum += std::exp(v - max_v);
  const double log_z = max_v + std::log(sum);
  for (double& v : scaled) v -= log_z;
  return scaled;
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ScriptedPolicy::ScriptedPolicy(ScriptFn script) : script_(std::move(script)) {}

std::vector<Completion> ScriptedPolicy::sample_group(const std::string& prompt,
                                                     const SamplingConfig& cfg,
                                                     std::uint64_t /*seed*/) {
  check_sampling_config(cfg);
  std::vector<Completion> out;
  out.reserve(static_cast<std::size_t>(cfg.group_size));
  for (int i = 0; i < cfg.group_size; ++i) {
    Completion c;
    c.text = script_(ctx_, prompt, i);
    c.tokens = split_whitespace(c.text);
    if (static_cast<int>(c.tokens.size()) > cfg.max_completion_length) {
      c.tokens.resize(static_cast<std::size_t>(cfg.max_completion_length));
    }
    out.push_back(std::move(c));
  }
  return out;
}

ToyVocabulary::ToyVocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty() || tokens_.size() > 64) {
    throw ConfigError("toy vocabulary must have 1..64 tokens");
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw ConfigError("duplicate token in toy vocabulary: " + tokens_[i]);
    }
  }
}

int ToyVocabulary::id(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) throw UnknownTokenError("token not in vocabulary: " + token);
  return it->second;
}

ToyPolicyParams ToyPolicyParams::uniform(int vocab_size) {
  ToyPolicyParams p;
  p.logits.assign(static_cast<std::size_t>(vocab_size) + 1,
                  std::vector<double>(static_cast<std::size_t>(vocab_size), 0.0));
  return p;
}

namespace {

void check_param_shape(const ToyPolicyParams& params, int vocab_size) {
  if (params.logits.size() != static_cast<std::size_t>(vocab_size) + 1) {
    throw ShapeMismatchError("params must have vocab_size + 1 context rows");
  }
  for (const auto& row : params.logits) {
    if (row.size() != static_cast<std::size_t>(vocab_size)) {
      throw ShapeMismatchError("each context row must have vocab_size logits");
    }
  }
}

}  // namespace

ToyPolicy::ToyPolicy(ToyVocabulary vocab, ToyPolicyParams params)
    : vocab_(std::move(vocab)), params_(std::move(params)) {
  check_param_shape(params_, vocab_.size());
}

ToyPolicy::ToyPolicy(ToyVocabulary vocab)
    : vocab_(std::move(vocab)), params_(ToyPolicyParams::uniform(vocab_.size())) {}

void ToyPolicy::set_params(ToyPolicyParams params) {
  check_param_shape(params, vocab_.size());
  params_ = std::move(params);
}

void ToyPolicy::set_stop_token(const std::string& token) { stop_id_ = vocab_.id(token); }

int ToyPolicy::context_for_prompt(const std::string& prompt) const {
  const std::vector<std::string> prompt_tokens = split_whitespace(prompt);
  if (prompt_tokens.empty()) return 0;
  // Prompts come from arbitrary text; an out-of-vocabulary last token maps to
  // the start context. Sampling and logprobs share this rule, so GRPO ratios
  // stay consistent.
  auto it = std::find(vocab_.tokens().begin(), vocab_.tokens().end(), prompt_tokens.back());
  if (it == vocab_.tokens().end()) return 0;
  return 1 + static_cast<int>(it - vocab_.tokens().begin());
}

std::vector<Completion> ToyPolicy::sample_group(const std::string& prompt,
                                                const SamplingConfig& cfg, std::uint64_t seed) {
  check_sampling_config(cfg);
  const int start_context = context_for_prompt(prompt);

  std::vector<Completion> out;
  out.reserve(static_cast<std::size_t>(cfg.group_size));
  for (int i = 0; i < cfg.group_size; ++i) {
    std::mt19937_64 rng(derive_seed(seed, {stream_tag("policy-sampling"),
                                           static_cast<std::uint64_t>(i)}));
    Completion c;
    std::vector<double> lps;
    int context = start_context;
    for (int t = 0; t < cfg.max_completion_length; ++t) {
      const std::vector<double> log_probs =
          log_softmax_scaled(params_.logits[static_cast<std::size_t>(context)], cfg.temperature);
      // Inverse-CDF sample; platform independent.
      const double u = next_unit(rng);
      double acc = 0.0;
      int chosen = vocab_.size() - 1;
      for (int v = 0; v < vocab_.size(); ++v) {
        acc += std::exp(log_probs[static_cast<std::size_t>(v)]);
        if (u < acc) {
          chosen = v;
          break;
        }
      }
      if (stop_id_ && chosen == *stop_id_) break;
      c.tokens.push_back(vocab_.token(chosen));
      lps.push_back(log_probs[static_cast<std::size_t>(chosen)]);
      context = 1 + chosen;
    }
    c.logprobs = std::move(lps);
    for (std::size_t t = 0; t < c.tokens.size(); ++t) {
      if (t > 0) c.text.push_back(' ');
      c.text.append(c.tokens[t]);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<double> ToyPolicy::logprobs(const std::string& prompt,
                                        const std::vector<std::string>& tokens,
                                        double temperature) const {
  if (temperature <= 0) throw ContractViolation("temperature must be positive");
  std::vector<double> out;
  out.reserve(tokens.size());
  int context = context_for_prompt(prompt);
  for (const std::string& token : tokens) {
    const int id = vocab_.id(token);
    const std::vector<double> log_probs =
        log_softmax_scaled(params_.logits[static_cast<std::size_t>(context)], temperature);
    out.push_back(log_probs[static_cast<std::size_t>(id)]);
    context = 1 + id;
  }
  return out;
}

double ToyPolicy::sequence_probability(const std::string& prompt,
                                       const std::vector<std::string>& tokens,
                                       double temperature) const {
  double log_p = 0.0;
  for (double lp : logprobs(prompt, tokens, temperature)) log_p += lp;
  return std::exp(log_p);
}

RemotePolicy::RemotePolicy(ChatEndpointConfig config) : client_(std::move(config)) {}

std::vector<Completion> RemotePolicy::sample_group(const std::string& prompt,
                                                   const SamplingConfig& cfg,
                                                   std::uint64_t /*seed*/) {
  check_sampling_config(cfg);
  const std::vector<ChatChoice> choices =
      client_.complete(prompt, cfg.temperature, cfg.max_completion_length, cfg.group_size);
  if (static_cast<int>(choices.size()) != cfg.group_size) {
    throw BackendUnavailableError("endpoint returned " + std::to_string(choices.size()) +
                                  " choices, expected " + std::to_string(cfg.group_size));
  }
  std::vector<Completion> out;
  out.reserve(choices.size());
  for (const ChatChoice& choice : choices) {
    Completion c;
    c.text = choice.text;
    if (choice.tokens) {
      c.tokens = *choice.tokens;
      c.logprobs = choice.logprobs;  // same length by construction
    } else {
      c.tokens = split_whitespace(choice.text);
      // No per-token logprobs from the endpoint: the ratio is unavailable and
      // this group cannot drive toy GRPO updates.
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace krl
