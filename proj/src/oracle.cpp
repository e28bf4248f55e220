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

#include "krl/oracle.hpp"

#include <utility>

#include "krl/errors.hpp"
#include "krl/util.hpp"

namespace krl {

StubEquivalenceOracle::StubEquivalenceOracle()
    : reply_([](const std::string& kernel, const std::string& revision) -> std::string {
        if (revision.find(trim(kernel)) != std::string::npos) {
          return "EQUIVALENT the revision preserves the kernel statement verbatim";
        }
        return "NOT_EQUIVALENT the revision does not preserve the kernel statement";
      }) {}

StubEquivalenceOracle::StubEquivalenceOracle(ReplyFn reply) : reply_(std::move(reply)) {}

std::string StubEquivalenceOracle::judge_equivalence(const std::string& kernel_text,
                                                     const std::string& revision_text) {
  return reply_(kernel_text, revision_text);
}

namespace {

constexpr const char* kEquivalencePromptTemplate =
    "You compare two programming problem statements.\n"
    "Reply with a single leading token: EQUIVALENT if every program that solves one\n"
    "statement solves the other on identical input/output behavior, otherwise\n"
    "NOT_EQUIVALENT. After the token, give a short reason.\n\n"
    "Original statement:\n{kernel}\n\nRewritten statement:\n{revision}\n";

std::string fill_template(std::string text, const std::string& kernel, const std::string& revision) {
  const auto replace_one = [&](const std::string& key, const std::string& value) {
    const std::size_t pos = text.find(key);
    if (pos != std::string::npos) text.replace(pos, key.size(), value);
  };
  replace_one("{kernel}", kernel);
  replace_one("{revision}", revision);
  return text;
}

}  // namespace

RemoteEquivalenceOracle::RemoteEquivalenceOracle(ChatEndpointConfig config)
    : client_(std::move(config)) {}

std::string RemoteEquivalenceOracle::judge_equivalence(const std::string& kernel_text,
                                                       const std::string& revision_text) {
  const std::string prompt = fill_template(kEquivalencePromptTemplate, kernel_text, revision_text);
  try {
    auto choices = client_.complete(prompt, 0.0, 512, 1);
    if (choices.empty()) throw OracleUnavailableError("equivalence oracle returned no choices");
    return choices.front().text;
  } catch (const BackendUnavailableError& e) {
    throw OracleUnavailableError(e.what());
  } catch (const RateLimitedError& e) {
    throw OracleUnavailableError(e.what());
  }
}

StubSynthesisOracle::StubSynthesisOracle(SynthFn fn) : fn_(std::move(fn)) {}

SynthesizedSources StubSynthesisOracle::synthesize(const std::string& kernel_text) {
  return fn_(kernel_text);
}

namespace {

constexpr const char* kSynthesisPromptTemplate =
    "For the programming problem below, produce two C++ programs as two fenced\n"
    "code blocks, in this order:\n"
    "1. a test-case generator that takes one integer seed argument and prints a\n"
    "   random constraint-compliant input on stdout, and\n"
    "2. a reference solution reading stdin and writing stdout.\n\n"
    "Problem:\n{kernel}\n";

// All fenced code blocks in order of appearance.
std::vector<std::string> extract_fenced_blocks(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = text.find("```", pos);
    if (open == std::string::npos) break;
    std::size_t body = text.find('\n', open);
    if (body == std::string::npos) break;
    ++body;
    std::size_t close = text.find("```", body);
    if (close == std::string::npos) break;
    std::string block = text.substr(body, close - body);
    if (!block.empty() && block.back() == '\n') block.pop_back();
    out.push_back(std::move(block));
    pos = text.find('\n', close);
    if (pos == std::string::npos) break;
  }
  return out;
}

}  // namespace

RemoteSynthesisOracle::RemoteSynthesisOracle(ChatEndpointConfig config)
    : client_(std::move(config)) {}

SynthesizedSources RemoteSynthesisOracle::synthesize(const std::string& kernel_text) {
  const std::string prompt = fill_template(kSynthesisPromptTemplate, kernel_text, "");
  std::vector<ChatChoice> choices;
  try {
    choices = client_.complete(prompt, 0.0, 4096, 1);
  } catch (const BackendUnavailableError& e) {
    throw OracleUnavailableError(e.what());
  } catch (const RateLimitedError& e) {
    throw OracleUnavailableError(e.what());
  }
  if (choices.empty()) throw OracleUnavailableError("synthesis oracle returned no choices");
  const auto blocks = extract_fenced_blocks(choices.front().text);
  if (blocks.size() < 2) {
    throw OracleMalformedReplyError("synthesis reply must contain two fenced code blocks");
  }
  return SynthesizedSources{blocks[0], blocks[1]};
}

}  // namespace krl
