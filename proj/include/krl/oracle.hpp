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

#include <functional>
#include <memory>
#include <string>

#include "krl/http_client.hpp"

namespace krl {

// Judgment service deciding whether a rewritten problem is computationally
// equivalent to its kernel. Implementations return the raw reply text; the
// reward engine parses the leading EQUIVALENT / NOT_EQUIVALENT verdict token.
// Implementations must be safe for concurrent calls.
class EquivalenceOracle {
 public:
  virtual ~EquivalenceOracle() = default;
  virtual std::string judge_equivalence(const std::string& kernel_text,
                                        const std::string& revision_text) = 0;
};

// Deterministic stand-in for the remote judgment model. The default rule
// treats a revision as equivalent iff it contains the kernel statement
// verbatim (which covers the identity rewrite).
class StubEquivalenceOracle : public EquivalenceOracle {
 public:
  using ReplyFn = std::function<std::string(const std::string&, const std::string&)>;

  StubEquivalenceOracle();
  explicit StubEquivalenceOracle(ReplyFn reply);

  std::string judge_equivalence(const std::string& kernel_text,
                                const std::string& revision_text) override;

 private:
  ReplyFn reply_;
};

class RemoteEquivalenceOracle : public EquivalenceOracle {
 public:
  explicit RemoteEquivalenceOracle(ChatEndpointConfig config);

  std::string judge_equivalence(const std::string& kernel_text,
                                const std::string& revision_text) override;

 private:
  ChatClient client_;
};

// Source pair produced for a kernel problem during corpus construction.
struct SynthesizedSources {
  std::string generator_source;
  std::string reference_source;
};

class SynthesisOracle {
 public:
  virtual ~SynthesisOracle() = default;
  virtual SynthesizedSources synthesize(const std::string& kernel_text) = 0;
};

class StubSynthesisOracle : public SynthesisOracle {
 public:
  using SynthFn = std::function<SynthesizedSources(const std::string&)>;

  explicit StubSynthesisOracle(SynthFn fn);

  SynthesizedSources synthesize(const std::string& kernel_text) override;

 private:
  SynthFn fn_;
};

// Asks a chat endpoint for a generator program and a reference solution; the
// reply must carry exactly two fenced code blocks, generator first.
class RemoteSynthesisOracle : public SynthesisOracle {
 public:
  explicit RemoteSynthesisOracle(ChatEndpointConfig config);

  SynthesizedSources synthesize(const std::string& kernel_text) override;

 private:
  ChatClient client_;
};

}  // namespace krl
