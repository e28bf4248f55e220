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

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace krl {

struct ChatEndpointConfig {
  std::string base_url;  // e.g. http://127.0.0.1:8089
  std::string path = "/v1/chat/completions";
  std::string model = "default";
  // Name of the environment variable holding the bearer token; empty value or
  // unset variable sends no Authorization header.
  std::string auth_token_env = "KRL_API_TOKEN";
  int max_retries = 3;       // retries after the first attempt
  double backoff_base_s = 0.25;  // exponential: base * 2^attempt
  double request_timeout_s = 60.0;
  int max_in_flight = 4;
};

struct ChatChoice {
  std::string text;
  // Present when the endpoint reports per-token logprobs.
  std::optional<std::vector<std::string>> tokens;
  std::optional<std::vector<double>> logprobs;
};

// Minimal chat-completion client: bounded retry with exponential backoff on
// transient failures (connect errors, 5xx, 429), no retry on auth errors.
// Safe for concurrent use; in-flight requests are capped.
class ChatClient {
 public:
  explicit ChatClient(ChatEndpointConfig config);
  ~ChatClient();
  ChatClient(const ChatClient&) = delete;
  ChatClient& operator=(const ChatClient&) = delete;

  std::vector<ChatChoice> complete(const std::string& prompt, double temperature, int max_tokens,
                                   int n);

  const ChatEndpointConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace krl
