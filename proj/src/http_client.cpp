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

#include "krl/http_client.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "krl/errors.hpp"
#include "krl/util.hpp"

namespace krl {

using nlohmann::json;

struct ChatClient::Impl {
  ChatEndpointConfig cfg;
  Semaphore in_flight;

  explicit Impl(ChatEndpointConfig c)
      : cfg(std::move(c)), in_flight(cfg.max_in_flight > 0 ? cfg.max_in_flight : 1) {}
};

ChatClient::ChatClient(ChatEndpointConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {
  if (impl_->cfg.base_url.empty()) throw ConfigError("chat endpoint base_url is required");
}

ChatClient::~ChatClient() = default;

const ChatEndpointConfig& ChatClient::config() const { return impl_->cfg; }

namespace {

std::vector<ChatChoice> parse_reply(const std::string& body) {
  json reply = json::parse(body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("choices") || !reply["choices"].is_array()) {
    throw BackendUnavailableError("endpoint returned an unparseable reply");
  }
  std::vector<ChatChoice> out;
  for (const json& choice : reply["choices"]) {
    ChatChoice c;
    if (choice.contains("message") && choice["message"].contains("content")) {
      c.text = choice["message"]["content"].get<std::string>();
    } else if (choice.contains("text")) {
      c.text = choice["text"].get<std::string>();
    } else {
      throw BackendUnavailableError("choice without content in endpoint reply");
    }
    if (choice.contains("logprobs") && choice["logprobs"].is_object() &&
        choice["logprobs"].contains("content") && choice["logprobs"]["content"].is_array()) {
      std::vector<std::string> tokens;
      std::vector<double> lps;
      for (const json& entry : choice["logprobs"]["content"]) {
        tokens.push_back(entry.value("token", std::string()));
        lps.push_back(entry.value("logprob", 0.0));
      }
      c.tokens = std::move(tokens);
      c.logprobs = std::move(lps);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<ChatChoice> ChatClient::complete(const std::string& prompt, double temperature,
                                             int max_tokens, int n) {
  if (n < 1) throw ContractViolation("n must be >= 1");
  SemaphoreGuard guard(impl_->in_flight);

  const ChatEndpointConfig& cfg = impl_->cfg;
  json payload = {
      {"model", cfg.model},
      {"temperature", temperature},
      {"max_tokens", max_tokens},
      {"n", n},
      {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
  };
  const std::string body = payload.dump();

  httplib::Headers headers;
  if (!cfg.auth_token_env.empty()) {
    if (const char* token = std::getenv(cfg.auth_token_env.c_str());
        token != nullptr && *token != '\0') {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }

  std::string last_error = "no attempts made";
  bool rate_limited = false;
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    if (attempt > 0) {
      const double delay = cfg.backoff_base_s * std::pow(2.0, attempt - 1);
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }

    httplib::Client client(cfg.base_url);
    client.set_connection_timeout(std::chrono::duration<double>(cfg.request_timeout_s));
    client.set_read_timeout(std::chrono::duration<double>(cfg.request_timeout_s));
    httplib::Result res = client.Post(cfg.path, headers, body, "application/json");

    if (!res) {
      last_error = "connection failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw AuthError("endpoint rejected credentials (HTTP " + std::to_string(res->status) + ")");
    }
    if (res->status == 429) {
      rate_limited = true;
      last_error = "HTTP 429";
      continue;
    }
    if (res->status >= 500) {
      rate_limited = false;
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw BackendUnavailableError("endpoint returned HTTP " + std::to_string(res->status));
    }
    return parse_reply(res->body);
  }

  if (rate_limited) {
    throw RateLimitedError("rate limited after " + std::to_string(cfg.max_retries) + " retries");
  }
  throw BackendUnavailableError("endpoint unreachable after retries: " + last_error);
}

}  // namespace krl
