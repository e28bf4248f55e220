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

#include "krl/response.hpp"

#include <vector>

#include "krl/util.hpp"

namespace krl {

namespace {

std::vector<std::size_t> find_all(std::string_view hay, std::string_view needle) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while ((pos = hay.find(needle, pos)) != std::string_view::npos) {
    out.push_back(pos);
    ++pos;
  }
  return out;
}

bool whitespace_only(std::string_view s) {
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\f' && c != '\v') return false;
  }
  return true;
}

constexpr std::string_view kThinkOpen = "<think>";
constexpr std::string_view kThinkClose = "</think>";
constexpr std::string_view kAnswerOpen = "<answer>";
constexpr std::string_view kAnswerClose = "</answer>";

}  // namespace

ParsedResponse parse_tagged_response(std::string_view text) {
  ParsedResponse out;
  out.raw = std::string(text);

  const auto to = find_all(text, kThinkOpen);
  const auto tc = find_all(text, kThinkClose);
  const auto ao = find_all(text, kAnswerOpen);
  const auto ac = find_all(text, kAnswerClose);
  if (to.size() != 1 || tc.size() != 1 || ao.size() != 1 || ac.size() != 1) return out;

  // Note: every "</think>" occurrence also contains no "<think>" and vice
  // versa, so the four positions are independent.
  const std::size_t t0 = to[0], t1 = tc[0], a0 = ao[0], a1 = ac[0];
  if (!(t0 + kThinkOpen.size() <= t1 && t1 + kThinkClose.size() <= a0 &&
        a0 + kAnswerOpen.size() <= a1)) {
    return out;
  }
  if (!whitespace_only(text.substr(0, t0)) ||
      !whitespace_only(text.substr(t1 + kThinkClose.size(), a0 - (t1 + kThinkClose.size()))) ||
      !whitespace_only(text.substr(a1 + kAnswerClose.size()))) {
    return out;
  }

  out.think = std::string(text.substr(t0 + kThinkOpen.size(), t1 - (t0 + kThinkOpen.size())));
  out.answer = std::string(text.substr(a0 + kAnswerOpen.size(), a1 - (a0 + kAnswerOpen.size())));
  out.well_formed = true;
  return out;
}

std::string render_tagged_response(std::string_view think, std::string_view answer) {
  std::string out;
  out.reserve(think.size() + answer.size() + 34);
  out.append(kThinkOpen);
  out.append(think);
  out.append(kThinkClose);
  out.push_back('\n');
  out.append(kAnswerOpen);
  out.append(answer);
  out.append(kAnswerClose);
  return out;
}

ProblemStructure validate_problem_structure(std::string_view answer_text) {
  ProblemStructure s;
  std::size_t pos = 0;
  while (pos <= answer_text.size()) {
    std::size_t nl = answer_text.find('\n', pos);
    std::string_view line = (nl == std::string_view::npos)
                                ? answer_text.substr(pos)
                                : answer_text.substr(pos, nl - pos);
    // Skip anything before the first letter (whitespace, '#', '*', "1.", ...).
    std::size_t i = 0;
    while (i < line.size() && !((line[i] >= 'a' && line[i] <= 'z') || (line[i] >= 'A' && line[i] <= 'Z'))) {
      ++i;
    }
    const std::string head = to_lower(line.substr(i));
    auto match = [&](std::string_view keyword) { return head.rfind(keyword, 0) == 0; };
    if (match("description")) s.has_description = true;
    if (match("input")) s.has_input_format = true;
    if (match("output")) s.has_output_format = true;
    if (match("example")) s.has_examples = true;
    if (match("constraint")) s.has_constraints = true;
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return s;
}

std::string extract_code(std::string_view answer_text) {
  // A fence is a line whose first non-whitespace characters are "```".
  auto is_fence = [](std::string_view line) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    return line.substr(i).rfind("```", 0) == 0;
  };

  std::vector<std::pair<std::size_t, std::size_t>> lines;  // (begin, end) without newline
  std::size_t pos = 0;
  while (pos <= answer_text.size()) {
    std::size_t nl = answer_text.find('\n', pos);
    std::size_t end = (nl == std::string_view::npos) ? answer_text.size() : nl;
    lines.emplace_back(pos, end);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }

  std::size_t open = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_fence(answer_text.substr(lines[i].first, lines[i].second - lines[i].first))) {
      open = i;
      break;
    }
  }
  if (open == lines.size()) return std::string(answer_text);

  std::size_t close = lines.size();
  for (std::size_t i = open + 1; i < lines.size(); ++i) {
    if (is_fence(answer_text.substr(lines[i].first, lines[i].second - lines[i].first))) {
      close = i;
      break;
    }
  }

  const std::size_t body_begin = (open + 1 < lines.size()) ? lines[open + 1].first : answer_text.size();
  const std::size_t body_end = (close < lines.size()) ? lines[close].first : answer_text.size();
  std::string code(answer_text.substr(body_begin, body_end - body_begin));
  if (!code.empty() && code.back() == '\n') code.pop_back();
  return code;
}

}  // namespace krl
