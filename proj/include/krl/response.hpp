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

#include <optional>
#include <string>
#include <string_view>

namespace krl {

// A policy output split into its reasoning and payload segments.
//
// well_formed holds exactly when the text is one <think>...</think> segment
// followed by one <answer>...</answer> segment, with nothing but whitespace
// outside the tags. Tags are matched case-sensitively; nested or repeated
// tags make the response malformed. Segments are returned verbatim, tags
// stripped. On a malformed response both segments are absent.
struct ParsedResponse {
  std::string raw;
  std::optional<std::string> think;
  std::optional<std::string> answer;
  bool well_formed = false;
};

ParsedResponse parse_tagged_response(std::string_view text);

// Inverse of parse_tagged_response for tag-free segments.
std::string render_tagged_response(std::string_view think, std::string_view answer);

// Structural requirements on a generated problem statement: it must carry a
// description, input format, output format, examples, and constraints.
// Detection is a case-insensitive heading match at line starts (leading
// whitespace, markdown markers, and numbering are skipped).
struct ProblemStructure {
  bool has_description = false;
  bool has_input_format = false;
  bool has_output_format = false;
  bool has_examples = false;
  bool has_constraints = false;

  bool complete() const {
    return has_description && has_input_format && has_output_format && has_examples &&
           has_constraints;
  }
};

ProblemStructure validate_problem_structure(std::string_view answer_text);

// Returns the contents of the first fenced code block, or the whole text
// when no fence is present.
std::string extract_code(std::string_view answer_text);

}  // namespace krl
