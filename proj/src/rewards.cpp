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

#include "krl/rewards.hpp"

#include <algorithm>

#include "krl/errors.hpp"
#include "krl/util.hpp"

namespace krl {

SolverRewardBreakdown solver_reward(const ParsedResponse& parsed,
                                    const std::optional<VerdictReport>& verdict) {
  if (!parsed.well_formed && verdict.has_value()) {
    throw ContractViolation("verdict supplied for an unformatted response");
  }
  if (parsed.well_formed && !verdict.has_value()) {
    throw ContractViolation("well-formed response requires a verdict");
  }

  SolverRewardBreakdown b;
  b.r_sfm = parsed.well_formed ? 1 : -1;
  if (parsed.well_formed) {
    b.r_cmp = verdict->compile_ok ? 2 : -2;
    if (verdict->compile_ok) {
      b.r_acc = verdict->aggregate == Verdict::Accepted ? 3 : -3;
    }
  }
  b.total = b.r_sfm + b.r_cmp + b.r_acc;
  return b;
}

GiverRewardBreakdown giver_reward_from_similarities(bool format_ok, bool equivalent,
                                                    double kernel_similarity,
                                                    double prev_revision_similarity,
                                                    std::optional<bool> student_accepted) {
  GiverRewardBreakdown b;
  b.r_pfm = format_ok ? 1 : 0;
  b.r_eqv = (format_ok && equivalent) ? 1 : 0;

  if (b.r_eqv == 0 && student_accepted.has_value()) {
    throw ContractViolation("student accuracy measured on a non-equivalent revision");
  }
  if (b.r_eqv == 1 && !student_accepted.has_value()) {
    throw ContractViolation("equivalent revision requires a student accuracy");
  }

  if (b.r_eqv == 1) {
    b.r_dvg = std::clamp(1.0 - kernel_similarity, 0.0, 1.0);
    b.r_nvt = std::clamp(1.0 - prev_revision_similarity, 0.0, 1.0);
    b.r_adv = *student_accepted ? 0.0 : 1.0;
  }
  b.total = b.r_pfm + b.r_eqv + b.r_dvg + b.r_nvt + b.r_adv;
  return b;
}

GiverRewardBreakdown giver_reward(const TfidfModel& model, const std::string& kernel_text,
                                  const std::string& revision_text,
                                  const std::string& prev_revision_text,
                                  const ProblemStructure& structure, const ParsedResponse& parsed,
                                  bool equivalent, std::optional<bool> student_accepted) {
  const bool format_ok = parsed.well_formed && structure.complete();
  double s_kernel = 0.0;
  double s_prev = 0.0;
  if (format_ok && equivalent) {
    const SparseVector revision = vectorize(model, revision_text);
    s_kernel = cosine(vectorize(model, kernel_text), revision);
    s_prev = cosine(revision, vectorize(model, prev_revision_text));
  }
  return giver_reward_from_similarities(format_ok, equivalent, s_kernel, s_prev, student_accepted);
}

std::string EquivalenceCache::key(const std::string& kernel, const std::string& revision) {
  std::string k;
  k.reserve(kernel.size() + revision.size() + 1);
  k.append(kernel);
  k.push_back('\x1f');
  k.append(revision);
  return k;
}

std::optional<EquivalenceResult> EquivalenceCache::find(const std::string& kernel,
                                                        const std::string& revision) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key(kernel, revision));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void EquivalenceCache::insert(const std::string& kernel, const std::string& revision,
                              const EquivalenceResult& result) {
  std::lock_guard lock(mutex_);
  entries_.emplace(key(kernel, revision), result);
}

EquivalenceResult equivalence_check(const std::string& kernel_text,
                                    const std::string& revision_text, EquivalenceOracle& oracle,
                                    EquivalenceCache* cache) {
  if (cache != nullptr) {
    if (auto hit = cache->find(kernel_text, revision_text)) return *hit;
  }

  const std::string reply = oracle.judge_equivalence(kernel_text, revision_text);
  const std::vector<std::string> tokens = split_whitespace(reply);
  if (tokens.empty()) throw OracleMalformedReplyError("empty oracle reply");

  EquivalenceResult result;
  if (tokens[0] == "EQUIVALENT") {
    result.equivalent = true;
  } else if (tokens[0] == "NOT_EQUIVALENT") {
    result.equivalent = false;
  } else {
    throw OracleMalformedReplyError("oracle reply lacks a leading verdict token: " +
                                    (reply.size() > 120 ? reply.substr(0, 120) + "..." : reply));
  }
  result.reason = trim(reply.substr(reply.find(tokens[0]) + tokens[0].size()));

  if (cache != nullptr) cache->insert(kernel_text, revision_text, result);
  return result;
}

}  // namespace krl
