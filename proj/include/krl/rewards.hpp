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

#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "krl/judge.hpp"
#include "krl/oracle.hpp"
#include "krl/response.hpp"
#include "krl/tfidf.hpp"

namespace krl {

// Solver reward components. Gate chain: compilation is only scored on
// well-formatted responses, accuracy only on compiled code, so
// r_acc != 0 => r_cmp == +2 => r_sfm == +1. Reachable totals are
// {-1 (unformatted), -1 (=1-2), 0 (=1+2-3), +6}.
struct SolverRewardBreakdown {
  int r_sfm = 0;  // +1 well-formed / -1 otherwise
  int r_cmp = 0;  // +2 compiles / -2 formatted but compile failed / 0 unformatted
  int r_acc = 0;  // +3 Accepted / -3 compiled but failed a test / 0 otherwise
  int total = 0;
};

// verdict must be present iff the response is well-formed (only formatted
// responses are judged); anything else is a ContractViolation.
SolverRewardBreakdown solver_reward(const ParsedResponse& parsed,
                                    const std::optional<VerdictReport>& verdict);

// Giver reward components. Gate chain: r_eqv requires r_pfm, and the
// divergence, novelty, and adversarial components are all zero unless
// r_eqv == 1. Total lies in [0, 5].
struct GiverRewardBreakdown {
  int r_pfm = 0;     // 1 well-formed and structurally complete / 0
  int r_eqv = 0;     // 1 equivalent (and r_pfm == 1) / 0
  double r_dvg = 0;  // 1 - cosine(kernel, revision), gated on r_eqv
  double r_nvt = 0;  // 1 - cosine(revision, previous revision), gated on r_eqv
  double r_adv = 0;  // 1 - Acc, gated on r_eqv
  double total = 0;
};

// Core arithmetic with the similarities already computed. student_accepted
// must be present iff the equivalence gate is open (accuracy is only measured
// on equivalent revisions).
GiverRewardBreakdown giver_reward_from_similarities(bool format_ok, bool equivalent,
                                                    double kernel_similarity,
                                                    double prev_revision_similarity,
                                                    std::optional<bool> student_accepted);

// Full path: similarities come from TF-IDF vectors of the revision against
// the kernel and the previous revision under the phase's fitted model.
GiverRewardBreakdown giver_reward(const TfidfModel& model, const std::string& kernel_text,
                                  const std::string& revision_text,
                                  const std::string& prev_revision_text,
                                  const ProblemStructure& structure, const ParsedResponse& parsed,
                                  bool equivalent, std::optional<bool> student_accepted);

struct EquivalenceResult {
  bool equivalent = false;
  std::string reason;
};

// Memoizes oracle judgments per (kernel, revision) pair within a run; GRPO
// groups repeat candidates often and oracle calls dominate cost.
// get_or_insert is atomic.
class EquivalenceCache {
 public:
  std::optional<EquivalenceResult> find(const std::string& kernel, const std::string& revision) const;
  void insert(const std::string& kernel, const std::string& revision, const EquivalenceResult& result);

 private:
  static std::string key(const std::string& kernel, const std::string& revision);

  mutable std::mutex mutex_;
  std::unordered_map<std::string, EquivalenceResult> entries_;
};

// Asks the oracle for a judgment and parses the reply protocol: the first
// whitespace-delimited token must be EQUIVALENT or NOT_EQUIVALENT, the rest is
// the stated reason. Throws OracleMalformedReplyError otherwise. When a cache
// is supplied, hits skip the oracle call.
EquivalenceResult equivalence_check(const std::string& kernel_text,
                                    const std::string& revision_text, EquivalenceOracle& oracle,
                                    EquivalenceCache* cache = nullptr);

}  // namespace krl
