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

#include <string>
#include <vector>

#include "krl/corpus.hpp"
#include "krl/judge.hpp"

namespace krl::testing {

// Fixture programs used across the judge, corpus, loop, and acceptance
// suites. All are plain C++ so they compile under the judge's default
// command.

inline const std::string kEchoProgram = R"(#include <iostream>
int main() { std::cout << std::cin.rdbuf(); return 0; }
)";

inline const std::string kSyntaxErrorProgram = "int main({\n";

inline const std::string kInfiniteLoopProgram = R"(int main() { for (;;) {} }
)";

inline const std::string kReturnOneProgram = "int main() { return 1; }\n";

// Echoes its input except the exact line "2", which it corrupts.
inline const std::string kWrongOnTwoProgram = R"(#include <iostream>
#include <string>
int main() {
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line == "2") std::cout << 999 << "\n";
    else std::cout << line << "\n";
  }
  return 0;
}
)";

// Prints its seed argument; the canonical deterministic generator fixture.
inline const std::string kSeedPrinterGenerator = R"(#include <cstdlib>
#include <iostream>
int main(int argc, char** argv) {
  if (argc < 2) return 2;
  std::cout << std::atoll(argv[1]) << "\n";
  return 0;
}
)";

inline const std::string kCrashingGenerator = "int main() { return 3; }\n";

// Unbounded output; used against the output cap.
inline const std::string kFloodProgram = R"(#include <cstdio>
int main() {
  for (long i = 0; i < 100000000L; ++i) std::puts("xxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxx");
  return 0;
}
)";

// Writes a marker file into its working directory and reports whether one
// already existed; detects working-directory reuse between tests.
inline const std::string kMarkerProgram = R"(#include <cstdio>
int main() {
  if (std::fopen("marker", "r") != nullptr) { std::puts("stale"); return 0; }
  std::FILE* f = std::fopen("marker", "w");
  if (f != nullptr) std::fclose(f);
  std::puts("fresh");
  return 0;
}
)";

inline const std::string kEnvProbeProgram = R"(#include <cstdio>
#include <cstdlib>
int main() {
  const char* secret = std::getenv("KRL_TEST_SECRET");
  std::puts(secret != nullptr ? secret : "none");
  return 0;
}
)";

// Pascal-grid template instantiation: ~5-6 s to compile at depth 440, well
// past a 2 s compile limit. Compiles cleanly when given enough time.
inline const std::string kSlowCompileProgram = R"(template <int A, int B> struct Grid {
  static constexpr unsigned long long v = Grid<A - 1, B>::v + Grid<A, B - 1>::v;
};
template <int A> struct Grid<A, 0> { static constexpr unsigned long long v = 1; };
template <int B> struct Grid<0, B> { static constexpr unsigned long long v = 1; };
template <> struct Grid<0, 0> { static constexpr unsigned long long v = 1; };
int main() { return Grid<440, 440>::v > 0 ? 0 : 1; }
)";

inline ResourceLimits fast_limits() {
  ResourceLimits limits;
  limits.compile_timeout_s = 20.0;
  limits.run_timeout_per_test_s = 1.0;
  limits.memory_limit_bytes = 256ull << 20;
  limits.output_limit_bytes = 1ull << 20;
  return limits;
}

inline JudgeConfig fast_judge_config() {
  JudgeConfig cfg;
  cfg.limits = fast_limits();
  return cfg;
}

// A ready-to-judge triplet: seed-printer generator, echo reference, and
// `count` materialized tests for seeds seed .. seed+count-1.
inline ProblemTriplet echo_triplet(const std::string& id, int count = 3, std::uint64_t seed = 1) {
  ProblemTriplet t;
  t.id = id;
  t.kernel_text = "Read the single integer on standard input and print it unchanged (" + id + ").";
  t.generator_source = kSeedPrinterGenerator;
  t.reference_source = kEchoProgram;
  t.seed = seed;
  for (int i = 0; i < count; ++i) {
    const std::string value = std::to_string(seed + static_cast<std::uint64_t>(i)) + "\n";
    t.test_cases.push_back(TestCase{value, value});
  }
  return t;
}

}  // namespace krl::testing
