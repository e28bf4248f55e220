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

#include <cstdlib>

#include <doctest.h>

#include "fixtures.hpp"
#include "krl/errors.hpp"
#include "krl/judge.hpp"
#include "krl/util.hpp"

using namespace krl;
using namespace krl::testing;

TEST_SUITE("judge") {

TEST_CASE("output normalization trims per-line trailing whitespace and trailing newlines") {
  CHECK(normalize_output("1 \n2\t\r\n\n\n") == "1\n2");
  CHECK(normalize_output("1\n") == normalize_output("1"));
  CHECK(normalize_output("a b") == "a b");
  CHECK(normalize_output(" a") == " a");  // leading whitespace is significant
  CHECK(normalize_output("") == "");
}

TEST_CASE("compile: good, bad, and slow programs") {
  const Judge judge(fast_judge_config());
  TempDir work("krl-test-");

  SUBCASE("known-good program compiles") {
    const CompileResult r = judge.compile("int main(){return 0;}", fast_limits(), work.path() / "ok");
    CHECK(r.ok);
    CHECK(std::filesystem::exists(r.artifact));
  }

  SUBCASE("known-bad program fails with a diagnostic log") {
    const CompileResult r = judge.compile(kSyntaxErrorProgram, fast_limits(), work.path() / "bad");
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.log.empty());
  }

  SUBCASE("compile log is captured even on success") {
    // -Wall style diagnostics are not guaranteed, but the log must exist as a
    // field; success keeps whatever the compiler printed.
    const CompileResult r = judge.compile("int main(){return 0;}", fast_limits(), work.path() / "log");
    CHECK(r.ok);
  }

  SUBCASE("template-explosion fixture exceeds a 2 s compile limit") {
    ResourceLimits limits = fast_limits();
    limits.compile_timeout_s = 2.0;
    const CompileResult r = judge.compile(kSlowCompileProgram, limits, work.path() / "slow");
    CHECK_FALSE(r.ok);
    CHECK(r.log.find("timed out") != std::string::npos);
  }
}

TEST_CASE("run_tests outcomes") {
  const Judge judge(fast_judge_config());
  TempDir work("krl-test-");

  SUBCASE("echo program passes its tests") {
    const CompileResult r = judge.compile(kEchoProgram, fast_limits(), work.path() / "echo");
    REQUIRE(r.ok);
    const auto results = judge.run_tests(r.artifact, {{"1\n", "1\n"}}, fast_limits());
    REQUIRE(results.size() == 1);
    CHECK(results[0].outcome == TestOutcome::Pass);
  }

  SUBCASE("wrong output is WrongAnswer") {
    const CompileResult r = judge.compile("#include <cstdio>\nint main(){std::puts(\"2\");}",
                                          fast_limits(), work.path() / "wrong");
    REQUIRE(r.ok);
    const auto results = judge.run_tests(r.artifact, {{"1\n", "1\n"}}, fast_limits());
    REQUIRE(results.size() == 1);
    CHECK(results[0].outcome == TestOutcome::WrongAnswer);
  }

  SUBCASE("infinite loop hits the time limit with runtime at least the limit") {
    const CompileResult r = judge.compile(kInfiniteLoopProgram, fast_limits(), work.path() / "loop");
    REQUIRE(r.ok);
    const auto results = judge.run_tests(r.artifact, {{"1\n", "1\n"}}, fast_limits());
    REQUIRE(results.size() == 1);
    CHECK(results[0].outcome == TestOutcome::TimeLimit);
    CHECK(results[0].runtime_s >= 1.0);
  }

  SUBCASE("nonzero exit is RuntimeError") {
    const CompileResult r = judge.compile(kReturnOneProgram, fast_limits(), work.path() / "rc");
    REQUIRE(r.ok);
    const auto results = judge.run_tests(r.artifact, {{"", ""}}, fast_limits());
    CHECK(results[0].outcome == TestOutcome::RuntimeError);
  }

  SUBCASE("flooding stdout hits the output cap") {
    ResourceLimits limits = fast_limits();
    limits.output_limit_bytes = 64 << 10;
    limits.run_timeout_per_test_s = 5.0;
    const CompileResult r = judge.compile(kFloodProgram, limits, work.path() / "flood");
    REQUIRE(r.ok);
    const auto results = judge.run_tests(r.artifact, {{"", ""}}, limits);
    CHECK(results[0].outcome == TestOutcome::OutputLimit);
  }

  SUBCASE("normalized comparison tolerates trailing whitespace differences") {
    const CompileResult r = judge.compile("#include <cstdio>\nint main(){std::printf(\"7 \\n\\n\");}",
                                          fast_limits(), work.path() / "norm");
    REQUIRE(r.ok);
    const auto results = judge.run_tests(r.artifact, {{"", "7\n"}}, fast_limits());
    CHECK(results[0].outcome == TestOutcome::Pass);
  }
}

TEST_CASE("judge composes compile and run with the verdict invariants") {
  const Judge judge(fast_judge_config());

  SUBCASE("accepted echo") {
    const VerdictReport v = judge.judge(kEchoProgram, {{"1\n", "1\n"}, {"2\n", "2\n"}}, fast_limits());
    CHECK(v.compile_ok);
    CHECK(v.aggregate == Verdict::Accepted);
    CHECK(v.per_test.size() == 2);
  }

  SUBCASE("compile error leaves per_test empty") {
    const VerdictReport v = judge.judge(kSyntaxErrorProgram, {{"1\n", "1\n"}}, fast_limits());
    CHECK_FALSE(v.compile_ok);
    CHECK(v.aggregate == Verdict::CompileError);
    CHECK(v.per_test.empty());
  }

  SUBCASE("single wrong test yields Failed with localized detail") {
    const VerdictReport v = judge.judge(
        kWrongOnTwoProgram, {{"1\n", "1\n"}, {"2\n", "2\n"}, {"3\n", "3\n"}}, fast_limits());
    CHECK(v.compile_ok);
    CHECK(v.aggregate == Verdict::Failed);
    REQUIRE(v.per_test.size() == 3);
    CHECK(v.per_test[0].outcome == TestOutcome::Pass);
    CHECK(v.per_test[1].outcome == TestOutcome::WrongAnswer);
    CHECK(v.per_test[2].outcome == TestOutcome::Pass);
  }

  SUBCASE("judging a deterministic program twice is identical modulo runtime") {
    const std::vector<TestCase> tests = {{"1\n", "1\n"}, {"9\n", "9\n"}};
    const VerdictReport a = judge.judge(kEchoProgram, tests, fast_limits());
    const VerdictReport b = judge.judge(kEchoProgram, tests, fast_limits());
    CHECK(a.compile_ok == b.compile_ok);
    CHECK(a.aggregate == b.aggregate);
    REQUIRE(a.per_test.size() == b.per_test.size());
    for (std::size_t i = 0; i < a.per_test.size(); ++i) {
      CHECK(a.per_test[i].outcome == b.per_test[i].outcome);
    }
  }
}

TEST_CASE("tests are isolated in fresh working directories") {
  const Judge judge(fast_judge_config());
  TempDir work("krl-test-");
  const CompileResult r = judge.compile(kMarkerProgram, fast_limits(), work.path() / "marker");
  REQUIRE(r.ok);
  const auto results =
      judge.run_tests(r.artifact, {{"", "fresh\n"}, {"", "fresh\n"}}, fast_limits());
  REQUIRE(results.size() == 2);
  CHECK(results[0].outcome == TestOutcome::Pass);
  CHECK(results[1].outcome == TestOutcome::Pass);
}

TEST_CASE("sandboxed programs see no caller environment") {
  ::setenv("KRL_TEST_SECRET", "leaked", 1);
  const Judge judge(fast_judge_config());
  const VerdictReport v = judge.judge(kEnvProbeProgram, {{"", "none\n"}}, fast_limits());
  ::unsetenv("KRL_TEST_SECRET");
  CHECK(v.aggregate == Verdict::Accepted);
}

TEST_CASE("adding a test never flips Failed to Accepted") {
  const Judge judge(fast_judge_config());
  std::vector<TestCase> tests = {{"2\n", "2\n"}};
  const VerdictReport failed = judge.judge(kWrongOnTwoProgram, tests, fast_limits());
  REQUIRE(failed.aggregate == Verdict::Failed);
  tests.push_back({"1\n", "1\n"});
  const VerdictReport still_failed = judge.judge(kWrongOnTwoProgram, tests, fast_limits());
  CHECK(still_failed.aggregate == Verdict::Failed);
}

TEST_CASE("run_generator is deterministic per seed and reports failures") {
  const Judge judge(fast_judge_config());
  TempDir work("krl-test-");

  SUBCASE("same seed twice gives identical output") {
    const CompileResult r = judge.compile(kSeedPrinterGenerator, fast_limits(), work.path() / "gen");
    REQUIRE(r.ok);
    const std::string a = judge.run_generator(r.artifact, 7, fast_limits());
    const std::string b = judge.run_generator(r.artifact, 7, fast_limits());
    CHECK(a == b);
    CHECK(a == "7\n");
  }

  SUBCASE("nonzero exit raises GeneratorError") {
    const CompileResult r = judge.compile(kCrashingGenerator, fast_limits(), work.path() / "crash");
    REQUIRE(r.ok);
    CHECK_THROWS_AS((void)judge.run_generator(r.artifact, 1, fast_limits()), GeneratorError);
  }

  SUBCASE("exceeding the output cap raises GeneratorError naming OutputLimit") {
    ResourceLimits limits = fast_limits();
    limits.output_limit_bytes = 64 << 10;
    limits.run_timeout_per_test_s = 5.0;
    const CompileResult r = judge.compile(kFloodProgram, limits, work.path() / "flood");
    REQUIRE(r.ok);
    try {
      (void)judge.run_generator(r.artifact, 1, limits);
      FAIL("expected GeneratorError");
    } catch (const GeneratorError& e) {
      CHECK(std::string(e.what()).find("OutputLimit") != std::string::npos);
    }
  }
}

TEST_CASE("resource limits must be strictly positive") {
  ResourceLimits limits = fast_limits();
  limits.run_timeout_per_test_s = 0.0;
  CHECK_THROWS_AS(limits.validate(), ContractViolation);
}

}  // TEST_SUITE
