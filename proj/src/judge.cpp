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

#include "krl/judge.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <thread>

#include "krl/errors.hpp"

namespace krl {

namespace {

struct ExecSpec {
  std::vector<std::string> argv;
  std::filesystem::path workdir;
  std::filesystem::path stdin_file;   // empty = /dev/null
  std::filesystem::path stdout_file;  // empty = /dev/null
  std::filesystem::path stderr_file;  // empty = /dev/null
  double wall_timeout_s = 10.0;
  std::uint64_t memory_limit_bytes = 0;  // 0 = unlimited
  std::uint64_t file_size_limit_bytes = 0;
};

struct ExecResult {
  int exit_code = -1;
  int term_signal = 0;
  bool timed_out = false;
  double wall_seconds = 0.0;

  bool clean_exit() const { return !timed_out && term_signal == 0 && exit_code == 0; }
};

void set_rlimit(int resource, rlim_t value) {
  rlimit rl{value, value};
  ::setrlimit(resource, &rl);  // failure is non-fatal inside the child
}

// fork/exec with redirected streams, rlimit caps, scrubbed environment, and a
// wall-clock deadline enforced by killing the child's process group.
ExecResult run_process(const ExecSpec& spec) {
  int err_pipe[2];
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
    throw SandboxSetupError("pipe2 failed: " + std::string(std::strerror(errno)));
  }

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(err_pipe[0]);
    ::close(err_pipe[1]);
    throw SandboxSetupError("fork failed: " + std::string(std::strerror(errno)));
  }

  if (pid == 0) {
    ::close(err_pipe[0]);
    ::setsid();

    auto bail = [&](const char* stage) {
      int saved = errno;
      (void)!::write(err_pipe[1], stage, std::strlen(stage));
      _exit(saved == 0 ? 127 : 127);
    };

    const char* in_path = spec.stdin_file.empty() ? "/dev/null" : spec.stdin_file.c_str();
    const char* out_path = spec.stdout_file.empty() ? "/dev/null" : spec.stdout_file.c_str();
    const char* err_path = spec.stderr_file.empty() ? "/dev/null" : spec.stderr_file.c_str();
    int in_fd = ::open(in_path, O_RDONLY);
    int out_fd = ::open(out_path, O_WRONLY | O_CREAT | O_TRUNC, 0644);
    int err_fd = ::open(err_path, O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (in_fd < 0 || out_fd < 0 || err_fd < 0) bail("open");
    if (::dup2(in_fd, STDIN_FILENO) < 0 || ::dup2(out_fd, STDOUT_FILENO) < 0 ||
        ::dup2(err_fd, STDERR_FILENO) < 0) {
      bail("dup2");
    }
    ::close(in_fd);
    ::close(out_fd);
    ::close(err_fd);

    if (!spec.workdir.empty() && ::chdir(spec.workdir.c_str()) != 0) bail("chdir");

    // CPU cap backstops the wall-clock kill; +1 s so wall usually fires first
    // and the measurement stays attributable.
    set_rlimit(RLIMIT_CPU, static_cast<rlim_t>(std::ceil(spec.wall_timeout_s)) + 1);
    set_rlimit(RLIMIT_CORE, 0);
    if (spec.memory_limit_bytes > 0) set_rlimit(RLIMIT_AS, spec.memory_limit_bytes);
    if (spec.file_size_limit_bytes > 0) set_rlimit(RLIMIT_FSIZE, spec.file_size_limit_bytes);
    ::signal(SIGXFSZ, SIG_DFL);

    std::vector<char*> argv;
    argv.reserve(spec.argv.size() + 1);
    for (const std::string& a : spec.argv) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    // No secrets reach the sandboxed program.
    char path_var[] = "PATH=/usr/local/bin:/usr/bin:/bin";
    char* envp[] = {path_var, nullptr};
    ::execve(argv[0], argv.data(), envp);

    // execve only returns on failure; try PATH lookup as a convenience.
    ::execvpe(spec.argv[0].c_str(), argv.data(), envp);
    bail("exec");
    _exit(127);
  }

  ::close(err_pipe[1]);

  const auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                    std::chrono::duration<double>(spec.wall_timeout_s));
  ExecResult result;
  int status = 0;
  bool reaped = false;
  while (true) {
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) {
      reaped = true;
      break;
    }
    if (r < 0 && errno != EINTR) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      result.timed_out = true;
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      reaped = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  char stage_buf[64];
  const ssize_t n = ::read(err_pipe[0], stage_buf, sizeof(stage_buf) - 1);
  ::close(err_pipe[0]);
  if (n > 0 && !result.timed_out) {
    stage_buf[n] = '\0';
    throw SandboxSetupError(std::string("child setup failed at ") + stage_buf);
  }

  if (reaped && !result.timed_out) {
    if (WIFEXITED(status)) {
      result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
      result.term_signal = WTERMSIG(status);
      if (result.term_signal == SIGXCPU) result.timed_out = true;
    }
  }
  return result;
}

std::vector<std::string> render_command(const std::string& command_template,
                                        const std::filesystem::path& source,
                                        const std::filesystem::path& output) {
  std::vector<std::string> argv;
  for (std::string word : split_whitespace(command_template)) {
    std::size_t pos;
    while ((pos = word.find("{source}")) != std::string::npos) {
      word.replace(pos, 8, source.string());
    }
    while ((pos = word.find("{output}")) != std::string::npos) {
      word.replace(pos, 8, output.string());
    }
    argv.push_back(std::move(word));
  }
  if (argv.empty()) throw ConfigError("empty compiler command");
  return argv;
}

std::string read_file_capped(const std::filesystem::path& path, std::size_t cap = 1 << 20) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return {};
  std::string all = read_text_file(path);
  if (all.size() > cap) all.resize(cap);
  return all;
}

int hardware_parallelism() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 2 : static_cast<int>(n);
}

}  // namespace

void ResourceLimits::validate() const {
  if (compile_timeout_s <= 0 || run_timeout_per_test_s <= 0 || memory_limit_bytes == 0 ||
      output_limit_bytes == 0) {
    throw ContractViolation("resource limits must be strictly positive");
  }
}

const char* to_string(TestOutcome outcome) {
  switch (outcome) {
    case TestOutcome::Pass: return "Pass";
    case TestOutcome::WrongAnswer: return "WrongAnswer";
    case TestOutcome::TimeLimit: return "TimeLimit";
    case TestOutcome::RuntimeError: return "RuntimeError";
    case TestOutcome::OutputLimit: return "OutputLimit";
  }
  return "?";
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Accepted: return "Accepted";
    case Verdict::Failed: return "Failed";
    case Verdict::CompileError: return "CompileError";
  }
  return "?";
}

Judge::Judge(JudgeConfig config) : config_(std::move(config)) {
  if (config_.sandbox_root.empty()) {
    if (const char* env = std::getenv("KRL_SANDBOX_DIR"); env != nullptr && *env != '\0') {
      config_.sandbox_root = env;
    }
  }
  const int cap = config_.max_parallel > 0 ? config_.max_parallel : hardware_parallelism();
  slots_ = std::make_shared<Semaphore>(cap);
}

CompileResult Judge::compile(const std::string& source, const ResourceLimits& limits,
                             const std::filesystem::path& workdir) const {
  limits.validate();
  std::error_code ec;
  std::filesystem::create_directories(workdir, ec);

  const std::filesystem::path source_path = workdir / "main.cpp";
  const std::filesystem::path artifact = workdir / "prog";
  const std::filesystem::path log_path = workdir / "compile.log";
  write_text_file_atomic(source_path, source);

  ExecSpec spec;
  spec.argv = render_command(config_.compiler_command, source_path, artifact);
  spec.workdir = workdir;
  spec.stdout_file = log_path;
  spec.stderr_file = log_path;  // same file: interleaved compiler diagnostics
  spec.wall_timeout_s = limits.compile_timeout_s;

  ExecResult res;
  {
    SemaphoreGuard guard(*slots_);
    res = run_process(spec);
  }

  CompileResult out;
  out.log = read_file_capped(log_path);
  if (res.timed_out) {
    out.ok = false;
    out.log += "\n[judge] compile timed out after " + std::to_string(limits.compile_timeout_s) +
               " s\n";
    return out;
  }
  out.ok = res.clean_exit() && std::filesystem::exists(artifact, ec);
  if (out.ok) {
    out.artifact = artifact;
  } else if (out.log.empty()) {
    out.log = "[judge] compiler exited with status " + std::to_string(res.exit_code);
  }
  return out;
}

RunCapture Judge::run_once(const std::filesystem::path& artifact, const std::string& input,
                           const ResourceLimits& limits) const {
  limits.validate();
  // Fresh working directory per run so one execution cannot leak state into
  // the next.
  TempDir dir("krl-run-", config_.sandbox_root);
  const std::filesystem::path in_path = dir.path() / "stdin.txt";
  const std::filesystem::path out_path = dir.path() / "stdout.txt";
  write_text_file_atomic(in_path, input);

  ExecSpec spec;
  spec.argv = {artifact.string()};
  spec.workdir = dir.path();
  spec.stdin_file = in_path;
  spec.stdout_file = out_path;
  spec.wall_timeout_s = limits.run_timeout_per_test_s;
  spec.memory_limit_bytes = limits.memory_limit_bytes;
  spec.file_size_limit_bytes = limits.output_limit_bytes;

  ExecResult res;
  {
    SemaphoreGuard guard(*slots_);
    res = run_process(spec);
  }

  RunCapture rc;
  rc.runtime_s = res.wall_seconds;
  if (res.timed_out) {
    rc.outcome = TestOutcome::TimeLimit;
  } else if (res.term_signal == SIGXFSZ) {
    rc.outcome = TestOutcome::OutputLimit;
  } else if (res.term_signal != 0 || res.exit_code != 0) {
    rc.outcome = TestOutcome::RuntimeError;
  } else {
    rc.outcome = TestOutcome::Pass;
    rc.output = read_file_capped(out_path, limits.output_limit_bytes + 1);
  }
  return rc;
}

std::vector<TestResult> Judge::run_tests(const std::filesystem::path& artifact,
                                         const std::vector<TestCase>& tests,
                                         const ResourceLimits& limits) const {
  limits.validate();
  std::vector<TestResult> results;
  results.reserve(tests.size());

  for (const TestCase& test : tests) {
    RunCapture rc = run_once(artifact, test.input, limits);
    TestResult tr;
    tr.runtime_s = rc.runtime_s;
    if (rc.outcome == TestOutcome::Pass) {
      tr.outcome = normalize_output(rc.output) == normalize_output(test.expected_output)
                       ? TestOutcome::Pass
                       : TestOutcome::WrongAnswer;
    } else {
      tr.outcome = rc.outcome;
    }
    results.push_back(tr);
    if (config_.fail_fast && tr.outcome != TestOutcome::Pass) break;
  }
  return results;
}

VerdictReport Judge::judge(const std::string& source, const std::vector<TestCase>& tests,
                           const ResourceLimits& limits) const {
  VerdictReport report;
  TempDir job("krl-judge-", config_.sandbox_root);
  CompileResult cr = compile(source, limits, job.path() / "build");
  report.compile_ok = cr.ok;
  report.compile_log = std::move(cr.log);
  if (!cr.ok) {
    report.aggregate = Verdict::CompileError;
    return report;
  }
  report.per_test = run_tests(cr.artifact, tests, limits);
  bool all_pass = true;
  for (const TestResult& tr : report.per_test) {
    if (tr.outcome != TestOutcome::Pass) all_pass = false;
  }
  report.aggregate = all_pass ? Verdict::Accepted : Verdict::Failed;
  return report;
}

VerdictReport Judge::judge(const std::string& source, const std::vector<TestCase>& tests) const {
  return judge(source, tests, config_.limits);
}

std::string Judge::run_generator(const std::filesystem::path& artifact, std::uint64_t seed,
                                 const ResourceLimits& limits) const {
  limits.validate();
  TempDir dir("krl-gen-", config_.sandbox_root);
  const std::filesystem::path out_path = dir.path() / "stdout.txt";

  ExecSpec spec;
  spec.argv = {artifact.string(), std::to_string(seed)};
  spec.workdir = dir.path();
  spec.stdout_file = out_path;
  spec.wall_timeout_s = limits.run_timeout_per_test_s;
  spec.memory_limit_bytes = limits.memory_limit_bytes;
  spec.file_size_limit_bytes = limits.output_limit_bytes;

  ExecResult res;
  {
    SemaphoreGuard guard(*slots_);
    res = run_process(spec);
  }
  if (res.timed_out) {
    throw GeneratorError("generator timed out (seed " + std::to_string(seed) + ")");
  }
  if (res.term_signal == SIGXFSZ) {
    throw GeneratorError("generator exceeded the output limit (OutputLimit, seed " +
                         std::to_string(seed) + ")");
  }
  if (res.term_signal != 0 || res.exit_code != 0) {
    throw GeneratorError("generator failed with status " + std::to_string(res.exit_code) +
                         " signal " + std::to_string(res.term_signal) + " (seed " +
                         std::to_string(seed) + ")");
  }
  return read_file_capped(out_path, limits.output_limit_bytes + 1);
}

}  // namespace krl
