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

#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace krl {

// --------------------------------------------------------------------------
// Seeding. All randomness in a run flows from one root seed through named
// sub-streams so that runs are byte-reproducible.
// --------------------------------------------------------------------------

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// FNV-1a over the stream name, for tagging seed streams by purpose.
std::uint64_t stream_tag(std::string_view name);

// Derives a child seed from a root seed and a list of distinguishing parts
// (stream tag, iteration, step, candidate index, ...).
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> parts);

// --------------------------------------------------------------------------
// Text helpers
// --------------------------------------------------------------------------

// Judge output comparator normalization: trailing spaces/tabs/CR removed per
// line, then trailing newlines removed. All other bytes compare exact.
std::string normalize_output(std::string_view raw);

std::vector<std::string> split_whitespace(std::string_view text);

std::string to_lower(std::string_view text);

std::string trim(std::string_view text);

// RFC 4648 base64 with padding.
std::string base64_encode(std::string_view bytes);
// Throws Error on invalid input.
std::string base64_decode(std::string_view text);

// --------------------------------------------------------------------------
// Filesystem helpers
// --------------------------------------------------------------------------

std::string read_text_file(const std::filesystem::path& path);

// Writes via a sibling temp file + rename so readers never observe a partial
// file.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view content);

// mkdtemp wrapper; removes the tree on destruction.
class TempDir {
 public:
  // Creates <base>/<prefix>XXXXXX. Base defaults to the system temp dir.
  explicit TempDir(const std::string& prefix = "krl-", const std::filesystem::path& base = {});
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// --------------------------------------------------------------------------
// Concurrency
// --------------------------------------------------------------------------

// Counting semaphore with a runtime capacity.
class Semaphore {
 public:
  explicit Semaphore(int capacity);
  void acquire();
  void release();

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  int available_;
};

class SemaphoreGuard {
 public:
  explicit SemaphoreGuard(Semaphore& sem) : sem_(sem) { sem_.acquire(); }
  ~SemaphoreGuard() { sem_.release(); }
  SemaphoreGuard(const SemaphoreGuard&) = delete;
  SemaphoreGuard& operator=(const SemaphoreGuard&) = delete;

 private:
  Semaphore& sem_;
};

}  // namespace krl
