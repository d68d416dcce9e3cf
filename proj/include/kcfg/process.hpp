// Copyright 2026 The kcfg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace kcfg::proc {

struct RunOptions {
  std::vector<std::string> argv;  // argv[0] is resolved through PATH
  std::filesystem::path workDir;
  std::filesystem::path stdoutPath;  // empty: /dev/null
  std::filesystem::path stderrPath;  // empty: /dev/null
  double timeoutSeconds = 10.0;
};

struct RunResult {
  bool started = false;
  int spawnErrno = 0;  // set when !started
  bool timedOut = false;
  bool signaled = false;
  int exitCode = 0;  // valid when exited normally
  int signal = 0;    // valid when signaled
  double seconds = 0.0;

  bool exitedWith(int code) const { return started && !timedOut && !signaled && exitCode == code; }
};

// Runs the command in its own process group with stdin from /dev/null and
// the environment inherited. On timeout the whole group is killed; the group
// is also killed after a normal exit so no stray children survive.
RunResult run(const RunOptions& options);

struct StreamDigest {
  std::string sha256;  // lowercase hex
  std::uint64_t size = 0;
  std::string head;  // first 4 KiB

  friend bool operator==(const StreamDigest&, const StreamDigest&) = default;
};

StreamDigest digestFile(const std::filesystem::path& path);
std::string sha256Hex(std::string_view data);

}  // namespace kcfg::proc
