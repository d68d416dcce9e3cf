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

#include "kcfg/process.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/syscall.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <thread>

#include "kcfg/error.hpp"

extern char** environ;

namespace kcfg::proc {

namespace {

using Clock = std::chrono::steady_clock;

class FileActions {
 public:
  FileActions() { posix_spawn_file_actions_init(&actions_); }
  ~FileActions() { posix_spawn_file_actions_destroy(&actions_); }
  posix_spawn_file_actions_t* get() { return &actions_; }

 private:
  posix_spawn_file_actions_t actions_;
};

class SpawnAttr {
 public:
  SpawnAttr() { posix_spawnattr_init(&attr_); }
  ~SpawnAttr() { posix_spawnattr_destroy(&attr_); }
  posix_spawnattr_t* get() { return &attr_; }

 private:
  posix_spawnattr_t attr_;
};

void redirect(FileActions& actions, int fd, const std::filesystem::path& path) {
  const std::string target = path.empty() ? "/dev/null" : path.string();
  posix_spawn_file_actions_addopen(actions.get(), fd, target.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
}

int openPidfd(pid_t pid) {
#ifdef SYS_pidfd_open
  return static_cast<int>(::syscall(SYS_pidfd_open, pid, 0));
#else
  (void)pid;
  errno = ENOSYS;
  return -1;
#endif
}

// Waits until the child exits or the deadline passes. Returns true if the
// child was reaped.
bool waitUntil(pid_t pid, Clock::time_point deadline, int& status) {
  const int pidfd = openPidfd(pid);
  if (pidfd >= 0) {
    while (true) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
      if (left <= 0) break;
      pollfd p{pidfd, POLLIN, 0};
      const int rc = ::poll(&p, 1, static_cast<int>(std::min<long long>(left, 1000)));
      if (rc > 0) break;
      if (rc < 0 && errno != EINTR) break;
    }
    ::close(pidfd);
    return ::waitpid(pid, &status, WNOHANG) == pid;
  }
  // No pidfd support: poll the child.
  while (Clock::now() < deadline) {
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) return true;
    if (r < 0 && errno != EINTR) return false;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  return ::waitpid(pid, &status, WNOHANG) == pid;
}

std::string toHex(const unsigned char* bytes, unsigned int len) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[bytes[i] >> 4];
    out += kHex[bytes[i] & 15];
  }
  return out;
}

}  // namespace

RunResult run(const RunOptions& options) {
  RunResult result;
  if (options.argv.empty()) throw Error(ErrorCode::kInvalidArgument, "empty command");

  FileActions actions;
  posix_spawn_file_actions_addopen(actions.get(), STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  redirect(actions, STDOUT_FILENO, options.stdoutPath);
  redirect(actions, STDERR_FILENO, options.stderrPath);
  if (!options.workDir.empty()) posix_spawn_file_actions_addchdir_np(actions.get(), options.workDir.c_str());

  SpawnAttr attr;
  sigset_t defaults;
  sigemptyset(&defaults);
  sigaddset(&defaults, SIGINT);
  sigaddset(&defaults, SIGTERM);
  sigaddset(&defaults, SIGPIPE);
  sigset_t none;
  sigemptyset(&none);
  posix_spawnattr_setsigdefault(attr.get(), &defaults);
  posix_spawnattr_setsigmask(attr.get(), &none);
  posix_spawnattr_setpgroup(attr.get(), 0);
  posix_spawnattr_setflags(attr.get(), POSIX_SPAWN_SETPGROUP | POSIX_SPAWN_SETSIGDEF | POSIX_SPAWN_SETSIGMASK);

  // The child changes directory before exec, so a relative path with a slash
  // has to be pinned to our cwd first. Bare names still go through PATH.
  std::string program = options.argv[0];
  if (program.find('/') != std::string::npos && program.front() != '/') {
    program = std::filesystem::absolute(program).lexically_normal().string();
  }
  std::vector<char*> argv;
  argv.push_back(program.data());
  for (std::size_t i = 1; i < options.argv.size(); ++i) argv.push_back(const_cast<char*>(options.argv[i].c_str()));
  argv.push_back(nullptr);

  const auto start = Clock::now();
  pid_t pid = 0;
  const int rc = ::posix_spawnp(&pid, argv[0], actions.get(), attr.get(), argv.data(), environ);
  if (rc != 0) {
    result.spawnErrno = rc;
    return result;
  }
  result.started = true;

  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(options.timeoutSeconds));
  int status = 0;
  if (!waitUntil(pid, deadline, status)) {
    result.timedOut = true;
    ::kill(-pid, SIGKILL);
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
  } else {
    ::kill(-pid, SIGKILL);  // stragglers left in the group
    if (WIFSIGNALED(status)) {
      result.signaled = true;
      result.signal = WTERMSIG(status);
    } else {
      result.exitCode = WEXITSTATUS(status);
    }
  }
  result.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

std::string sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  return toHex(digest, len);
}

StreamDigest digestFile(const std::filesystem::path& path) {
  StreamDigest d;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::ifstream in(path, std::ios::binary);
  char buffer[1 << 16];
  while (in) {
    in.read(buffer, sizeof buffer);
    const std::streamsize got = in.gcount();
    if (got <= 0) break;
    EVP_DigestUpdate(ctx.get(), buffer, static_cast<std::size_t>(got));
    if (d.head.size() < 4096) d.head.append(buffer, std::min<std::size_t>(4096 - d.head.size(), got));
    d.size += static_cast<std::uint64_t>(got);
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  d.sha256 = toHex(digest, len);
  return d;
}

}  // namespace kcfg::proc
