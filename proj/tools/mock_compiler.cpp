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

// Deterministic stand-in for a C compiler:
//   kcfg-mock-compiler OPTLEVEL INPUT -o OUTPUT
// Reads the marker comments written by kcfg-mock-generator and either fails
// the way the fault marker asks or emits a shell script that prints the
// program's checksum line. -O0 is the low level; anything else is high.

#include <sys/resource.h>
#include <sys/stat.h>

#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <string>
#include <thread>

#include "mock_common.hpp"

namespace {

std::string markerValue(const std::string& text, std::string_view marker) {
  const std::size_t at = text.find(marker);
  if (at == std::string::npos) return "";
  const std::size_t begin = at + marker.size();
  const std::size_t end = text.find(" */", begin);
  return end == std::string::npos ? "" : text.substr(begin, end - begin);
}

[[noreturn]] void hang() {
  while (true) std::this_thread::sleep_for(std::chrono::hours(1));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 5 || std::string(argv[3]) != "-o") {
    std::fputs("usage: kcfg-mock-compiler OPTLEVEL INPUT -o OUTPUT\n", stderr);
    return 1;
  }
  const rlimit noCore{0, 0};
  setrlimit(RLIMIT_CORE, &noCore);

  const bool high = std::string(argv[1]) != "-O0";
  std::ifstream in(argv[2], std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "kcfg-mock-compiler: error: cannot read %s\n", argv[2]);
    return 1;
  }
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string fault = markerValue(text, kcfg::mock::kFaultMarker);
  std::string checksum = markerValue(text, kcfg::mock::kChecksumMarker);
  if (checksum.empty()) checksum = "0";

  if (fault == "crash-o0" && !high) std::abort();
  if (fault == "crash-o3" && high) std::raise(SIGSEGV);
  if (fault == "ice-o3" && high) {
    std::fputs("program.c: In function 'main':\nprogram.c:1:1: internal compiler error: in mock_pass, at mock.c:42\n",
                stderr);
    return 1;
  }
  if (fault == "crash-both") return 4;
  if ((fault == "timeout-o0" && !high) || (fault == "timeout-o3" && high) || fault == "timeout-both") hang();
  if (fault == "compile-error-both") {
    std::fputs("program.c:3:1: error: expected ';' before '}' token\n", stderr);
    return 1;
  }

  std::string body = "echo 'checksum = " + checksum + "'\n";
  if (high) {
    if (fault == "miscompile") {
      checksum.back() = checksum.back() == '0' ? '1' : '0';
      body = "echo 'checksum = " + checksum + "'\n";
    } else if (fault == "run-timeout-o3") {
      body = "exec sleep 3600\n";
    } else if (fault == "run-crash-o3") {
      body = "kill -SEGV $$\n";
    }
  }
  {
    std::ofstream out(argv[4], std::ios::binary | std::ios::trunc);
    out << "#!/bin/sh\nulimit -c 0\n" << body;
    if (!out) return 1;
  }
  chmod(argv[4], 0755);
  return 0;
}
