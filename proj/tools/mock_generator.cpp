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

// Deterministic stand-in for a random program generator. Accepts
// --feature/--no-feature flags, --seed N and -o FILE. The program it writes
// carries marker comments that tell kcfg-mock-compiler how to misbehave, so
// the expected failure class of every program is readable from its text.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "kcfg/features.hpp"
#include "kcfg/rng.hpp"
#include "mock_common.hpp"

namespace {

struct FaultBand {
  unsigned upTo;  // exclusive upper bound on h in [0, 1000)
  const char* fault;
};

// Roughly 10% miscompiles, 5% compiler crashes, 5% compile timeouts.
constexpr std::array<FaultBand, 12> kBands = {{
    {100, "miscompile"},
    {112, "crash-o0"},
    {125, "crash-o3"},
    {137, "ice-o3"},
    {150, "crash-both"},
    {167, "timeout-o0"},
    {184, "timeout-o3"},
    {200, "timeout-both"},
    {210, "compile-error-both"},
    {220, "run-timeout-o3"},
    {230, "run-crash-o3"},
    {240, "generator-error"},
}};

constexpr std::array<const char*, kcfg::kFeatureCount> kSnippets = {
    "int use_argc(int argc) { return argc > 1; }",
    "int g_arr[4] = {1, 2, 3, 4};",
    "struct bits { unsigned a : 3; unsigned b : 5; };",
    "int comma(int x) { return (x++, x + 1); }",
    "int compound(int x) { x += 3; return x; }",
    "const int g_const = 7;",
    "int divide(int a, int b) { return b ? a / b : 0; }",
    "int pre_inc(int x) { return ++x; }",
    "int pre_dec(int x) { return --x; }",
    "int post_inc(int x) { x++; return x; }",
    "int post_dec(int x) { x--; return x; }",
    "int unary_plus(int x) { return +x; }",
    "int jump(int x) { if (x) goto out; x = 1; out: return x; }",
    "long long g_ll = 1;",
    "int8_t g_i8 = -3;",
    "uint8_t g_u8 = 3;",
    "float g_f = 1.5f;",
    "static inline int twice(int x) { return 2 * x; }",
    "int mul(int a, int b) { return a * b; }",
    "struct __attribute__((packed)) packed_s { char c; int i; };",
    "int deref(int *p) { return *p; }",
    "struct pair { int a; int b; };",
    "union u { int i; float f; };",
    "volatile int g_vol;",
    "volatile int *g_vp;",
    "const int *g_cp;",
    "int g_global = 5;",
    "int pop(unsigned x) { return __builtin_popcount(x); }",
};

int usage() {
  std::fputs("usage: kcfg-mock-generator [--feature|--no-feature]... --seed N -o FILE\n", stderr);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> flags;
  std::string output;
  std::uint64_t seed = 0;
  bool haveSeed = false;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--seed" && i + 1 < argc) {
      seed = std::strtoull(argv[++i], nullptr, 10);
      haveSeed = true;
    } else if (arg == "-o" && i + 1 < argc) {
      output = argv[++i];
    } else if (arg.rfind("--", 0) == 0) {
      flags.push_back(arg);
    } else {
      return usage();
    }
  }
  if (!haveSeed || output.empty()) return usage();

  std::array<bool, kcfg::kFeatureCount> enabled{};
  try {
    enabled = kcfg::parseFlags(flags).config.enabled;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "kcfg-mock-generator: %s\n", e.what());
    return 2;
  }

  std::uint64_t flagHash = kcfg::mock::fnv1a("");
  for (const std::string& f : flags) flagHash = kcfg::mock::fnv1a(f + "\n", flagHash);
  const std::uint64_t mixed = kcfg::splitmix64(seed ^ flagHash);
  const unsigned h = static_cast<unsigned>(mixed % 1000);
  const char* fault = "none";
  for (const FaultBand& band : kBands) {
    if (h < band.upTo) {
      fault = band.fault;
      break;
    }
  }
  if (std::string_view(fault) == "generator-error") {
    std::fputs("kcfg-mock-generator: simulated failure\n", stderr);
    return 1;
  }

  char checksum[17];
  std::snprintf(checksum, sizeof checksum, "%016llx", static_cast<unsigned long long>(kcfg::splitmix64(mixed)));

  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  out << kcfg::mock::kFaultMarker << fault << " */\n";
  out << kcfg::mock::kChecksumMarker << checksum << " */\n";
  out << "#include <stdint.h>\n#include <stdio.h>\n\n";
  for (std::size_t i = 0; i < kcfg::kFeatureCount; ++i) {
    if (enabled[i]) out << kSnippets[i] << "\n";
  }
  out << "\nint main(void) {\n  printf(\"checksum = " << checksum << "\\n\");\n  return 0;\n}\n";
  out.close();
  return out ? 0 : 1;
}
