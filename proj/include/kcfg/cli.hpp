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

#include <chrono>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace kcfg::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

// args[0] is the program name.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

// "90", "90s", "1.5m", "13h", "2d" -> seconds. Throws Error{kInvalidArgument}.
double parseDuration(std::string_view text);

// Fills in keys from a flat `key = value` file named by --config; flags
// given on the command line win. Throws Error{kIo} / Error{kParseError}.
std::vector<std::string> mergeConfigFile(const std::vector<std::string>& args);

}  // namespace kcfg::cli
