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

// Source mutations that must not change any extracted feature: comments
// dropped between tokens, and rewritten string-literal bodies.

#include <random>
#include <string>

namespace kcfg::testing {

inline constexpr const char* kNoisyComment = "/* volatile goto * ++ , [x] struct __builtin_x */ ";

// Copies C text, calling onCode after each byte outside comments and literals
// (opening quotes included) and onLiteral in place of each byte or escape
// inside string literals.
template <typename OnCode, typename OnLiteral>
std::string rewriteOutsideComments(const std::string& text, OnCode onCode, OnLiteral onLiteral) {
  std::string out;
  char quote = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quote) {
      if (c == '\\' && i + 1 < text.size()) {
        if (quote == '"') {
          onLiteral(out, std::string_view(text).substr(i, 2));
        } else {
          out.append(text, i, 2);
        }
        ++i;
      } else if (c == quote) {
        out += c;
        quote = 0;
      } else if (quote == '"') {
        onLiteral(out, std::string_view(text).substr(i, 1));
      } else {
        out += c;
      }
      continue;
    }
    out += c;
    if (c == '"' || c == '\'') {
      quote = c;
      onCode(out, c);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && (text[i + 1] == '*' || text[i + 1] == '/')) {
      const bool block = text[i + 1] == '*';
      const std::size_t end = block ? text.find("*/", i + 2) : text.find('\n', i + 2);
      const std::size_t stop = end == std::string::npos ? text.size() : end + (block ? 2 : 0);
      out.append(text, i + 1, stop - i - 1);
      i = stop - 1;
      continue;
    }
    onCode(out, c);
  }
  return out;
}

// Inserts comments after spaces outside literals and comments. Line starts
// stay put so directives keep their leading '#'.
inline std::string injectComments(const std::string& text, std::mt19937_64& rng) {
  return rewriteOutsideComments(
      text,
      [&](std::string& out, char c) {
        if (c == ' ' && rng() % 4 == 0) out += kNoisyComment;
      },
      [](std::string& out, std::string_view piece) { out += piece; });
}

// Replaces each byte (or escape) inside string literals with a random piece
// of C-looking noise, plus one extra piece so empty literals change too.
inline std::string mutateStringLiterals(const std::string& text, std::mt19937_64& rng) {
  static const char* const kNoise[] = {"goto", " ", "++", "--", "*", ",", "[", "]", "{", "}", "/*", "*/", "//",
                                       "volatile", "struct", "union", "#", "'", "\\\"", "\\\\", "__builtin_", "+=",
                                       "long long", "float", "int8_t", ":", "->"};
  auto noise = [&](std::string& out) { out += kNoise[rng() % std::size(kNoise)]; };
  return rewriteOutsideComments(
      text,
      [&](std::string& out, char c) {
        if (c == '"') noise(out);
      },
      [&](std::string& out, std::string_view) { noise(out); });
}

}  // namespace kcfg::testing
