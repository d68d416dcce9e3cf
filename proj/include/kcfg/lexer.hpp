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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kcfg::extract {

enum class TokenKind { kIdentifier, kKeyword, kNumber, kString, kChar, kPunctuator };

struct Token {
  TokenKind kind;
  std::string lexeme;
  std::uint32_t line = 0;    // 1-based
  std::uint32_t column = 0;  // 1-based, in bytes

  bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
  bool isPunct(std::string_view text) const { return is(TokenKind::kPunctuator, text); }
  bool isKeyword(std::string_view text) const { return is(TokenKind::kKeyword, text); }
};

using TokenStream = std::vector<Token>;

// Replaces each block comment with one space followed by the newlines it
// contained, and removes line comments up to (not including) the newline.
// String and character literals are copied verbatim.
// Throws Error{kUnterminatedComment}.
std::string stripComments(std::string_view text);

struct PragmaPackSite {
  std::uint32_t line = 0;
  std::uint32_t column = 0;
};

struct DirectiveFreeText {
  std::string text;  // directive lines blanked; newlines kept
  std::vector<PragmaPackSite> pragmaPack;
};

// Blanks preprocessor directive lines (including backslash continuations),
// recording any `#pragma pack` first.
DirectiveFreeText dropDirectives(std::string_view stripped);

// Maximal-munch C tokenizer. Throws Error{kUnterminatedLiteral} or
// Error{kUnexpectedCharacter}.
TokenStream tokenize(std::string_view text);

bool isKeyword(std::string_view word);

}  // namespace kcfg::extract
