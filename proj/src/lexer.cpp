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

#include "kcfg/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "kcfg/error.hpp"

namespace kcfg::extract {

namespace {

constexpr std::array<std::string_view, 76> kKeywords = {
    "auto", "break", "case", "char", "const", "continue", "default", "do",
    "double", "else", "enum", "extern", "float", "for", "goto", "if",
    "inline", "int", "long", "register", "restrict", "return", "short",
    "signed", "sizeof", "static", "struct", "switch", "typedef", "union",
    "unsigned", "void", "volatile", "while", "_Alignas", "_Alignof",
    "_Atomic", "_Bool", "_Complex", "_Generic", "_Imaginary", "_Noreturn",
    "_Static_assert", "_Thread_local",
    // GNU spellings.
    "__attribute__", "__attribute", "__inline", "__inline__", "__volatile",
    "__volatile__", "__const", "__const__", "__restrict", "__restrict__",
    "__signed", "__signed__", "__asm__", "__asm", "asm", "typeof",
    "__typeof__", "__typeof", "__extension__", "__thread", "__int128",
    "__complex__", "__alignof__", "__alignof", "__label__", "__real__",
    "__imag__", "__auto_type", "_Float128", "_Float64", "_Float32", "__float128",
};

// Longest first so the first hit is the maximal munch.
constexpr std::array<std::string_view, 47> kPunctuators = {
    "...", "<<=", ">>=",
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "*=", "/=", "%=", "+=", "-=", "&=", "^=", "|=", "##",
    "[", "]", "(", ")", "{", "}", ".", "&", "*", "+", "-", "~", "!",
    "/", "%", "<", ">", "^", "|", "?", ":", ";", "=", ",",
};

bool isIdentStart(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$'; }
bool isIdentChar(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$'; }

// Copies a quoted literal starting at text[i] (the quote) into `out`,
// stopping at the closing quote or just before an unescaped newline.
std::size_t copyLiteral(std::string_view text, std::size_t i, std::string& out) {
  const char quote = text[i];
  out += quote;
  ++i;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\\' && i + 1 < text.size()) {
      out += c;
      out += text[i + 1];
      i += 2;
      continue;
    }
    if (c == '\n') return i;
    out += c;
    ++i;
    if (c == quote) return i;
  }
  return i;
}

}  // namespace

bool isKeyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::string stripComments(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  std::size_t line = 1;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '"' || c == '\'') {
      const std::size_t before = out.size();
      i = copyLiteral(text, i, out);
      line += std::count(out.begin() + static_cast<std::ptrdiff_t>(before), out.end(), '\n');
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      const std::size_t start_line = line;
      const std::size_t close = text.find("*/", i + 2);
      if (close == std::string_view::npos) {
        throw Error(ErrorCode::kUnterminatedComment, "block comment never closed", start_line);
      }
      out += ' ';
      for (std::size_t j = i + 2; j < close; ++j) {
        if (text[j] == '\n') {
          out += '\n';
          ++line;
        }
      }
      i = close + 2;
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      i += 2;
      while (i < text.size() && text[i] != '\n') {
        // A backslash-newline splice extends the comment onto the next line.
        if (text[i] == '\\' && i + 1 < text.size() && text[i + 1] == '\n') {
          out += '\n';
          ++line;
          i += 2;
          continue;
        }
        ++i;
      }
      continue;
    }
    if (c == '\n') ++line;
    out += c;
    ++i;
  }
  return out;
}

DirectiveFreeText dropDirectives(std::string_view stripped) {
  DirectiveFreeText result;
  result.text.reserve(stripped.size());
  std::size_t pos = 0;
  std::uint32_t line = 1;
  bool continuation = false;  // previous line was a directive ending in '\'
  while (pos <= stripped.size()) {
    std::size_t eol = stripped.find('\n', pos);
    const bool last = eol == std::string_view::npos;
    if (last) eol = stripped.size();
    std::string_view text = stripped.substr(pos, eol - pos);

    const std::size_t first = text.find_first_not_of(" \t\r\f\v");
    const bool directive = continuation || (first != std::string_view::npos && text[first] == '#');
    if (directive) {
      if (!continuation) {
        std::size_t k = first + 1;
        auto skip_blank = [&] {
          while (k < text.size() && (text[k] == ' ' || text[k] == '\t')) ++k;
        };
        auto word = [&] {
          const std::size_t b = k;
          while (k < text.size() && isIdentChar(static_cast<unsigned char>(text[k]))) ++k;
          return text.substr(b, k - b);
        };
        skip_blank();
        if (word() == "pragma") {
          skip_blank();
          if (word() == "pack") {
            result.pragmaPack.push_back({line, static_cast<std::uint32_t>(first + 1)});
          }
        }
      }
      std::string_view trimmed = text;
      while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' ' || trimmed.back() == '\t')) {
        trimmed.remove_suffix(1);
      }
      continuation = !trimmed.empty() && trimmed.back() == '\\';
    } else {
      result.text.append(text);
    }
    if (last) break;
    result.text += '\n';
    pos = eol + 1;
    ++line;
  }
  return result;
}

TokenStream tokenize(std::string_view text) {
  TokenStream tokens;
  std::size_t i = 0;
  std::uint32_t line = 1;
  std::size_t line_start = 0;
  auto column = [&](std::size_t at) { return static_cast<std::uint32_t>(at - line_start + 1); };

  auto lex_literal = [&](std::size_t start, std::size_t quote_at, TokenKind kind) {
    const char quote = text[quote_at];
    std::size_t j = quote_at + 1;
    while (true) {
      if (j >= text.size() || text[j] == '\n') {
        throw Error(ErrorCode::kUnterminatedLiteral,
                    std::string(kind == TokenKind::kString ? "string" : "character") +
                        " literal not closed on its line",
                    line);
      }
      if (text[j] == '\\' && j + 1 < text.size()) {
        if (text[j + 1] == '\n') {
          ++line;
          line_start = j + 2;
        }
        j += 2;
        continue;
      }
      if (text[j] == quote) break;
      ++j;
    }
    tokens.push_back({kind, std::string(text.substr(start, j + 1 - start)), line, column(start)});
    i = j + 1;
  };

  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == '\n') {
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
      ++i;
      continue;
    }
    if (c == '\\' && i + 1 < text.size() && text[i + 1] == '\n') {
      i += 2;
      ++line;
      line_start = i;
      continue;
    }
    if (c == '"' || c == '\'') {
      lex_literal(i, i, c == '"' ? TokenKind::kString : TokenKind::kChar);
      continue;
    }
    if (isIdentStart(c)) {
      std::size_t j = i;
      while (j < text.size() && isIdentChar(static_cast<unsigned char>(text[j]))) ++j;
      std::string_view word = text.substr(i, j - i);
      if (j < text.size() && (text[j] == '"' || text[j] == '\'') &&
          (word == "L" || word == "u" || word == "U" || word == "u8")) {
        lex_literal(i, j, text[j] == '"' ? TokenKind::kString : TokenKind::kChar);
        continue;
      }
      tokens.push_back({isKeyword(word) ? TokenKind::kKeyword : TokenKind::kIdentifier, std::string(word),
                        line, column(i)});
      i = j;
      continue;
    }
    if (std::isdigit(c) || (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i + 1;
      while (j < text.size()) {
        const unsigned char d = static_cast<unsigned char>(text[j]);
        if ((d == '+' || d == '-') && (text[j - 1] == 'e' || text[j - 1] == 'E' || text[j - 1] == 'p' ||
                                       text[j - 1] == 'P')) {
          ++j;
          continue;
        }
        if (std::isalnum(d) || d == '_' || d == '.') {
          ++j;
          continue;
        }
        break;
      }
      tokens.push_back({TokenKind::kNumber, std::string(text.substr(i, j - i)), line, column(i)});
      i = j;
      continue;
    }
    bool matched = false;
    for (std::string_view p : kPunctuators) {
      if (text.substr(i, p.size()) == p) {
        tokens.push_back({TokenKind::kPunctuator, std::string(p), line, column(i)});
        i += p.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      // '#' only survives here from directive-like text mid-line; keep it as
      // a punctuator so stray stringizing operators do not reject a file.
      if (c == '#') {
        tokens.push_back({TokenKind::kPunctuator, "#", line, column(i)});
        ++i;
        continue;
      }
      throw Error(ErrorCode::kUnexpectedCharacter,
                  "unexpected byte 0x" + [&] {
                    static constexpr char kHex[] = "0123456789abcdef";
                    return std::string{kHex[c >> 4], kHex[c & 15]};
                  }() + " at column " + std::to_string(column(i)),
                  line);
    }
  }
  return tokens;
}

}  // namespace kcfg::extract
