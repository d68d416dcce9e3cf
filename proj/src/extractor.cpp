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

#include "kcfg/extractor.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <tuple>
#include <unordered_set>

#include "kcfg/error.hpp"
#include "kcfg/lexer.hpp"

namespace kcfg::extract {

namespace {

using feature::kArgc;
using feature::kArrays;
using feature::kBitfields;
using feature::kBuiltins;
using feature::kCommaOperators;
using feature::kCompoundAssignment;
using feature::kConstPointers;
using feature::kConsts;
using feature::kDivs;
using feature::kFloat;
using feature::kGlobalVariables;
using feature::kInlineFunction;
using feature::kInt8;
using feature::kJumps;
using feature::kLongLong;
using feature::kMuls;
using feature::kPackedStruct;
using feature::kPointers;
using feature::kPostDecr;
using feature::kPostIncr;
using feature::kPreDecr;
using feature::kPreIncr;
using feature::kStructs;
using feature::kUint8;
using feature::kUnaryPlus;
using feature::kUnions;
using feature::kVolatilePointers;
using feature::kVolatiles;

const std::unordered_set<std::string_view> kTypeKeywords = {
    "void", "char", "short", "int", "long", "float", "double", "signed",
    "__signed", "__signed__", "unsigned", "_Bool", "_Complex", "__complex__",
    "__int128", "_Float128", "_Float64", "_Float32", "__float128", "__auto_type",
};

const std::unordered_set<std::string_view> kQualifiers = {
    "const", "__const", "__const__", "volatile", "__volatile", "__volatile__",
    "restrict", "__restrict", "__restrict__", "_Atomic",
};

const std::unordered_set<std::string_view> kStorageAndFunctionSpecifiers = {
    "typedef", "extern", "static", "auto", "register", "_Thread_local", "__thread",
    "inline", "__inline", "__inline__", "_Noreturn", "__extension__",
};

const std::unordered_set<std::string_view> kConstWords = {"const", "__const", "__const__"};
const std::unordered_set<std::string_view> kVolatileWords = {"volatile", "__volatile", "__volatile__"};
const std::unordered_set<std::string_view> kInlineWords = {"inline", "__inline", "__inline__"};
const std::unordered_set<std::string_view> kAttributeWords = {"__attribute__", "__attribute"};
const std::unordered_set<std::string_view> kAsmWords = {"asm", "__asm__", "__asm"};
const std::unordered_set<std::string_view> kTypeofWords = {"typeof", "__typeof__", "__typeof"};

const std::unordered_set<std::string_view> kCompoundAssignOps = {
    "+=", "-=", "*=", "/=", "%=", "<<=", ">>=", "&=", "|=", "^=",
};

// Typedef names a self-contained test program commonly takes from system
// headers, whose #include lines are dropped before analysis.
const std::unordered_set<std::string> kLibraryTypeNames = {
    "int8_t", "uint8_t", "int16_t", "uint16_t", "int32_t", "uint32_t",
    "int64_t", "uint64_t", "int_least8_t", "uint_least8_t", "int_least16_t",
    "uint_least16_t", "int_least32_t", "uint_least32_t", "int_least64_t",
    "uint_least64_t", "int_fast8_t", "uint_fast8_t", "int_fast16_t",
    "uint_fast16_t", "int_fast32_t", "uint_fast32_t", "int_fast64_t",
    "uint_fast64_t", "intmax_t", "uintmax_t", "intptr_t", "uintptr_t",
    "size_t", "ssize_t", "ptrdiff_t", "wchar_t", "wint_t", "char16_t",
    "char32_t", "FILE", "va_list", "__builtin_va_list", "bool", "jmp_buf",
    "sigjmp_buf", "time_t", "clock_t", "off_t", "pid_t", "__int128_t",
    "__uint128_t", "max_align_t",
};

enum class ParenKind { kExpression, kOther };
enum class BraceKind { kRecord, kOther };
enum class StarRole { kNone, kDeclarator, kMultiply, kDereference };

class Analyzer {
 public:
  Analyzer(const TokenStream& tokens, std::vector<MatchSite>& sites)
      : t_(tokens), sites_(sites), skip_(tokens.size(), false), star_(tokens.size(), StarRole::kNone),
        postfix_(tokens.size(), false), type_names_(kLibraryTypeNames.begin(), kLibraryTypeNames.end()) {}

  FeatureVector run() {
    markSkippedRegions();
    collectTypedefs();
    scanTopLevel();
    scanTokens();
    return vector_;
  }

  void addSite(std::size_t feature, std::uint32_t line, std::uint32_t column) {
    ++vector_.counts[feature];
    sites_.push_back({feature, line, column});
  }

 private:
  // ---- token helpers ----------------------------------------------------

  std::size_t size() const { return t_.size(); }
  bool punct(std::size_t i, std::string_view p) const { return i < size() && t_[i].isPunct(p); }
  bool keyword(std::size_t i, std::string_view k) const { return i < size() && t_[i].isKeyword(k); }
  bool kind(std::size_t i, TokenKind k) const { return i < size() && t_[i].kind == k; }
  bool inSet(std::size_t i, const std::unordered_set<std::string_view>& set) const {
    return i < size() && t_[i].kind == TokenKind::kKeyword && set.contains(t_[i].lexeme);
  }
  bool identifier(std::size_t i) const { return kind(i, TokenKind::kIdentifier); }

  void hit(std::size_t feature, std::size_t i) { addSite(feature, t_[i].line, t_[i].column); }

  // Index just past the bracket group opened at `open`; size() if unbalanced.
  std::size_t skipGroup(std::size_t open) const {
    const std::string_view opener = t_[open].lexeme;
    const std::string_view closer = opener == "(" ? ")" : opener == "[" ? "]" : "}";
    int depth = 0;
    for (std::size_t i = open; i < size(); ++i) {
      if (t_[i].kind != TokenKind::kPunctuator) continue;
      if (t_[i].lexeme == opener) ++depth;
      if (t_[i].lexeme == closer && --depth == 0) return i + 1;
    }
    return size();
  }

  bool isTypeName(std::size_t i) const {
    if (!identifier(i)) return false;
    if (type_names_.contains(t_[i].lexeme)) return true;
    // Tag name: `struct S`, `union U`, `enum E`.
    return i > 0 && (keyword(i - 1, "struct") || keyword(i - 1, "union") || keyword(i - 1, "enum"));
  }

  // Ends an operand: the next binary-looking operator really is binary.
  bool endsOperand(std::size_t i) const {
    if (i >= size()) return false;
    const Token& tok = t_[i];
    switch (tok.kind) {
      case TokenKind::kIdentifier:
      case TokenKind::kNumber:
      case TokenKind::kString:
      case TokenKind::kChar:
        return true;
      case TokenKind::kKeyword:
        return false;
      case TokenKind::kPunctuator:
        return tok.lexeme == ")" || tok.lexeme == "]" || postfix_[i];
    }
    return false;
  }

  // ---- pass 1: attribute and asm regions are opaque -----------------------

  void markSkippedRegions() {
    for (std::size_t i = 0; i < size(); ++i) {
      if (inSet(i, kAttributeWords) && punct(i + 1, "(")) {
        const std::size_t end = skipGroup(i + 1);
        for (std::size_t j = i + 1; j < end; ++j) {
          skip_[j] = true;
          if (identifier(j) && (t_[j].lexeme == "packed" || t_[j].lexeme == "__packed__")) {
            hit(kPackedStruct, j);
          }
        }
        i = end - 1;
      } else if (inSet(i, kAsmWords)) {
        std::size_t j = i + 1;
        while (j < size() && t_[j].kind == TokenKind::kKeyword) ++j;  // volatile, goto, inline
        if (punct(j, "(")) {
          const std::size_t end = skipGroup(j);
          for (std::size_t k = i + 1; k < end; ++k) skip_[k] = true;
          i = end - 1;
        }
      }
    }
  }

  // ---- declarations --------------------------------------------------------

  struct Declarator {
    std::size_t name = 0;  // token index; valid only if hasName
    bool hasName = false;
    bool function = false;
  };

  struct Declaration {
    bool typedefDecl = false;
    std::vector<Declarator> declarators;
    std::size_t end = 0;  // one past the last token of the declaration
  };

  // Skips declaration specifiers starting at `i`; returns the first index
  // of the declarator list. `sawType` reports whether any type specifier was
  // present (implicit-int declarations have none).
  std::size_t skipSpecifiers(std::size_t i, bool& typedefDecl, bool& sawType) const {
    while (i < size()) {
      if (skip_[i]) {
        ++i;
        continue;
      }
      if (inSet(i, kAttributeWords) || inSet(i, kTypeofWords) || keyword(i, "_Alignas")) {
        if (inSet(i, kTypeofWords)) sawType = true;
        i = punct(i + 1, "(") ? skipGroup(i + 1) : i + 1;
        continue;
      }
      if (keyword(i, "typedef")) typedefDecl = true;
      if (inSet(i, kStorageAndFunctionSpecifiers) || inSet(i, kQualifiers)) {
        ++i;
        continue;
      }
      if (inSet(i, kTypeKeywords)) {
        sawType = true;
        ++i;
        continue;
      }
      if (keyword(i, "struct") || keyword(i, "union") || keyword(i, "enum")) {
        sawType = true;
        ++i;
        while (i < size() && (skip_[i] || inSet(i, kAttributeWords))) ++i;
        if (identifier(i)) ++i;
        while (i < size() && skip_[i]) ++i;
        if (punct(i, "{")) i = skipGroup(i);
        continue;
      }
      if (identifier(i) && !sawType) {
        const bool known = type_names_.contains(t_[i].lexeme);
        // An unknown identifier directly followed by something that can
        // begin a declarator is a typedef name from a dropped header.
        const bool looksLikeType =
            identifier(i + 1) || punct(i + 1, "*") || inSet(i + 1, kQualifiers) || inSet(i + 1, kAttributeWords);
        if (known || looksLikeType) {
          sawType = true;
          ++i;
          continue;
        }
      }
      break;
    }
    return i;
  }

  // Parses one declarator starting at `i`; leaves `i` at the `,`, `;`, `=`
  // or `{` that ends it (or at the K&R parameter declarations).
  Declarator parseDeclarator(std::size_t& i) const {
    Declarator d;
    while (i < size()) {
      if (skip_[i] || inSet(i, kAttributeWords) || inSet(i, kQualifiers) || punct(i, "*") || punct(i, "(")) {
        if (inSet(i, kAttributeWords) && punct(i + 1, "(")) {
          i = skipGroup(i + 1);
          continue;
        }
        ++i;
        continue;
      }
      break;
    }
    if (identifier(i)) {
      d.name = i;
      d.hasName = true;
      d.function = punct(i + 1, "(");
      ++i;
    }
    // Rest of the declarator: suffixes, closing parens, attributes.
    while (i < size()) {
      if (punct(i, ",") || punct(i, ";") || punct(i, "=") || punct(i, "{")) break;
      if (punct(i, "(") || punct(i, "[")) {
        i = skipGroup(i);
        continue;
      }
      if (punct(i, "}")) break;
      if (d.function && (identifier(i) || inSet(i, kTypeKeywords) || inSet(i, kStorageAndFunctionSpecifiers) ||
                         keyword(i, "struct") || keyword(i, "union") || keyword(i, "enum") ||
                         inSet(i, kQualifiers))) {
        break;  // K&R parameter declarations follow
      }
      ++i;
    }
    return d;
  }

  // Skips an initializer starting at the token after `=`.
  std::size_t skipInitializer(std::size_t i) const {
    while (i < size()) {
      if (punct(i, ",") || punct(i, ";") || punct(i, "}")) return i;
      if (punct(i, "(") || punct(i, "[") || punct(i, "{")) {
        i = skipGroup(i);
        continue;
      }
      ++i;
    }
    return i;
  }

  Declaration parseDeclaration(std::size_t i) const {
    Declaration decl;
    bool sawType = false;
    i = skipSpecifiers(i, decl.typedefDecl, sawType);
    while (i < size()) {
      if (punct(i, ";")) {
        ++i;
        break;
      }
      if (punct(i, "}")) break;  // malformed: let the caller resynchronize
      const std::size_t before = i;
      Declarator d = parseDeclarator(i);
      if (d.hasName) decl.declarators.push_back(d);
      if (d.function && i < size() && !punct(i, ",") && !punct(i, ";") && !punct(i, "=")) {
        // Function definition, possibly with K&R parameter declarations.
        while (i < size() && !punct(i, "{")) ++i;
        if (i < size()) i = skipGroup(i);
        break;
      }
      if (punct(i, "=")) i = skipInitializer(i + 1);
      if (punct(i, ",")) {
        ++i;
        continue;
      }
      if (i == before) ++i;  // no progress; drop the token
    }
    decl.end = i;
    return decl;
  }

  // ---- pass 2: typedef names ---------------------------------------------

  void collectTypedefs() {
    for (std::size_t i = 0; i < size(); ++i) {
      if (!keyword(i, "typedef") || skip_[i]) continue;
      // Specifiers may precede `typedef` (`int typedef T;` is legal but rare);
      // starting at the keyword handles every practical form.
      Declaration decl = parseDeclaration(i);
      for (const Declarator& d : decl.declarators) type_names_.insert(t_[d.name].lexeme);
      if (decl.end > i) i = decl.end - 1;
    }
  }

  // ---- pass 3: file-scope declarations -------------------------------------

  void scanTopLevel() {
    std::size_t i = 0;
    while (i < size()) {
      if (punct(i, ";") || punct(i, "}") || skip_[i]) {
        ++i;
        continue;
      }
      if (inSet(i, kAsmWords) || keyword(i, "_Static_assert")) {
        while (i < size() && !punct(i, ";")) {
          i = punct(i, "(") ? skipGroup(i) : i + 1;
        }
        continue;
      }
      if (punct(i, "{")) {  // stray block
        i = skipGroup(i);
        continue;
      }
      Declaration decl = parseDeclaration(i);
      for (const Declarator& d : decl.declarators) {
        if (d.function) {
          checkMain(d.name);
          continue;
        }
        if (!decl.typedefDecl) hit(kGlobalVariables, d.name);
      }
      i = std::max(decl.end, i + 1);
    }
  }

  // `main` taking at least one parameter reads argc.
  void checkMain(std::size_t name) {
    if (t_[name].lexeme != "main" || !punct(name + 1, "(")) return;
    const std::size_t close = skipGroup(name + 1) - 1;
    const std::size_t inner = close - (name + 2);
    if (inner == 0) return;
    if (inner == 1 && keyword(name + 2, "void")) return;
    hit(kArgc, name);
  }

  // ---- pass 4: token-level rules -------------------------------------------

  void scanTokens() {
    struct Bracket {
      std::string_view opener;
      ParenKind paren = ParenKind::kOther;
      BraceKind brace = BraceKind::kOther;
    };
    std::vector<Bracket> stack;
    bool recordPending = false;  // saw struct/union, waiting for its '{'

    for (std::size_t i = 0; i < size(); ++i) {
      if (skip_[i]) continue;
      const Token& tok = t_[i];
      const std::size_t prev = i == 0 ? size() : i - 1;

      if (tok.kind == TokenKind::kKeyword) {
        const std::string_view w = tok.lexeme;
        if (w == "struct" || w == "union") {
          hit(w == "struct" ? kStructs : kUnions, i);
          recordPending = true;
          continue;
        }
        if (kConstWords.contains(w)) hit(kConsts, i);
        if (kVolatileWords.contains(w)) hit(kVolatiles, i);
        if (kInlineWords.contains(w)) hit(kInlineFunction, i);
        if (w == "goto") hit(kJumps, i);
        if (w == "float" || w == "double") hit(kFloat, i);
        if (w == "long" && keyword(i + 1, "long")) hit(kLongLong, i);
        if (!kAttributeWords.contains(w)) recordPending = false;
        continue;
      }

      if (tok.kind == TokenKind::kIdentifier) {
        const std::string& w = tok.lexeme;
        if (w == "argc") hit(kArgc, i);
        if (w == "int8_t") hit(kInt8, i);
        if (w == "uint8_t") hit(kUint8, i);
        if (w.starts_with("__builtin_")) hit(kBuiltins, i);
        continue;  // a tag name keeps recordPending
      }

      if (tok.kind != TokenKind::kPunctuator) {
        recordPending = false;
        continue;
      }

      const std::string_view p = tok.lexeme;
      if (p == "(" || p == "[" || p == "{") {
        Bracket b{p};
        if (p == "(") {
          const bool afterReturn = keyword(prev, "return");
          const bool afterPunct = prev < size() && t_[prev].kind == TokenKind::kPunctuator &&
                                  t_[prev].lexeme != ")" && t_[prev].lexeme != "]";
          if (afterReturn || afterPunct) b.paren = ParenKind::kExpression;
        }
        if (p == "[" && (identifier(prev) || punct(prev, "]"))) hit(kArrays, i);
        if (p == "{" && recordPending) b.brace = BraceKind::kRecord;
        recordPending = false;
        stack.push_back(b);
        continue;
      }
      recordPending = false;
      if (p == ")" || p == "]" || p == "}") {
        if (!stack.empty()) stack.pop_back();
        continue;
      }
      if (p == ",") {
        if (!stack.empty() && stack.back().opener == "(" && stack.back().paren == ParenKind::kExpression) {
          hit(kCommaOperators, i);
        }
        continue;
      }
      if (p == ":") {
        if (!stack.empty() && stack.back().opener == "{" && stack.back().brace == BraceKind::kRecord &&
            kind(i + 1, TokenKind::kNumber)) {
          hit(kBitfields, i);
        }
        continue;
      }
      if (kCompoundAssignOps.contains(p)) {
        hit(kCompoundAssignment, i);
        continue;
      }
      if (p == "++" || p == "--") {
        const bool post = identifier(prev) || punct(prev, ")") || punct(prev, "]");
        postfix_[i] = post;
        if (p == "++") hit(post ? kPostIncr : kPreIncr, i);
        else hit(post ? kPostDecr : kPreDecr, i);
        continue;
      }
      if (p == "/" || p == "%") {
        if (endsOperand(prev)) hit(kDivs, i);
        continue;
      }
      if (p == "+") {
        if (!endsOperand(prev)) hit(kUnaryPlus, i);
        continue;
      }
      if (p == "&") {
        if (!endsOperand(prev)) hit(kPointers, i);
        continue;
      }
      if (p == "->") {
        hit(kPointers, i);
        continue;
      }
      if (p == "*") {
        classifyStar(i, prev);
        continue;
      }
    }
  }

  void classifyStar(std::size_t i, std::size_t prev) {
    StarRole role = StarRole::kDereference;
    if (prev < size()) {
      const Token& p = t_[prev];
      if (inSet(prev, kTypeKeywords) || inSet(prev, kQualifiers) || isTypeName(prev) ||
          (p.isPunct("*") && star_[prev] == StarRole::kDeclarator)) {
        role = StarRole::kDeclarator;
      } else if (identifier(prev) && looksLikeUnknownTypeDeclarator(prev, i)) {
        type_names_.insert(p.lexeme);
        role = StarRole::kDeclarator;
      } else if (endsOperand(prev)) {
        role = StarRole::kMultiply;
      }
    }
    star_[i] = role;
    if (role == StarRole::kMultiply) {
      hit(kMuls, i);
      return;
    }
    if (role != StarRole::kDeclarator) return;
    hit(kPointers, i);
    const std::size_t lo = i >= 2 ? i - 2 : 0;
    const std::size_t hi = std::min(size() - 1, i + 2);
    bool sawVolatile = false;
    bool sawConst = false;
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j == i || skip_[j]) continue;
      sawVolatile = sawVolatile || inSet(j, kVolatileWords);
      sawConst = sawConst || inSet(j, kConstWords);
    }
    if (sawVolatile) hit(kVolatilePointers, i);
    if (sawConst) hit(kConstPointers, i);
  }

  // `T * p;` at statement start, or `(T *)`: neither parses as a product.
  bool looksLikeUnknownTypeDeclarator(std::size_t name, std::size_t star) const {
    if (punct(star + 1, ")") && name > 0 && punct(name - 1, "(")) return true;
    const bool statementStart = name == 0 || punct(name - 1, ";") || punct(name - 1, "{") || punct(name - 1, "}");
    if (!statementStart) return false;
    std::size_t j = star + 1;
    while (punct(j, "*") || inSet(j, kQualifiers)) ++j;
    return identifier(j) && (punct(j + 1, ";") || punct(j + 1, "=") || punct(j + 1, ",") || punct(j + 1, "["));
  }

  const TokenStream& t_;
  std::vector<MatchSite>& sites_;
  std::vector<bool> skip_;
  std::vector<StarRole> star_;
  std::vector<bool> postfix_;
  std::unordered_set<std::string> type_names_;
  FeatureVector vector_;
};

// Appends U+FFFD for each maximal invalid subsequence.
std::string toValidUtf8(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    const auto c = static_cast<unsigned char>(bytes[i]);
    std::size_t len = 0;
    std::uint32_t min = 0;
    if (c < 0x80) len = 1;
    else if ((c & 0xE0) == 0xC0) len = 2, min = 0x80;
    else if ((c & 0xF0) == 0xE0) len = 3, min = 0x800;
    else if ((c & 0xF8) == 0xF0) len = 4, min = 0x10000;
    bool ok = len != 0 && i + len <= bytes.size();
    std::uint32_t cp = len == 1 ? c : (len == 2 ? c & 0x1F : len == 3 ? c & 0x0F : c & 0x07);
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto cc = static_cast<unsigned char>(bytes[i + k]);
      if ((cc & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (ok && len > 1 && (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))) ok = false;
    if (ok) {
      out.append(bytes.substr(i, len));
      i += len;
    } else {
      out += "\xEF\xBF\xBD";
      ++i;
    }
  }
  return out;
}

}  // namespace

SourceUnit SourceUnit::fromBytes(std::filesystem::path path, std::string_view bytes) {
  return SourceUnit{std::move(path), toValidUtf8(bytes)};
}

SourceUnit SourceUnit::fromFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return fromBytes(path, bytes);
}

std::string SourceUnit::strippedText() const { return stripComments(text); }

ExtractionResult extractFeatures(std::string_view text) {
  ExtractionResult result;
  try {
    const DirectiveFreeText code = dropDirectives(stripComments(text));
    const TokenStream tokens = tokenize(code.text);
    Analyzer analyzer(tokens, result.diagnostics);
    for (const PragmaPackSite& site : code.pragmaPack) {
      analyzer.addSite(feature::kPackedStruct, site.line, site.column);
    }
    FeatureVector v = analyzer.run();
    std::sort(result.diagnostics.begin(), result.diagnostics.end(), [](const MatchSite& a, const MatchSite& b) {
      return std::tie(a.line, a.column, a.feature) < std::tie(b.line, b.column, b.feature);
    });
    result.vector = v;
    result.parsable = true;
  } catch (const Error& e) {
    result.parsable = false;
    result.vector.reset();
    result.diagnostics.clear();
    result.error = e.what();
  }
  return result;
}

ExtractionResult extractFeatures(const SourceUnit& unit) { return extractFeatures(std::string_view(unit.text)); }

}  // namespace kcfg::extract
