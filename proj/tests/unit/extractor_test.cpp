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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "kcfg/error.hpp"
#include "kcfg/extractor.hpp"
#include "kcfg/io.hpp"
#include "kcfg/lexer.hpp"
#include "injection.hpp"

namespace kcfg::extract {
namespace {

namespace fs = std::filesystem;

const fs::path kMiniCorpus = KCFG_MINICORPUS_DIR;

std::vector<std::string> lexemes(std::string_view text) {
  std::vector<std::string> out;
  for (const Token& t : tokenize(text)) out.push_back(t.lexeme);
  return out;
}

FeatureVector mustExtract(std::string_view text) {
  const ExtractionResult r = extractFeatures(text);
  EXPECT_TRUE(r.parsable) << r.error;
  return r.vector.value_or(FeatureVector{});
}

std::map<std::string, std::set<std::string>> loadLabels() {
  const auto j = nlohmann::json::parse(io::readFile(kMiniCorpus / "labels.json"));
  std::map<std::string, std::set<std::string>> labels;
  for (const auto& [file, names] : j.items()) {
    labels[file] = names.get<std::set<std::string>>();
  }
  return labels;
}

std::set<std::string> presentFeatures(const FeatureVector& v) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (v.has(i)) out.emplace(kFeatureNames[i]);
  }
  return out;
}

TEST(StripComments, Examples) {
  EXPECT_EQ(stripComments("int x; /* volatile */"), "int x;  ");
  EXPECT_EQ(stripComments("char* s = \"/* not a comment */\";"), "char* s = \"/* not a comment */\";");
  EXPECT_EQ(stripComments("// goto\nint y;"), "\nint y;");
  EXPECT_EQ(stripComments("a /* x\ny\n */ b"), "a  \n\n b");
  EXPECT_EQ(stripComments("'/' /* c */ '*'"), "'/'   '*'");
}

TEST(StripComments, UnterminatedThrows) {
  try {
    stripComments("int a;\n/* open");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnterminatedComment);
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Tokenize, MaximalMunch) {
  EXPECT_EQ(lexemes("a+++b"), (std::vector<std::string>{"a", "++", "+", "b"}));
  EXPECT_EQ(lexemes("x<<=2"), (std::vector<std::string>{"x", "<<=", "2"}));
  const TokenStream s = tokenize("\"++\"");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].kind, TokenKind::kString);
}

TEST(Tokenize, NumbersAndPrefixedLiterals) {
  EXPECT_EQ(lexemes("1.5e-3f+0x1p+4"), (std::vector<std::string>{"1.5e-3f", "+", "0x1p+4"}));
  const TokenStream s = tokenize("L\"w\" u8'c' 10ULL");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].kind, TokenKind::kString);
  EXPECT_EQ(s[1].kind, TokenKind::kChar);
  EXPECT_EQ(s[2].kind, TokenKind::kNumber);
}

TEST(Tokenize, PositionsAreOneBased) {
  const TokenStream s = tokenize("int\n  x;");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[1].line, 2u);
  EXPECT_EQ(s[1].column, 3u);
}

TEST(Tokenize, UnterminatedLiteral) {
  try {
    tokenize("char *s = \"abc;\nint x;");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnterminatedLiteral);
  }
}

TEST(Extract, SpecExamples) {
  const FeatureVector main = mustExtract("int main(int argc, char **argv){return argc;}");
  EXPECT_GE(main.counts[feature::kArgc], 1u);
  EXPECT_GE(main.counts[feature::kPointers], 1u);
  EXPECT_EQ(main.counts[feature::kGlobalVariables], 0u);

  const FeatureVector vp = mustExtract("volatile int *p;");
  EXPECT_GE(vp.counts[feature::kVolatiles], 1u);
  EXPECT_GE(vp.counts[feature::kPointers], 1u);
  EXPECT_GE(vp.counts[feature::kVolatilePointers], 1u);

  const ExtractionResult empty = extractFeatures("");
  EXPECT_TRUE(empty.parsable);
  EXPECT_EQ(empty.vector->counts, FeatureVector{}.counts);

  const FeatureVector bf = mustExtract("struct S { int a : 3; };");
  EXPECT_GE(bf.counts[feature::kStructs], 1u);
  EXPECT_GE(bf.counts[feature::kBitfields], 1u);
}

TEST(Extract, CommentContentNeverCounts) {
  const FeatureVector v = mustExtract("int x; /* volatile goto float */");
  EXPECT_EQ(v.counts[feature::kVolatiles], 0u);
  EXPECT_EQ(v.counts[feature::kJumps], 0u);
  EXPECT_EQ(v.counts[feature::kFloat], 0u);
}

TEST(Extract, LiteralContentNeverCounts) {
  const FeatureVector v = mustExtract("const char *s = \"volatile goto a++ x/y __builtin_trap\";\nchar c = '*';");
  EXPECT_EQ(v.counts[feature::kVolatiles], 0u);
  EXPECT_EQ(v.counts[feature::kJumps], 0u);
  EXPECT_EQ(v.counts[feature::kPostIncr], 0u);
  EXPECT_EQ(v.counts[feature::kDivs], 0u);
  EXPECT_EQ(v.counts[feature::kBuiltins], 0u);
  EXPECT_EQ(v.counts[feature::kMuls], 0u);
}

TEST(Extract, UnparsableUnitHasNoVector) {
  for (const char* text : {"/* never closed", "char *s = \"abc;\n", "int x = 3 @ 4;"}) {
    const ExtractionResult r = extractFeatures(text);
    EXPECT_FALSE(r.parsable) << text;
    EXPECT_FALSE(r.vector.has_value());
    EXPECT_FALSE(r.error.empty());
  }
}

TEST(Extract, IncrementClassification) {
  const FeatureVector v = mustExtract("void f(int *p, int a[]){ int i = 0; ++i; i--; (*p)++; a[0]--; --*p; }");
  EXPECT_EQ(v.counts[feature::kPreIncr], 1u);
  EXPECT_EQ(v.counts[feature::kPostDecr], 2u);
  EXPECT_EQ(v.counts[feature::kPostIncr], 1u);
  EXPECT_EQ(v.counts[feature::kPreDecr], 1u);
}

TEST(Extract, BinaryVersusUnaryStar) {
  const FeatureVector v = mustExtract("int f(int *p, int a){ return *p * a; }");
  EXPECT_EQ(v.counts[feature::kMuls], 1u);
  EXPECT_GE(v.counts[feature::kPointers], 1u);
}

TEST(Extract, DiagnosticsPointAtSites) {
  const ExtractionResult r = extractFeatures("int a;\nvoid f(void){ goto end; end: ; }");
  ASSERT_TRUE(r.parsable);
  bool found = false;
  for (const MatchSite& m : r.diagnostics) {
    if (m.feature == feature::kJumps) {
      EXPECT_EQ(m.line, 2u);
      EXPECT_EQ(m.column, 15u);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Extract, InvalidUtf8IsRepaired) {
  const std::string bytes = "int x; /* \xff\xfe */ int y;";
  const SourceUnit unit = SourceUnit::fromBytes("bad.c", bytes);
  EXPECT_NE(unit.text.find("\xEF\xBF\xBD"), std::string::npos);
  EXPECT_TRUE(extractFeatures(unit).parsable);
}

TEST(MiniCorpus, HasTwoFilesPerFeature) {
  const auto labels = loadLabels();
  EXPECT_GE(labels.size(), 56u);
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const std::string stem = (i < 10 ? "0" : "") + std::to_string(i) + "_" + std::string(kFeatureNames[i]);
    ASSERT_TRUE(labels.count(stem + "_pos.c")) << stem;
    ASSERT_TRUE(labels.count(stem + "_neg.c")) << stem;
    EXPECT_TRUE(labels.at(stem + "_pos.c").count(std::string(kFeatureNames[i]))) << stem;
    EXPECT_FALSE(labels.at(stem + "_neg.c").count(std::string(kFeatureNames[i]))) << stem;
  }
}

TEST(MiniCorpus, LabelsMatchExactly) {
  for (const auto& [file, expected] : loadLabels()) {
    const ExtractionResult r = extractFeatures(SourceUnit::fromFile(kMiniCorpus / file));
    ASSERT_TRUE(r.parsable) << file << ": " << r.error;
    EXPECT_EQ(presentFeatures(*r.vector), expected) << file;
  }
}

TEST(MiniCorpus, CommentBlindness) {
  std::mt19937_64 rng(7);
  for (const auto& [file, expected] : loadLabels()) {
    const std::string text = io::readFile(kMiniCorpus / file);
    const ExtractionResult base = extractFeatures(text);
    for (int round = 0; round < 3; ++round) {
      const ExtractionResult noisy = extractFeatures(testing::injectComments(text, rng));
      ASSERT_TRUE(noisy.parsable) << file;
      EXPECT_EQ(noisy.vector->counts, base.vector->counts) << file;
    }
  }
}

TEST(MiniCorpus, StringLiteralBlindness) {
  std::mt19937_64 rng(8);
  for (const auto& [file, expected] : loadLabels()) {
    const std::string text = io::readFile(kMiniCorpus / file);
    const ExtractionResult base = extractFeatures(text);
    const ExtractionResult noisy = extractFeatures(testing::mutateStringLiterals(text, rng));
    ASSERT_TRUE(noisy.parsable) << file;
    EXPECT_EQ(noisy.vector->counts, base.vector->counts) << file;
  }
}

TEST(MiniCorpus, Monotonicity) {
  const auto labels = loadLabels();
  std::vector<std::string> files;
  for (const auto& [file, _] : labels) files.push_back(file);
  for (std::size_t i = 0; i + 1 < files.size(); ++i) {
    const std::string a = io::readFile(kMiniCorpus / files[i]);
    const std::string b = io::readFile(kMiniCorpus / files[i + 1]);
    const FeatureVector va = mustExtract(a);
    const FeatureVector vb = mustExtract(b);
    const FeatureVector both = mustExtract(a + "\n" + b);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      EXPECT_GE(both.counts[f], std::max(va.counts[f], vb.counts[f])) << files[i] << " + " << files[i + 1];
    }
  }
}

TEST(MiniCorpus, Deterministic) {
  for (const auto& [file, _] : loadLabels()) {
    const std::string text = io::readFile(kMiniCorpus / file);
    EXPECT_EQ(extractFeatures(text).vector, extractFeatures(text).vector);
  }
}

}  // namespace
}  // namespace kcfg::extract
