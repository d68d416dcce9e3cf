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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kcfg {

inline constexpr std::size_t kFeatureCount = 28;

// Generator-controllable constructs, in the canonical order used by every
// vector, centroid and file format in the toolkit.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "argc",
    "arrays",
    "bitfields",
    "comma-operators",
    "compound-assignment",
    "consts",
    "divs",
    "pre-incr-operator",
    "pre-decr-operator",
    "post-incr-operator",
    "post-decr-operator",
    "unary-plus-operator",
    "jumps",
    "longlong",
    "int8",
    "uint8",
    "float",
    "inline-function",
    "muls",
    "packed-struct",
    "pointers",
    "structs",
    "unions",
    "volatiles",
    "volatile-pointers",
    "const-pointers",
    "global-variables",
    "builtins",
};

struct FeatureId {
  std::size_t index = 0;
  std::string_view name;

  friend bool operator==(const FeatureId&, const FeatureId&) = default;
};

// Named indices for the places that need a specific feature.
namespace feature {
inline constexpr std::size_t kArgc = 0;
inline constexpr std::size_t kArrays = 1;
inline constexpr std::size_t kBitfields = 2;
inline constexpr std::size_t kCommaOperators = 3;
inline constexpr std::size_t kCompoundAssignment = 4;
inline constexpr std::size_t kConsts = 5;
inline constexpr std::size_t kDivs = 6;
inline constexpr std::size_t kPreIncr = 7;
inline constexpr std::size_t kPreDecr = 8;
inline constexpr std::size_t kPostIncr = 9;
inline constexpr std::size_t kPostDecr = 10;
inline constexpr std::size_t kUnaryPlus = 11;
inline constexpr std::size_t kJumps = 12;
inline constexpr std::size_t kLongLong = 13;
inline constexpr std::size_t kInt8 = 14;
inline constexpr std::size_t kUint8 = 15;
inline constexpr std::size_t kFloat = 16;
inline constexpr std::size_t kInlineFunction = 17;
inline constexpr std::size_t kMuls = 18;
inline constexpr std::size_t kPackedStruct = 19;
inline constexpr std::size_t kPointers = 20;
inline constexpr std::size_t kStructs = 21;
inline constexpr std::size_t kUnions = 22;
inline constexpr std::size_t kVolatiles = 23;
inline constexpr std::size_t kVolatilePointers = 24;
inline constexpr std::size_t kConstPointers = 25;
inline constexpr std::size_t kGlobalVariables = 26;
inline constexpr std::size_t kBuiltins = 27;
}  // namespace feature

// Throws Error{kUnknownFeature}.
FeatureId featureByName(std::string_view name);
std::optional<FeatureId> findFeature(std::string_view name);
FeatureId featureAt(std::size_t index);

using BinaryVector = std::array<std::uint8_t, kFeatureCount>;

// Occurrence counts per feature. Presence is derived, so the
// presence/count agreement cannot be broken.
struct FeatureVector {
  std::array<std::uint32_t, kFeatureCount> counts{};

  BinaryVector binary() const;
  bool has(std::size_t feature) const { return counts[feature] > 0; }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Per-feature inclusion probabilities, each in [0, 1].
class Centroid {
 public:
  Centroid() = default;
  // Throws Error{kInvalidArgument} if any value is outside [0, 1] or NaN.
  explicit Centroid(const std::array<double, kFeatureCount>& values);

  static Centroid uniform(double value);

  const std::array<double, kFeatureCount>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const Centroid&, const Centroid&) = default;

 private:
  std::array<double, kFeatureCount> values_{};
};

struct GeneratorConfig {
  std::array<bool, kFeatureCount> enabled{};
  std::optional<std::size_t> sourceCentroid;
  std::optional<std::uint64_t> drawSeed;
  // Leave every feature at the generator's own default (no flags at all).
  bool generatorDefaults = false;

  static GeneratorConfig allEnabled();
  static GeneratorConfig allDisabled();
  static GeneratorConfig defaults();

  friend bool operator==(const GeneratorConfig&, const GeneratorConfig&) = default;
};

// Always 28 flags in canonical order: `--name` or `--no-name`.
std::vector<std::string> serializeFlags(const GeneratorConfig& config);

// Arguments actually handed to the generator; empty for the defaults mode.
std::vector<std::string> generatorArguments(const GeneratorConfig& config);

struct ParsedFlags {
  GeneratorConfig config;
  // Names of features the flag list did not mention; they stay disabled.
  std::vector<std::string> unmentioned;
};

// Throws Error{kUnknownFeature} on any flag that is not --name / --no-name.
ParsedFlags parseFlags(std::span<const std::string> flags);

std::vector<std::string> featureNameList();

// Accepts a feature-order header read from a file. Throws
// Error{kFeatureOrderMismatch} if it differs from the canonical order.
void checkFeatureOrder(std::span<const std::string> order, std::size_t line = 0);

}  // namespace kcfg
