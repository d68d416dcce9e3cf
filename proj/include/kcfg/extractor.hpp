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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kcfg/features.hpp"

namespace kcfg::extract {

struct SourceUnit {
  std::filesystem::path path;
  std::string text;  // valid UTF-8

  // Decodes raw bytes as UTF-8, replacing invalid sequences with U+FFFD.
  static SourceUnit fromBytes(std::filesystem::path path, std::string_view bytes);
  static SourceUnit fromFile(const std::filesystem::path& path);

  // Throws Error{kUnterminatedComment}.
  std::string strippedText() const;
};

struct MatchSite {
  std::size_t feature = 0;
  std::uint32_t line = 0;
  std::uint32_t column = 0;
};

struct ExtractionResult {
  std::optional<FeatureVector> vector;  // absent iff !parsable
  bool parsable = false;
  std::string error;  // why the unit could not be processed
  std::vector<MatchSite> diagnostics;
};

ExtractionResult extractFeatures(const SourceUnit& unit);
ExtractionResult extractFeatures(std::string_view text);

}  // namespace kcfg::extract
