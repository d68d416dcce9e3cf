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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kcfg/features.hpp"
#include "kcfg/parallel.hpp"

namespace kcfg {

struct DatasetRecord {
  std::string id;  // path relative to the corpus root, '/' separated
  bool parsable = false;
  std::optional<FeatureVector> vector;  // present iff parsable
  std::string error;                    // set iff !parsable

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

struct Dataset {
  std::string createdAt;  // ISO-8601 UTC
  std::string corpusRoot;
  std::vector<DatasetRecord> records;  // sorted by id

  std::vector<BinaryVector> parsableBinaryVectors() const;
  std::vector<std::string> parsableIds() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct CorpusStats {
  std::size_t totalFiles = 0;
  std::size_t parsableFiles = 0;
  std::array<std::size_t, kFeatureCount> perFeatureProgramCount{};

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

// Walks `root` recursively and extracts every regular file whose relative
// path matches one of `includeGlobs` (fnmatch syntax; default "*.c").
// Throws Error{kEmptyCorpus} if nothing matches, Error{kIo} if root is
// not a directory.
Dataset ingest(const std::filesystem::path& root, const std::vector<std::string>& includeGlobs,
               Backend backend = Backend::kParallel);

CorpusStats stats(const Dataset& dataset);

// One JSON header line, then one JSON record per line.
void saveDataset(const Dataset& dataset, const std::filesystem::path& path);
std::string serializeDataset(const Dataset& dataset);
// Throws kFormatVersionMismatch, kFeatureOrderMismatch or kParseError
// (with the offending line number).
Dataset loadDataset(const std::filesystem::path& path);
Dataset parseDataset(const std::string& text);

void saveStatsCsv(const CorpusStats& stats, const std::filesystem::path& path);
void saveStatsJson(const CorpusStats& stats, const std::filesystem::path& path);
CorpusStats loadStatsJson(const std::filesystem::path& path);

// vectors.tsv + metadata.tsv, the layout embedding projectors load.
void writeProjectorFiles(const Dataset& dataset, const std::filesystem::path& dir);

std::string utcTimestamp();

}  // namespace kcfg
