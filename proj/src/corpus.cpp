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

#include "kcfg/corpus.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <chrono>
#include <sstream>
#include <unordered_set>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "json.hpp"
#include "kcfg/error.hpp"
#include "kcfg/extractor.hpp"
#include "kcfg/io.hpp"
#include "kcfg/version.hpp"

namespace kcfg {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

bool matchesAny(const std::string& relative, const std::vector<std::string>& globs) {
  for (const std::string& glob : globs) {
    if (::fnmatch(glob.c_str(), relative.c_str(), 0) == 0) return true;
  }
  return false;
}

DatasetRecord extractRecord(const fs::path& root, const std::string& id) {
  DatasetRecord record;
  record.id = id;
  try {
    const auto unit = extract::SourceUnit::fromFile(root / id);
    auto result = extract::extractFeatures(unit);
    record.parsable = result.parsable;
    record.vector = result.vector;
    record.error = result.error;
  } catch (const Error& e) {
    record.parsable = false;
    record.error = e.what();
  }
  return record;
}

Json recordToJson(const DatasetRecord& r) {
  Json j;
  j["id"] = r.id;
  j["parsable"] = r.parsable;
  if (r.vector) {
    j["counts"] = r.vector->counts;
  } else {
    j["counts"] = nullptr;
  }
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

[[noreturn]] void parseFail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kParseError, what, line);
}

}  // namespace

std::string utcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%FT%TZ}", fmt::gmtime(now));
}

std::vector<BinaryVector> Dataset::parsableBinaryVectors() const {
  std::vector<BinaryVector> out;
  for (const DatasetRecord& r : records) {
    if (r.parsable && r.vector) out.push_back(r.vector->binary());
  }
  return out;
}

std::vector<std::string> Dataset::parsableIds() const {
  std::vector<std::string> out;
  for (const DatasetRecord& r : records) {
    if (r.parsable && r.vector) out.push_back(r.id);
  }
  return out;
}

Dataset ingest(const fs::path& root, const std::vector<std::string>& includeGlobs, Backend backend) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw Error(ErrorCode::kIo, "corpus root is not a directory: " + root.string());
  const std::vector<std::string> globs = includeGlobs.empty() ? std::vector<std::string>{"*.c"} : includeGlobs;

  std::vector<std::string> ids;
  for (const auto& entry : fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied)) {
    if (!entry.is_regular_file()) continue;
    std::string relative = fs::relative(entry.path(), root).generic_string();
    if (matchesAny(relative, globs)) ids.push_back(std::move(relative));
  }
  if (ids.empty()) throw Error(ErrorCode::kEmptyCorpus, "no files under " + root.string() + " match the include globs");
  std::sort(ids.begin(), ids.end());

  Dataset dataset;
  dataset.createdAt = utcTimestamp();
  dataset.corpusRoot = root.string();
  dataset.records.resize(ids.size());
  const auto n = static_cast<std::ptrdiff_t>(ids.size());
  if (backend == Backend::kParallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) dataset.records[i] = extractRecord(root, ids[i]);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) dataset.records[i] = extractRecord(root, ids[i]);
  }
  return dataset;
}

CorpusStats stats(const Dataset& dataset) {
  CorpusStats s;
  s.totalFiles = dataset.records.size();
  for (const DatasetRecord& r : dataset.records) {
    if (!r.parsable || !r.vector) continue;
    ++s.parsableFiles;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      if (r.vector->has(i)) ++s.perFeatureProgramCount[i];
    }
  }
  return s;
}

std::string serializeDataset(const Dataset& dataset) {
  Json header;
  header["format"] = "kcfg-dataset";
  header["formatVersion"] = kDatasetFormatVersion;
  header["featureOrder"] = featureNameList();
  header["createdAt"] = dataset.createdAt;
  header["corpusRoot"] = dataset.corpusRoot;
  std::string out = header.dump() + "\n";
  for (const DatasetRecord& r : dataset.records) out += recordToJson(r).dump() + "\n";
  return out;
}

void saveDataset(const Dataset& dataset, const fs::path& path) { io::writeFile(path, serializeDataset(dataset)); }

Dataset parseDataset(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineNo = 0;
  Dataset dataset;
  bool sawHeader = false;
  std::unordered_set<std::string> ids;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      parseFail(lineNo, std::string("malformed JSON: ") + e.what());
    }
    try {
      if (!sawHeader) {
        if (j.value("format", "") != "kcfg-dataset") parseFail(lineNo, "not a kcfg dataset header");
        const int version = j.at("formatVersion").get<int>();
        if (version != kDatasetFormatVersion) {
          throw Error(ErrorCode::kFormatVersionMismatch,
                      "dataset format version " + std::to_string(version) + ", expected " +
                          std::to_string(kDatasetFormatVersion),
                      lineNo);
        }
        checkFeatureOrder(j.at("featureOrder").get<std::vector<std::string>>(), lineNo);
        dataset.createdAt = j.at("createdAt").get<std::string>();
        dataset.corpusRoot = j.at("corpusRoot").get<std::string>();
        sawHeader = true;
        continue;
      }
      DatasetRecord r;
      r.id = j.at("id").get<std::string>();
      r.parsable = j.at("parsable").get<bool>();
      const Json& counts = j.at("counts");
      if (r.parsable) {
        if (!counts.is_array() || counts.size() != kFeatureCount) parseFail(lineNo, "counts must hold 28 integers");
        FeatureVector v;
        v.counts = counts.get<std::array<std::uint32_t, kFeatureCount>>();
        r.vector = v;
      } else if (!counts.is_null()) {
        parseFail(lineNo, "unparsable record must have null counts");
      }
      r.error = j.value("error", "");
      if (!ids.insert(r.id).second) parseFail(lineNo, "duplicate id " + r.id);
      dataset.records.push_back(std::move(r));
    } catch (const Json::exception& e) {
      parseFail(lineNo, e.what());
    }
  }
  if (!sawHeader) parseFail(std::max<std::size_t>(lineNo, 1), "missing dataset header");
  if (!text.empty() && text.back() != '\n') parseFail(lineNo, "file is truncated (no final newline)");
  return dataset;
}

Dataset loadDataset(const fs::path& path) { return parseDataset(io::readFile(path)); }

void saveStatsCsv(const CorpusStats& s, const fs::path& path) {
  std::string out = "feature,name,count\n";
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    out += fmt::format("{},{},{}\n", i, kFeatureNames[i], s.perFeatureProgramCount[i]);
  }
  io::writeFile(path, out);
}

void saveStatsJson(const CorpusStats& s, const fs::path& path) {
  Json j;
  j["featureOrder"] = featureNameList();
  j["totalFiles"] = s.totalFiles;
  j["parsableFiles"] = s.parsableFiles;
  j["perFeatureProgramCount"] = s.perFeatureProgramCount;
  io::writeFile(path, j.dump(2) + "\n");
}

CorpusStats loadStatsJson(const fs::path& path) {
  Json j;
  try {
    j = Json::parse(io::readFile(path));
    checkFeatureOrder(j.at("featureOrder").get<std::vector<std::string>>());
    CorpusStats s;
    s.totalFiles = j.at("totalFiles").get<std::size_t>();
    s.parsableFiles = j.at("parsableFiles").get<std::size_t>();
    s.perFeatureProgramCount = j.at("perFeatureProgramCount").get<std::array<std::size_t, kFeatureCount>>();
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

void writeProjectorFiles(const Dataset& dataset, const fs::path& dir) {
  std::string vectors;
  std::string metadata = "id\n";
  for (const DatasetRecord& r : dataset.records) {
    if (!r.parsable || !r.vector) continue;
    const BinaryVector b = r.vector->binary();
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      vectors += std::to_string(b[i]);
      vectors += i + 1 == kFeatureCount ? '\n' : '\t';
    }
    metadata += r.id + "\n";
  }
  io::writeFile(dir / "vectors.tsv", vectors);
  io::writeFile(dir / "metadata.tsv", metadata);
}

}  // namespace kcfg
