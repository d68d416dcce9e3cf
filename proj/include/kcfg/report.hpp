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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kcfg/campaign.hpp"
#include "kcfg/corpus.hpp"
#include "kcfg/features.hpp"

namespace kcfg {

struct ExperimentSummary {
  std::string label;
  std::size_t testInputs = 0;
  std::size_t crashO0 = 0;
  std::size_t crashO3 = 0;
  std::size_t crashBoth = 0;
  std::size_t totalCrash = 0;
  std::size_t timeoutO0 = 0;
  std::size_t timeoutO3 = 0;
  std::size_t timeoutBoth = 0;
  std::size_t totalTimeout = 0;
  std::size_t miscompilation = 0;
  std::size_t generatorError = 0;
  std::size_t compileErrorBoth = 0;
  std::size_t runDivergenceTimeout = 0;

  friend bool operator==(const ExperimentSummary&, const ExperimentSummary&) = default;
};

ExperimentSummary summarize(const Ledger& ledger, std::string label);
// Label defaults to the ledger's file stem. Throws Error{kLedgerCorrupt}.
ExperimentSummary summarize(const std::filesystem::path& ledgerPath);

std::string summaryCsvHeader();
std::string summaryCsv(std::span<const ExperimentSummary> summaries);
std::string summaryJson(std::span<const ExperimentSummary> summaries);

enum class FrequencyBand { kVeryFrequent, kOccasionally, kRarely };
std::string_view frequencyBandName(FrequencyBand band);

struct Bands {
  double lo = 0.33;
  double hi = 0.66;
  // Throws Error{kInvalidArgument} unless 0 < lo < hi < 1.
  void validate() const;
};

struct FeatureFrequencyRow {
  std::string_view name;
  std::optional<std::size_t> corpusProgramCount;
  std::vector<std::vector<double>> centroidValues;  // [run][centroid]
  double score = 0.0;  // mean over every centroid of every run
  FrequencyBand band = FrequencyBand::kRarely;
};

struct FeatureFrequencyReport {
  std::array<FeatureFrequencyRow, kFeatureCount> rows;
};

// Each run is the centroid list of one clustering result.
FeatureFrequencyReport featureFrequency(const std::optional<CorpusStats>& stats,
                                        std::span<const std::vector<Centroid>> runs, const Bands& bands = {});

std::string featuresCsv(const FeatureFrequencyReport& report);

}  // namespace kcfg
