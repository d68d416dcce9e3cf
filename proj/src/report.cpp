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

#include "kcfg/report.hpp"

#include <fmt/format.h>

#include "json.hpp"
#include "kcfg/error.hpp"

namespace kcfg {

using Json = nlohmann::ordered_json;

ExperimentSummary summarize(const Ledger& ledger, std::string label) {
  ExperimentSummary s;
  s.label = std::move(label);
  for (const TrialRecord& r : ledger.records) {
    ++s.testInputs;
    switch (r.failureClass) {
      case FailureClass::kNone:
        break;
      case FailureClass::kMiscompilation:
        ++s.miscompilation;
        break;
      case FailureClass::kCrashO0:
        ++s.crashO0;
        break;
      case FailureClass::kCrashO3:
        ++s.crashO3;
        break;
      case FailureClass::kCrashBoth:
        ++s.crashBoth;
        break;
      case FailureClass::kTimeoutO0:
        ++s.timeoutO0;
        break;
      case FailureClass::kTimeoutO3:
        ++s.timeoutO3;
        break;
      case FailureClass::kTimeoutBoth:
        ++s.timeoutBoth;
        break;
      case FailureClass::kRunDivergenceTimeout:
        ++s.runDivergenceTimeout;
        break;
      case FailureClass::kGeneratorError:
        ++s.generatorError;
        break;
      case FailureClass::kCompileErrorBoth:
        ++s.compileErrorBoth;
        break;
    }
  }
  s.totalCrash = s.crashO0 + s.crashO3 + s.crashBoth;
  s.totalTimeout = s.timeoutO0 + s.timeoutO3 + s.timeoutBoth;
  return s;
}

ExperimentSummary summarize(const std::filesystem::path& ledgerPath) {
  return summarize(readLedger(ledgerPath), ledgerPath.stem().string());
}

std::string summaryCsvHeader() {
  return "Experiment ID,Test input,Crash(0),Crash(3),Crash(both),Total Crash,Timeout(0),Timeout(3),Timeout(both),"
         "Total Timeout,Miscompilation,Generator error,Compile error(both),Run divergence timeout";
}

std::string summaryCsv(std::span<const ExperimentSummary> summaries) {
  std::string out = summaryCsvHeader() + "\n";
  for (const ExperimentSummary& s : summaries) {
    std::string label = s.label;
    if (label.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : label) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      label = quoted + "\"";
    }
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", label, s.testInputs, s.crashO0, s.crashO3,
                       s.crashBoth, s.totalCrash, s.timeoutO0, s.timeoutO3, s.timeoutBoth, s.totalTimeout,
                       s.miscompilation, s.generatorError, s.compileErrorBoth, s.runDivergenceTimeout);
  }
  return out;
}

std::string summaryJson(std::span<const ExperimentSummary> summaries) {
  Json all = Json::array();
  for (const ExperimentSummary& s : summaries) {
    all.push_back({{"Experiment ID", s.label},
                   {"Test input", s.testInputs},
                   {"Crash(0)", s.crashO0},
                   {"Crash(3)", s.crashO3},
                   {"Crash(both)", s.crashBoth},
                   {"Total Crash", s.totalCrash},
                   {"Timeout(0)", s.timeoutO0},
                   {"Timeout(3)", s.timeoutO3},
                   {"Timeout(both)", s.timeoutBoth},
                   {"Total Timeout", s.totalTimeout},
                   {"Miscompilation", s.miscompilation},
                   {"Generator error", s.generatorError},
                   {"Compile error(both)", s.compileErrorBoth},
                   {"Run divergence timeout", s.runDivergenceTimeout}});
  }
  return all.dump(2) + "\n";
}

std::string_view frequencyBandName(FrequencyBand band) {
  switch (band) {
    case FrequencyBand::kVeryFrequent:
      return "very frequent";
    case FrequencyBand::kOccasionally:
      return "occasionally";
    case FrequencyBand::kRarely:
      break;
  }
  return "rarely";
}

void Bands::validate() const {
  if (!(0.0 < lo && lo < hi && hi < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("bands need 0 < lo < hi < 1, got {},{}", lo, hi));
  }
}

FeatureFrequencyReport featureFrequency(const std::optional<CorpusStats>& stats,
                                        std::span<const std::vector<Centroid>> runs, const Bands& bands) {
  bands.validate();
  FeatureFrequencyReport report;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    FeatureFrequencyRow& row = report.rows[f];
    row.name = kFeatureNames[f];
    if (stats) row.corpusProgramCount = stats->perFeatureProgramCount[f];
    double sum = 0.0;
    std::size_t count = 0;
    for (const std::vector<Centroid>& run : runs) {
      std::vector<double> values;
      for (const Centroid& c : run) {
        values.push_back(c[f]);
        sum += c[f];
        ++count;
      }
      row.centroidValues.push_back(std::move(values));
    }
    row.score = count ? sum / static_cast<double>(count) : 0.0;
    row.band = row.score >= bands.hi   ? FrequencyBand::kVeryFrequent
               : row.score >= bands.lo ? FrequencyBand::kOccasionally
                                       : FrequencyBand::kRarely;
  }
  return report;
}

std::string featuresCsv(const FeatureFrequencyReport& report) {
  std::string out = "feature,name,corpusProgramCount,score,band";
  const auto& first = report.rows[0].centroidValues;
  for (std::size_t r = 0; r < first.size(); ++r) {
    for (std::size_t c = 0; c < first[r].size(); ++c) out += fmt::format(",run{}.c{}", r, c);
  }
  out += "\n";
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const FeatureFrequencyRow& row = report.rows[f];
    out += fmt::format("{},{},{},{:.6f},{}", f, row.name,
                       row.corpusProgramCount ? std::to_string(*row.corpusProgramCount) : std::string(), row.score,
                       frequencyBandName(row.band));
    for (const auto& run : row.centroidValues) {
      for (double v : run) out += fmt::format(",{:.6f}", v);
    }
    out += "\n";
  }
  return out;
}

}  // namespace kcfg
