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

#include <cstdio>
#include <filesystem>
#include <random>

#include "kcfg/clustering.hpp"
#include "kcfg/error.hpp"
#include "kcfg/io.hpp"
#include "kcfg/report.hpp"

namespace kcfg {
namespace {

namespace fs = std::filesystem;

Ledger ledgerOf(const std::vector<FailureClass>& classes) {
  Ledger ledger;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    TrialRecord r;
    r.trialId = i;
    r.failureClass = classes[i];
    ledger.records.push_back(r);
  }
  return ledger;
}

std::string runCommand(const std::string& cmd) {
  std::string out;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return out;
  char buffer[4096];
  while (std::size_t n = std::fread(buffer, 1, sizeof buffer, pipe)) out.append(buffer, n);
  ::pclose(pipe);
  return out;
}

TEST(Summarize, Example) {
  const ExperimentSummary s = summarize(
      ledgerOf({FailureClass::kNone, FailureClass::kCrashO3, FailureClass::kMiscompilation, FailureClass::kTimeoutBoth}),
      "e");
  EXPECT_EQ(s.testInputs, 4u);
  EXPECT_EQ(s.totalCrash, 1u);
  EXPECT_EQ(s.totalTimeout, 1u);
  EXPECT_EQ(s.miscompilation, 1u);
}

TEST(Summarize, EmptyLedger) {
  const ExperimentSummary s = summarize(Ledger{}, "empty");
  EXPECT_EQ(s, ExperimentSummary{.label = "empty"});
}

TEST(Summarize, CsvHeaderUsesTableColumns) {
  EXPECT_EQ(summaryCsvHeader().substr(0, 131),
            "Experiment ID,Test input,Crash(0),Crash(3),Crash(both),Total Crash,Timeout(0),Timeout(3),Timeout(both),"
            "Total Timeout,Miscompilation");
}

TEST(Summarize, SyntheticLedgerMatchesRecountScript) {
  std::mt19937_64 rng(4);
  std::vector<FailureClass> classes;
  for (int i = 0; i < 1000; ++i) classes.push_back(static_cast<FailureClass>(rng() % kFailureClassCount));
  Ledger ledger = ledgerOf(classes);
  const fs::path path = fs::temp_directory_path() / "kcfg-report-synthetic.jsonl";
  std::string text = R"({"kind":"header","format":"kcfg-ledger","formatVersion":1,"featureOrder":[)";
  for (std::size_t i = 0; i < kFeatureCount; ++i) text += (i ? ",\"" : "\"") + std::string(kFeatureNames[i]) + "\"";
  text += "]}\n";
  for (const TrialRecord& r : ledger.records) text += recordToJson(r).dump() + "\n";
  io::writeFile(path, text);

  const ExperimentSummary s = summarize(path);
  EXPECT_EQ(s.totalCrash, s.crashO0 + s.crashO3 + s.crashBoth);
  EXPECT_EQ(s.totalTimeout, s.timeoutO0 + s.timeoutO3 + s.timeoutBoth);
  const std::vector<ExperimentSummary> one = {s};
  EXPECT_EQ(runCommand("python3 " KCFG_SCRIPTS_DIR "/recount.py " + path.string()), summaryCsv(one));

  // Order independence.
  std::reverse(ledger.records.begin(), ledger.records.end());
  EXPECT_EQ(summarize(ledger, s.label), s);
  fs::remove(path);
}

TEST(FeatureFrequency, BandsFromSingleCentroid) {
  std::array<double, kFeatureCount> v{};
  v[0] = 1.0;
  v[1] = 0.5;
  v[2] = 0.0;
  const std::vector<std::vector<Centroid>> runs = {{Centroid(v)}};
  const FeatureFrequencyReport r = featureFrequency(std::nullopt, runs);
  EXPECT_EQ(r.rows[0].band, FrequencyBand::kVeryFrequent);
  EXPECT_EQ(r.rows[1].band, FrequencyBand::kOccasionally);
  EXPECT_EQ(r.rows[2].band, FrequencyBand::kRarely);
}

TEST(FeatureFrequency, NoRunsMeansRarely) {
  CorpusStats stats;
  stats.perFeatureProgramCount[3] = 9;
  const FeatureFrequencyReport r = featureFrequency(stats, {});
  for (const auto& row : r.rows) EXPECT_EQ(row.band, FrequencyBand::kRarely);
  EXPECT_EQ(r.rows[3].corpusProgramCount, 9u);
}

TEST(FeatureFrequency, MiniCorpusTwoClusters) {
  const Dataset ds = ingest(KCFG_MINICORPUS_DIR, {"*.c"});
  const ClusterResult k2 = cluster(ds, {.k = 2, .seed = 3});
  const ClusterResult k1 = cluster(ds, {.k = 1, .seed = 3});
  const std::vector<std::vector<Centroid>> runs = {k2.centroids, k1.centroids};
  const FeatureFrequencyReport r = featureFrequency(stats(ds), runs);
  const auto data = ds.parsableBinaryVectors();
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    // Hand computation: per-cluster means from the assignment, then the mean
    // over the three centroids.
    double sums[2] = {0, 0};
    double sizes[2] = {0, 0};
    double all = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      sums[k2.assignment[i]] += data[i][f];
      sizes[k2.assignment[i]] += 1;
      all += data[i][f];
    }
    const double expected = (sums[0] / sizes[0] + sums[1] / sizes[1] + all / data.size()) / 3;
    EXPECT_NEAR(r.rows[f].score, expected, 1e-12) << kFeatureNames[f];
    EXPECT_EQ(*r.rows[f].corpusProgramCount, static_cast<std::size_t>(all));
  }
}

TEST(FeatureFrequency, RejectsBadBands) {
  EXPECT_THROW(featureFrequency(std::nullopt, {}, {0.7, 0.3}), Error);
  EXPECT_THROW(featureFrequency(std::nullopt, {}, {0.0, 0.5}), Error);
}

}  // namespace
}  // namespace kcfg
