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

#include "kcfg/cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kcfg/campaign.hpp"
#include "kcfg/clustering.hpp"
#include "kcfg/confgen.hpp"
#include "kcfg/corpus.hpp"
#include "kcfg/error.hpp"
#include "kcfg/io.hpp"
#include "kcfg/report.hpp"
#include "kcfg/version.hpp"

namespace kcfg::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string versionText() {
  return std::string(kToolName) + " " + std::string(kToolVersion) + " (dataset format " +
         std::to_string(kDatasetFormatVersion) + ", centroids format " + std::to_string(kCentroidsFormatVersion) +
         ", ledger format " + std::to_string(kLedgerFormatVersion) + ")";
}

std::uint64_t entropySeed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

Backend backendFor(bool serial) { return serial ? Backend::kSerial : Backend::kParallel; }

// Everything a run needs to be repeated: the effective argument vector (config
// file merged, drawn seed made explicit) plus the resolved parameters.
class Manifest {
 public:
  Manifest(std::string subcommand, std::vector<std::string> args)
      : subcommand_(std::move(subcommand)), args_(std::move(args)), startedAt_(utcTimestamp()) {}

  std::uint64_t resolveSeed(const std::optional<std::uint64_t>& seed) {
    const std::uint64_t value = seed ? *seed : entropySeed();
    if (!seed) {
      args_.push_back("--seed=" + std::to_string(value));
      seedDrawn_ = true;
    }
    params_["seed"] = value;
    return value;
  }

  Json& params() { return params_; }

  void write(const fs::path& primaryOutput) const {
    Json j;
    j["subcommand"] = subcommand_;
    j["command"] = args_;
    j["parameters"] = params_;
    j["seedDrawnFromEntropy"] = seedDrawn_;
    j["tool"] = {{"name", kToolName},
                 {"version", kToolVersion},
                 {"datasetFormat", kDatasetFormatVersion},
                 {"centroidsFormat", kCentroidsFormatVersion},
                 {"ledgerFormat", kLedgerFormatVersion}};
    j["startedAt"] = startedAt_;
    j["finishedAt"] = utcTimestamp();
    io::writeFile(primaryOutput.string() + ".manifest.json", j.dump(2) + "\n");
  }

 private:
  std::string subcommand_;
  std::vector<std::string> args_;
  Json params_ = Json::object();
  std::string startedAt_;
  bool seedDrawn_ = false;
};

struct ExtractArgs {
  std::string corpus;
  std::string out;
  std::vector<std::string> include;
  std::string projector;
  bool serial = false;
};

struct ClusterArgs {
  std::string dataset;
  std::size_t k = 0;
  std::optional<std::uint64_t> seed;
  std::size_t nInit = 10;
  std::size_t maxIter = 300;
  double tolerance = 1e-4;
  std::string out;
  bool serial = false;
};

struct GenConfigArgs {
  std::string centroids;
  bool defaultBaseline = false;
  std::optional<std::uint64_t> seed;
  std::size_t count = 0;
  std::string out;
};

struct CampaignArgs {
  std::string centroids;
  bool defaultBaseline = false;
  std::string generatorCmd;
  std::string compilerCmd;
  std::vector<std::string> optLevels = {"-O0", "-O3"};
  double compileTimeout = 10;
  double runTimeout = 10;
  double generatorTimeout = 30;
  std::string budget = "13h";
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  std::size_t maxTrials = 0;
  std::string artifacts;
  std::string ledger;
};

struct ReportArgs {
  std::vector<std::string> ledgers;
  std::string stats;
  std::vector<std::string> centroids;
  std::vector<double> bands = {0.33, 0.66};
  std::string out;
};

struct ReplayArgs {
  std::string ledger;
  std::uint64_t trial = 0;
};

int doExtract(const ExtractArgs& a, Manifest& m, std::ostream& out) {
  const Dataset ds = ingest(a.corpus, a.include, backendFor(a.serial));
  saveDataset(ds, a.out);
  const CorpusStats s = stats(ds);
  saveStatsCsv(s, a.out + ".stats.csv");
  saveStatsJson(s, a.out + ".stats.json");
  if (!a.projector.empty()) writeProjectorFiles(ds, a.projector);
  m.params() = {{"corpus", a.corpus}, {"include", a.include.empty() ? std::vector<std::string>{"*.c"} : a.include},
                {"out", a.out}, {"projector", a.projector}};
  m.write(a.out);
  out << s.totalFiles << " files, " << s.parsableFiles << " parsable, " << s.totalFiles - s.parsableFiles
      << " skipped\n";
  return kExitOk;
}

int doCluster(const ClusterArgs& a, Manifest& m, std::ostream& out) {
  ClusterParams params;
  params.k = a.k;
  params.nInit = a.nInit;
  params.maxIter = a.maxIter;
  params.tolerance = a.tolerance;
  params.seed = m.resolveSeed(a.seed);
  params.validate();
  const Dataset ds = loadDataset(a.dataset);
  const ClusterResult result = cluster(ds, params, backendFor(a.serial));
  saveCentroids(makeCentroidsFile(params, result), a.out);
  m.params().update(Json{{"dataset", a.dataset}, {"k", a.k}, {"nInit", a.nInit}, {"maxIter", a.maxIter},
                         {"tolerance", a.tolerance}, {"out", a.out}});
  m.write(a.out);
  out << "k=" << params.k << " inertia=" << result.inertia << " restart=" << result.restartIndex
      << " iterations=" << result.iterationsRun << "\n";
  return kExitOk;
}

ConfigStream makeStream(const std::string& centroids, bool baseline, std::uint64_t seed) {
  if (baseline == !centroids.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "give exactly one of --centroids and --default-baseline");
  }
  return baseline ? ConfigStream::defaultBaseline(seed) : ConfigStream(loadCentroidSet(centroids), seed);
}

int doGenConfig(const GenConfigArgs& a, Manifest& m, std::ostream& out) {
  const std::uint64_t seed = m.resolveSeed(a.seed);
  ConfigStream stream = makeStream(a.centroids, a.defaultBaseline, seed);
  std::string text;
  for (std::size_t i = 0; i < a.count; ++i) {
    const GeneratorConfig c = stream.next();
    Json j;
    j["index"] = i;
    j["centroidIndex"] = c.sourceCentroid ? Json(*c.sourceCentroid) : Json(nullptr);
    j["drawSeed"] = c.drawSeed ? Json(*c.drawSeed) : Json(nullptr);
    j["flags"] = generatorArguments(c);
    text += j.dump() + "\n";
  }
  if (a.out.empty()) {
    out << text;
    return kExitOk;
  }
  io::writeFile(a.out, text);
  m.params().update(Json{{"centroids", a.centroids}, {"defaultBaseline", a.defaultBaseline}, {"count", a.count},
                         {"out", a.out}});
  m.write(a.out);
  return kExitOk;
}

int doCampaign(const CampaignArgs& a, Manifest& m, std::ostream& out) {
  CampaignSpec spec;
  spec.generatorCmd = CommandTemplate::parse(a.generatorCmd);
  spec.compilerCmd = CommandTemplate::parse(a.compilerCmd);
  if (a.optLevels.size() != 2) throw Error(ErrorCode::kInvalidArgument, "--opt-levels takes exactly two levels");
  spec.optLevels = {a.optLevels[0], a.optLevels[1]};
  spec.compileTimeout = a.compileTimeout;
  spec.runTimeout = a.runTimeout;
  spec.generatorTimeout = a.generatorTimeout;
  spec.timeBudget = parseDuration(a.budget);
  spec.rngSeed = m.resolveSeed(a.seed);
  spec.workers = a.workers;
  spec.maxTrials = a.maxTrials;
  spec.artifactDir = a.artifacts;
  spec.ledgerPath = a.ledger;
  spec.validate();
  ConfigStream stream = makeStream(a.centroids, a.defaultBaseline, spec.rngSeed);
  const CampaignResult result = runCampaign(spec, stream);

  m.params().update(Json{{"centroids", a.centroids},
                         {"defaultBaseline", a.defaultBaseline},
                         {"generatorCmd", spec.generatorCmd.tokens()},
                         {"compilerCmd", spec.compilerCmd.tokens()},
                         {"optLevels", spec.optLevels},
                         {"compileTimeout", spec.compileTimeout},
                         {"runTimeout", spec.runTimeout},
                         {"generatorTimeout", spec.generatorTimeout},
                         {"budgetSeconds", spec.timeBudget},
                         {"workers", spec.workers},
                         {"maxTrials", spec.maxTrials},
                         {"artifacts", a.artifacts},
                         {"ledger", result.ledgerPath.string()}});
  m.write(result.ledgerPath);

  Json summary;
  summary["ledger"] = result.ledgerPath.string();
  summary["trials"] = result.trials;
  Json counts = Json::object();
  for (std::size_t c = 0; c < kFailureClassCount; ++c) {
    counts[std::string(failureClassName(static_cast<FailureClass>(c)))] = result.counts[c];
  }
  summary["counts"] = std::move(counts);
  summary["interrupted"] = result.interrupted;
  out << summary.dump() << "\n";
  return kExitOk;
}

int doReport(const ReportArgs& a, Manifest& m, std::ostream& out) {
  if (a.bands.size() != 2) throw Error(ErrorCode::kInvalidArgument, "--bands takes lo,hi");
  const Bands bands{a.bands[0], a.bands[1]};
  bands.validate();
  std::vector<ExperimentSummary> summaries;
  for (const std::string& ledger : a.ledgers) summaries.push_back(summarize(fs::path(ledger)));
  std::optional<CorpusStats> corpus;
  if (!a.stats.empty()) corpus = loadStatsJson(a.stats);
  std::vector<std::vector<Centroid>> runs;
  for (const std::string& c : a.centroids) runs.push_back(loadCentroids(c).centroids);
  const FeatureFrequencyReport features = featureFrequency(corpus, runs, bands);

  const fs::path dir = a.out;
  io::writeFile(dir / "summary.csv", summaryCsv(summaries));
  io::writeFile(dir / "summary.json", summaryJson(summaries));
  io::writeFile(dir / "features.csv", featuresCsv(features));
  m.params() = {{"ledgers", a.ledgers}, {"stats", a.stats}, {"centroids", a.centroids}, {"bands", a.bands},
                {"out", a.out}};
  m.write(dir / "summary.csv");
  out << summaryCsv(summaries);
  return kExitOk;
}

int doReplay(const ReplayArgs& a, std::ostream& out) {
  const ReplayResult r = replayTrial(fs::path(a.ledger), a.trial);
  Json j;
  j["trialId"] = r.trialId;
  j["recorded"] = failureClassName(r.recorded);
  j["replayed"] = failureClassName(r.replayed);
  j["match"] = r.match();
  out << j.dump() << "\n";
  return r.match() ? kExitOk : kExitRuntime;
}

void reportError(std::ostream& err, std::string_view kind, const std::string& message, std::size_t line = 0) {
  Json j;
  j["error"] = kind;
  j["message"] = message;
  if (line) j["line"] = line;
  err << j.dump(-1, ' ', false, Json::error_handler_t::replace) << "\n";
}

}  // namespace

double parseDuration(std::string_view text) {
  static const std::map<char, double> kUnits = {{'s', 1.0}, {'m', 60.0}, {'h', 3600.0}, {'d', 86400.0}};
  std::string number(text);
  double scale = 1.0;
  if (!number.empty() && kUnits.count(number.back())) {
    scale = kUnits.at(number.back());
    number.pop_back();
  }
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(number, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (number.empty() || used != number.size() || !std::isfinite(value) || value < 0) {
    throw Error(ErrorCode::kInvalidArgument, "bad duration '" + std::string(text) + "' (use e.g. 90s, 30m, 13h)");
  }
  return value * scale;
}

std::vector<std::string> mergeConfigFile(const std::vector<std::string>& args) {
  std::string configPath;
  std::set<std::string> explicitNames;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    const std::size_t eq = a.find('=');
    const std::string name = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    if (name == "config") {
      if (eq != std::string::npos) {
        configPath = a.substr(eq + 1);
      } else if (i + 1 < args.size()) {
        configPath = args[i + 1];
      }
    }
    explicitNames.insert(name);
  }
  if (configPath.empty()) return args;
  std::ifstream in(configPath);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config file " + configPath);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::Error& e) {
    throw Error(ErrorCode::kParseError, configPath + ": " + e.what());
  }
  std::vector<std::string> merged = args;
  for (const CLI::ConfigItem& item : items) {
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == "default")) {
      throw Error(ErrorCode::kParseError, configPath + ": sections are not supported (key " + item.fullname() + ")");
    }
    if (explicitNames.count(item.name) || item.name == "config") continue;
    if (item.inputs.empty()) {
      merged.push_back("--" + item.name);
      continue;
    }
    for (const std::string& value : item.inputs) merged.push_back("--" + item.name + "=" + value);
  }
  return merged;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  if (args.empty()) args.push_back(std::string(kToolName));

  CLI::App app{"Feature-guided configuration toolkit for compiler fuzzing campaigns", std::string(kToolName)};
  app.set_version_flag("--version", versionText());
  app.require_subcommand(1);
  std::string unusedConfig;
  auto addConfig = [&](CLI::App* sub) {
    sub->add_option("--config", unusedConfig, "Flat key = value file; explicit flags win");
  };

  ExtractArgs ex;
  CLI::App* extract = app.add_subcommand("extract", "Extract feature vectors from a corpus of C files");
  extract->add_option("--corpus", ex.corpus, "Corpus root directory")->required();
  extract->add_option("--out", ex.out, "Dataset file (JSONL)")->required();
  extract->add_option("--include", ex.include, "fnmatch glob over relative paths (default *.c)");
  extract->add_option("--projector", ex.projector, "Also write vectors.tsv/metadata.tsv here");
  extract->add_flag("--serial", ex.serial, "Single-threaded extraction");
  addConfig(extract);

  ClusterArgs cl;
  CLI::App* clusterCmd = app.add_subcommand("cluster", "K-Means over a dataset's binary vectors");
  clusterCmd->add_option("--dataset", cl.dataset)->required();
  clusterCmd->add_option("--k", cl.k)->required();
  clusterCmd->add_option("--seed", cl.seed);
  clusterCmd->add_option("--n-init", cl.nInit)->capture_default_str();
  clusterCmd->add_option("--max-iter", cl.maxIter)->capture_default_str();
  clusterCmd->add_option("--tolerance", cl.tolerance)->capture_default_str();
  clusterCmd->add_option("--out", cl.out, "Centroids file (JSON)")->required();
  clusterCmd->add_flag("--serial", cl.serial, "Run restarts one after another");
  addConfig(clusterCmd);

  GenConfigArgs gc;
  CLI::App* genConfig = app.add_subcommand("gen-config", "Sample generator configurations from centroids");
  genConfig->add_option("--centroids", gc.centroids);
  genConfig->add_flag("--default-baseline", gc.defaultBaseline, "Emit generator-default configs");
  genConfig->add_option("--seed", gc.seed);
  genConfig->add_option("--count", gc.count)->required();
  genConfig->add_option("--out", gc.out, "JSONL output (default stdout)");
  addConfig(genConfig);

  CampaignArgs ca;
  CLI::App* campaign = app.add_subcommand("campaign", "Run a time-budgeted differential testing campaign");
  campaign->add_option("--centroids", ca.centroids);
  campaign->add_flag("--default-baseline", ca.defaultBaseline);
  campaign->add_option("--generator-cmd", ca.generatorCmd, "Template with {flags} {seed} {output}")->required();
  campaign->add_option("--compiler-cmd", ca.compilerCmd, "Template with {optlevel} {input} {output}")->required();
  campaign->add_option("--opt-levels", ca.optLevels, "Two levels, e.g. -O0,-O3")
      ->delimiter(',')
      ->capture_default_str();
  campaign->add_option("--compile-timeout", ca.compileTimeout, "Seconds")->capture_default_str();
  campaign->add_option("--run-timeout", ca.runTimeout, "Seconds")->capture_default_str();
  campaign->add_option("--generator-timeout", ca.generatorTimeout, "Seconds")->capture_default_str();
  campaign->add_option("--budget", ca.budget, "Duration: 90s, 30m, 13h")->capture_default_str();
  campaign->add_option("--seed", ca.seed);
  campaign->add_option("--workers", ca.workers)->capture_default_str();
  campaign->add_option("--max-trials", ca.maxTrials, "Stop after this many trials (0: budget only)")
      ->capture_default_str();
  campaign->add_option("--artifacts", ca.artifacts, "Directory for failing trials")->required();
  campaign->add_option("--ledger", ca.ledger, "Ledger path (default <artifacts>/ledger.jsonl)");
  addConfig(campaign);

  ReportArgs rp;
  CLI::App* report = app.add_subcommand("report", "Aggregate ledgers and centroids into tables");
  report->add_option("--ledger", rp.ledgers)->required();
  report->add_option("--stats", rp.stats, "Corpus stats JSON from extract");
  report->add_option("--centroids", rp.centroids);
  report->add_option("--bands", rp.bands, "lo,hi thresholds")->delimiter(',')->capture_default_str();
  report->add_option("--out", rp.out)->required();
  addConfig(report);

  ReplayArgs rl;
  CLI::App* replay = app.add_subcommand("replay", "Re-run one ledger trial and compare its class");
  replay->add_option("--ledger", rl.ledger)->required();
  replay->add_option("--trial", rl.trial)->required();
  addConfig(replay);

  try {
    args = mergeConfigFile(args);
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << versionText() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    reportError(err, "UsageError", e.what());
    CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  } catch (const Error& e) {
    reportError(err, errorCodeName(e.code()), e.what(), e.line());
    return kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    Manifest manifest(sub->get_name(), args);
    if (sub == extract) return doExtract(ex, manifest, out);
    if (sub == clusterCmd) return doCluster(cl, manifest, out);
    if (sub == genConfig) return doGenConfig(gc, manifest, out);
    if (sub == campaign) return doCampaign(ca, manifest, out);
    if (sub == report) return doReport(rp, manifest, out);
    return doReplay(rl, out);
  } catch (const Error& e) {
    reportError(err, errorCodeName(e.code()), e.what(), e.line());
    return e.code() == ErrorCode::kInvalidArgument ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    reportError(err, "RuntimeError", e.what());
    return kExitRuntime;
  }
}

}  // namespace kcfg::cli
