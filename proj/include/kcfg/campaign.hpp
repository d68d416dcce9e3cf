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
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kcfg/confgen.hpp"
#include "kcfg/features.hpp"
#include "kcfg/process.hpp"

namespace kcfg {

// An argv template. Tokens are split on whitespace with '...' / "..." quoting
// and backslash escapes; nothing is handed to a shell. Placeholders are
// substituted literally; a token that is exactly {flags} expands to one
// argument per flag.
class CommandTemplate {
 public:
  CommandTemplate() = default;
  // Throws Error{kInvalidArgument} on unbalanced quotes or an empty command.
  static CommandTemplate parse(std::string_view text);
  explicit CommandTemplate(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}

  bool hasPlaceholder(std::string_view name) const;
  std::vector<std::string> expand(const std::map<std::string, std::vector<std::string>>& values) const;
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::string text() const;

  friend bool operator==(const CommandTemplate&, const CommandTemplate&) = default;

 private:
  std::vector<std::string> tokens_;
};

struct CampaignSpec {
  CommandTemplate generatorCmd;  // {flags} {seed} {output}
  CommandTemplate compilerCmd;   // {optlevel} {input} {output}
  std::array<std::string, 2> optLevels = {"-O0", "-O3"};
  double compileTimeout = 10.0;
  double runTimeout = 10.0;
  double generatorTimeout = 30.0;
  double timeBudget = 0.0;  // seconds
  std::uint64_t rngSeed = 0;
  std::size_t workers = 1;
  std::size_t maxTrials = 0;  // 0: bounded by the budget only
  std::filesystem::path artifactDir;
  std::filesystem::path ledgerPath;  // empty: artifactDir/ledger.jsonl

  // Throws Error{kInvalidArgument}.
  void validate() const;
  std::filesystem::path resolvedLedgerPath() const;
};

enum class LevelStatus { kOk, kCompilerCrash, kCompileTimeout, kCompileError, kRunTimeout, kRunCrash };

inline constexpr std::array<LevelStatus, 6> kAllLevelStatuses = {
    LevelStatus::kOk,         LevelStatus::kCompilerCrash, LevelStatus::kCompileTimeout,
    LevelStatus::kCompileError, LevelStatus::kRunTimeout,  LevelStatus::kRunCrash};

std::string_view levelStatusName(LevelStatus s);
LevelStatus levelStatusByName(std::string_view name);

struct ExitInfo {
  enum class Kind { kCode, kSignal, kTimeout };
  Kind kind = Kind::kCode;
  int value = 0;

  static ExitInfo from(const proc::RunResult& r);
  friend bool operator==(const ExitInfo&, const ExitInfo&) = default;
};

struct LevelOutcome {
  std::string optLevel;
  LevelStatus status = LevelStatus::kOk;
  ExitInfo compileExit;
  std::optional<ExitInfo> runExit;          // set when the binary ran
  std::optional<proc::StreamDigest> stdoutDigest;  // set iff status == kOk
  double compileSeconds = 0.0;
  double runSeconds = 0.0;
};

enum class FailureClass {
  kNone,
  kMiscompilation,
  kCrashO0,
  kCrashO3,
  kCrashBoth,
  kTimeoutO0,
  kTimeoutO3,
  kTimeoutBoth,
  kRunDivergenceTimeout,
  kGeneratorError,
  kCompileErrorBoth,
};

inline constexpr std::size_t kFailureClassCount = 11;
std::string_view failureClassName(FailureClass c);
// Throws Error{kInvalidArgument}.
FailureClass failureClassByName(std::string_view name);

// Compiler crash: killed by a signal, exit code outside {0, 1}, or an
// "internal compiler error" diagnostic on stderr.
bool isCompilerCrash(const proc::RunResult& r, std::string_view stderrText);

FailureClass classify(const LevelOutcome& low, const LevelOutcome& high);
// Whether the class counts as a disagreement between the two levels.
bool isDifferential(FailureClass c, LevelStatus low, LevelStatus high);

struct GeneratorRun {
  bool ok = false;
  ExitInfo exit;
  double seconds = 0.0;
  std::string problem;  // why !ok
};

struct TrialRecord {
  std::uint64_t trialId = 0;
  GeneratorConfig config;
  std::uint32_t generatorSeed = 0;
  GeneratorRun generator;
  std::string programPath;  // relative to the artifact dir, empty if not kept
  std::vector<LevelOutcome> outcomes;  // empty for generatorError
  FailureClass failureClass = FailureClass::kNone;
  bool differential = false;
  std::string saved;  // relative path of the saved program copy
  std::string startedAt;
  std::string finishedAt;
};

std::uint32_t generatorSeedFor(std::uint64_t rngSeed, std::uint64_t trialId);

// Runs the generator into `program`. Throws Error{kGeneratorNotFound}.
GeneratorRun generateProgram(const GeneratorConfig& config, std::uint32_t seed, const CampaignSpec& spec,
                             const std::filesystem::path& program, const std::filesystem::path& workDir);

// Throws Error{kCompilerNotFound}.
LevelOutcome compileAndRun(const std::filesystem::path& program, const std::string& optLevel,
                           const CampaignSpec& spec, const std::filesystem::path& workDir);

// One generate, compile/run at both levels, classify cycle inside workDir.
TrialRecord runTrial(const CampaignSpec& spec, const GeneratorConfig& config, std::uint64_t trialId,
                     std::uint32_t generatorSeed, const std::filesystem::path& workDir);

struct CampaignResult {
  std::filesystem::path ledgerPath;
  std::size_t trials = 0;
  std::array<std::size_t, kFailureClassCount> counts{};
  bool interrupted = false;
};

// Set from signal handlers; running campaigns stop dispensing new trials.
std::atomic<bool>& campaignStopFlag();

// Throws Error{kGeneratorNotFound} / Error{kCompilerNotFound}; all other
// per-trial problems become recorded classes.
CampaignResult runCampaign(const CampaignSpec& spec, ConfigStream& configs);

// Ledger JSONL: a header line, then one record per trial in trialId order.
nlohmann::ordered_json ledgerHeader(const CampaignSpec& spec, const ConfigStream& configs,
                                    const std::string& startedAt);
nlohmann::ordered_json recordToJson(const TrialRecord& record);
// Throws Error{kLedgerCorrupt} carrying `line`.
TrialRecord recordFromJson(const nlohmann::ordered_json& j, std::size_t line);

struct Ledger {
  nlohmann::ordered_json header;
  std::vector<TrialRecord> records;
};

// Throws Error{kLedgerCorrupt} with the offending line number.
Ledger readLedger(const std::filesystem::path& path);
Ledger parseLedger(const std::string& text);
CampaignSpec specFromHeader(const nlohmann::ordered_json& header);

struct ReplayResult {
  std::uint64_t trialId = 0;
  FailureClass recorded = FailureClass::kNone;
  FailureClass replayed = FailureClass::kNone;
  bool match() const { return recorded == replayed; }
};

// Re-runs one recorded trial from its ledger entry in a scratch directory.
// Throws Error{kInvalidArgument} for an unknown trial.
ReplayResult replayTrial(const std::filesystem::path& ledgerPath, std::uint64_t trialId);
ReplayResult replayTrial(const Ledger& ledger, std::uint64_t trialId);

}  // namespace kcfg
