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

#include "kcfg/campaign.hpp"

#include <stdlib.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstring>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "kcfg/corpus.hpp"
#include "kcfg/error.hpp"
#include "kcfg/io.hpp"
#include "kcfg/rng.hpp"
#include "kcfg/version.hpp"

namespace kcfg {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, 6> kLevelStatusNames = {
    "ok", "compilerCrash", "compileTimeout", "compileError", "runTimeout", "runCrash"};

constexpr std::array<std::string_view, kFailureClassCount> kFailureClassNames = {
    "none",      "miscompilation", "crashO0",           "crashO3",        "crashBoth",       "timeoutO0",
    "timeoutO3", "timeoutBoth",    "runDivergenceTimeout", "generatorError", "compileErrorBoth"};

std::string fileTag(std::size_t index, const std::string& optLevel) {
  std::string tag = std::to_string(index) + "-";
  for (char c : optLevel) {
    if (std::isalnum(static_cast<unsigned char>(c))) tag += c;
  }
  return tag;
}

std::string readPrefix(const fs::path& path, std::size_t limit) {
  std::ifstream in(path, std::ios::binary);
  std::string out(limit, '\0');
  in.read(out.data(), static_cast<std::streamsize>(limit));
  out.resize(static_cast<std::size_t>(in.gcount()));
  return out;
}

bool nonEmptyFile(const fs::path& path) {
  std::error_code ec;
  return fs::is_regular_file(path, ec) && fs::file_size(path, ec) > 0;
}

Json exitToJson(const ExitInfo& e) {
  Json j;
  switch (e.kind) {
    case ExitInfo::Kind::kCode:
      j["code"] = e.value;
      break;
    case ExitInfo::Kind::kSignal:
      j["signal"] = e.value;
      break;
    case ExitInfo::Kind::kTimeout:
      j["timeout"] = true;
      break;
  }
  return j;
}

ExitInfo exitFromJson(const Json& j) {
  if (j.contains("signal")) return {ExitInfo::Kind::kSignal, j.at("signal").get<int>()};
  if (j.contains("timeout")) return {ExitInfo::Kind::kTimeout, 0};
  return {ExitInfo::Kind::kCode, j.at("code").get<int>()};
}

std::string dumpLine(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::replace) + "\n"; }

[[noreturn]] void corrupt(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kLedgerCorrupt, what, line);
}

// Buffers finished records and appends them in trialId order.
class LedgerWriter {
 public:
  LedgerWriter(const fs::path& path, const Json& header) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw Error(ErrorCode::kIo, "cannot open ledger " + path.string());
    out_ << dumpLine(header);
    out_.flush();
  }

  void submit(TrialRecord record) {
    std::lock_guard lock(mutex_);
    const std::uint64_t id = record.trialId;
    pending_.emplace(id, std::move(record));
    while (!pending_.empty() && pending_.begin()->first == next_) {
      write(pending_.begin()->second);
      pending_.erase(pending_.begin());
      ++next_;
    }
  }

  // Writes whatever is left after a gap (a trial that aborted the campaign).
  void drain() {
    std::lock_guard lock(mutex_);
    for (auto& [id, record] : pending_) write(record);
    pending_.clear();
  }

 private:
  void write(const TrialRecord& record) {
    out_ << dumpLine(recordToJson(record));
    out_.flush();
  }

  std::mutex mutex_;
  std::ofstream out_;
  std::map<std::uint64_t, TrialRecord> pending_;
  std::uint64_t next_ = 0;
};

// Moves a failing trial's working directory under artifactDir/<class>/ and
// keeps a copy of the program as <class>/<id>.c.
void keepArtifacts(const CampaignSpec& spec, const fs::path& workDir, TrialRecord& record) {
  const std::string cls(failureClassName(record.failureClass));
  const std::string id = std::to_string(record.trialId);
  const fs::path classDir = spec.artifactDir / cls;
  fs::create_directories(classDir);
  const fs::path dest = classDir / id;
  fs::remove_all(dest);
  fs::rename(workDir, dest);
  const fs::path program = dest / "program.c";
  if (fs::exists(program)) {
    fs::copy_file(program, classDir / (id + ".c"), fs::copy_options::overwrite_existing);
    record.programPath = cls + "/" + id + "/program.c";
    record.saved = cls + "/" + id + ".c";
  }
}

Json configSourceJson(const ConfigStream& configs) {
  Json j;
  j["mode"] = configs.isDefaultBaseline() ? "default-baseline" : "centroids";
  j["label"] = configs.centroidSet().label;
  j["seed"] = configs.rngSeed();
  Json rows = Json::array();
  for (const Centroid& c : configs.centroidSet().centroids) rows.push_back(c.values());
  j["centroids"] = std::move(rows);
  return j;
}

}  // namespace

CommandTemplate CommandTemplate::parse(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  bool inToken = false;
  char quote = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quote) {
      if (c == quote) {
        quote = 0;
      } else if (c == '\\' && quote == '"' && i + 1 < text.size()) {
        current += text[++i];
      } else {
        current += c;
      }
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
      inToken = true;
    } else if (c == '\\' && i + 1 < text.size()) {
      current += text[++i];
      inToken = true;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (inToken) tokens.push_back(std::move(current));
      current.clear();
      inToken = false;
    } else {
      current += c;
      inToken = true;
    }
  }
  if (quote) throw Error(ErrorCode::kInvalidArgument, "unbalanced quote in command template: " + std::string(text));
  if (inToken) tokens.push_back(std::move(current));
  if (tokens.empty()) throw Error(ErrorCode::kInvalidArgument, "empty command template");
  return CommandTemplate(std::move(tokens));
}

bool CommandTemplate::hasPlaceholder(std::string_view name) const {
  const std::string needle = "{" + std::string(name) + "}";
  return std::any_of(tokens_.begin(), tokens_.end(),
                     [&](const std::string& t) { return t.find(needle) != std::string::npos; });
}

std::vector<std::string> CommandTemplate::expand(const std::map<std::string, std::vector<std::string>>& values) const {
  std::vector<std::string> out;
  for (const std::string& token : tokens_) {
    bool whole = false;
    for (const auto& [name, args] : values) {
      if (token == "{" + name + "}" && args.size() != 1) {
        out.insert(out.end(), args.begin(), args.end());
        whole = true;
        break;
      }
    }
    if (whole) continue;
    std::string expanded;
    for (std::size_t i = 0; i < token.size();) {
      bool replaced = false;
      if (token[i] == '{') {
        for (const auto& [name, args] : values) {
          const std::string needle = "{" + name + "}";
          if (token.compare(i, needle.size(), needle) != 0) continue;
          if (args.size() != 1) {
            throw Error(ErrorCode::kInvalidArgument, needle + " must stand alone as a template token");
          }
          expanded += args[0];
          i += needle.size();
          replaced = true;
          break;
        }
      }
      if (!replaced) expanded += token[i++];
    }
    out.push_back(std::move(expanded));
  }
  return out;
}

std::string CommandTemplate::text() const {
  std::string out;
  for (const std::string& t : tokens_) {
    if (!out.empty()) out += ' ';
    const bool plain = !t.empty() && std::none_of(t.begin(), t.end(), [](char c) {
      return std::isspace(static_cast<unsigned char>(c)) || c == '\'' || c == '"' || c == '\\';
    });
    if (plain) {
      out += t;
      continue;
    }
    out += '"';
    for (char c : t) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    out += '"';
  }
  return out;
}

void CampaignSpec::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
  };
  require(!generatorCmd.tokens().empty(), "generator command is required");
  require(!compilerCmd.tokens().empty(), "compiler command is required");
  for (const char* p : {"flags", "seed", "output"}) {
    require(generatorCmd.hasPlaceholder(p), std::string("generator command lacks {") + p + "}");
  }
  for (const char* p : {"optlevel", "input", "output"}) {
    require(compilerCmd.hasPlaceholder(p), std::string("compiler command lacks {") + p + "}");
  }
  require(!optLevels[0].empty() && !optLevels[1].empty(), "optimization levels must be non-empty");
  require(optLevels[0] != optLevels[1], "optimization levels must differ");
  require(compileTimeout > 0, "compile timeout must be positive");
  require(runTimeout > 0, "run timeout must be positive");
  require(generatorTimeout > 0, "generator timeout must be positive");
  require(timeBudget >= 0, "time budget must be non-negative");
  require(workers >= 1, "workers must be at least 1");
  require(!artifactDir.empty(), "artifact directory is required");
}

fs::path CampaignSpec::resolvedLedgerPath() const {
  return ledgerPath.empty() ? artifactDir / "ledger.jsonl" : ledgerPath;
}

std::string_view levelStatusName(LevelStatus s) { return kLevelStatusNames[static_cast<std::size_t>(s)]; }

LevelStatus levelStatusByName(std::string_view name) {
  for (std::size_t i = 0; i < kLevelStatusNames.size(); ++i) {
    if (kLevelStatusNames[i] == name) return static_cast<LevelStatus>(i);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown level status " + std::string(name));
}

std::string_view failureClassName(FailureClass c) { return kFailureClassNames[static_cast<std::size_t>(c)]; }

FailureClass failureClassByName(std::string_view name) {
  for (std::size_t i = 0; i < kFailureClassNames.size(); ++i) {
    if (kFailureClassNames[i] == name) return static_cast<FailureClass>(i);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown failure class " + std::string(name));
}

ExitInfo ExitInfo::from(const proc::RunResult& r) {
  if (r.timedOut) return {Kind::kTimeout, 0};
  if (r.signaled) return {Kind::kSignal, r.signal};
  return {Kind::kCode, r.exitCode};
}

bool isCompilerCrash(const proc::RunResult& r, std::string_view stderrText) {
  if (r.signaled) return true;
  if (r.exitCode != 0 && r.exitCode != 1) return true;
  std::string lower(stderrText);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower.find("internal compiler error") != std::string::npos;
}

FailureClass classify(const LevelOutcome& low, const LevelOutcome& high) {
  using S = LevelStatus;
  const S a = low.status;
  const S b = high.status;
  auto either = [&](S s) { return a == s || b == s; };

  if (a == S::kCompilerCrash && b == S::kCompilerCrash) return FailureClass::kCrashBoth;
  if (a == S::kCompilerCrash) return FailureClass::kCrashO0;
  if (b == S::kCompilerCrash) return FailureClass::kCrashO3;

  if (a == S::kCompileTimeout && b == S::kCompileTimeout) return FailureClass::kTimeoutBoth;
  if (a == S::kCompileTimeout) return FailureClass::kTimeoutO0;
  if (b == S::kCompileTimeout) return FailureClass::kTimeoutO3;

  // A rejection at one level only means that level's compiler misbehaved.
  if (a == S::kCompileError && b == S::kCompileError) return FailureClass::kCompileErrorBoth;
  if (a == S::kCompileError) return FailureClass::kCrashO0;
  if (b == S::kCompileError) return FailureClass::kCrashO3;

  if (either(S::kRunTimeout)) return FailureClass::kRunDivergenceTimeout;

  if (a == S::kRunCrash && b == S::kRunCrash) {
    return low.runExit == high.runExit ? FailureClass::kNone : FailureClass::kMiscompilation;
  }
  if (either(S::kRunCrash)) return FailureClass::kMiscompilation;

  const bool same = low.stdoutDigest && high.stdoutDigest && low.stdoutDigest->sha256 == high.stdoutDigest->sha256 &&
                    low.stdoutDigest->size == high.stdoutDigest->size && low.runExit == high.runExit;
  return same ? FailureClass::kNone : FailureClass::kMiscompilation;
}

bool isDifferential(FailureClass c, LevelStatus low, LevelStatus high) {
  switch (c) {
    case FailureClass::kNone:
    case FailureClass::kCrashBoth:
    case FailureClass::kTimeoutBoth:
    case FailureClass::kCompileErrorBoth:
    case FailureClass::kGeneratorError:
      return false;
    case FailureClass::kRunDivergenceTimeout:
      return !(low == LevelStatus::kRunTimeout && high == LevelStatus::kRunTimeout);
    default:
      return true;
  }
}

std::uint32_t generatorSeedFor(std::uint64_t rngSeed, std::uint64_t trialId) {
  return static_cast<std::uint32_t>(mixSeed(rngSeed, trialId) & 0xFFFFFFFFu);
}

GeneratorRun generateProgram(const GeneratorConfig& config, std::uint32_t seed, const CampaignSpec& spec,
                             const fs::path& program, const fs::path& workDir) {
  proc::RunOptions options;
  options.argv = spec.generatorCmd.expand({{"flags", generatorArguments(config)},
                                           {"seed", {std::to_string(seed)}},
                                           {"output", {fs::absolute(program).string()}}});
  options.workDir = workDir;
  options.stdoutPath = workDir / "generator.out";
  options.stderrPath = workDir / "generator.err";
  options.timeoutSeconds = spec.generatorTimeout;
  const proc::RunResult r = proc::run(options);
  if (!r.started) {
    throw Error(ErrorCode::kGeneratorNotFound,
                "cannot start generator '" + options.argv[0] + "': " + std::strerror(r.spawnErrno));
  }
  GeneratorRun g;
  g.exit = ExitInfo::from(r);
  g.seconds = r.seconds;
  if (r.timedOut) {
    g.problem = "generator timed out";
  } else if (r.signaled) {
    g.problem = "generator killed by signal " + std::to_string(r.signal);
  } else if (r.exitCode != 0) {
    g.problem = "generator exited with " + std::to_string(r.exitCode);
  } else {
    // Generators that print the program instead of honoring {output}.
    if (!nonEmptyFile(program) && nonEmptyFile(options.stdoutPath)) fs::rename(options.stdoutPath, program);
    if (!nonEmptyFile(program)) g.problem = "generator produced no program";
  }
  g.ok = g.problem.empty();
  return g;
}

LevelOutcome compileAndRun(const fs::path& program, const std::string& optLevel, const CampaignSpec& spec,
                           const fs::path& workDir) {
  const std::size_t index = optLevel == spec.optLevels[0] ? 0 : 1;
  const std::string tag = fileTag(index, optLevel);
  const fs::path binary = fs::absolute(workDir / ("prog-" + tag));

  LevelOutcome outcome;
  outcome.optLevel = optLevel;
  proc::RunOptions compile;
  compile.argv = spec.compilerCmd.expand({{"optlevel", {optLevel}},
                                          {"input", {fs::absolute(program).string()}},
                                          {"output", {binary.string()}}});
  compile.workDir = workDir;
  compile.stdoutPath = workDir / ("compile-" + tag + ".out");
  compile.stderrPath = workDir / ("compile-" + tag + ".err");
  compile.timeoutSeconds = spec.compileTimeout;
  const proc::RunResult c = proc::run(compile);
  if (!c.started) {
    throw Error(ErrorCode::kCompilerNotFound,
                "cannot start compiler '" + compile.argv[0] + "': " + std::strerror(c.spawnErrno));
  }
  outcome.compileExit = ExitInfo::from(c);
  outcome.compileSeconds = c.seconds;
  if (c.timedOut) {
    outcome.status = LevelStatus::kCompileTimeout;
    return outcome;
  }
  if (isCompilerCrash(c, readPrefix(compile.stderrPath, 1 << 20))) {
    outcome.status = LevelStatus::kCompilerCrash;
    return outcome;
  }
  // Exit 0 without a binary is a rejection as far as the oracle can tell.
  if (c.exitCode != 0 || !fs::exists(binary)) {
    outcome.status = LevelStatus::kCompileError;
    return outcome;
  }

  proc::RunOptions exec;
  exec.argv = {binary.string()};
  exec.workDir = workDir;
  exec.stdoutPath = workDir / ("run-" + tag + ".out");
  exec.stderrPath = workDir / ("run-" + tag + ".err");
  exec.timeoutSeconds = spec.runTimeout;
  const proc::RunResult r = proc::run(exec);
  outcome.runSeconds = r.seconds;
  if (!r.started) {
    outcome.status = LevelStatus::kCompileError;
    return outcome;
  }
  outcome.runExit = ExitInfo::from(r);
  if (r.timedOut) {
    outcome.status = LevelStatus::kRunTimeout;
  } else if (r.signaled) {
    outcome.status = LevelStatus::kRunCrash;
  } else {
    outcome.status = LevelStatus::kOk;
    outcome.stdoutDigest = proc::digestFile(exec.stdoutPath);
  }
  return outcome;
}

TrialRecord runTrial(const CampaignSpec& spec, const GeneratorConfig& config, std::uint64_t trialId,
                     std::uint32_t generatorSeed, const fs::path& workDir) {
  TrialRecord record;
  record.trialId = trialId;
  record.config = config;
  record.generatorSeed = generatorSeed;
  record.startedAt = utcTimestamp();
  fs::create_directories(workDir);
  const fs::path program = workDir / "program.c";
  record.generator = generateProgram(config, generatorSeed, spec, program, workDir);
  if (!record.generator.ok) {
    record.failureClass = FailureClass::kGeneratorError;
  } else {
    for (const std::string& level : spec.optLevels) record.outcomes.push_back(compileAndRun(program, level, spec, workDir));
    record.failureClass = classify(record.outcomes[0], record.outcomes[1]);
    record.differential =
        isDifferential(record.failureClass, record.outcomes[0].status, record.outcomes[1].status);
  }
  record.finishedAt = utcTimestamp();
  return record;
}

std::atomic<bool>& campaignStopFlag() {
  static std::atomic<bool> flag{false};
  return flag;
}

CampaignResult runCampaign(const CampaignSpec& spec, ConfigStream& configs) {
  spec.validate();
  fs::create_directories(spec.artifactDir);
  const fs::path workRoot = spec.artifactDir / "work";
  fs::create_directories(workRoot);

  CampaignResult result;
  result.ledgerPath = spec.resolvedLedgerPath();
  if (result.ledgerPath.has_parent_path()) fs::create_directories(result.ledgerPath.parent_path());
  LedgerWriter writer(result.ledgerPath, ledgerHeader(spec, configs, utcTimestamp()));

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto budget = std::chrono::duration<double>(spec.timeBudget);
  std::mutex dispenser;
  std::uint64_t nextTrial = 0;
  std::atomic<bool> abort{false};
  std::exception_ptr failure;
  std::mutex resultMutex;

  struct Job {
    std::uint64_t trialId;
    GeneratorConfig config;
  };
  auto take = [&](Job& job) {
    std::lock_guard lock(dispenser);
    if (abort || campaignStopFlag()) return false;
    if (Clock::now() - start >= budget) return false;
    if (spec.maxTrials != 0 && nextTrial >= spec.maxTrials) return false;
    job.trialId = nextTrial++;
    job.config = configs.next();
    return true;
  };

  auto worker = [&] {
    Job job;
    while (take(job)) {
      const fs::path workDir = workRoot / ("trial-" + std::to_string(job.trialId));
      try {
        fs::remove_all(workDir);
        TrialRecord record =
            runTrial(spec, job.config, job.trialId, generatorSeedFor(spec.rngSeed, job.trialId), workDir);
        if (record.failureClass == FailureClass::kNone) {
          fs::remove_all(workDir);
        } else {
          keepArtifacts(spec, workDir, record);
        }
        {
          std::lock_guard lock(resultMutex);
          ++result.trials;
          ++result.counts[static_cast<std::size_t>(record.failureClass)];
        }
        writer.submit(std::move(record));
      } catch (...) {
        std::lock_guard lock(resultMutex);
        if (!failure) failure = std::current_exception();
        abort = true;
      }
    }
  };

  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < spec.workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  writer.drain();
  std::error_code ec;
  fs::remove(workRoot, ec);  // only if empty
  if (failure) std::rethrow_exception(failure);
  result.interrupted = campaignStopFlag();
  return result;
}

Json ledgerHeader(const CampaignSpec& spec, const ConfigStream& configs, const std::string& startedAt) {
  Json j;
  j["kind"] = "header";
  j["format"] = "kcfg-ledger";
  j["formatVersion"] = kLedgerFormatVersion;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["featureOrder"] = featureNameList();
  Json s;
  s["generatorCmd"] = spec.generatorCmd.tokens();
  s["compilerCmd"] = spec.compilerCmd.tokens();
  s["optLevels"] = spec.optLevels;
  s["compileTimeout"] = spec.compileTimeout;
  s["runTimeout"] = spec.runTimeout;
  s["generatorTimeout"] = spec.generatorTimeout;
  s["timeBudget"] = spec.timeBudget;
  s["rngSeed"] = spec.rngSeed;
  s["workers"] = spec.workers;
  s["maxTrials"] = spec.maxTrials;
  s["artifactDir"] = spec.artifactDir.string();
  j["spec"] = std::move(s);
  j["configSource"] = configSourceJson(configs);
  j["startedAt"] = startedAt;
  return j;
}

Json recordToJson(const TrialRecord& r) {
  Json j;
  j["kind"] = "trial";
  j["trialId"] = r.trialId;
  j["centroidIndex"] = r.config.sourceCentroid ? Json(*r.config.sourceCentroid) : Json(nullptr);
  j["drawSeed"] = r.config.drawSeed ? Json(*r.config.drawSeed) : Json(nullptr);
  j["generatorDefaults"] = r.config.generatorDefaults;
  j["flags"] = r.config.generatorDefaults ? std::vector<std::string>{} : serializeFlags(r.config);
  j["generatorSeed"] = r.generatorSeed;
  Json gen;
  gen["status"] = r.generator.ok ? "ok" : "error";
  gen["exit"] = exitToJson(r.generator.exit);
  if (!r.generator.problem.empty()) gen["problem"] = r.generator.problem;
  j["generator"] = std::move(gen);
  j["program"] = r.programPath;
  Json outcomes = Json::object();
  Json levelTimes = Json::object();
  for (const LevelOutcome& o : r.outcomes) {
    Json lo;
    lo["status"] = levelStatusName(o.status);
    lo["compileExit"] = exitToJson(o.compileExit);
    lo["runExit"] = o.runExit ? exitToJson(*o.runExit) : Json(nullptr);
    if (o.stdoutDigest) {
      lo["stdout"] = {{"sha256", o.stdoutDigest->sha256}, {"size", o.stdoutDigest->size}, {"head", o.stdoutDigest->head}};
    } else {
      lo["stdout"] = nullptr;
    }
    outcomes[o.optLevel] = std::move(lo);
    levelTimes[o.optLevel] = {{"compileSeconds", o.compileSeconds}, {"runSeconds", o.runSeconds}};
  }
  j["outcomes"] = std::move(outcomes);
  j["failureClass"] = failureClassName(r.failureClass);
  j["differential"] = r.differential;
  j["saved"] = r.saved;
  j["wall"] = {{"start", r.startedAt},
               {"end", r.finishedAt},
               {"generatorSeconds", r.generator.seconds},
               {"levels", std::move(levelTimes)}};
  return j;
}

TrialRecord recordFromJson(const Json& j, std::size_t line) {
  try {
    if (j.value("kind", "") != "trial") corrupt(line, "expected a trial record");
    TrialRecord r;
    r.trialId = j.at("trialId").get<std::uint64_t>();
    r.config.generatorDefaults = j.at("generatorDefaults").get<bool>();
    if (!r.config.generatorDefaults) {
      const auto flags = j.at("flags").get<std::vector<std::string>>();
      r.config = parseFlags(flags).config;
    }
    if (!j.at("centroidIndex").is_null()) r.config.sourceCentroid = j.at("centroidIndex").get<std::size_t>();
    if (!j.at("drawSeed").is_null()) r.config.drawSeed = j.at("drawSeed").get<std::uint64_t>();
    r.generatorSeed = j.at("generatorSeed").get<std::uint32_t>();
    const Json& gen = j.at("generator");
    r.generator.ok = gen.at("status").get<std::string>() == "ok";
    r.generator.exit = exitFromJson(gen.at("exit"));
    r.generator.problem = gen.value("problem", "");
    r.programPath = j.at("program").get<std::string>();
    const Json& wall = j.value("wall", Json::object());
    r.startedAt = wall.value("start", "");
    r.finishedAt = wall.value("end", "");
    r.generator.seconds = wall.value("generatorSeconds", 0.0);
    const Json levelTimes = wall.value("levels", Json::object());
    for (const auto& [level, lo] : j.at("outcomes").items()) {
      LevelOutcome o;
      o.optLevel = level;
      o.status = levelStatusByName(lo.at("status").get<std::string>());
      o.compileExit = exitFromJson(lo.at("compileExit"));
      if (!lo.at("runExit").is_null()) o.runExit = exitFromJson(lo.at("runExit"));
      const Json& out = lo.at("stdout");
      if (!out.is_null()) {
        o.stdoutDigest = proc::StreamDigest{out.at("sha256").get<std::string>(), out.at("size").get<std::uint64_t>(),
                                            out.at("head").get<std::string>()};
      }
      if ((o.status == LevelStatus::kOk) != o.stdoutDigest.has_value()) {
        corrupt(line, "stdout digest must be present exactly when status is ok");
      }
      if (levelTimes.contains(level)) {
        o.compileSeconds = levelTimes[level].value("compileSeconds", 0.0);
        o.runSeconds = levelTimes[level].value("runSeconds", 0.0);
      }
      r.outcomes.push_back(std::move(o));
    }
    if (!r.outcomes.empty() && r.outcomes.size() != 2) corrupt(line, "a trial needs outcomes for two levels");
    r.failureClass = failureClassByName(j.at("failureClass").get<std::string>());
    r.differential = j.at("differential").get<bool>();
    r.saved = j.at("saved").get<std::string>();
    return r;
  } catch (const Json::exception& e) {
    corrupt(line, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kLedgerCorrupt) throw;
    corrupt(line, e.what());
  }
}

Ledger parseLedger(const std::string& text) {
  Ledger ledger;
  std::istringstream in(text);
  std::string line;
  std::size_t lineNo = 0;
  bool sawHeader = false;
  std::set<std::uint64_t> ids;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      corrupt(lineNo, std::string("malformed JSON: ") + e.what());
    }
    if (!sawHeader) {
      if (j.value("format", "") != "kcfg-ledger") corrupt(lineNo, "missing ledger header");
      if (j.value("formatVersion", 0) != kLedgerFormatVersion) {
        throw Error(ErrorCode::kFormatVersionMismatch, "unsupported ledger format version", lineNo);
      }
      try {
        checkFeatureOrder(j.at("featureOrder").get<std::vector<std::string>>(), lineNo);
      } catch (const Json::exception& e) {
        corrupt(lineNo, e.what());
      }
      ledger.header = std::move(j);
      sawHeader = true;
      continue;
    }
    TrialRecord r = recordFromJson(j, lineNo);
    if (!ids.insert(r.trialId).second) corrupt(lineNo, "duplicate trialId " + std::to_string(r.trialId));
    ledger.records.push_back(std::move(r));
  }
  if (!sawHeader) corrupt(std::max<std::size_t>(lineNo, 1), "ledger is empty");
  return ledger;
}

Ledger readLedger(const fs::path& path) { return parseLedger(io::readFile(path)); }

CampaignSpec specFromHeader(const Json& header) {
  try {
    const Json& s = header.at("spec");
    CampaignSpec spec;
    spec.generatorCmd = CommandTemplate(s.at("generatorCmd").get<std::vector<std::string>>());
    spec.compilerCmd = CommandTemplate(s.at("compilerCmd").get<std::vector<std::string>>());
    spec.optLevels = s.at("optLevels").get<std::array<std::string, 2>>();
    spec.compileTimeout = s.at("compileTimeout").get<double>();
    spec.runTimeout = s.at("runTimeout").get<double>();
    spec.generatorTimeout = s.value("generatorTimeout", 30.0);
    spec.timeBudget = s.at("timeBudget").get<double>();
    spec.rngSeed = s.at("rngSeed").get<std::uint64_t>();
    spec.workers = s.at("workers").get<std::size_t>();
    spec.maxTrials = s.value("maxTrials", std::size_t{0});
    spec.artifactDir = s.at("artifactDir").get<std::string>();
    return spec;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kLedgerCorrupt, std::string("ledger header: ") + e.what(), 1);
  }
}

ReplayResult replayTrial(const Ledger& ledger, std::uint64_t trialId) {
  const auto it = std::find_if(ledger.records.begin(), ledger.records.end(),
                               [&](const TrialRecord& r) { return r.trialId == trialId; });
  if (it == ledger.records.end()) {
    throw Error(ErrorCode::kInvalidArgument, "trial " + std::to_string(trialId) + " is not in the ledger");
  }
  const CampaignSpec spec = specFromHeader(ledger.header);
  std::string scratch = (fs::temp_directory_path() / "kcfg-replay-XXXXXX").string();
  if (::mkdtemp(scratch.data()) == nullptr) throw Error(ErrorCode::kIo, "cannot create a scratch directory");
  ReplayResult result;
  result.trialId = trialId;
  result.recorded = it->failureClass;
  try {
    result.replayed = runTrial(spec, it->config, trialId, it->generatorSeed, fs::path(scratch) / "trial").failureClass;
  } catch (...) {
    fs::remove_all(scratch);
    throw;
  }
  fs::remove_all(scratch);
  return result;
}

ReplayResult replayTrial(const fs::path& ledgerPath, std::uint64_t trialId) {
  return replayTrial(readLedger(ledgerPath), trialId);
}

}  // namespace kcfg
