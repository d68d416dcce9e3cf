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

#include "kcfg/features.hpp"

#include <cmath>

#include "kcfg/error.hpp"

namespace kcfg {

std::optional<FeatureId> findFeature(std::string_view name) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (kFeatureNames[i] == name) return FeatureId{i, kFeatureNames[i]};
  }
  return std::nullopt;
}

FeatureId featureByName(std::string_view name) {
  if (auto id = findFeature(name)) return *id;
  throw Error(ErrorCode::kUnknownFeature, "unknown feature '" + std::string(name) + "'");
}

FeatureId featureAt(std::size_t index) {
  if (index >= kFeatureCount) {
    throw Error(ErrorCode::kUnknownFeature, "feature index " + std::to_string(index) + " out of range");
  }
  return FeatureId{index, kFeatureNames[index]};
}

BinaryVector FeatureVector::binary() const {
  BinaryVector out{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) out[i] = counts[i] > 0 ? 1 : 0;
  return out;
}

Centroid::Centroid(const std::array<double, kFeatureCount>& values) : values_(values) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const double v = values[i];
    if (std::isnan(v) || v < 0.0 || v > 1.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "centroid value for " + std::string(kFeatureNames[i]) + " is outside [0,1]");
    }
  }
}

Centroid Centroid::uniform(double value) {
  std::array<double, kFeatureCount> values;
  values.fill(value);
  return Centroid(values);
}

GeneratorConfig GeneratorConfig::allEnabled() {
  GeneratorConfig c;
  c.enabled.fill(true);
  return c;
}

GeneratorConfig GeneratorConfig::allDisabled() { return GeneratorConfig{}; }

GeneratorConfig GeneratorConfig::defaults() {
  GeneratorConfig c;
  c.generatorDefaults = true;
  return c;
}

std::vector<std::string> serializeFlags(const GeneratorConfig& config) {
  std::vector<std::string> flags;
  flags.reserve(kFeatureCount);
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    std::string flag = config.enabled[i] ? "--" : "--no-";
    flag += kFeatureNames[i];
    flags.push_back(std::move(flag));
  }
  return flags;
}

std::vector<std::string> generatorArguments(const GeneratorConfig& config) {
  if (config.generatorDefaults) return {};
  return serializeFlags(config);
}

ParsedFlags parseFlags(std::span<const std::string> flags) {
  ParsedFlags parsed;
  std::array<bool, kFeatureCount> seen{};
  for (const std::string& flag : flags) {
    std::string_view body(flag);
    if (!body.starts_with("--")) {
      throw Error(ErrorCode::kUnknownFeature, "not a feature flag: '" + flag + "'");
    }
    body.remove_prefix(2);
    bool enable = true;
    auto id = findFeature(body);
    if (!id && body.starts_with("no-")) {
      id = findFeature(body.substr(3));
      enable = false;
    }
    if (!id) throw Error(ErrorCode::kUnknownFeature, "unknown feature flag '" + flag + "'");
    parsed.config.enabled[id->index] = enable;
    seen[id->index] = true;
  }
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!seen[i]) parsed.unmentioned.emplace_back(kFeatureNames[i]);
  }
  return parsed;
}

std::vector<std::string> featureNameList() {
  return std::vector<std::string>(kFeatureNames.begin(), kFeatureNames.end());
}

void checkFeatureOrder(std::span<const std::string> order, std::size_t line) {
  if (order.size() != kFeatureCount) {
    throw Error(ErrorCode::kFeatureOrderMismatch,
                "feature header lists " + std::to_string(order.size()) + " features, expected 28", line);
  }
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (order[i] != kFeatureNames[i]) {
      throw Error(ErrorCode::kFeatureOrderMismatch,
                  "feature " + std::to_string(i) + " is '" + order[i] + "', expected '" +
                      std::string(kFeatureNames[i]) + "'",
                  line);
    }
  }
}

}  // namespace kcfg
