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
#include <string>
#include <vector>

#include "kcfg/features.hpp"
#include "kcfg/rng.hpp"

namespace kcfg {

struct CentroidSet {
  std::vector<Centroid> centroids;  // file order
  std::string label;

  // Throws Error{kInvalidArgument} when empty.
  void validate() const;
};

CentroidSet loadCentroidSet(const std::filesystem::path& path);

// One Bernoulli draw per feature in canonical order: enabled iff u <= value
// with u uniform on [0, 1).
GeneratorConfig configGen(const Centroid& centroid, Rng& rng);

// The draw a stream makes for one config: a fresh Rng seeded with drawSeed.
GeneratorConfig replayConfig(const Centroid& centroid, std::size_t centroidIndex, std::uint64_t drawSeed);

// Round-robin config source for a campaign. Single owner; callers that share
// it across threads serialize access.
class ConfigStream {
 public:
  ConfigStream(CentroidSet set, std::uint64_t rngSeed);
  // Emits generator-default configs (no flags), the control arm.
  static ConfigStream defaultBaseline(std::uint64_t rngSeed);

  GeneratorConfig next();

  std::uint64_t drawCounter() const { return drawCounter_; }
  std::size_t nextCentroidIndex() const { return nextCentroid_; }
  bool isDefaultBaseline() const { return baseline_; }
  const CentroidSet& centroidSet() const { return set_; }
  std::uint64_t rngSeed() const { return rngSeed_; }

 private:
  ConfigStream() = default;

  CentroidSet set_;
  std::uint64_t rngSeed_ = 0;
  Rng rng_{0};
  std::uint64_t drawCounter_ = 0;
  std::size_t nextCentroid_ = 0;
  bool baseline_ = false;
};

}  // namespace kcfg
