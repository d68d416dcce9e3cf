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

#include "kcfg/confgen.hpp"

#include "kcfg/clustering.hpp"
#include "kcfg/error.hpp"

namespace kcfg {

void CentroidSet::validate() const {
  if (centroids.empty()) throw Error(ErrorCode::kInvalidArgument, "centroid set is empty");
}

CentroidSet loadCentroidSet(const std::filesystem::path& path) {
  CentroidSet set{loadCentroids(path).centroids, path.filename().string()};
  set.validate();
  return set;
}

GeneratorConfig configGen(const Centroid& centroid, Rng& rng) {
  GeneratorConfig config;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    // u can be exactly 0, which would switch on a 0.0 feature.
    const double u = rng.uniform01();
    config.enabled[i] = centroid[i] > 0.0 && u <= centroid[i];
  }
  return config;
}

GeneratorConfig replayConfig(const Centroid& centroid, std::size_t centroidIndex, std::uint64_t drawSeed) {
  Rng rng(drawSeed);
  GeneratorConfig config = configGen(centroid, rng);
  config.sourceCentroid = centroidIndex;
  config.drawSeed = drawSeed;
  return config;
}

ConfigStream::ConfigStream(CentroidSet set, std::uint64_t rngSeed)
    : set_(std::move(set)), rngSeed_(rngSeed), rng_(rngSeed) {
  set_.validate();
}

ConfigStream ConfigStream::defaultBaseline(std::uint64_t rngSeed) {
  ConfigStream stream;
  stream.set_.label = "generator-defaults";
  stream.rngSeed_ = rngSeed;
  stream.rng_ = Rng(rngSeed);
  stream.baseline_ = true;
  return stream;
}

GeneratorConfig ConfigStream::next() {
  ++drawCounter_;
  if (baseline_) return GeneratorConfig::defaults();
  const std::size_t index = nextCentroid_;
  nextCentroid_ = (nextCentroid_ + 1) % set_.centroids.size();
  return replayConfig(set_.centroids[index], index, rng_.next());
}

}  // namespace kcfg
