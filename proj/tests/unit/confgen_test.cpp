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

#include <cmath>

#include "kcfg/confgen.hpp"
#include "kcfg/error.hpp"

namespace kcfg {
namespace {

CentroidSet setOf(std::size_t k, double value = 0.5) {
  CentroidSet set;
  for (std::size_t i = 0; i < k; ++i) set.centroids.push_back(Centroid::uniform(value));
  set.label = "test";
  return set;
}

TEST(ConfigGen, ExtremesAreExact) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng a(seed), b(seed);
    EXPECT_EQ(configGen(Centroid::uniform(1.0), a).enabled, GeneratorConfig::allEnabled().enabled);
    EXPECT_EQ(configGen(Centroid::uniform(0.0), b).enabled, GeneratorConfig::allDisabled().enabled);
  }
}

TEST(ConfigGen, Calibration) {
  std::array<double, kFeatureCount> values{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) values[i] = std::array{0.0, 0.3, 0.7, 1.0}[i % 4];
  const Centroid centroid(values);
  const int draws = 100000;
  std::array<int, kFeatureCount> on{};
  Rng rng(99);
  for (int t = 0; t < draws; ++t) {
    const GeneratorConfig c = configGen(centroid, rng);
    for (std::size_t i = 0; i < kFeatureCount; ++i) on[i] += c.enabled[i];
  }
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const double freq = static_cast<double>(on[i]) / draws;
    if (values[i] == 0.0 || values[i] == 1.0) {
      EXPECT_EQ(freq, values[i]) << kFeatureNames[i];
    } else {
      EXPECT_NEAR(freq, values[i], 0.01) << kFeatureNames[i];
    }
  }
}

TEST(ConfigGen, FeaturesAreIndependent) {
  const int draws = 20000;
  const Centroid centroid = Centroid::uniform(0.4);
  std::vector<std::array<bool, kFeatureCount>> samples;
  Rng rng(7);
  for (int t = 0; t < draws; ++t) samples.push_back(configGen(centroid, rng).enabled);
  const double bound = 5.0 / std::sqrt(draws);
  for (std::size_t a = 0; a < kFeatureCount; ++a) {
    for (std::size_t b = a + 1; b < kFeatureCount; ++b) {
      double ma = 0, mb = 0, mab = 0;
      for (const auto& s : samples) {
        ma += s[a];
        mb += s[b];
        mab += s[a] && s[b];
      }
      ma /= draws;
      mb /= draws;
      mab /= draws;
      const double corr = (mab - ma * mb) / std::sqrt(ma * (1 - ma) * mb * (1 - mb));
      EXPECT_LT(std::abs(corr), bound) << kFeatureNames[a] << " / " << kFeatureNames[b];
    }
  }
}

TEST(ConfigStream, RoundRobinCounts) {
  ConfigStream stream(setOf(3), 1);
  std::array<int, 3> used{};
  for (int i = 0; i < 7; ++i) {
    EXPECT_EQ(stream.nextCentroidIndex(), static_cast<std::size_t>(i % 3));
    ++used[*stream.next().sourceCentroid];
  }
  EXPECT_EQ(used, (std::array<int, 3>{3, 2, 2}));
  EXPECT_EQ(stream.drawCounter(), 7u);
}

TEST(ConfigStream, Fairness) {
  for (std::size_t k : {1u, 2u, 4u, 8u, 16u}) {
    ConfigStream stream(setOf(k), 5);
    std::vector<int> used(k, 0);
    const int n = 1000;
    for (int i = 0; i < n; ++i) ++used[*stream.next().sourceCentroid];
    for (int u : used) {
      EXPECT_TRUE(u == static_cast<int>(n / k) || u == static_cast<int>((n + k - 1) / k)) << "k=" << k;
    }
  }
}

TEST(ConfigStream, DeterministicAndReplayable) {
  CentroidSet set = setOf(2);
  set.centroids[1] = Centroid::uniform(0.2);
  ConfigStream a(set, 1234), b(set, 1234);
  for (int i = 0; i < 50; ++i) {
    const GeneratorConfig x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_EQ(replayConfig(set.centroids[*x.sourceCentroid], *x.sourceCentroid, *x.drawSeed), x);
  }
}

TEST(ConfigStream, DefaultBaselineEmitsNoFlags) {
  ConfigStream stream = ConfigStream::defaultBaseline(3);
  EXPECT_TRUE(stream.isDefaultBaseline());
  for (int i = 0; i < 5; ++i) EXPECT_TRUE(generatorArguments(stream.next()).empty());
  EXPECT_EQ(stream.drawCounter(), 5u);
}

TEST(ConfigStream, EmptySetRejected) {
  EXPECT_THROW(ConfigStream(CentroidSet{}, 0), Error);
}

}  // namespace
}  // namespace kcfg
