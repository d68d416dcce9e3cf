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
#include <limits>
#include <random>

#include "kcfg/clustering.hpp"
#include "kcfg/error.hpp"
#include "kmeans_oracle.hpp"

namespace kcfg {
namespace {

using testing::bruteForceOptimum;
using testing::randomData;
using testing::sq;

BinaryVector vec(std::initializer_list<int> ones) {
  BinaryVector v{};
  for (int i : ones) v[i] = 1;
  return v;
}

void expectFixedPoint(const std::vector<BinaryVector>& data, const ClusterResult& r) {
  EXPECT_EQ(testing::fixedPointViolation(data, r), "");
}

TEST(KMeansPlusPlus, SingleCenterIsADataPoint) {
  const std::vector<BinaryVector> data = {vec({0}), vec({1}), vec({2})};
  Rng rng(3);
  const auto centers = kmeansPlusPlusSeed(data, 1, rng);
  ASSERT_EQ(centers.size(), 1u);
  bool found = false;
  for (const auto& v : data) found |= kernels::toPoint(v) == centers[0];
  EXPECT_TRUE(found);
}

TEST(KMeansPlusPlus, DuplicatesHaveZeroMass) {
  const std::vector<BinaryVector> data = {vec({}), vec({}), vec({}), vec({0, 1, 2})};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto centers = kmeansPlusPlusSeed(data, 2, rng);
    EXPECT_NE(centers[0], centers[1]);
  }
}

TEST(KMeansPlusPlus, DegenerateData) {
  const std::vector<BinaryVector> data = {vec({1}), vec({1}), vec({2})};
  Rng rng(1);
  try {
    kmeansPlusPlusSeed(data, 3, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateData);
  }
}

TEST(KMeansPlusPlus, SecondCenterFollowsDSquaredWeights) {
  const std::vector<BinaryVector> data = {vec({}), vec({0}), vec({0, 1, 2}), vec({3, 4, 5, 6, 7})};
  const std::size_t n = data.size();
  const std::vector<double> expected = testing::secondSeedProbabilities(data);
  const int draws = 100000;
  std::vector<int> hits(n, 0);
  for (int t = 0; t < draws; ++t) {
    Rng rng(mixSeed(2024, t));
    const auto centers = kmeansPlusPlusSeed(data, 2, rng);
    for (std::size_t j = 0; j < n; ++j) hits[j] += kernels::toPoint(data[j]) == centers[1];
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double p = expected[j];
    const double sigma = std::sqrt(p * (1 - p) / draws);
    EXPECT_NEAR(static_cast<double>(hits[j]) / draws, p, 3 * sigma) << "point " << j;
  }
}

TEST(Lloyd, SingleClusterIsTheMean) {
  std::mt19937_64 rng(5);
  const auto data = randomData(rng, 20, 28);
  const ClusterResult r = clusterData(data, {.k = 1, .seed = 9});
  double inertia = 0;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    double ones = 0;
    for (const auto& v : data) ones += v[f];
    EXPECT_NEAR(r.centroids[0][f], ones / data.size(), 1e-12);
  }
  for (const auto& v : data) inertia += sq(v, r.centroids[0].values());
  EXPECT_NEAR(r.inertia, inertia, 1e-9);
}

TEST(Lloyd, SeparatedDuplicateGroups) {
  const std::vector<BinaryVector> data = {vec({0, 1}), vec({0, 1}), vec({0, 1}), vec({5, 6, 7}), vec({5, 6, 7})};
  const ClusterResult r = clusterData(data, {.k = 2, .seed = 1});
  EXPECT_EQ(r.inertia, 0.0);
  EXPECT_NE(r.assignment[0], r.assignment[3]);
  EXPECT_EQ(r.centroids[r.assignment[0]].values(), kernels::toPoint(data[0]));
}

TEST(Lloyd, EmptyClusterIsRepaired) {
  // Both starting centers sit on the same side; one cluster starts empty.
  const std::vector<BinaryVector> data = {vec({}), vec({0}), vec({0, 1, 2, 3}), vec({0, 1, 2, 3, 4})};
  std::vector<kernels::Point> centers = {kernels::toPoint(vec({})), kernels::toPoint(vec({}))};
  const ClusterResult r = lloydIterate(data, centers, 300, 0.0);
  for (std::size_t s : r.clusterSizes) EXPECT_GT(s, 0u);
  expectFixedPoint(data, r);
}

TEST(Lloyd, RandomSmallDatasetsAgainstBruteForce) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    const std::size_t width = 2 + rng() % 6;
    const auto data = randomData(rng, n, width);
    const std::size_t k = 1 + rng() % std::min<std::size_t>(3, countDistinct(data));
    const ClusterResult r = clusterData(data, {.k = k, .seed = rng()});
    expectFixedPoint(data, r);
    EXPECT_GE(r.inertia, bruteForceOptimum(data, k) - 1e-9);
    EXPECT_NEAR(r.inertia, computeInertia(data, r.centroids), 1e-9);
    for (std::size_t i = 1; i < r.inertiaTrace.size(); ++i) EXPECT_LE(r.inertiaTrace[i], r.inertiaTrace[i - 1]);
  }
}

TEST(Cluster, DeterministicAndBackendIndependent) {
  std::mt19937_64 rng(17);
  const auto data = randomData(rng, 300, 28);
  const ClusterParams params{.k = 8, .seed = 42};
  const ClusterResult a = clusterData(data, params, Backend::kParallel);
  const ClusterResult b = clusterData(data, params, Backend::kParallel);
  const ClusterResult s = clusterData(data, params, Backend::kSerial);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, s);
}

TEST(Cluster, BestOfRestartsIsMinimal) {
  std::mt19937_64 rng(23);
  const auto data = randomData(rng, 120, 28);
  const ClusterParams params{.k = 4, .seed = 5};
  const ClusterResult best = clusterData(data, params);
  for (std::size_t r = 0; r < params.nInit; ++r) {
    Rng restart(mixSeed(params.seed, r));
    const ClusterResult one =
        lloydIterate(data, kmeansPlusPlusSeed(data, params.k, restart), params.maxIter, params.tolerance);
    EXPECT_LE(best.inertia, one.inertia);
    if (r == best.restartIndex) EXPECT_EQ(one.inertia, best.inertia);
  }
}

TEST(Cluster, KEqualsDistinctGivesZeroInertia) {
  const std::vector<BinaryVector> data = {vec({1}), vec({2}), vec({1}), vec({3, 4}), vec({2})};
  EXPECT_EQ(clusterData(data, {.k = 3, .seed = 0}).inertia, 0.0);
}

TEST(Cluster, ParallelKernelsMatchSerial) {
  std::mt19937_64 rng(31);
  const auto data = randomData(rng, 1000, 28);
  std::vector<kernels::Point> centers;
  for (int c = 0; c < 5; ++c) centers.push_back(kernels::toPoint(data[c * 7]));
  kernels::Assignment a, b;
  kernels::serial::assign(data, centers, a);
  kernels::omp::assign(data, centers, b);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.distances, b.distances);
  kernels::ClusterSums sa, sb;
  kernels::serial::accumulate(data, a.labels, 5, sa);
  kernels::omp::accumulate(data, a.labels, 5, sb);
  EXPECT_EQ(sa.sums, sb.sums);
  EXPECT_EQ(sa.sizes, sb.sizes);
  EXPECT_EQ(lloydIterate(data, centers, 300, 1e-4, Backend::kSerial),
            lloydIterate(data, centers, 300, 1e-4, Backend::kParallel));
}

TEST(CentroidsFile, RoundTrip) {
  std::mt19937_64 rng(2);
  const auto data = randomData(rng, 40, 28);
  const ClusterParams params{.k = 3, .seed = 77};
  const CentroidsFile file = makeCentroidsFile(params, clusterData(data, params));
  const CentroidsFile back = parseCentroids(serializeCentroids(file));
  EXPECT_EQ(back.centroids, file.centroids);
  EXPECT_EQ(back.clusterSizes, file.clusterSizes);
  EXPECT_EQ(back.params.seed, 77u);
  EXPECT_EQ(back.inertia, file.inertia);
}

TEST(CentroidsFile, RejectsBadInput) {
  auto code = [](const std::string& text) {
    try {
      parseCentroids(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  std::string good = serializeCentroids({ClusterParams{}, 0.0, {1}, {Centroid::uniform(0.5)}});
  EXPECT_EQ(code("{"), ErrorCode::kParseError);
  std::string wrongVersion = good;
  wrongVersion.replace(wrongVersion.find("\"formatVersion\": 1"), 18, "\"formatVersion\": 9");
  EXPECT_EQ(code(wrongVersion), ErrorCode::kFormatVersionMismatch);
  std::string swapped = good;
  swapped.replace(swapped.find("\"argc\""), 6, "\"jumps\"");
  EXPECT_EQ(code(swapped), ErrorCode::kFeatureOrderMismatch);
  std::string outOfRange = good;
  outOfRange.replace(outOfRange.find("0.5"), 3, "1.5");
  EXPECT_EQ(code(outOfRange), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace kcfg
