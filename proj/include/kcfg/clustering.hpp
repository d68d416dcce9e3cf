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
#include <span>
#include <string>
#include <vector>

#include "kcfg/corpus.hpp"
#include "kcfg/features.hpp"
#include "kcfg/kernels.hpp"
#include "kcfg/parallel.hpp"
#include "kcfg/rng.hpp"

namespace kcfg {

struct ClusterParams {
  std::size_t k = 1;
  std::size_t nInit = 10;
  std::size_t maxIter = 300;
  std::uint64_t seed = 0;
  // Stop once (previous - current) < tolerance * previous. 0 means run to
  // an exact fixed point (or maxIter).
  double tolerance = 1e-4;

  // Throws Error{kInvalidArgument}.
  void validate() const;
};

struct ClusterResult {
  std::vector<Centroid> centroids;
  std::vector<std::size_t> assignment;  // parallel to the input data / recordIds
  std::vector<std::string> recordIds;   // empty when clustering raw vectors
  double inertia = 0.0;
  std::size_t iterationsRun = 0;
  std::size_t restartIndex = 0;
  std::vector<std::size_t> clusterSizes;
  std::vector<double> inertiaTrace;  // inertia after each iteration
  bool converged = false;            // stopped before maxIter
  bool fixedPoint = false;           // stopped because the assignment repeated

  friend bool operator==(const ClusterResult&, const ClusterResult&) = default;
};

// Throws Error{kDegenerateData} if data has fewer than k distinct points.
std::vector<kernels::Point> kmeansPlusPlusSeed(std::span<const BinaryVector> data, std::size_t k, Rng& rng,
                                               Backend backend = Backend::kSerial);

ClusterResult lloydIterate(std::span<const BinaryVector> data, std::vector<kernels::Point> centers,
                           std::size_t maxIter, double tolerance, Backend backend = Backend::kSerial);

// nInit restarts, restart r seeded with mixSeed(params.seed, r); returns the
// lowest-inertia restart (ties to the lowest r). kParallel runs restarts
// concurrently and gives the same result as kSerial.
ClusterResult clusterData(std::span<const BinaryVector> data, const ClusterParams& params,
                          Backend backend = Backend::kParallel);
ClusterResult cluster(const Dataset& dataset, const ClusterParams& params, Backend backend = Backend::kParallel);

// Sum over points of the squared distance to the nearest centroid.
double computeInertia(std::span<const BinaryVector> data, std::span<const Centroid> centroids);

std::size_t countDistinct(std::span<const BinaryVector> data);

struct CentroidsFile {
  ClusterParams params;
  double inertia = 0.0;
  std::vector<std::size_t> clusterSizes;
  std::vector<Centroid> centroids;
};

CentroidsFile makeCentroidsFile(const ClusterParams& params, const ClusterResult& result);
std::string serializeCentroids(const CentroidsFile& file);
void saveCentroids(const CentroidsFile& file, const std::filesystem::path& path);
// Throws kFormatVersionMismatch, kFeatureOrderMismatch, kParseError or
// kInvalidArgument (centroid value outside [0, 1]).
CentroidsFile parseCentroids(const std::string& text);
CentroidsFile loadCentroids(const std::filesystem::path& path);

}  // namespace kcfg
