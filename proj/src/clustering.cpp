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

#include "kcfg/clustering.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "json.hpp"
#include "kcfg/error.hpp"
#include "kcfg/io.hpp"
#include "kcfg/version.hpp"

namespace kcfg {

using kernels::Point;
using Json = nlohmann::ordered_json;

namespace {

std::vector<Point> meansOf(std::span<const BinaryVector> data, std::span<const std::size_t> labels, std::size_t k,
                           Backend backend, std::vector<std::size_t>& sizes) {
  kernels::ClusterSums sums;
  kernels::accumulate(backend, data, labels, k, sums);
  std::vector<Point> centers(k);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      centers[c][f] = sums.sizes[c] ? static_cast<double>(sums.sums[c][f]) / static_cast<double>(sums.sizes[c]) : 0.0;
    }
  }
  sizes = std::move(sums.sizes);
  return centers;
}

double inertiaOf(std::span<const BinaryVector> data, std::span<const std::size_t> labels,
                 std::span<const Point> centers) {
  std::vector<double> d(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) d[i] = kernels::squaredDistance(data[i], centers[labels[i]]);
  return kernels::sequentialSum(d);
}

// Gives every empty cluster the point farthest from its current center,
// taken only from clusters that keep at least one member.
bool repairEmpty(kernels::Assignment& a, std::size_t k) {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t label : a.labels) ++sizes[label];
  bool repaired = false;
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] != 0) continue;
    std::size_t far = a.labels.size();
    double farDist = -1.0;
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
      if (sizes[a.labels[i]] > 1 && a.distances[i] > farDist) {
        farDist = a.distances[i];
        far = i;
      }
    }
    if (far == a.labels.size()) break;  // n < k; callers reject this earlier
    --sizes[a.labels[far]];
    a.labels[far] = c;
    a.distances[far] = 0.0;
    sizes[c] = 1;
    repaired = true;
  }
  return repaired;
}

Centroid toCentroid(const Point& p) {
  std::array<double, kFeatureCount> v;
  for (std::size_t f = 0; f < kFeatureCount; ++f) v[f] = std::clamp(p[f], 0.0, 1.0);
  return Centroid(v);
}

}  // namespace

void ClusterParams::validate() const {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
  if (nInit == 0) throw Error(ErrorCode::kInvalidArgument, "nInit must be positive");
  if (maxIter == 0) throw Error(ErrorCode::kInvalidArgument, "maxIter must be positive");
  if (!(tolerance >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be non-negative");
}

std::size_t countDistinct(std::span<const BinaryVector> data) {
  return std::set<BinaryVector>(data.begin(), data.end()).size();
}

std::vector<Point> kmeansPlusPlusSeed(std::span<const BinaryVector> data, std::size_t k, Rng& rng, Backend backend) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
  const std::size_t distinct = countDistinct(data);
  if (distinct < k) {
    throw Error(ErrorCode::kDegenerateData,
                std::to_string(distinct) + " distinct vectors, fewer than k = " + std::to_string(k));
  }
  std::vector<Point> centers;
  centers.reserve(k);
  centers.push_back(kernels::toPoint(data[rng.below(data.size())]));
  std::vector<double> nearest(data.size(), std::numeric_limits<double>::infinity());
  while (centers.size() < k) {
    kernels::relaxDistances(backend, data, centers.back(), nearest);
    const double total = kernels::sequentialSum(nearest);
    const double target = rng.uniform01() * total;
    std::size_t pick = data.size();
    double running = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (nearest[i] == 0.0) continue;
      running += nearest[i];
      pick = i;
      if (running > target) break;
    }
    centers.push_back(kernels::toPoint(data[pick]));
  }
  return centers;
}

ClusterResult lloydIterate(std::span<const BinaryVector> data, std::vector<Point> centers, std::size_t maxIter,
                           double tolerance, Backend backend) {
  const std::size_t k = centers.size();
  ClusterResult result;
  std::vector<std::size_t> previous;
  std::vector<std::size_t> sizes;
  double previousInertia = std::numeric_limits<double>::infinity();
  kernels::Assignment a;
  for (std::size_t iter = 0; iter < maxIter; ++iter) {
    kernels::assign(backend, data, centers, a);
    const bool repaired = repairEmpty(a, k);
    centers = meansOf(data, a.labels, k, backend, sizes);
    const double inertia = inertiaOf(data, a.labels, centers);
    result.inertiaTrace.push_back(inertia);
    result.iterationsRun = iter + 1;
    if (!repaired && a.labels == previous) {
      result.converged = true;
      result.fixedPoint = true;
      break;
    }
    if (previousInertia - inertia < tolerance * previousInertia) {
      result.converged = true;
      break;
    }
    previousInertia = inertia;
    previous = a.labels;
  }
  result.assignment = std::move(a.labels);
  result.inertia = result.inertiaTrace.back();
  result.clusterSizes = std::move(sizes);
  result.centroids.reserve(k);
  for (const Point& c : centers) result.centroids.push_back(toCentroid(c));
  return result;
}

ClusterResult clusterData(std::span<const BinaryVector> data, const ClusterParams& params, Backend backend) {
  params.validate();
  if (data.empty()) throw Error(ErrorCode::kDegenerateData, "no parsable vectors to cluster");
  const std::size_t distinct = countDistinct(data);
  if (distinct < params.k) {
    throw Error(ErrorCode::kDegenerateData,
                std::to_string(distinct) + " distinct vectors, fewer than k = " + std::to_string(params.k));
  }
  std::vector<ClusterResult> runs(params.nInit);
  auto runOne = [&](std::size_t r) {
    Rng rng(mixSeed(params.seed, r));
    runs[r] = lloydIterate(data, kmeansPlusPlusSeed(data, params.k, rng), params.maxIter, params.tolerance);
    runs[r].restartIndex = r;
  };
  const auto n = static_cast<std::ptrdiff_t>(params.nInit);
  if (backend == Backend::kParallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t r = 0; r < n; ++r) runOne(static_cast<std::size_t>(r));
  } else {
    for (std::ptrdiff_t r = 0; r < n; ++r) runOne(static_cast<std::size_t>(r));
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].inertia < runs[best].inertia) best = r;
  }
  return std::move(runs[best]);
}

ClusterResult cluster(const Dataset& dataset, const ClusterParams& params, Backend backend) {
  const std::vector<BinaryVector> data = dataset.parsableBinaryVectors();
  ClusterResult result = clusterData(data, params, backend);
  result.recordIds = dataset.parsableIds();
  return result;
}

double computeInertia(std::span<const BinaryVector> data, std::span<const Centroid> centroids) {
  std::vector<Point> centers;
  for (const Centroid& c : centroids) centers.push_back(c.values());
  kernels::Assignment a;
  kernels::serial::assign(data, centers, a);
  return kernels::sequentialSum(a.distances);
}

CentroidsFile makeCentroidsFile(const ClusterParams& params, const ClusterResult& result) {
  return {params, result.inertia, result.clusterSizes, result.centroids};
}

std::string serializeCentroids(const CentroidsFile& file) {
  Json j;
  j["format"] = "kcfg-centroids";
  j["formatVersion"] = kCentroidsFormatVersion;
  j["featureOrder"] = featureNameList();
  j["k"] = file.centroids.size();
  j["seed"] = file.params.seed;
  j["nInit"] = file.params.nInit;
  j["maxIter"] = file.params.maxIter;
  j["tolerance"] = file.params.tolerance;
  j["inertia"] = file.inertia;
  j["clusterSizes"] = file.clusterSizes;
  Json rows = Json::array();
  for (const Centroid& c : file.centroids) rows.push_back(c.values());
  j["centroids"] = std::move(rows);
  return j.dump(2) + "\n";
}

void saveCentroids(const CentroidsFile& file, const std::filesystem::path& path) {
  io::writeFile(path, serializeCentroids(file));
}

CentroidsFile parseCentroids(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("centroids file: ") + e.what());
  }
  try {
    const int version = j.at("formatVersion").get<int>();
    if (version != kCentroidsFormatVersion) {
      throw Error(ErrorCode::kFormatVersionMismatch, "centroids format version " + std::to_string(version) +
                                                         ", expected " + std::to_string(kCentroidsFormatVersion));
    }
    checkFeatureOrder(j.at("featureOrder").get<std::vector<std::string>>());
    CentroidsFile file;
    for (const Json& row : j.at("centroids")) {
      if (!row.is_array() || row.size() != kFeatureCount) {
        throw Error(ErrorCode::kParseError, "each centroid must hold 28 values");
      }
      file.centroids.emplace_back(row.get<std::array<double, kFeatureCount>>());
    }
    if (file.centroids.empty()) throw Error(ErrorCode::kParseError, "centroids file holds no centroids");
    if (j.contains("k") && j.at("k").get<std::size_t>() != file.centroids.size()) {
      throw Error(ErrorCode::kParseError, "k does not match the number of centroids");
    }
    file.params.k = file.centroids.size();
    file.params.seed = j.value("seed", std::uint64_t{0});
    file.params.nInit = j.value("nInit", std::size_t{10});
    file.params.maxIter = j.value("maxIter", std::size_t{300});
    file.params.tolerance = j.value("tolerance", 1e-4);
    file.inertia = j.value("inertia", 0.0);
    file.clusterSizes = j.value("clusterSizes", std::vector<std::size_t>{});
    return file;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("centroids file: ") + e.what());
  }
}

CentroidsFile loadCentroids(const std::filesystem::path& path) { return parseCentroids(io::readFile(path)); }

}  // namespace kcfg
