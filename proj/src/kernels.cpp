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

#include "kcfg/kernels.hpp"

#include <limits>

namespace kcfg::kernels {

double squaredDistance(const BinaryVector& x, const Point& c) {
  double total = 0.0;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const double d = static_cast<double>(x[f]) - c[f];
    total += d * d;
  }
  return total;
}

Point toPoint(const BinaryVector& x) {
  Point p;
  for (std::size_t f = 0; f < kFeatureCount; ++f) p[f] = x[f];
  return p;
}

double sequentialSum(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

namespace {

inline void assignOne(const BinaryVector& x, std::span<const Point> centers, std::size_t& label, double& dist) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t bestIndex = 0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = squaredDistance(x, centers[c]);
    if (d < best) {
      best = d;
      bestIndex = c;
    }
  }
  label = bestIndex;
  dist = best;
}

void resizeAssignment(std::size_t n, Assignment& out) {
  out.labels.resize(n);
  out.distances.resize(n);
}

void resetSums(std::size_t k, ClusterSums& out) {
  out.sums.assign(k, {});
  out.sizes.assign(k, 0);
}

}  // namespace

namespace serial {

void assign(std::span<const BinaryVector> data, std::span<const Point> centers, Assignment& out) {
  resizeAssignment(data.size(), out);
  for (std::size_t i = 0; i < data.size(); ++i) assignOne(data[i], centers, out.labels[i], out.distances[i]);
}

void relaxDistances(std::span<const BinaryVector> data, const Point& center, std::span<double> distances) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double d = squaredDistance(data[i], center);
    if (d < distances[i]) distances[i] = d;
  }
}

void accumulate(std::span<const BinaryVector> data, std::span<const std::size_t> labels, std::size_t k,
                ClusterSums& out) {
  resetSums(k, out);
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto& sum = out.sums[labels[i]];
    for (std::size_t f = 0; f < kFeatureCount; ++f) sum[f] += data[i][f];
    ++out.sizes[labels[i]];
  }
}

}  // namespace serial

namespace omp {

void assign(std::span<const BinaryVector> data, std::span<const Point> centers, Assignment& out) {
  resizeAssignment(data.size(), out);
  const auto n = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) assignOne(data[i], centers, out.labels[i], out.distances[i]);
}

void relaxDistances(std::span<const BinaryVector> data, const Point& center, std::span<double> distances) {
  const auto n = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double d = squaredDistance(data[i], center);
    if (d < distances[i]) distances[i] = d;
  }
}

void accumulate(std::span<const BinaryVector> data, std::span<const std::size_t> labels, std::size_t k,
                ClusterSums& out) {
  resetSums(k, out);
  const auto n = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel
  {
    ClusterSums local;
    resetSums(k, local);
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      auto& sum = local.sums[labels[i]];
      for (std::size_t f = 0; f < kFeatureCount; ++f) sum[f] += data[i][f];
      ++local.sizes[labels[i]];
    }
#pragma omp critical(kcfg_accumulate)
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t f = 0; f < kFeatureCount; ++f) out.sums[c][f] += local.sums[c][f];
      out.sizes[c] += local.sizes[c];
    }
  }
}

}  // namespace omp

void assign(Backend backend, std::span<const BinaryVector> data, std::span<const Point> centers, Assignment& out) {
  backend == Backend::kParallel ? omp::assign(data, centers, out) : serial::assign(data, centers, out);
}

void relaxDistances(Backend backend, std::span<const BinaryVector> data, const Point& center,
                    std::span<double> distances) {
  backend == Backend::kParallel ? omp::relaxDistances(data, center, distances)
                                : serial::relaxDistances(data, center, distances);
}

void accumulate(Backend backend, std::span<const BinaryVector> data, std::span<const std::size_t> labels,
                std::size_t k, ClusterSums& out) {
  backend == Backend::kParallel ? omp::accumulate(data, labels, k, out) : serial::accumulate(data, labels, k, out);
}

}  // namespace kcfg::kernels
