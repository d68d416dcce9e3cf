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
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kcfg/features.hpp"
#include "kcfg/parallel.hpp"

// Data-parallel inner loops of K-Means. Each kernel has a serial reference
// and an OpenMP version; both write per-point results into fixed slots and
// leave reductions over doubles to sequentialSum, so the two agree bit for
// bit.
namespace kcfg::kernels {

using Point = std::array<double, kFeatureCount>;

double squaredDistance(const BinaryVector& x, const Point& c);
Point toPoint(const BinaryVector& x);

struct Assignment {
  std::vector<std::size_t> labels;
  std::vector<double> distances;  // squared distance to the assigned center
};

// Per-cluster coordinate sums of binary data; integers, so exact.
struct ClusterSums {
  std::vector<std::array<std::uint64_t, kFeatureCount>> sums;
  std::vector<std::size_t> sizes;
};

double sequentialSum(std::span<const double> values);

namespace serial {
// Nearest center per point; ties go to the lowest center index.
void assign(std::span<const BinaryVector> data, std::span<const Point> centers, Assignment& out);
// distances[i] = min(distances[i], |data[i] - center|^2)
void relaxDistances(std::span<const BinaryVector> data, const Point& center, std::span<double> distances);
void accumulate(std::span<const BinaryVector> data, std::span<const std::size_t> labels, std::size_t k,
                ClusterSums& out);
}  // namespace serial

namespace omp {
void assign(std::span<const BinaryVector> data, std::span<const Point> centers, Assignment& out);
void relaxDistances(std::span<const BinaryVector> data, const Point& center, std::span<double> distances);
void accumulate(std::span<const BinaryVector> data, std::span<const std::size_t> labels, std::size_t k,
                ClusterSums& out);
}  // namespace omp

void assign(Backend backend, std::span<const BinaryVector> data, std::span<const Point> centers, Assignment& out);
void relaxDistances(Backend backend, std::span<const BinaryVector> data, const Point& center,
                    std::span<double> distances);
void accumulate(Backend backend, std::span<const BinaryVector> data, std::span<const std::size_t> labels,
                std::size_t k, ClusterSums& out);

}  // namespace kcfg::kernels
