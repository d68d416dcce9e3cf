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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "kcfg/clustering.hpp"
#include "kcfg/corpus.hpp"
#include "kcfg/kernels.hpp"

namespace {

using kcfg::Backend;
using kcfg::BinaryVector;

// Random binary vectors with a per-feature bias, roughly corpus-shaped.
std::vector<BinaryVector> syntheticData(std::size_t n) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::array<double, kcfg::kFeatureCount> bias{};
  for (double& b : bias) b = u(gen);
  std::vector<BinaryVector> data(n);
  for (BinaryVector& v : data) {
    for (std::size_t f = 0; f < v.size(); ++f) v[f] = u(gen) < bias[f] ? 1 : 0;
  }
  return data;
}

Backend backendArg(const benchmark::State& state) {
  return state.range(1) ? Backend::kParallel : Backend::kSerial;
}

void BM_Assign(benchmark::State& state) {
  const auto data = syntheticData(static_cast<std::size_t>(state.range(0)));
  std::vector<kcfg::kernels::Point> centers;
  for (std::size_t c = 0; c < 8; ++c) centers.push_back(kcfg::kernels::toPoint(data[c * 7]));
  kcfg::kernels::Assignment out;
  for (auto _ : state) {
    kcfg::kernels::assign(backendArg(state), data, centers, out);
    benchmark::DoNotOptimize(out.labels.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ClusterData(benchmark::State& state) {
  const auto data = syntheticData(static_cast<std::size_t>(state.range(0)));
  kcfg::ClusterParams params;
  params.k = 8;
  params.nInit = 10;
  params.seed = 7;
  for (auto _ : state) {
    const kcfg::ClusterResult r = kcfg::clusterData(data, params, backendArg(state));
    benchmark::DoNotOptimize(r.inertia);
  }
}

void BM_Ingest(benchmark::State& state) {
  for (auto _ : state) {
    const kcfg::Dataset ds = kcfg::ingest(KCFG_MINICORPUS_DIR, {}, backendArg(state));
    benchmark::DoNotOptimize(ds.records.size());
  }
}

BENCHMARK(BM_Assign)->ArgsProduct({{1 << 12, 1 << 16, 1 << 19}, {0, 1}})->ArgNames({"n", "parallel"});
BENCHMARK(BM_ClusterData)->ArgsProduct({{1 << 12, 1 << 15}, {0, 1}})->ArgNames({"n", "parallel"})->Unit(
    benchmark::kMillisecond);
BENCHMARK(BM_Ingest)->ArgsProduct({{0}, {0, 1}})->ArgNames({"_", "parallel"})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
