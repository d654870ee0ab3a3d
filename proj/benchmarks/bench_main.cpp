// Copyright 2026 The pqk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "pqk/feature_maps.hpp"
#include "pqk/kernels.hpp"
#include "pqk/random.hpp"
#include "pqk/svm.hpp"

namespace {

using namespace pqk;

std::vector<FeatureVector> points(std::size_t count, int dim, std::uint64_t seed) {
    SeededRng rng(seed);
    std::vector<FeatureVector> out(count, FeatureVector(dim));
    for (auto &p : out) {
        for (double &v : p) v = rng.uniform() * std::numbers::pi;
    }
    return out;
}

void BM_Encode(benchmark::State &state) {
    const auto family = static_cast<FeatureMapFamily>(state.range(0));
    const FeatureMapSpec spec{family, 6, true};
    const auto x = points(1, 6, 1)[0];
    for (auto _ : state) benchmark::DoNotOptimize(encode(spec, x));
    state.SetLabel(spec.describe());
}
BENCHMARK(BM_Encode)->DenseRange(0, 4);

void BM_ProjectExact(benchmark::State &state) {
    const auto s = encode(FeatureMapSpec{FeatureMapFamily::ThreeD, 6, true}, points(1, 6, 2)[0]);
    const ProjectionStrategy strategy(ProjectionMode::Union, 6);
    for (auto _ : state) benchmark::DoNotOptimize(project_state(s, strategy));
}
BENCHMARK(BM_ProjectExact);

void BM_ProjectSampled(benchmark::State &state) {
    const auto s = encode(FeatureMapSpec{FeatureMapFamily::ThreeD, 6, true}, points(1, 6, 3)[0]);
    const ProjectionStrategy strategy(ProjectionMode::M2, 6);
    const auto shots = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(project_state(s, strategy, ShotSettings{shots, 7}));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(shots * strategy.feature_count()));
}
BENCHMARK(BM_ProjectSampled)->Arg(1024)->Arg(8192);

void BM_GramPqk(benchmark::State &state) {
    const auto data = points(static_cast<std::size_t>(state.range(0)), 6, 4);
    KernelSpec spec;
    spec.kind = KernelKind::PQK;
    spec.gamma = 0.1;
    spec.feature_map = FeatureMapSpec{FeatureMapFamily::ThreeD, 6, true};
    spec.strategy = ProjectionMode::M2;
    for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(data, spec));
}
BENCHMARK(BM_GramPqk)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_GramFidelity(benchmark::State &state) {
    const auto data = points(static_cast<std::size_t>(state.range(0)), 6, 5);
    KernelSpec spec;
    spec.kind = KernelKind::FidelityQK;
    spec.feature_map = FeatureMapSpec{FeatureMapFamily::ZZ, 6};
    for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(data, spec));
}
BENCHMARK(BM_GramFidelity)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_TrainSmo(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto data = points(n, 6, 6);
    std::vector<int> labels(n);
    SeededRng rng(9);
    for (std::size_t i = 0; i < n; ++i) {
        const double margin = data[i][0] + data[i][1] - std::numbers::pi;
        labels[i] = (margin > 0) != (rng.uniform() < 0.1) ? 1 : -1;
    }
    const auto gram = gram_matrix(data, KernelSpec{KernelKind::RBF, 0.5});
    TrainConfig config;
    config.C = static_cast<double>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(train_smo(gram, labels, config));
}
BENCHMARK(BM_TrainSmo)->Args({500, 1})->Args({500, 100})->Args({2000, 10})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
