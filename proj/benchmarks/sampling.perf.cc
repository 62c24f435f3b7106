// Copyright 2026 The qecw Authors
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

#include "qecw/circuit.h"
#include "qecw/detector_graph.h"
#include "qecw/error_model.h"
#include "qecw/frame_simulator.h"
#include "qecw/perfect_sampler.h"

using namespace qecw;

namespace {

void BM_sample_surface_memory(benchmark::State &state) {
    const int d = static_cast<int>(state.range(0));
    Circuit c = build_memory_circuit(build_rotated_surface(d), d, Basis::kZ, NoiseParams::uniform(1e-3));
    const size_t shots = 1024;
    uint64_t seed = 0;
    for (auto _ : state) {
        auto points = sample_shots(c, seed++, shots);
        benchmark::DoNotOptimize(points.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * shots));
}
BENCHMARK(BM_sample_surface_memory)->Arg(3)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_sample_perfect(benchmark::State &state) {
    const int d = static_cast<int>(state.range(0));
    CodeLayout layout = build_rotated_surface(d);
    const size_t shots = 1024;
    uint64_t seed = 0;
    for (auto _ : state) {
        auto points = sample_perfect_shots(layout, 0.05, seed++, shots);
        benchmark::DoNotOptimize(points.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * shots));
}
BENCHMARK(BM_sample_perfect)->Arg(7)->Arg(15)->Arg(31)->Unit(benchmark::kMillisecond);

void BM_enumerate_single_faults(benchmark::State &state) {
    const int d = static_cast<int>(state.range(0));
    Circuit c = build_memory_circuit(build_rotated_surface(d), d, Basis::kZ, NoiseParams::uniform(1e-3));
    for (auto _ : state) {
        auto dem = enumerate_single_faults(c);
        benchmark::DoNotOptimize(dem.entries.data());
    }
}
BENCHMARK(BM_enumerate_single_faults)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_build_graph(benchmark::State &state) {
    const int d = static_cast<int>(state.range(0));
    auto points = sample_perfect_shots(build_rotated_surface(d), 0.05, 1, 256);
    size_t nodes = 0;
    for (auto _ : state) {
        for (const auto &p : points) {
            auto g = build_graph(p, FeatureMode::kPerfectSurface);
            nodes += g.num_nodes();
            benchmark::DoNotOptimize(g.edges.data());
        }
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * points.size()));
    state.counters["nodes_per_graph"] = static_cast<double>(nodes) / static_cast<double>(state.iterations() * points.size());
}
BENCHMARK(BM_build_graph)->Arg(7)->Arg(15)->Arg(31)->Unit(benchmark::kMicrosecond);

}  // namespace
