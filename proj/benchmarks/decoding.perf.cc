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
#include "qecw/gnn.h"
#include "qecw/ml_oracle.h"
#include "qecw/mwpm.h"
#include "qecw/perfect_sampler.h"

using namespace qecw;

namespace {

std::vector<DetectorGraph> perfect_graphs(int d, size_t count) {
    std::vector<DetectorGraph> out;
    for (const auto &p : sample_perfect_shots(build_rotated_surface(d), 0.05, 2, count)) {
        out.push_back(build_graph(p, FeatureMode::kPerfectSurface));
    }
    return out;
}

void BM_gnn_forward_single(benchmark::State &state) {
    const int d = static_cast<int>(state.range(0));
    auto model = gnn::init_model(gnn::Architecture::standard(FeatureMode::kPerfectSurface), 1);
    auto graphs = perfect_graphs(d, 64);
    for (auto _ : state) {
        for (const auto &g : graphs) {
            benchmark::DoNotOptimize(gnn::forward(model, g));
        }
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * graphs.size()));
}
BENCHMARK(BM_gnn_forward_single)->Arg(7)->Arg(15)->Arg(31)->Unit(benchmark::kMillisecond);

void BM_gnn_predict_batched(benchmark::State &state) {
    const int d = static_cast<int>(state.range(0));
    auto model = gnn::init_model(gnn::Architecture::standard(FeatureMode::kPerfectSurface), 1);
    auto graphs = perfect_graphs(d, 64);
    std::vector<const DetectorGraph *> ptrs;
    for (const auto &g : graphs) {
        ptrs.push_back(&g);
    }
    for (auto _ : state) {
        auto probs = gnn::predict(model, ptrs);
        benchmark::DoNotOptimize(probs.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * graphs.size()));
}
BENCHMARK(BM_gnn_predict_batched)->Arg(7)->Arg(15)->Arg(31)->Unit(benchmark::kMillisecond);

void BM_gnn_train_step(benchmark::State &state) {
    auto model = gnn::init_model(gnn::Architecture::standard(FeatureMode::kCircuitSurface), 1);
    auto adam = gnn::AdamState<float>::for_model(model);
    Circuit c = build_memory_circuit(build_rotated_surface(3), 3, Basis::kZ, NoiseParams::uniform(5e-3));
    std::vector<DetectorGraph> graphs;
    for (const auto &p : sample_shots(c, 3, 4096)) {
        if (!p.detectors.empty() && graphs.size() < 1000) {
            graphs.push_back(build_graph(p, FeatureMode::kCircuitSurface));
        }
    }
    std::vector<const DetectorGraph *> ptrs;
    for (const auto &g : graphs) {
        ptrs.push_back(&g);
    }
    gnn::Model<float> grads;
    for (auto _ : state) {
        gnn::loss_and_grads<float>(model, ptrs, grads);
        gnn::adam_step(adam, model, grads);
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * graphs.size()));
}
BENCHMARK(BM_gnn_train_step)->Unit(benchmark::kMillisecond);

void BM_mwpm_decode_circuit(benchmark::State &state) {
    const int d = static_cast<int>(state.range(0));
    Circuit c = build_memory_circuit(build_rotated_surface(d), d, Basis::kZ, NoiseParams::uniform(1e-3));
    MwpmDecoder decoder = MwpmDecoder::from_dem(enumerate_single_faults(c));
    auto points = sample_shots(c, 4, 1024);
    for (auto _ : state) {
        for (const auto &p : points) {
            benchmark::DoNotOptimize(decoder.decode(p));
        }
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * points.size()));
}
BENCHMARK(BM_mwpm_decode_circuit)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_ml_oracle_table(benchmark::State &state) {
    CodeLayout layout = build_rotated_surface(3);
    for (auto _ : state) {
        MlOracle oracle(layout, 0.1);
        benchmark::DoNotOptimize(oracle.failure_rate());
    }
}
BENCHMARK(BM_ml_oracle_table)->Unit(benchmark::kMillisecond);

}  // namespace
