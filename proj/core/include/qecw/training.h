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

#ifndef QECW_TRAINING_H
#define QECW_TRAINING_H

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qecw/checkpoint.h"
#include "qecw/code_layout.h"
#include "qecw/data_point.h"
#include "qecw/detector_graph.h"
#include "qecw/gnn.h"

namespace qecw {

enum class TrainMode : uint8_t { kStreaming, kFixed };

struct TrainConfig {
    TrainMode mode = TrainMode::kStreaming;
    size_t batch_size = 1000;
    double lr_initial = 1e-4;
    double lr_decayed = 1e-5;
    /// The rate drops once the best test accuracy of the last `plateau_window`
    /// epochs beats the accuracy `plateau_window` epochs ago by less than
    /// `plateau_min_gain` (a fraction: 0.0005 = 0.05 percentage points).
    int plateau_window = 20;
    double plateau_min_gain = 0.0005;
    std::vector<double> p_mix{1e-3, 2e-3, 3e-3, 4e-3, 5e-3};
    double replace_fraction = 0.25;
    int epochs = 20;
    size_t pool_size = 100000;
    /// Fixed mode: fraction of the dataset held out for testing.
    double test_fraction = 0.01;
    uint64_t init_seed = 1;
    uint64_t shuffle_seed = 2;
    uint64_t split_seed = 3;
    GraphOptions graph_options;
    /// Network shape; the standard architecture for the feature mode when unset.
    std::optional<gnn::Architecture> architecture;
    /// Written after every epoch when non-empty.
    std::string checkpoint_path;

    /// Throws std::invalid_argument on an out-of-range field.
    void check() const;
};

struct EpochRecord {
    int epoch = 0;
    double train_accuracy = 0;
    double train_loss = 0;
    double test_accuracy = 0;
    double test_loss = 0;
    double lr = 0;
    double wall_seconds = 0;
    size_t fresh_samples = 0;
};

struct TrainReport {
    std::vector<EpochRecord> epochs;
    std::string checkpoint;
    size_t fresh_samples_total = 0;
    /// Set when training stopped early because a sample source failed.
    std::string error;

    /// One "epoch split metric value" line per metric.
    void write_lines(std::ostream &out) const;
    static TrainReport parse_lines(std::istream &in);
};

/// Learning rate to use for the next epoch given the epochs so far: one-time
/// drop from lr_initial to lr_decayed when test accuracy plateaus.
double lr_schedule(const TrainReport &report, const TrainConfig &config);

/// Produces `count` labelled samples; successive calls continue the stream.
using SampleSource = std::function<std::vector<DataPoint>(size_t count)>;

/// Sample source for a noise-mix experiment: every sample draws its p
/// uniformly from `p_mix`. `mode` picks circuit-level memory experiments
/// (rounds, basis apply) or perfect-stabilizer sampling.
struct SourceSpec {
    CodeKind kind = CodeKind::kRotatedSurface;
    int distance = 3;
    int rounds = 3;
    Basis basis = Basis::kZ;
    bool perfect = false;
    std::vector<double> p_mix;
    uint64_t seed = 0;
    int threads = 1;
};
SampleSource make_sample_source(const SourceSpec &spec);
FeatureMode feature_mode_for(const SourceSpec &spec);

struct TrainResult {
    gnn::Model<float> model;
    gnn::AdamState<float> optimizer;
    TrainReport report;
};

/// Per-epoch callback, e.g. for progress logging.
using EpochCallback = std::function<void(const EpochRecord &)>;

/// Streaming training: a pool of `pool_size` graphs, one pass per epoch in
/// shuffled batches, then the oldest ceil(replace_fraction * pool) graphs are
/// replaced with fresh samples.
TrainResult train_streaming(const TrainConfig &config, FeatureMode mode, const SampleSource &source,
                            std::span<const DataPoint> test_set, std::optional<Checkpoint> resume = std::nullopt,
                            const EpochCallback &on_epoch = {});

/// Fixed-dataset training with a seeded split; no early stopping.
TrainResult train_fixed(const TrainConfig &config, FeatureMode mode, std::span<const DataPoint> dataset,
                        std::optional<Checkpoint> resume = std::nullopt, const EpochCallback &on_epoch = {});

/// Indices of the held-out test points for a fixed-mode split. Throws when the
/// test split would be empty.
std::vector<size_t> split_test_indices(size_t n, double test_fraction, uint64_t seed);

/// Fraction of graphs whose every available label is predicted correctly.
/// Empty graphs are predicted all-zero.
double graph_accuracy(const gnn::Model<float> &model, std::span<const DetectorGraph> graphs, size_t batch_size);

}  // namespace qecw

#endif
