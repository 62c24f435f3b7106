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

#ifndef QECW_GNN_H
#define QECW_GNN_H

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qecw/detector_graph.h"

namespace qecw::gnn {

template <typename S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// How the neighbour term of a graph convolution is formed.
enum class ConvRule : uint8_t {
    /// X'_i = relu(W1 X_i + sum_j e_ij W2 X_j + b): standard message passing.
    kNeighborFeatures = 0,
    /// X'_i = relu(W1 X_i + sum_j e_ij W2 X_i + b): the self-feature reading,
    /// kept for ablation.
    kSelfFeatures = 1,
};

struct Architecture {
    FeatureMode mode = FeatureMode::kCircuitSurface;
    /// Output width of each graph convolution.
    std::vector<int> conv_widths;
    /// Output width of each dense layer in a head; the last must be 1.
    std::vector<int> head_widths;
    ConvRule rule = ConvRule::kNeighborFeatures;

    int input_width() const {
        return feature_width(mode);
    }
    int heads() const {
        return head_count(mode);
    }
    /// 7 convolutions 32-128-256-512-512-256-256, mean pooling, heads
    /// 128-128-32-1. `dense2_width` sets the second head layer (e.g. 181).
    static Architecture standard(FeatureMode mode, int dense2_width = 128);
    bool operator==(const Architecture &) const = default;
};

template <typename S>
struct GraphConv {
    Matrix<S> w_self;      // out x in
    Matrix<S> w_neighbor;  // out x in
    Matrix<S> bias;        // 1 x out
};

template <typename S>
struct Dense {
    Matrix<S> weight;  // out x in
    Matrix<S> bias;    // 1 x out
};

/// Network parameters. Also used as the gradient and optimizer-moment container.
template <typename S>
struct Model {
    Architecture arch;
    std::vector<GraphConv<S>> convs;
    std::vector<std::vector<Dense<S>>> heads;

    /// Zero-initialized parameters of the given architecture.
    static Model zeros(const Architecture &arch);

    /// Every parameter tensor in a fixed order: convs (w_self, w_neighbor,
    /// bias), then each head's dense layers (weight, bias).
    std::vector<Matrix<S> *> tensors();
    std::vector<const Matrix<S> *> tensors() const;
    size_t parameter_count() const;
    void set_zero();

    template <typename T>
    Model<T> cast() const {
        Model<T> out = Model<T>::zeros(arch);
        auto dst = out.tensors();
        auto src = tensors();
        for (size_t k = 0; k < src.size(); k++) {
            *dst[k] = src[k]->template cast<T>();
        }
        return out;
    }
};

/// He-normal weights (variance 2 / d_in), zero biases. Deterministic in seed.
Model<float> init_model(const Architecture &arch, uint64_t seed);

/// Nodes of several graphs stacked into one matrix, with a symmetric CSR
/// adjacency. Each graph's nodes are put in sorted-event order and every
/// neighbour list is ascending, which fixes all accumulation orders.
template <typename S>
struct Batch {
    Matrix<S> features;
    std::vector<uint32_t> offsets;  // graph g owns rows [offsets[g], offsets[g+1])
    std::vector<uint32_t> row_ptr;
    std::vector<uint32_t> col;
    std::vector<S> weight;
    std::vector<S> weight_sum;  // per node, sum of incident edge weights
    std::vector<LabelSet> labels;

    size_t graphs() const {
        return labels.size();
    }
    size_t nodes() const {
        return static_cast<size_t>(features.rows());
    }
};

/// Throws std::invalid_argument on an empty graph or a feature-width mismatch.
template <typename S>
Batch<S> make_batch(std::span<const DetectorGraph *const> graphs);

template <typename S>
struct ForwardCache {
    std::vector<Matrix<S>> activations;  // input of conv l (l = 0..L), L = post-conv output
    std::vector<Matrix<S>> aggregated;   // neighbour term input of conv l
    Matrix<S> pooled;
    std::vector<std::vector<Matrix<S>>> head_activations;  // input of dense j per head, then its logit
};

/// One graph convolution applied to node features `x`.
template <typename S>
Matrix<S> conv_forward(const GraphConv<S> &layer, ConvRule rule, const Batch<S> &batch, const Matrix<S> &x);

/// Logits, graphs x heads. When `cache` is non-null, everything needed by
/// backward() is stored in it.
template <typename S>
Matrix<S> forward_logits(const Model<S> &model, const Batch<S> &batch, ForwardCache<S> *cache = nullptr);

/// Accumulates parameter gradients of sum(dlogits .* logits) into `grads`.
template <typename S>
void backward(const Model<S> &model, const Batch<S> &batch, const ForwardCache<S> &cache, const Matrix<S> &dlogits,
              Model<S> &grads);

struct LossStats {
    double loss = 0;        // mean binary cross entropy over available labels
    size_t terms = 0;       // number of (graph, available head) pairs
    size_t graphs = 0;
    size_t correct_graphs = 0;  // every available label predicted right
};

/// Mean BCE over the available labels of the batch and its exact gradient,
/// accumulated into `grads` (which is zeroed first). Unavailable heads
/// contribute nothing. Throws std::invalid_argument when no label is available.
template <typename S>
LossStats loss_and_grads(const Model<S> &model, std::span<const DetectorGraph *const> graphs, Model<S> &grads);

/// Loss and accuracy without gradients.
template <typename S>
LossStats evaluate_loss(const Model<S> &model, std::span<const DetectorGraph *const> graphs);

/// Per-head probabilities of one graph. An empty graph yields 0 for every head
/// without evaluating the network.
template <typename S>
std::array<double, 2> forward(const Model<S> &model, const DetectorGraph &graph);

/// Batched inference: per-graph, per-head probabilities (empty graphs -> 0).
template <typename S>
std::vector<std::array<double, 2>> predict(const Model<S> &model, std::span<const DetectorGraph *const> graphs);

/// Labels predicted from probabilities (> 0.5 -> 1), for the heads the model has.
LabelSet predicted_labels(const std::array<double, 2> &probs, int heads);

struct AdamHyper {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// One bias-corrected Adam update on a flat parameter block. `step` is the
/// 1-based step index after increment.
template <typename S>
void adam_update(std::span<S> params, std::span<const S> grads, std::span<S> m, std::span<S> v, uint64_t step,
                 const AdamHyper &hyper);

template <typename S>
struct AdamState {
    Model<S> m;
    Model<S> v;
    uint64_t step = 0;
    AdamHyper hyper;

    static AdamState for_model(const Model<S> &model, double lr = 1e-4);
};

/// Applies one Adam step to every tensor. Throws std::invalid_argument on a
/// shape mismatch.
template <typename S>
void adam_step(AdamState<S> &state, Model<S> &model, const Model<S> &grads);

}  // namespace qecw::gnn

#endif
