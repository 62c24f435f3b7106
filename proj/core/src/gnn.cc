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

#include "qecw/gnn.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace qecw::gnn {

Architecture Architecture::standard(FeatureMode mode, int dense2_width) {
    Architecture a;
    a.mode = mode;
    a.conv_widths = {32, 128, 256, 512, 512, 256, 256};
    a.head_widths = {128, dense2_width, 32, 1};
    return a;
}

namespace {

void check_architecture(const Architecture &arch) {
    if (arch.conv_widths.empty()) {
        throw std::invalid_argument("architecture needs at least one graph convolution");
    }
    if (arch.head_widths.empty() || arch.head_widths.back() != 1) {
        throw std::invalid_argument("each head must end in a width-1 layer");
    }
    for (int w : arch.conv_widths) {
        if (w <= 0) {
            throw std::invalid_argument("layer widths must be positive");
        }
    }
    for (int w : arch.head_widths) {
        if (w <= 0) {
            throw std::invalid_argument("layer widths must be positive");
        }
    }
}

template <typename S>
void check_finite(const Matrix<S> &m, const char *what) {
    if (!m.allFinite()) {
        throw std::runtime_error(std::string("non-finite values in ") + what);
    }
}

template <typename S>
void relu_in_place(Matrix<S> &m) {
    m = m.cwiseMax(S(0));
}

// out += A * in, A being the symmetric weighted adjacency of the batch.
template <typename S>
void add_adjacency_product(const Batch<S> &batch, const Matrix<S> &in, Matrix<S> &out) {
    const size_t n = batch.nodes();
    for (size_t i = 0; i < n; i++) {
        for (uint32_t k = batch.row_ptr[i]; k < batch.row_ptr[i + 1]; k++) {
            out.row(i) += batch.weight[k] * in.row(batch.col[k]);
        }
    }
}

template <typename S>
Matrix<S> neighbor_term(const Batch<S> &batch, ConvRule rule, const Matrix<S> &x) {
    Matrix<S> agg = Matrix<S>::Zero(x.rows(), x.cols());
    if (rule == ConvRule::kNeighborFeatures) {
        add_adjacency_product(batch, x, agg);
    } else {
        for (Eigen::Index i = 0; i < x.rows(); i++) {
            agg.row(i) = batch.weight_sum[i] * x.row(i);
        }
    }
    return agg;
}

template <typename S>
S stable_bce(S logit, uint8_t label) {
    // -[y log s(z) + (1-y) log(1-s(z))] = max(z,0) - z y + log(1 + e^{-|z|})
    S z = logit;
    return std::max(z, S(0)) - z * S(label) + std::log1p(std::exp(-std::abs(z)));
}

template <typename S>
S sigmoid(S z) {
    if (z >= 0) {
        return S(1) / (S(1) + std::exp(-z));
    }
    S e = std::exp(z);
    return e / (S(1) + e);
}

template <typename S>
LossStats score(const Matrix<S> &logits, const Batch<S> &batch, int heads, Matrix<S> *dlogits) {
    LossStats st;
    st.graphs = batch.graphs();
    double total = 0;
    for (size_t g = 0; g < batch.graphs(); g++) {
        const auto &labels = batch.labels[g];
        for (int h = 0; h < heads; h++) {
            if (labels.present[h]) {
                st.terms++;
            }
        }
    }
    if (st.terms == 0) {
        throw std::invalid_argument("batch has no available labels");
    }
    if (dlogits) {
        *dlogits = Matrix<S>::Zero(logits.rows(), logits.cols());
    }
    const S inv = S(1) / S(st.terms);
    for (size_t g = 0; g < batch.graphs(); g++) {
        const auto &labels = batch.labels[g];
        bool all_right = true;
        for (int h = 0; h < heads; h++) {
            if (!labels.present[h]) {
                continue;
            }
            S z = logits(g, h);
            total += static_cast<double>(stable_bce(z, labels.value[h]));
            uint8_t guess = z > 0 ? 1 : 0;
            all_right = all_right && guess == labels.value[h];
            if (dlogits) {
                (*dlogits)(g, h) = (sigmoid(z) - S(labels.value[h])) * inv;
            }
        }
        if (all_right) {
            st.correct_graphs++;
        }
    }
    st.loss = total / static_cast<double>(st.terms);
    return st;
}

}  // namespace

template <typename S>
Model<S> Model<S>::zeros(const Architecture &arch) {
    check_architecture(arch);
    Model<S> m;
    m.arch = arch;
    int in = arch.input_width();
    for (int out : arch.conv_widths) {
        m.convs.push_back({Matrix<S>::Zero(out, in), Matrix<S>::Zero(out, in), Matrix<S>::Zero(1, out)});
        in = out;
    }
    const int pooled = in;
    m.heads.resize(arch.heads());
    for (auto &head : m.heads) {
        in = pooled;
        for (int out : arch.head_widths) {
            head.push_back({Matrix<S>::Zero(out, in), Matrix<S>::Zero(1, out)});
            in = out;
        }
    }
    return m;
}

template <typename S>
std::vector<Matrix<S> *> Model<S>::tensors() {
    std::vector<Matrix<S> *> out;
    for (auto &c : convs) {
        out.push_back(&c.w_self);
        out.push_back(&c.w_neighbor);
        out.push_back(&c.bias);
    }
    for (auto &head : heads) {
        for (auto &d : head) {
            out.push_back(&d.weight);
            out.push_back(&d.bias);
        }
    }
    return out;
}

template <typename S>
std::vector<const Matrix<S> *> Model<S>::tensors() const {
    std::vector<const Matrix<S> *> out;
    for (auto *t : const_cast<Model<S> *>(this)->tensors()) {
        out.push_back(t);
    }
    return out;
}

template <typename S>
size_t Model<S>::parameter_count() const {
    size_t n = 0;
    for (const auto *t : tensors()) {
        n += static_cast<size_t>(t->size());
    }
    return n;
}

template <typename S>
void Model<S>::set_zero() {
    for (auto *t : tensors()) {
        t->setZero();
    }
}

Model<float> init_model(const Architecture &arch, uint64_t seed) {
    Model<float> m = Model<float>::zeros(arch);
    std::mt19937_64 gen(seed);
    auto fill = [&](Matrix<float> &w) {
        std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / static_cast<double>(w.cols())));
        for (Eigen::Index i = 0; i < w.size(); i++) {
            w.data()[i] = static_cast<float>(normal(gen));
        }
    };
    for (auto &c : m.convs) {
        fill(c.w_self);
        fill(c.w_neighbor);
    }
    for (auto &head : m.heads) {
        for (auto &d : head) {
            fill(d.weight);
        }
    }
    return m;
}

template <typename S>
Batch<S> make_batch(std::span<const DetectorGraph *const> graphs) {
    Batch<S> b;
    if (graphs.empty()) {
        throw std::invalid_argument("make_batch: no graphs");
    }
    const int width = graphs.front()->width();
    size_t total = 0;
    for (const auto *g : graphs) {
        if (g->num_nodes() == 0) {
            throw std::invalid_argument("make_batch: empty graph");
        }
        if (g->width() != width || g->features.size() != g->num_nodes() * static_cast<size_t>(width)) {
            throw std::invalid_argument("make_batch: feature width mismatch");
        }
        total += g->num_nodes();
    }
    b.features.resize(static_cast<Eigen::Index>(total), width);
    b.offsets.push_back(0);
    std::vector<std::vector<std::pair<uint32_t, S>>> adj(total);
    size_t base = 0;
    for (const auto *g : graphs) {
        const size_t n = g->num_nodes();
        std::vector<uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        std::stable_sort(order.begin(), order.end(),
                         [&](uint32_t x, uint32_t y) { return g->events[x] < g->events[y]; });
        std::vector<uint32_t> pos(n);
        for (uint32_t k = 0; k < n; k++) {
            pos[order[k]] = k;
            for (int c = 0; c < width; c++) {
                b.features(static_cast<Eigen::Index>(base + k), c) = static_cast<S>(g->features[order[k] * width + c]);
            }
        }
        for (const auto &e : g->edges) {
            if (e.a >= n || e.b >= n || e.a == e.b) {
                throw std::invalid_argument("make_batch: malformed edge");
            }
            uint32_t u = static_cast<uint32_t>(base + pos[e.a]);
            uint32_t v = static_cast<uint32_t>(base + pos[e.b]);
            adj[u].push_back({v, static_cast<S>(e.weight)});
            adj[v].push_back({u, static_cast<S>(e.weight)});
        }
        base += n;
        b.offsets.push_back(static_cast<uint32_t>(base));
        b.labels.push_back(g->labels);
    }
    check_finite(b.features, "node features");
    b.row_ptr.push_back(0);
    b.weight_sum.assign(total, S(0));
    for (size_t i = 0; i < total; i++) {
        auto &list = adj[i];
        std::sort(list.begin(), list.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
        for (const auto &[j, w] : list) {
            b.col.push_back(j);
            b.weight.push_back(w);
            b.weight_sum[i] += w;
        }
        b.row_ptr.push_back(static_cast<uint32_t>(b.col.size()));
    }
    return b;
}

template <typename S>
Matrix<S> conv_forward(const GraphConv<S> &layer, ConvRule rule, const Batch<S> &batch, const Matrix<S> &x) {
    Matrix<S> agg = neighbor_term(batch, rule, x);
    Matrix<S> z(x.rows(), layer.w_self.rows());
    z.noalias() = x * layer.w_self.transpose();
    z.noalias() += agg * layer.w_neighbor.transpose();
    z.rowwise() += layer.bias.row(0);
    relu_in_place(z);
    return z;
}

template <typename S>
Matrix<S> forward_logits(const Model<S> &model, const Batch<S> &batch, ForwardCache<S> *cache) {
    const auto &arch = model.arch;
    if (batch.features.cols() != arch.input_width()) {
        throw std::invalid_argument("batch feature width does not match the model");
    }
    Matrix<S> h = batch.features;
    if (cache) {
        cache->activations.clear();
        cache->aggregated.clear();
        cache->head_activations.assign(model.heads.size(), {});
    }
    for (const auto &layer : model.convs) {
        Matrix<S> agg = neighbor_term(batch, arch.rule, h);
        Matrix<S> z(h.rows(), layer.w_self.rows());
        z.noalias() = h * layer.w_self.transpose();
        z.noalias() += agg * layer.w_neighbor.transpose();
        z.rowwise() += layer.bias.row(0);
        relu_in_place(z);
        if (cache) {
            cache->activations.push_back(std::move(h));
            cache->aggregated.push_back(std::move(agg));
        }
        h = std::move(z);
    }
    check_finite(h, "graph convolution output");

    Matrix<S> pooled(static_cast<Eigen::Index>(batch.graphs()), h.cols());
    for (size_t g = 0; g < batch.graphs(); g++) {
        const uint32_t lo = batch.offsets[g];
        const uint32_t hi = batch.offsets[g + 1];
        pooled.row(g) = h.middleRows(lo, hi - lo).colwise().sum() / S(hi - lo);
    }
    if (cache) {
        cache->activations.push_back(std::move(h));
        cache->pooled = pooled;
    }

    Matrix<S> logits(pooled.rows(), static_cast<Eigen::Index>(model.heads.size()));
    for (size_t k = 0; k < model.heads.size(); k++) {
        Matrix<S> x = pooled;
        const auto &head = model.heads[k];
        for (size_t j = 0; j < head.size(); j++) {
            Matrix<S> z(x.rows(), head[j].weight.rows());
            z.noalias() = x * head[j].weight.transpose();
            z.rowwise() += head[j].bias.row(0);
            if (j + 1 < head.size()) {
                relu_in_place(z);
            }
            if (cache) {
                cache->head_activations[k].push_back(std::move(x));
            }
            x = std::move(z);
        }
        logits.col(k) = x.col(0);
        if (cache) {
            cache->head_activations[k].push_back(std::move(x));
        }
    }
    check_finite(logits, "logits");
    return logits;
}

template <typename S>
void backward(const Model<S> &model, const Batch<S> &batch, const ForwardCache<S> &cache, const Matrix<S> &dlogits,
              Model<S> &grads) {
    if (!(grads.arch == model.arch)) {
        throw std::invalid_argument("gradient container does not match the model");
    }
    Matrix<S> dpooled = Matrix<S>::Zero(cache.pooled.rows(), cache.pooled.cols());
    for (size_t k = 0; k < model.heads.size(); k++) {
        const auto &head = model.heads[k];
        auto &ghead = grads.heads[k];
        const auto &acts = cache.head_activations[k];
        Matrix<S> dz = dlogits.col(k);
        for (size_t j = head.size(); j-- > 0;) {
            const Matrix<S> &x = acts[j];
            ghead[j].weight.noalias() += dz.transpose() * x;
            ghead[j].bias += dz.colwise().sum();
            Matrix<S> dx = dz * head[j].weight;
            if (j > 0) {
                // x = relu(z_prev), so the derivative mask is x > 0.
                dx = (x.array() > S(0)).select(dx, S(0));
                dz = std::move(dx);
            } else {
                dpooled += dx;
            }
        }
    }

    const size_t layers = model.convs.size();
    const Matrix<S> &last = cache.activations[layers];
    Matrix<S> dh(last.rows(), last.cols());
    for (size_t g = 0; g < batch.graphs(); g++) {
        const uint32_t lo = batch.offsets[g];
        const uint32_t hi = batch.offsets[g + 1];
        const S inv = S(1) / S(hi - lo);
        for (uint32_t i = lo; i < hi; i++) {
            dh.row(i) = dpooled.row(g) * inv;
        }
    }
    for (size_t l = layers; l-- > 0;) {
        const auto &layer = model.convs[l];
        auto &glayer = grads.convs[l];
        const Matrix<S> &out = cache.activations[l + 1];
        const Matrix<S> &in = cache.activations[l];
        Matrix<S> dz = (out.array() > S(0)).select(dh, S(0));
        glayer.w_self.noalias() += dz.transpose() * in;
        glayer.w_neighbor.noalias() += dz.transpose() * cache.aggregated[l];
        glayer.bias += dz.colwise().sum();
        if (l == 0) {
            break;
        }
        Matrix<S> din = dz * layer.w_self;
        Matrix<S> t = dz * layer.w_neighbor;
        if (model.arch.rule == ConvRule::kNeighborFeatures) {
            add_adjacency_product(batch, t, din);
        } else {
            for (Eigen::Index i = 0; i < t.rows(); i++) {
                din.row(i) += batch.weight_sum[i] * t.row(i);
            }
        }
        dh = std::move(din);
    }
}

template <typename S>
LossStats loss_and_grads(const Model<S> &model, std::span<const DetectorGraph *const> graphs, Model<S> &grads) {
    if (!(grads.arch == model.arch)) {
        grads = Model<S>::zeros(model.arch);
    } else {
        grads.set_zero();
    }
    std::vector<const DetectorGraph *> nonempty;
    nonempty.reserve(graphs.size());
    for (const auto *g : graphs) {
        if (g->num_nodes() > 0) {
            nonempty.push_back(g);
        }
    }
    if (nonempty.empty()) {
        throw std::invalid_argument("batch has no available labels");
    }
    Batch<S> batch = make_batch<S>(nonempty);
    ForwardCache<S> cache;
    Matrix<S> logits = forward_logits(model, batch, &cache);
    Matrix<S> dlogits;
    LossStats st = score(logits, batch, static_cast<int>(model.heads.size()), &dlogits);
    backward(model, batch, cache, dlogits, grads);
    return st;
}

template <typename S>
LossStats evaluate_loss(const Model<S> &model, std::span<const DetectorGraph *const> graphs) {
    std::vector<const DetectorGraph *> nonempty;
    for (const auto *g : graphs) {
        if (g->num_nodes() > 0) {
            nonempty.push_back(g);
        }
    }
    if (nonempty.empty()) {
        throw std::invalid_argument("batch has no available labels");
    }
    Batch<S> batch = make_batch<S>(nonempty);
    Matrix<S> logits = forward_logits(model, batch);
    return score<S>(logits, batch, static_cast<int>(model.heads.size()), nullptr);
}

template <typename S>
std::array<double, 2> forward(const Model<S> &model, const DetectorGraph &graph) {
    const DetectorGraph *p = &graph;
    return predict(model, std::span<const DetectorGraph *const>(&p, 1)).front();
}

template <typename S>
std::vector<std::array<double, 2>> predict(const Model<S> &model, std::span<const DetectorGraph *const> graphs) {
    std::vector<std::array<double, 2>> out(graphs.size(), {0.0, 0.0});
    std::vector<const DetectorGraph *> nonempty;
    std::vector<size_t> where;
    for (size_t k = 0; k < graphs.size(); k++) {
        if (graphs[k]->num_nodes() > 0) {
            nonempty.push_back(graphs[k]);
            where.push_back(k);
        }
    }
    if (nonempty.empty()) {
        return out;
    }
    Batch<S> batch = make_batch<S>(nonempty);
    Matrix<S> logits = forward_logits(model, batch);
    for (size_t g = 0; g < where.size(); g++) {
        for (Eigen::Index h = 0; h < logits.cols(); h++) {
            out[where[g]][h] = sigmoid(static_cast<double>(logits(g, h)));
        }
    }
    return out;
}

LabelSet predicted_labels(const std::array<double, 2> &probs, int heads) {
    LabelSet s;
    for (int h = 0; h < heads; h++) {
        s.set(static_cast<LabelKind>(h), probs[h] > 0.5 ? 1 : 0);
    }
    return s;
}

template <typename S>
void adam_update(std::span<S> params, std::span<const S> grads, std::span<S> m, std::span<S> v, uint64_t step,
                 const AdamHyper &hyper) {
    if (grads.size() != params.size() || m.size() != params.size() || v.size() != params.size()) {
        throw std::invalid_argument("adam_update: size mismatch");
    }
    if (step == 0) {
        throw std::invalid_argument("adam_update: step is 1-based");
    }
    const double c1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(step));
    const S b1 = static_cast<S>(hyper.beta1);
    const S b2 = static_cast<S>(hyper.beta2);
    const S step_size = static_cast<S>(hyper.lr / c1);
    const S root_c2 = static_cast<S>(std::sqrt(c2));
    const S eps = static_cast<S>(hyper.eps);
    for (size_t i = 0; i < params.size(); i++) {
        const S g = grads[i];
        m[i] = b1 * m[i] + (S(1) - b1) * g;
        v[i] = b2 * v[i] + (S(1) - b2) * g * g;
        params[i] -= step_size * m[i] / (std::sqrt(v[i]) / root_c2 + eps);
    }
}

template <typename S>
AdamState<S> AdamState<S>::for_model(const Model<S> &model, double lr) {
    AdamState<S> st;
    st.m = Model<S>::zeros(model.arch);
    st.v = Model<S>::zeros(model.arch);
    st.hyper.lr = lr;
    return st;
}

template <typename S>
void adam_step(AdamState<S> &state, Model<S> &model, const Model<S> &grads) {
    if (!(grads.arch == model.arch) || !(state.m.arch == model.arch) || !(state.v.arch == model.arch)) {
        throw std::invalid_argument("adam_step: shape mismatch");
    }
    state.step++;
    auto p = model.tensors();
    auto g = grads.tensors();
    auto m = state.m.tensors();
    auto v = state.v.tensors();
    for (size_t k = 0; k < p.size(); k++) {
        const size_t n = static_cast<size_t>(p[k]->size());
        adam_update<S>({p[k]->data(), n}, {g[k]->data(), n}, {m[k]->data(), n}, {v[k]->data(), n}, state.step,
                       state.hyper);
    }
}

#define QECW_GNN_INSTANTIATE(S)                                                                                      \
    template struct Model<S>;                                                                                        \
    template Batch<S> make_batch<S>(std::span<const DetectorGraph *const>);                                          \
    template Matrix<S> conv_forward<S>(const GraphConv<S> &, ConvRule, const Batch<S> &, const Matrix<S> &);         \
    template Matrix<S> forward_logits<S>(const Model<S> &, const Batch<S> &, ForwardCache<S> *);                     \
    template void backward<S>(const Model<S> &, const Batch<S> &, const ForwardCache<S> &, const Matrix<S> &,        \
                              Model<S> &);                                                                           \
    template LossStats loss_and_grads<S>(const Model<S> &, std::span<const DetectorGraph *const>, Model<S> &);       \
    template LossStats evaluate_loss<S>(const Model<S> &, std::span<const DetectorGraph *const>);                    \
    template std::array<double, 2> forward<S>(const Model<S> &, const DetectorGraph &);                              \
    template std::vector<std::array<double, 2>> predict<S>(const Model<S> &, std::span<const DetectorGraph *const>); \
    template void adam_update<S>(std::span<S>, std::span<const S>, std::span<S>, std::span<S>, uint64_t,             \
                                 const AdamHyper &);                                                                 \
    template struct AdamState<S>;                                                                                    \
    template void adam_step<S>(AdamState<S> &, Model<S> &, const Model<S> &);

QECW_GNN_INSTANTIATE(float)
QECW_GNN_INSTANTIATE(double)

}  // namespace qecw::gnn
