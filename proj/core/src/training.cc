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

#include "qecw/training.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <memory>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "qecw/circuit.h"
#include "qecw/frame_simulator.h"
#include "qecw/perfect_sampler.h"
#include "qecw/rng.h"

namespace qecw {

void TrainConfig::check() const {
    if (batch_size < 1) {
        throw std::invalid_argument("batch size must be at least 1");
    }
    if (!(replace_fraction >= 0 && replace_fraction <= 1)) {
        throw std::invalid_argument("replacement fraction must lie in [0, 1]");
    }
    if (!(lr_initial > 0) || !(lr_decayed > 0)) {
        throw std::invalid_argument("learning rates must be positive");
    }
    if (plateau_window < 1) {
        throw std::invalid_argument("plateau window must be at least 1 epoch");
    }
    if (epochs < 0) {
        throw std::invalid_argument("epoch count must be non-negative");
    }
    if (!(test_fraction > 0 && test_fraction < 1)) {
        throw std::invalid_argument("test fraction must lie in (0, 1)");
    }
    if (graph_options.max_degree < 1) {
        throw std::invalid_argument("degree cap must be at least 1");
    }
}

void TrainReport::write_lines(std::ostream &out) const {
    out.precision(10);
    for (const auto &e : epochs) {
        out << e.epoch << " train accuracy " << e.train_accuracy << "\n";
        out << e.epoch << " train loss " << e.train_loss << "\n";
        out << e.epoch << " test accuracy " << e.test_accuracy << "\n";
        out << e.epoch << " test loss " << e.test_loss << "\n";
        out << e.epoch << " train lr " << e.lr << "\n";
        out << e.epoch << " train wall_seconds " << e.wall_seconds << "\n";
        out << e.epoch << " train fresh_samples " << e.fresh_samples << "\n";
    }
}

TrainReport TrainReport::parse_lines(std::istream &in) {
    TrainReport r;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        int epoch;
        std::string split;
        std::string metric;
        double value;
        if (!(ls >> epoch >> split >> metric >> value)) {
            throw std::invalid_argument("malformed report line: " + line);
        }
        if (r.epochs.empty() || r.epochs.back().epoch != epoch) {
            r.epochs.push_back({});
            r.epochs.back().epoch = epoch;
        }
        auto &e = r.epochs.back();
        if (split == "train" && metric == "accuracy") {
            e.train_accuracy = value;
        } else if (split == "train" && metric == "loss") {
            e.train_loss = value;
        } else if (split == "test" && metric == "accuracy") {
            e.test_accuracy = value;
        } else if (split == "test" && metric == "loss") {
            e.test_loss = value;
        } else if (metric == "lr") {
            e.lr = value;
        } else if (metric == "wall_seconds") {
            e.wall_seconds = value;
        } else if (metric == "fresh_samples") {
            e.fresh_samples = static_cast<size_t>(value);
        }
    }
    return r;
}

double lr_schedule(const TrainReport &report, const TrainConfig &config) {
    const auto &ep = report.epochs;
    for (const auto &e : ep) {
        if (e.lr == config.lr_decayed) {
            return config.lr_decayed;
        }
    }
    const size_t w = static_cast<size_t>(config.plateau_window);
    if (ep.size() < w) {
        return config.lr_initial;
    }
    const size_t base = ep.size() - w;
    double best = -1;
    for (size_t k = base + 1; k < ep.size(); k++) {
        best = std::max(best, ep[k].test_accuracy);
    }
    if (w == 1) {
        best = ep.back().test_accuracy;
    }
    return best - ep[base].test_accuracy < config.plateau_min_gain ? config.lr_decayed : config.lr_initial;
}

FeatureMode feature_mode_for(const SourceSpec &spec) {
    if (spec.kind == CodeKind::kRepetition) {
        return FeatureMode::kRepetition;
    }
    return spec.perfect ? FeatureMode::kPerfectSurface : FeatureMode::kCircuitSurface;
}

SampleSource make_sample_source(const SourceSpec &spec) {
    if (spec.p_mix.empty()) {
        throw std::invalid_argument("sample source needs at least one error rate");
    }
    for (double p : spec.p_mix) {
        if (!(p >= 0 && p < 1)) {
            throw std::invalid_argument("error rates must lie in [0, 1)");
        }
    }
    struct State {
        SourceSpec spec;
        CodeLayout layout;
        std::vector<Circuit> circuits;
        uint64_t calls = 0;
    };
    auto st = std::make_shared<State>();
    st->spec = spec;
    st->layout = spec.kind == CodeKind::kRepetition ? build_repetition(spec.distance)
                                                    : build_rotated_surface(spec.distance);
    if (spec.perfect && spec.kind != CodeKind::kRotatedSurface) {
        throw std::invalid_argument("perfect-stabilizer sampling needs the surface code");
    }
    if (!spec.perfect) {
        for (double p : spec.p_mix) {
            st->circuits.push_back(build_memory_circuit(st->layout, spec.rounds, spec.basis, NoiseParams::uniform(p)));
        }
    }
    return [st](size_t count) {
        const auto &spec = st->spec;
        const uint64_t call = st->calls++;
        Rng pick(spec.seed, 2 * call);
        std::vector<uint32_t> which(count);
        std::vector<size_t> per_p(spec.p_mix.size(), 0);
        for (auto &w : which) {
            w = static_cast<uint32_t>(pick.below(spec.p_mix.size()));
            per_p[w]++;
        }
        std::vector<std::vector<DataPoint>> drawn(spec.p_mix.size());
        for (size_t j = 0; j < spec.p_mix.size(); j++) {
            if (per_p[j] == 0) {
                continue;
            }
            const uint64_t seed = mix64(spec.seed ^ mix64(2 * call + 1) ^ mix64(0x100 + j));
            if (spec.perfect) {
                drawn[j] = sample_perfect_shots(st->layout, spec.p_mix[j], seed, per_p[j]);
            } else {
                drawn[j] = sample_shots(st->circuits[j], seed, per_p[j], spec.threads);
            }
        }
        std::vector<size_t> next(spec.p_mix.size(), 0);
        std::vector<DataPoint> out;
        out.reserve(count);
        for (uint32_t w : which) {
            out.push_back(std::move(drawn[w][next[w]++]));
        }
        return out;
    };
}

namespace {

struct Scores {
    double accuracy = 0;
    double loss = 0;
};

bool empty_graph_correct(const LabelSet &labels) {
    for (int h = 0; h < 2; h++) {
        if (labels.present[h] && labels.value[h] != 0) {
            return false;
        }
    }
    return true;
}

Scores evaluate_graphs(const gnn::Model<float> &model, std::span<const DetectorGraph> graphs, size_t batch_size) {
    Scores s;
    if (graphs.empty()) {
        return s;
    }
    size_t correct = 0;
    size_t terms = 0;
    double loss = 0;
    std::vector<const DetectorGraph *> batch;
    auto flush = [&]() {
        if (batch.empty()) {
            return;
        }
        auto st = gnn::evaluate_loss(model, batch);
        correct += st.correct_graphs;
        terms += st.terms;
        loss += st.loss * static_cast<double>(st.terms);
        batch.clear();
    };
    for (const auto &g : graphs) {
        if (g.num_nodes() == 0) {
            correct += empty_graph_correct(g.labels) ? 1 : 0;
            continue;
        }
        if (g.labels.count() == 0) {
            continue;
        }
        batch.push_back(&g);
        if (batch.size() == batch_size) {
            flush();
        }
    }
    flush();
    s.accuracy = static_cast<double>(correct) / static_cast<double>(graphs.size());
    s.loss = terms ? loss / static_cast<double>(terms) : 0;
    return s;
}

std::vector<DetectorGraph> to_graphs(std::span<const DataPoint> points, FeatureMode mode, const GraphOptions &opt) {
    std::vector<DetectorGraph> out;
    out.reserve(points.size());
    for (const auto &p : points) {
        out.push_back(build_graph(p, mode, opt));
    }
    return out;
}

struct Trainer {
    const TrainConfig &config;
    FeatureMode mode;
    TrainResult result;
    std::mt19937_64 shuffle;

    Trainer(const TrainConfig &cfg, FeatureMode m, std::optional<Checkpoint> resume)
        : config(cfg), mode(m), shuffle(cfg.shuffle_seed) {
        config.check();
        gnn::Architecture arch = config.architecture.value_or(gnn::Architecture::standard(mode));
        if (arch.mode != mode) {
            throw std::invalid_argument("architecture feature mode does not match the data");
        }
        if (resume) {
            if (resume->model.arch.mode != mode) {
                throw std::invalid_argument("checkpoint feature mode does not match the data");
            }
            result.model = std::move(resume->model);
            result.optimizer = resume->optimizer ? std::move(*resume->optimizer)
                                                 : gnn::AdamState<float>::for_model(result.model, config.lr_initial);
        } else {
            result.model = gnn::init_model(arch, config.init_seed);
            result.optimizer = gnn::AdamState<float>::for_model(result.model, config.lr_initial);
        }
    }

    // One pass over `graphs` in shuffled batches; returns (accuracy, loss)
    // measured on each batch just before its update.
    Scores epoch_pass(std::span<const DetectorGraph> graphs) {
        std::vector<size_t> order(graphs.size());
        std::iota(order.begin(), order.end(), size_t{0});
        std::shuffle(order.begin(), order.end(), shuffle);
        gnn::Model<float> grads = gnn::Model<float>::zeros(result.model.arch);
        size_t correct = 0;
        size_t terms = 0;
        double loss = 0;
        std::vector<const DetectorGraph *> batch;
        for (size_t start = 0; start < order.size(); start += config.batch_size) {
            const size_t stop = std::min(order.size(), start + config.batch_size);
            batch.clear();
            for (size_t k = start; k < stop; k++) {
                const auto &g = graphs[order[k]];
                if (g.num_nodes() == 0) {
                    correct += empty_graph_correct(g.labels) ? 1 : 0;
                } else if (g.labels.count() > 0) {
                    batch.push_back(&g);
                }
            }
            if (batch.empty()) {
                continue;
            }
            auto st = gnn::loss_and_grads(result.model, batch, grads);
            gnn::adam_step(result.optimizer, result.model, grads);
            correct += st.correct_graphs;
            terms += st.terms;
            loss += st.loss * static_cast<double>(st.terms);
        }
        Scores s;
        s.accuracy = graphs.empty() ? 0 : static_cast<double>(correct) / static_cast<double>(graphs.size());
        s.loss = terms ? loss / static_cast<double>(terms) : 0;
        return s;
    }

    void finish_epoch(EpochRecord rec, std::span<const DetectorGraph> test, const EpochCallback &cb) {
        Scores t = evaluate_graphs(result.model, test, config.batch_size);
        rec.test_accuracy = t.accuracy;
        rec.test_loss = t.loss;
        result.report.epochs.push_back(rec);
        result.optimizer.hyper.lr = lr_schedule(result.report, config);
        if (!config.checkpoint_path.empty()) {
            save_checkpoint(config.checkpoint_path, {result.model, result.optimizer});
            result.report.checkpoint = config.checkpoint_path;
        }
        if (cb) {
            cb(result.report.epochs.back());
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double graph_accuracy(const gnn::Model<float> &model, std::span<const DetectorGraph> graphs, size_t batch_size) {
    return evaluate_graphs(model, graphs, std::max<size_t>(1, batch_size)).accuracy;
}

TrainResult train_streaming(const TrainConfig &config, FeatureMode mode, const SampleSource &source,
                            std::span<const DataPoint> test_set, std::optional<Checkpoint> resume,
                            const EpochCallback &on_epoch) {
    Trainer tr(config, mode, std::move(resume));
    auto &report = tr.result.report;
    const std::vector<DetectorGraph> test = to_graphs(test_set, mode, config.graph_options);
    std::vector<DetectorGraph> pool;
    try {
        pool = to_graphs(source(config.pool_size), mode, config.graph_options);
        if (pool.size() != config.pool_size) {
            throw std::runtime_error("sample source returned the wrong number of samples");
        }
    } catch (const std::exception &e) {
        report.error = e.what();
        return std::move(tr.result);
    }
    report.fresh_samples_total = pool.size();
    const size_t replace =
        static_cast<size_t>(std::ceil(config.replace_fraction * static_cast<double>(config.pool_size) - 1e-9));
    for (int epoch = 1; epoch <= config.epochs; epoch++) {
        auto t0 = std::chrono::steady_clock::now();
        EpochRecord rec;
        rec.epoch = epoch;
        rec.lr = tr.result.optimizer.hyper.lr;
        Scores s = tr.epoch_pass(pool);
        rec.train_accuracy = s.accuracy;
        rec.train_loss = s.loss;
        if (replace > 0) {
            std::vector<DataPoint> fresh;
            try {
                fresh = source(replace);
                if (fresh.size() != replace) {
                    throw std::runtime_error("sample source returned the wrong number of samples");
                }
            } catch (const std::exception &e) {
                report.error = e.what();
                rec.wall_seconds = seconds_since(t0);
                tr.finish_epoch(rec, test, on_epoch);
                return std::move(tr.result);
            }
            // The pool is kept in insertion order, oldest first.
            pool.erase(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(replace));
            for (const auto &p : fresh) {
                pool.push_back(build_graph(p, mode, config.graph_options));
            }
            rec.fresh_samples = replace;
            report.fresh_samples_total += replace;
        }
        rec.wall_seconds = seconds_since(t0);
        tr.finish_epoch(rec, test, on_epoch);
    }
    return std::move(tr.result);
}

std::vector<size_t> split_test_indices(size_t n, double test_fraction, uint64_t seed) {
    const size_t test = static_cast<size_t>(std::floor(static_cast<double>(n) * test_fraction + 1e-9));
    if (test == 0) {
        throw std::invalid_argument("dataset too small for a non-empty test split");
    }
    if (test >= n) {
        throw std::invalid_argument("test split would leave no training data");
    }
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::mt19937_64 gen(seed);
    std::shuffle(order.begin(), order.end(), gen);
    order.resize(test);
    std::sort(order.begin(), order.end());
    return order;
}

TrainResult train_fixed(const TrainConfig &config, FeatureMode mode, std::span<const DataPoint> dataset,
                        std::optional<Checkpoint> resume, const EpochCallback &on_epoch) {
    Trainer tr(config, mode, std::move(resume));
    for (const auto &p : dataset) {
        if (p.labels.count() == 0) {
            throw std::invalid_argument("fixed-mode training needs labelled data");
        }
    }
    const std::vector<size_t> test_idx = split_test_indices(dataset.size(), config.test_fraction, config.split_seed);
    std::unordered_set<size_t> held(test_idx.begin(), test_idx.end());
    std::vector<DetectorGraph> train;
    std::vector<DetectorGraph> test;
    train.reserve(dataset.size() - test_idx.size());
    test.reserve(test_idx.size());
    for (size_t k = 0; k < dataset.size(); k++) {
        (held.count(k) ? test : train).push_back(build_graph(dataset[k], mode, config.graph_options));
    }
    if (train.size() + test.size() != dataset.size() || held.size() != test.size()) {
        throw std::logic_error("train and test splits overlap");
    }
    for (int epoch = 1; epoch <= config.epochs; epoch++) {
        auto t0 = std::chrono::steady_clock::now();
        EpochRecord rec;
        rec.epoch = epoch;
        rec.lr = tr.result.optimizer.hyper.lr;
        Scores s = tr.epoch_pass(train);
        rec.train_accuracy = s.accuracy;
        rec.train_loss = s.loss;
        rec.wall_seconds = seconds_since(t0);
        tr.finish_epoch(rec, test, on_epoch);
    }
    return std::move(tr.result);
}

}  // namespace qecw
