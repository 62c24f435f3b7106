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

#include "qecw/eval.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "qecw/circuit.h"
#include "qecw/error_model.h"
#include "qecw/frame_simulator.h"
#include "qecw/perfect_sampler.h"

namespace qecw {

WilsonInterval wilson_interval(size_t failures, size_t shots, double z) {
    if (failures > shots) {
        throw std::invalid_argument("failures exceed shots");
    }
    if (shots == 0) {
        return {0, 1};
    }
    const double n = static_cast<double>(shots);
    const double phat = static_cast<double>(failures) / n;
    const double z2 = z * z;
    const double denom = 1 + z2 / n;
    const double centre = (phat + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double per_round_rate(double total, int rounds) {
    if (rounds < 1) {
        throw std::invalid_argument("round count must be positive");
    }
    if (total >= 0.5) {
        return 0.5;
    }
    return 0.5 * (1 - std::pow(1 - 2 * total, 1.0 / rounds));
}

CodeLayout ExperimentSpec::layout() const {
    return kind == CodeKind::kRepetition ? build_repetition(distance) : build_rotated_surface(distance);
}

FeatureMode ExperimentSpec::feature_mode() const {
    if (kind == CodeKind::kRepetition) {
        return FeatureMode::kRepetition;
    }
    return perfect ? FeatureMode::kPerfectSurface : FeatureMode::kCircuitSurface;
}

void ExperimentSpec::check() const {
    if (perfect && kind != CodeKind::kRotatedSurface) {
        throw std::invalid_argument("perfect-stabilizer mode needs the surface code");
    }
    if (kind == CodeKind::kRepetition && basis == Basis::kX) {
        throw std::invalid_argument("the repetition code has no memory-X experiment");
    }
    if (!(p >= 0 && p < 1)) {
        throw std::invalid_argument("error rate must lie in [0, 1)");
    }
    if (rounds < 1) {
        throw std::invalid_argument("round count must be positive");
    }
}

std::vector<DataPoint> generate(const ExperimentSpec &spec) {
    spec.check();
    const CodeLayout layout = spec.layout();
    if (spec.perfect) {
        return sample_perfect_shots(layout, spec.p, spec.seed, spec.shots);
    }
    Circuit c = build_memory_circuit(layout, spec.rounds, spec.basis, NoiseParams::uniform(spec.p));
    return sample_shots(c, spec.seed, spec.shots, spec.threads);
}

void Decoder::decode_batch(std::span<const DataPoint> points, std::span<LabelSet> out) const {
    for (size_t k = 0; k < points.size(); k++) {
        out[k] = decode(points[k]);
    }
}

GnnDecoder::GnnDecoder(gnn::Model<float> model, GraphOptions options, size_t batch)
    : model_(std::move(model)), options_(options), batch_(std::max<size_t>(1, batch)) {
}

LabelSet GnnDecoder::decode(const DataPoint &point) const {
    DetectorGraph g = build_graph(point, model_.arch.mode, options_);
    return gnn::predicted_labels(gnn::forward(model_, g), model_.arch.heads());
}

void GnnDecoder::decode_batch(std::span<const DataPoint> points, std::span<LabelSet> out) const {
    for (size_t start = 0; start < points.size(); start += batch_) {
        const size_t stop = std::min(points.size(), start + batch_);
        std::vector<DetectorGraph> graphs;
        graphs.reserve(stop - start);
        for (size_t k = start; k < stop; k++) {
            graphs.push_back(build_graph(points[k], model_.arch.mode, options_));
        }
        std::vector<const DetectorGraph *> ptrs;
        for (const auto &g : graphs) {
            ptrs.push_back(&g);
        }
        auto probs = gnn::predict(model_, ptrs);
        for (size_t k = start; k < stop; k++) {
            out[k] = gnn::predicted_labels(probs[k - start], model_.arch.heads());
        }
    }
}

LabelSet MajorityDecoder::decode(const DataPoint &point) const {
    LabelSet out;
    if (layout_.kind != CodeKind::kRepetition) {
        out.set(LabelKind::kZ, 0);
        out.set(LabelKind::kX, 0);
        return out;
    }
    const int d = layout_.distance;
    std::vector<uint8_t> syndrome(d - 1, 0);
    for (const auto &e : point.detectors) {
        int s = (e.x2 - 1) / 2;
        if (e.type != PauliType::kZ || e.x2 % 2 == 0 || s < 0 || s >= d - 1) {
            throw std::invalid_argument("detector is not a repetition-code stabilizer");
        }
        syndrome[s] ^= 1;
    }
    // Pattern with e_0 = 0; its complement is the other consistent pattern.
    int weight = 0;
    uint8_t e = 0;
    for (int s = 0; s < d - 1; s++) {
        e ^= syndrome[s];
        weight += e;
    }
    out.set(LabelKind::kZ, 2 * weight > d ? 1 : 0);
    return out;
}

std::unique_ptr<Decoder> make_decoder(const std::string &name, const DecoderContext &ctx) {
    const ExperimentSpec &spec = ctx.spec;
    spec.check();
    const CodeLayout layout = spec.layout();
    if (name == "gnn") {
        if (!ctx.model) {
            throw std::invalid_argument("the gnn decoder needs a checkpoint");
        }
        if (ctx.model->arch.mode != spec.feature_mode()) {
            throw std::invalid_argument(std::string("checkpoint feature mode '") + to_string(ctx.model->arch.mode) +
                                        "' does not match the data ('" + to_string(spec.feature_mode()) + "')");
        }
        return std::make_unique<GnnDecoder>(*ctx.model, ctx.graph_options);
    }
    if (name == "mwpm") {
        if (spec.perfect) {
            return std::make_unique<MwpmInformedDecoder>(MwpmDecoder::from_dem(perfect_stabilizer_dem(layout, spec.p)));
        }
        Circuit c = build_memory_circuit(layout, spec.rounds, spec.basis, NoiseParams::uniform(spec.p));
        return std::make_unique<MwpmInformedDecoder>(MwpmDecoder::from_dem(enumerate_single_faults(c)));
    }
    if (name == "mwpm-uninformed") {
        return std::make_unique<MwpmUninformedDecoder>(layout);
    }
    if (name == "mlo") {
        if (!spec.perfect) {
            throw std::invalid_argument("the maximum-likelihood oracle needs perfect-stabilizer data");
        }
        return std::make_unique<MlOracleDecoder>(MlOracle(layout, spec.p));
    }
    if (name == "majority") {
        return std::make_unique<MajorityDecoder>(layout);
    }
    throw std::invalid_argument("unknown decoder '" + name + "'");
}

bool shot_failed(const DataPoint &point, const LabelSet &predicted) {
    for (int h = 0; h < 2; h++) {
        if (!point.labels.present[h]) {
            continue;
        }
        const uint8_t guess = predicted.present[h] ? predicted.value[h] : 0;
        if (guess != point.labels.value[h]) {
            return true;
        }
    }
    return false;
}

namespace {

std::vector<uint8_t> failure_flags(const Decoder &decoder, std::span<const DataPoint> points, int threads,
                                   double *seconds) {
    std::vector<LabelSet> predicted(points.size());
    auto t0 = std::chrono::steady_clock::now();
    const size_t workers = std::max<size_t>(1, std::min<size_t>(threads, points.size()));
    if (workers <= 1) {
        decoder.decode_batch(points, predicted);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        const size_t chunk = (points.size() + workers - 1) / workers;
        for (size_t w = 0; w < workers; w++) {
            const size_t lo = std::min(points.size(), w * chunk);
            const size_t hi = std::min(points.size(), lo + chunk);
            pool.emplace_back([&, w, lo, hi]() {
                try {
                    decoder.decode_batch(points.subspan(lo, hi - lo), std::span(predicted).subspan(lo, hi - lo));
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto &t : pool) {
            t.join();
        }
        for (auto &e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }
    *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::vector<uint8_t> flags(points.size());
    for (size_t k = 0; k < points.size(); k++) {
        flags[k] = shot_failed(points[k], predicted[k]) ? 1 : 0;
    }
    return flags;
}

EvalResult summarize(const std::string &id, const std::vector<uint8_t> &flags, double seconds,
                     const ExperimentSpec &spec) {
    EvalResult r;
    r.decoder = id;
    r.kind = spec.kind;
    r.distance = spec.distance;
    r.rounds = spec.perfect ? 1 : spec.rounds;
    r.p = spec.p;
    r.shots = flags.size();
    for (uint8_t f : flags) {
        r.failures += f;
    }
    r.failure_rate = r.shots ? static_cast<double>(r.failures) / static_cast<double>(r.shots) : 0;
    r.interval = wilson_interval(r.failures, r.shots);
    r.per_round = spec.perfect ? std::numeric_limits<double>::quiet_NaN() : per_round_rate(r.failure_rate, spec.rounds);
    r.seconds_per_shot = r.shots ? seconds / static_cast<double>(r.shots) : 0;
    return r;
}

}  // namespace

EvalResult evaluate(const Decoder &decoder, std::span<const DataPoint> points, const ExperimentSpec &spec) {
    double seconds = 0;
    auto flags = failure_flags(decoder, points, spec.threads, &seconds);
    return summarize(decoder.id(), flags, seconds, spec);
}

std::vector<EvalResult> compare(std::span<const Decoder *const> decoders, std::span<const DataPoint> points,
                                const ExperimentSpec &spec, std::vector<std::vector<uint8_t>> *flags) {
    std::vector<EvalResult> out;
    if (flags) {
        flags->clear();
    }
    for (const Decoder *d : decoders) {
        double seconds = 0;
        auto f = failure_flags(*d, points, spec.threads, &seconds);
        out.push_back(summarize(d->id(), f, seconds, spec));
        if (flags) {
            flags->push_back(std::move(f));
        }
    }
    return out;
}

void write_eval_header(std::ostream &out) {
    out << "decoder code d d_t p shots failures rate wilson_lo wilson_hi per_round seconds_per_shot\n";
}

void write_eval_line(std::ostream &out, const EvalResult &r) {
    char buf[320];
    std::snprintf(buf, sizeof(buf), "%s %s %d %d %.6g %zu %zu %.8g %.8g %.8g %.8g %.6g\n", r.decoder.c_str(),
                  r.kind == CodeKind::kRepetition ? "rep" : "surface", r.distance, r.rounds, r.p, r.shots, r.failures,
                  r.failure_rate, r.interval.lo, r.interval.hi, r.per_round, r.seconds_per_shot);
    out << buf;
}

ScalingFit fit_scaling(std::span<const ScalingPoint> points) {
    if (points.size() < 4) {
        throw std::invalid_argument("scaling fit needs at least 4 points");
    }
    const double n = static_cast<double>(points.size());
    double sx = 0;
    double sy = 0;
    double sxx = 0;
    double sxy = 0;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto &p : points) {
        if (p.distance < 1 || p.rounds < 1 || !(p.mean_seconds > 0)) {
            throw std::invalid_argument("scaling points need positive sizes and times");
        }
        double x = std::log(static_cast<double>(p.distance) * p.distance * p.rounds);
        double y = std::log(p.mean_seconds);
        xs.push_back(x);
        ys.push_back(y);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (!(std::abs(denom) > 1e-12)) {
        throw std::invalid_argument("scaling fit needs at least two distinct sizes");
    }
    ScalingFit fit;
    fit.points.assign(points.begin(), points.end());
    fit.alpha = (n * sxy - sx * sy) / denom;
    const double log_c = (sy - fit.alpha * sx) / n;
    fit.c = std::exp(log_c);
    for (size_t k = 0; k < xs.size(); k++) {
        fit.residuals.push_back(ys[k] - (log_c + fit.alpha * xs[k]));
    }
    return fit;
}

BenchRow bench_gnn(const gnn::Model<float> &model, const ExperimentSpec &spec, const GraphOptions &options,
                   size_t batch) {
    if (model.arch.mode != spec.feature_mode()) {
        throw std::invalid_argument("model feature mode does not match the benchmark data");
    }
    if (batch == 0) {
        throw std::invalid_argument("benchmark batch size must be positive");
    }
    const auto points = generate(spec);
    BenchRow row;
    row.distance = spec.distance;
    row.rounds = spec.perfect ? 1 : spec.rounds;
    row.shots = points.size();
    if (points.empty()) {
        return row;
    }
    using clock = std::chrono::steady_clock;
    std::vector<DetectorGraph> graphs;
    graphs.reserve(points.size());
    auto t0 = clock::now();
    for (const auto &p : points) {
        graphs.push_back(build_graph(p, model.arch.mode, options));
    }
    auto t1 = clock::now();
    std::vector<const DetectorGraph *> ptrs;
    size_t nodes = 0;
    for (const auto &g : graphs) {
        ptrs.push_back(&g);
        nodes += g.num_nodes();
    }
    volatile double sink = 0;
    for (size_t begin = 0; begin < ptrs.size(); begin += batch) {
        const size_t count = std::min(batch, ptrs.size() - begin);
        auto probs = gnn::predict(model, std::span<const DetectorGraph *const>(ptrs).subspan(begin, count));
        sink = sink + probs.front()[0];
    }
    auto t2 = clock::now();
    const double n = static_cast<double>(points.size());
    row.graph_seconds = std::chrono::duration<double>(t1 - t0).count() / n;
    row.decode_seconds = std::chrono::duration<double>(t2 - t1).count() / n;
    row.mean_nodes = static_cast<double>(nodes) / n;
    return row;
}

}  // namespace qecw
