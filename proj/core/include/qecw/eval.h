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

#ifndef QECW_EVAL_H
#define QECW_EVAL_H

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qecw/code_layout.h"
#include "qecw/data_point.h"
#include "qecw/detector_graph.h"
#include "qecw/gnn.h"
#include "qecw/ml_oracle.h"
#include "qecw/mwpm.h"

namespace qecw {

struct WilsonInterval {
    double lo = 0;
    double hi = 0;
};

/// Wilson score interval for a binomial proportion (95% by default).
WilsonInterval wilson_interval(size_t failures, size_t shots, double z = 1.959963984540054);

/// Per-round error rate from a total failure rate over `rounds` rounds:
/// 1/2 (1 - (1 - 2P)^(1/rounds)). P >= 1/2 maps to 1/2.
double per_round_rate(double total, int rounds);

/// One noisy memory or perfect-stabilizer experiment.
struct ExperimentSpec {
    CodeKind kind = CodeKind::kRotatedSurface;
    int distance = 3;
    int rounds = 3;
    Basis basis = Basis::kZ;
    bool perfect = false;
    double p = 1e-3;
    size_t shots = 1000;
    uint64_t seed = 0;
    int threads = 1;

    CodeLayout layout() const;
    FeatureMode feature_mode() const;
    /// Throws std::invalid_argument on an unsupported combination.
    void check() const;
};

/// Deterministic in (spec, seed) and independent of `threads`.
std::vector<DataPoint> generate(const ExperimentSpec &spec);

class Decoder {
   public:
    virtual ~Decoder() = default;
    virtual std::string id() const = 0;
    virtual LabelSet decode(const DataPoint &point) const = 0;
    /// Defaults to decoding one point at a time.
    virtual void decode_batch(std::span<const DataPoint> points, std::span<LabelSet> out) const;
};

class GnnDecoder : public Decoder {
   public:
    GnnDecoder(gnn::Model<float> model, GraphOptions options = {}, size_t batch = 1000);
    std::string id() const override {
        return "gnn";
    }
    LabelSet decode(const DataPoint &point) const override;
    void decode_batch(std::span<const DataPoint> points, std::span<LabelSet> out) const override;
    const gnn::Model<float> &model() const {
        return model_;
    }

   private:
    gnn::Model<float> model_;
    GraphOptions options_;
    size_t batch_;
};

class MwpmInformedDecoder : public Decoder {
   public:
    explicit MwpmInformedDecoder(MwpmDecoder decoder) : decoder_(std::move(decoder)) {
    }
    std::string id() const override {
        return "mwpm";
    }
    LabelSet decode(const DataPoint &point) const override {
        return decoder_.decode(point);
    }
    const MwpmDecoder &matcher() const {
        return decoder_;
    }

   private:
    MwpmDecoder decoder_;
};

class MwpmUninformedDecoder : public Decoder {
   public:
    explicit MwpmUninformedDecoder(CodeLayout layout) : decoder_(std::move(layout)) {
    }
    std::string id() const override {
        return "mwpm-uninformed";
    }
    LabelSet decode(const DataPoint &point) const override {
        return decoder_.decode(point);
    }

   private:
    UninformedMwpmDecoder decoder_;
};

class MlOracleDecoder : public Decoder {
   public:
    explicit MlOracleDecoder(MlOracle oracle) : oracle_(std::move(oracle)) {
    }
    std::string id() const override {
        return "mlo";
    }
    LabelSet decode(const DataPoint &point) const override {
        return oracle_.decode(point);
    }
    const MlOracle &oracle() const {
        return oracle_;
    }

   private:
    MlOracle oracle_;
};

/// Repetition code: majority vote, i.e. the lighter of the two data-error
/// patterns consistent with the accumulated syndrome. Surface code: the
/// trivial baseline that always predicts no logical flip.
class MajorityDecoder : public Decoder {
   public:
    explicit MajorityDecoder(CodeLayout layout) : layout_(std::move(layout)) {
    }
    std::string id() const override {
        return "majority";
    }
    LabelSet decode(const DataPoint &point) const override;

   private:
    CodeLayout layout_;
};

struct DecoderContext {
    ExperimentSpec spec;
    std::optional<gnn::Model<float>> model;
    GraphOptions graph_options;
};

/// Names: gnn, mwpm, mwpm-uninformed, mlo, majority. Throws
/// std::invalid_argument for an unknown name or a missing/incompatible model.
std::unique_ptr<Decoder> make_decoder(const std::string &name, const DecoderContext &context);

/// A shot fails when any label it carries differs from the prediction.
bool shot_failed(const DataPoint &point, const LabelSet &predicted);

struct EvalResult {
    std::string decoder;
    CodeKind kind = CodeKind::kRotatedSurface;
    int distance = 0;
    int rounds = 0;
    double p = 0;
    size_t shots = 0;
    size_t failures = 0;
    double failure_rate = 0;
    WilsonInterval interval;
    /// NaN when not applicable (perfect-stabilizer data).
    double per_round = 0;
    double seconds_per_shot = 0;
};

EvalResult evaluate(const Decoder &decoder, std::span<const DataPoint> points, const ExperimentSpec &spec);

/// Paired evaluation: every decoder sees exactly `points`. Also returns the
/// per-shot failure flags when `flags` is non-null (flags[decoder][shot]).
std::vector<EvalResult> compare(std::span<const Decoder *const> decoders, std::span<const DataPoint> points,
                                const ExperimentSpec &spec, std::vector<std::vector<uint8_t>> *flags = nullptr);

/// Column header and one line per result:
/// decoder code d d_t p shots failures rate wilson_lo wilson_hi per_round seconds_per_shot
void write_eval_header(std::ostream &out);
void write_eval_line(std::ostream &out, const EvalResult &r);

struct ScalingPoint {
    int distance = 0;
    int rounds = 1;
    double mean_seconds = 0;
};

/// Least-squares fit of log T = log C + alpha log(d^2 d_t).
struct ScalingFit {
    std::vector<ScalingPoint> points;
    double c = 0;
    double alpha = 0;
    std::vector<double> residuals;  // log-space
    /// Set by callers that fit only a sub-range of the measured sizes.
    bool restricted = false;
};

/// Throws std::invalid_argument with fewer than 4 points or degenerate sizes.
ScalingFit fit_scaling(std::span<const ScalingPoint> points);

struct BenchRow {
    int distance = 0;
    int rounds = 1;
    size_t shots = 0;
    double decode_seconds = 0;  // mean per shot, graph construction excluded
    double graph_seconds = 0;   // mean per shot
    double mean_nodes = 0;
};

/// Times GNN inference over freshly sampled graphs, fed in batches of `batch`
/// so fixed per-call costs are amortized (batch = 1 times one shot at a time).
/// Batch assembly and inference count as decode time; graph construction is
/// timed separately.
BenchRow bench_gnn(const gnn::Model<float> &model, const ExperimentSpec &spec, const GraphOptions &options = {},
                   size_t batch = 64);

}  // namespace qecw

#endif
