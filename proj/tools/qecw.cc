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

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <memory>
#include <string>
#include <vector>

#include "qecw/checkpoint.h"
#include "qecw/circuit.h"
#include "qecw/dataset_io.h"
#include "qecw/error_model.h"
#include "qecw/eval.h"
#include "qecw/raw_records.h"
#include "qecw/training.h"

using namespace qecw;

namespace {

/// Flags shared by every subcommand that describes an experiment.
struct ExperimentFlags {
    std::string code = "surface";
    int d = 3;
    int dt = 3;
    std::vector<double> p{1e-3};
    size_t shots = 10000;
    uint64_t seed = 0;
    std::string basis = "z";
    std::string mode = "circuit";
    int threads = 1;

    void add_to(CLI::App &app, bool repeatable_p) {
        app.add_option("--code", code, "Code family")->check(CLI::IsMember({"rep", "surface"}))->capture_default_str();
        app.add_option("--d", d, "Code distance")->check(CLI::Range(2, 1001))->capture_default_str();
        app.add_option("--dt", dt, "Stabilizer rounds (circuit mode)")->check(CLI::Range(1, 100000))->capture_default_str();
        auto *po = app.add_option("--p", p, repeatable_p ? "Physical error rate; repeat for a mix" : "Physical error rate")
                       ->check(CLI::Range(0.0, 1.0))
                       ->capture_default_str();
        if (!repeatable_p) {
            po->expected(1);
        }
        app.add_option("--shots", shots, "Number of shots")->capture_default_str();
        app.add_option("--seed", seed, "Random seed")->capture_default_str();
        app.add_option("--basis", basis, "Memory basis")->check(CLI::IsMember({"z", "x"}))->capture_default_str();
        app.add_option("--mode", mode, "Noise model")->check(CLI::IsMember({"circuit", "perfect"}))->capture_default_str();
        app.add_option("--threads", threads, "Worker threads")
            ->envname("QECW_THREADS")
            ->check(CLI::Range(1, 1024))
            ->capture_default_str();
    }

    ExperimentSpec spec() const {
        ExperimentSpec s;
        s.kind = code == "rep" ? CodeKind::kRepetition : CodeKind::kRotatedSurface;
        s.distance = d;
        s.rounds = dt;
        s.basis = basis == "x" ? Basis::kX : Basis::kZ;
        s.perfect = mode == "perfect";
        s.p = p.front();
        s.shots = shots;
        s.seed = seed;
        s.threads = threads;
        s.check();
        return s;
    }

    SourceSpec source(uint64_t source_seed) const {
        ExperimentSpec s = spec();
        SourceSpec src;
        src.kind = s.kind;
        src.distance = s.distance;
        src.rounds = s.rounds;
        src.basis = s.basis;
        src.perfect = s.perfect;
        src.p_mix = p;
        src.seed = source_seed;
        src.threads = threads;
        return src;
    }
};

DatasetHeader header_for(const ExperimentSpec &spec, double noise_p) {
    DatasetHeader h;
    h.kind = spec.kind;
    h.distance = spec.distance;
    h.rounds = spec.perfect ? 1 : spec.rounds;
    h.basis = spec.basis;
    h.mode = spec.feature_mode();
    h.noise_p = noise_p;
    return h;
}

/// Experiment described by a dataset header; `p` fills in an unknown noise rate.
ExperimentSpec spec_from_header(const DatasetHeader &h, double p, int threads) {
    ExperimentSpec s;
    s.kind = h.kind;
    s.distance = h.distance;
    s.rounds = h.rounds;
    s.basis = h.basis;
    s.perfect = h.mode == FeatureMode::kPerfectSurface;
    s.p = std::isnan(h.noise_p) ? p : h.noise_p;
    s.shots = h.records;
    s.threads = threads;
    return s;
}

/// Writes to --out when given, stdout otherwise.
class Output {
   public:
    explicit Output(const std::string &path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw std::runtime_error("cannot open '" + path + "' for writing");
            }
        }
    }
    std::ostream &stream() {
        return file_.is_open() ? static_cast<std::ostream &>(file_) : std::cout;
    }

   private:
    std::ofstream file_;
};

struct EvalInputs {
    ExperimentSpec spec;
    std::vector<DataPoint> points;
};

EvalInputs load_or_generate(const ExperimentFlags &flags, const std::string &dataset) {
    EvalInputs in;
    if (dataset.empty()) {
        in.spec = flags.spec();
        in.points = generate(in.spec);
        return in;
    }
    Dataset ds = load_dataset(dataset);
    in.spec = spec_from_header(ds.header, flags.p.front(), flags.threads);
    in.spec.check();
    in.points = std::move(ds.points);
    return in;
}

DecoderContext context_for(const ExperimentSpec &spec, const std::string &checkpoint) {
    DecoderContext ctx;
    ctx.spec = spec;
    if (!checkpoint.empty()) {
        ctx.model = load_checkpoint(checkpoint).model;
    }
    return ctx;
}

void write_summary(std::ostream &out, const std::vector<EvalResult> &results) {
    out << "\n" << std::left << std::setw(18) << "decoder" << std::right << std::setw(10) << "failures" << std::setw(10)
        << "shots" << std::setw(14) << "rate" << std::setw(26) << "wilson95" << "\n";
    for (const auto &r : results) {
        std::ostringstream ci;
        ci << std::setprecision(4) << "[" << r.interval.lo << ", " << r.interval.hi << "]";
        out << std::left << std::setw(18) << r.decoder << std::right << std::setw(10) << r.failures << std::setw(10)
            << r.shots << std::setw(14) << std::setprecision(6) << r.failure_rate << std::setw(26) << ci.str() << "\n";
    }
}

int cmd_gen(const ExperimentFlags &flags, const std::string &out_path) {
    if (out_path.empty()) {
        throw std::invalid_argument("gen needs --out");
    }
    ExperimentSpec spec = flags.spec();
    std::vector<DataPoint> points;
    double noise_p = spec.p;
    if (flags.p.size() == 1) {
        points = generate(spec);
    } else {
        points = make_sample_source(flags.source(flags.seed))(flags.shots);
        noise_p = std::numeric_limits<double>::quiet_NaN();
    }
    save_dataset(out_path, header_for(spec, noise_p), points);
    std::cerr << "wrote " << points.size() << " shots to " << out_path << "\n";
    return 0;
}

struct TrainFlags {
    int epochs = 20;
    size_t pool = 100000;
    size_t batch = 1000;
    double replace_frac = 0.25;
    double split = 0.01;
    std::string checkpoint;
    std::string dataset;
    std::string out;
    bool resume = false;
};

int cmd_train(const ExperimentFlags &flags, const TrainFlags &tf) {
    TrainConfig config;
    config.epochs = tf.epochs;
    config.pool_size = tf.pool;
    config.batch_size = tf.batch;
    config.replace_fraction = tf.replace_frac;
    config.test_fraction = tf.split;
    config.p_mix = flags.p;
    config.init_seed = flags.seed * 4 + 1;
    config.shuffle_seed = flags.seed * 4 + 2;
    config.split_seed = flags.seed * 4 + 3;
    config.checkpoint_path = tf.checkpoint;

    std::optional<Checkpoint> resume;
    if (tf.resume) {
        if (tf.checkpoint.empty()) {
            throw std::invalid_argument("--resume needs --checkpoint");
        }
        resume = load_checkpoint(tf.checkpoint);
    }
    Output out(tf.out);
    auto log = [](const EpochRecord &e) {
        std::cerr << "epoch " << e.epoch << " train_acc " << e.train_accuracy << " test_acc " << e.test_accuracy
                  << " lr " << e.lr << " (" << std::setprecision(3) << e.wall_seconds << " s)\n";
    };

    TrainResult result;
    if (!tf.dataset.empty()) {
        config.mode = TrainMode::kFixed;
        Dataset ds = load_dataset(tf.dataset);
        result = train_fixed(config, ds.header.mode, ds.points, resume, log);
    } else {
        config.mode = TrainMode::kStreaming;
        SourceSpec src = flags.source(flags.seed * 2 + 11);
        // The held-out test set comes from an independent stream.
        SourceSpec test_src = src;
        test_src.seed = flags.seed * 2 + 12;
        std::vector<DataPoint> test = make_sample_source(test_src)(flags.shots);
        result = train_streaming(config, feature_mode_for(src), make_sample_source(src), test, resume, log);
    }
    result.report.write_lines(out.stream());
    if (!result.report.error.empty()) {
        std::cerr << "training stopped early: " << result.report.error << "\n";
        return 1;
    }
    return 0;
}

int cmd_eval(const ExperimentFlags &flags, const std::string &decoder, const std::string &checkpoint,
             const std::string &dataset, const std::string &out_path) {
    EvalInputs in = load_or_generate(flags, dataset);
    auto dec = make_decoder(decoder, context_for(in.spec, checkpoint));
    EvalResult r = evaluate(*dec, in.points, in.spec);
    Output out(out_path);
    write_eval_header(out.stream());
    write_eval_line(out.stream(), r);
    return 0;
}

int cmd_compare(const ExperimentFlags &flags, std::vector<std::string> decoders, const std::string &checkpoint,
                const std::string &dataset, const std::string &out_path) {
    EvalInputs in = load_or_generate(flags, dataset);
    if (decoders.empty()) {
        decoders = {"mwpm", "mwpm-uninformed", "majority"};
        if (in.spec.perfect && in.spec.kind == CodeKind::kRotatedSurface && in.spec.distance == 3) {
            decoders.push_back("mlo");
        }
        if (!checkpoint.empty()) {
            decoders.insert(decoders.begin(), "gnn");
        }
    }
    DecoderContext ctx = context_for(in.spec, checkpoint);
    std::vector<std::unique_ptr<Decoder>> owned;
    std::vector<const Decoder *> ptrs;
    for (const auto &name : decoders) {
        owned.push_back(make_decoder(name, ctx));
        ptrs.push_back(owned.back().get());
    }
    auto results = compare(ptrs, in.points, in.spec);
    Output out(out_path);
    write_eval_header(out.stream());
    for (const auto &r : results) {
        write_eval_line(out.stream(), r);
    }
    write_summary(std::cerr, results);
    return 0;
}

int cmd_bench(ExperimentFlags flags, std::vector<int> distances, size_t batch, const std::string &checkpoint,
              const std::string &out_path) {
    if (distances.empty()) {
        distances = {7, 11, 15, 21, 31};
    }
    std::optional<gnn::Model<float>> model;
    if (!checkpoint.empty()) {
        model = load_checkpoint(checkpoint).model;
    }
    Output out(out_path);
    out.stream() << "d d_t shots mean_nodes decode_seconds graph_seconds\n";
    std::vector<ScalingPoint> points;
    for (int d : distances) {
        flags.d = d;
        ExperimentSpec spec = flags.spec();
        if (!model) {
            model = init_model(gnn::Architecture::standard(spec.feature_mode()), flags.seed + 1);
        }
        BenchRow row = bench_gnn(*model, spec, {}, batch);
        out.stream() << row.distance << " " << row.rounds << " " << row.shots << " " << row.mean_nodes << " "
                     << row.decode_seconds << " " << row.graph_seconds << "\n";
        points.push_back({row.distance, row.rounds, row.decode_seconds});
    }
    if (points.size() >= 4) {
        ScalingFit fit = fit_scaling(points);
        out.stream() << "# fit T = C (d^2 d_t)^alpha: C " << fit.c << " alpha " << fit.alpha << "\n";
        for (size_t k = 0; k < fit.residuals.size(); k++) {
            out.stream() << "# residual d=" << fit.points[k].distance << " " << fit.residuals[k] << "\n";
        }
    } else {
        std::cerr << "fewer than 4 sizes; no scaling fit\n";
    }
    return 0;
}

int cmd_dem(const ExperimentFlags &flags, const std::string &out_path) {
    ExperimentSpec spec = flags.spec();
    DetectorErrorModel dem =
        spec.perfect ? perfect_stabilizer_dem(spec.layout(), spec.p)
                     : enumerate_single_faults(
                           build_memory_circuit(spec.layout(), spec.rounds, spec.basis, NoiseParams::uniform(spec.p)));
    Output out(out_path);
    out.stream() << dem.to_text();
    return 0;
}

int cmd_ingest(const std::string &raw_path, int window, const std::string &out_path, double p) {
    if (out_path.empty()) {
        throw std::invalid_argument("ingest needs --out");
    }
    RawFile raw = read_raw(raw_path);
    ExperimentSpec spec;
    spec.kind = raw.schema.kind;
    spec.distance = raw.schema.distance;
    spec.rounds = raw.schema.rounds;
    spec.basis = raw.schema.basis;
    if (window == 0) {
        auto points = ingest_raw(raw.records, raw.schema);
        save_dataset(out_path, header_for(spec, p), points);
        std::cerr << "wrote " << points.size() << " shots to " << out_path << "\n";
        return 0;
    }
    auto windows = subwindow(raw.records, raw.schema, window);
    std::vector<DataPoint> all;
    for (auto &w : windows) {
        all.insert(all.end(), w.begin(), w.end());
    }
    spec.distance = window;
    save_dataset(out_path, header_for(spec, p), all);
    std::cerr << "wrote " << windows.size() << " windows x " << raw.records.size() << " shots to " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qecw: surface and repetition code decoding experiments"};
    app.require_subcommand(1);

    ExperimentFlags flags;
    std::string out_path;
    std::string checkpoint;
    std::string dataset;

    auto *gen = app.add_subcommand("gen", "Sample a labelled dataset");
    flags.add_to(*gen, true);
    gen->add_option("--out", out_path, "Dataset file to write");

    TrainFlags tf;
    auto *train = app.add_subcommand("train", "Train a graph neural network decoder");
    flags.add_to(*train, true);
    train->add_option("--epochs", tf.epochs, "Training epochs")->capture_default_str();
    train->add_option("--pool", tf.pool, "Streaming pool size")->capture_default_str();
    train->add_option("--batch", tf.batch, "Mini-batch size")->capture_default_str();
    train->add_option("--replace-frac", tf.replace_frac, "Pool fraction replaced each epoch")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    train->add_option("--split", tf.split, "Held-out fraction (fixed dataset)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    train->add_option("--checkpoint", tf.checkpoint, "Checkpoint written after every epoch");
    train->add_option("--dataset", tf.dataset, "Train on a fixed dataset instead of streaming");
    train->add_option("--out", tf.out, "Training report");
    train->add_flag("--resume", tf.resume, "Continue from --checkpoint");

    std::string decoder = "mwpm";
    auto *eval = app.add_subcommand("eval", "Logical failure rate of one decoder");
    flags.add_to(*eval, false);
    eval->add_option("--decoder", decoder, "Decoder")
        ->check(CLI::IsMember({"gnn", "mwpm", "mwpm-uninformed", "mlo", "majority"}))
        ->capture_default_str();
    eval->add_option("--checkpoint", checkpoint, "GNN checkpoint")->check(CLI::ExistingFile);
    eval->add_option("--dataset", dataset, "Evaluate a stored dataset")->check(CLI::ExistingFile);
    eval->add_option("--out", out_path, "Result file");

    std::vector<std::string> decoders;
    auto *cmp = app.add_subcommand("compare", "Paired evaluation of several decoders");
    flags.add_to(*cmp, false);
    cmp->add_option("--decoder", decoders, "Decoder; repeat to choose several")
        ->check(CLI::IsMember({"gnn", "mwpm", "mwpm-uninformed", "mlo", "majority"}));
    cmp->add_option("--checkpoint", checkpoint, "GNN checkpoint")->check(CLI::ExistingFile);
    cmp->add_option("--dataset", dataset, "Evaluate a stored dataset")->check(CLI::ExistingFile);
    cmp->add_option("--out", out_path, "Result file");

    std::vector<int> distances;
    ExperimentFlags bench_flags;
    bench_flags.mode = "perfect";
    bench_flags.p = {0.05};
    bench_flags.shots = 1000;
    auto *bench = app.add_subcommand("bench", "GNN decode-time scaling");
    bench_flags.add_to(*bench, false);
    bench->remove_option(bench->get_option("--d"));
    bench->add_option("--d", distances, "Code distance; repeat for a sweep (default 7 11 15 21 31)");
    size_t bench_batch = 64;
    bench->add_option("--batch", bench_batch, "Graphs per inference call (1 = unbatched)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench->add_option("--checkpoint", checkpoint, "Timed model (untrained weights when omitted)")
        ->check(CLI::ExistingFile);
    bench->add_option("--out", out_path, "Result file");

    auto *dem = app.add_subcommand("dem", "Print the detector error model");
    flags.add_to(*dem, false);
    dem->add_option("--out", out_path, "Output file");

    int window = 0;
    double ingest_p = std::numeric_limits<double>::quiet_NaN();
    auto *ingest = app.add_subcommand("ingest", "Convert raw measurement records to a dataset");
    ingest->add_option("--dataset", dataset, "Raw record file (with .schema sidecar)")
        ->required()
        ->check(CLI::ExistingFile);
    ingest->add_option("--window", window, "Repetition-code sub-window distance (0 = none)");
    ingest->add_option("--p", ingest_p, "Noise rate stored in the header");
    ingest->add_option("--out", out_path, "Dataset file to write");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            return cmd_gen(flags, out_path);
        }
        if (*train) {
            return cmd_train(flags, tf);
        }
        if (*eval) {
            return cmd_eval(flags, decoder, checkpoint, dataset, out_path);
        }
        if (*cmp) {
            return cmd_compare(flags, decoders, checkpoint, dataset, out_path);
        }
        if (*bench) {
            return cmd_bench(bench_flags, distances, bench_batch, checkpoint, out_path);
        }
        if (*dem) {
            return cmd_dem(flags, out_path);
        }
        if (*ingest) {
            return cmd_ingest(dataset, window, out_path, ingest_p);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
