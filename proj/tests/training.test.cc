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

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "qecw/perfect_sampler.h"

using namespace qecw;

namespace {

gnn::Architecture tiny(FeatureMode mode) {
    gnn::Architecture a;
    a.mode = mode;
    a.conv_widths = {8, 8};
    a.head_widths = {8, 1};
    return a;
}

TrainConfig tiny_config() {
    TrainConfig c;
    c.batch_size = 16;
    c.lr_initial = 1e-3;
    c.lr_decayed = 1e-4;
    c.pool_size = 40;
    c.epochs = 4;
    c.architecture = tiny(FeatureMode::kPerfectSurface);
    return c;
}

TrainReport with_accuracies(const std::vector<double> &acc, double lr) {
    TrainReport r;
    for (size_t k = 0; k < acc.size(); k++) {
        EpochRecord e;
        e.epoch = static_cast<int>(k + 1);
        e.test_accuracy = acc[k];
        e.lr = lr;
        r.epochs.push_back(e);
    }
    return r;
}

SampleSource perfect_source(uint64_t seed) {
    SourceSpec s;
    s.distance = 3;
    s.perfect = true;
    s.p_mix = {0.05, 0.1};
    s.seed = seed;
    return make_sample_source(s);
}

}  // namespace

TEST(training, lr_schedule_rule) {
    TrainConfig c;
    std::vector<double> rising;
    for (int k = 0; k < 25; k++) {
        rising.push_back(0.5 + 0.01 * k);
    }
    EXPECT_EQ(lr_schedule(with_accuracies(rising, 1e-4), c), 1e-4);
    EXPECT_EQ(lr_schedule(with_accuracies(std::vector<double>(20, 0.9), 1e-4), c), 1e-5);
    // Too few epochs to judge a plateau.
    EXPECT_EQ(lr_schedule(with_accuracies(std::vector<double>(19, 0.9), 1e-4), c), 1e-4);
    // A gain of 0.04 percentage points over the window still counts as flat.
    std::vector<double> slow(20, 0.9);
    slow[12] = 0.9004;
    EXPECT_EQ(lr_schedule(with_accuracies(slow, 1e-4), c), 1e-5);
    slow[12] = 0.9006;
    EXPECT_EQ(lr_schedule(with_accuracies(slow, 1e-4), c), 1e-4);
    // Once decayed, never back up.
    TrainReport decayed = with_accuracies(rising, 1e-4);
    decayed.epochs[10].lr = 1e-5;
    EXPECT_EQ(lr_schedule(decayed, c), 1e-5);
}

TEST(training, split_sizes) {
    auto test = split_test_indices(100, 0.01, 3);
    EXPECT_EQ(test.size(), 1u);
    EXPECT_LT(test[0], 100u);
    EXPECT_EQ(split_test_indices(1000, 0.01, 3).size(), 10u);
    EXPECT_THROW(split_test_indices(50, 0.01, 3), std::invalid_argument);
    EXPECT_THROW(split_test_indices(1, 1.0, 3), std::invalid_argument);
    auto a = split_test_indices(10000, 0.01, 1);
    auto b = split_test_indices(10000, 0.01, 2);
    EXPECT_NE(a, b);
    EXPECT_EQ(a, split_test_indices(10000, 0.01, 1));
}

TEST(training, config_validation) {
    TrainConfig c;
    EXPECT_NO_THROW(c.check());
    c.replace_fraction = 1.5;
    EXPECT_THROW(c.check(), std::invalid_argument);
    c = TrainConfig{};
    c.batch_size = 0;
    EXPECT_THROW(c.check(), std::invalid_argument);
}

TEST(training, report_lines_round_trip) {
    TrainReport r;
    EpochRecord e;
    e.epoch = 3;
    e.train_accuracy = 0.75;
    e.train_loss = 0.5;
    e.test_accuracy = 0.625;
    e.test_loss = 0.25;
    e.lr = 1e-4;
    e.wall_seconds = 2;
    e.fresh_samples = 9;
    r.epochs.push_back(e);
    std::ostringstream out;
    r.write_lines(out);
    EXPECT_NE(out.str().find("3 test accuracy 0.625"), std::string::npos);
    std::istringstream in(out.str());
    TrainReport back = TrainReport::parse_lines(in);
    ASSERT_EQ(back.epochs.size(), 1u);
    EXPECT_EQ(back.epochs[0].epoch, 3);
    EXPECT_DOUBLE_EQ(back.epochs[0].test_accuracy, 0.625);
    EXPECT_DOUBLE_EQ(back.epochs[0].lr, 1e-4);
    EXPECT_EQ(back.epochs[0].fresh_samples, 9u);
}

TEST(training, sample_source_mixes_noise_levels) {
    auto source = perfect_source(4);
    auto first = source(400);
    ASSERT_EQ(first.size(), 400u);
    std::set<double> ps;
    for (const auto &dp : first) {
        ps.insert(dp.noise_p);
    }
    EXPECT_EQ(ps, (std::set<double>{0.05, 0.1}));
    auto second = source(400);
    size_t same = 0;
    for (size_t k = 0; k < 400; k++) {
        same += first[k].same_content(second[k]) && !first[k].detectors.empty();
    }
    EXPECT_LT(same, 40u);
    auto replay = perfect_source(4)(400);
    for (size_t k = 0; k < 400; k++) {
        EXPECT_TRUE(replay[k].same_content(first[k]));
    }
}

TEST(training, streaming_replaces_oldest_quarter) {
    TrainConfig c = tiny_config();
    c.pool_size = 10;
    std::vector<size_t> requests;
    auto inner = perfect_source(1);
    SampleSource counting = [&](size_t n) {
        requests.push_back(n);
        return inner(n);
    };
    auto test = perfect_source(99)(50);
    TrainResult r = train_streaming(c, FeatureMode::kPerfectSurface, counting, test);
    ASSERT_EQ(r.report.epochs.size(), 4u);
    EXPECT_EQ(requests, (std::vector<size_t>{10, 3, 3, 3, 3}));
    for (const auto &e : r.report.epochs) {
        EXPECT_EQ(e.fresh_samples, 3u);
        EXPECT_GE(e.train_accuracy, 0);
        EXPECT_LE(e.train_accuracy, 1);
    }
    EXPECT_EQ(r.report.fresh_samples_total, 10u + 4 * 3);
    EXPECT_TRUE(r.report.error.empty());
}

TEST(training, fresh_sample_total_scales) {
    // Pool P, E epochs, fraction f: P + E * ceil(f P) fresh samples.
    TrainConfig c = tiny_config();
    c.epochs = 3;
    auto test = perfect_source(99)(20);
    TrainResult r = train_streaming(c, FeatureMode::kPerfectSurface, perfect_source(2), test);
    EXPECT_EQ(r.report.fresh_samples_total, 40u + 3 * 10);
    c.replace_fraction = 0;
    r = train_streaming(c, FeatureMode::kPerfectSurface, perfect_source(2), test);
    EXPECT_EQ(r.report.fresh_samples_total, 40u);
}

TEST(training, streaming_is_reproducible) {
    TrainConfig c = tiny_config();
    auto test = perfect_source(99)(50);
    TrainResult a = train_streaming(c, FeatureMode::kPerfectSurface, perfect_source(7), test);
    TrainResult b = train_streaming(c, FeatureMode::kPerfectSurface, perfect_source(7), test);
    ASSERT_EQ(a.report.epochs.size(), b.report.epochs.size());
    for (size_t k = 0; k < a.report.epochs.size(); k++) {
        EXPECT_EQ(a.report.epochs[k].train_loss, b.report.epochs[k].train_loss);
        EXPECT_EQ(a.report.epochs[k].test_accuracy, b.report.epochs[k].test_accuracy);
    }
    auto ta = std::as_const(a.model).tensors();
    auto tb = std::as_const(b.model).tensors();
    for (size_t k = 0; k < ta.size(); k++) {
        EXPECT_TRUE(*ta[k] == *tb[k]);
    }
    EXPECT_EQ(a.optimizer.step, b.optimizer.step);
}

TEST(training, source_failure_keeps_partial_report) {
    TrainConfig c = tiny_config();
    auto inner = perfect_source(1);
    int calls = 0;
    SampleSource flaky = [&](size_t n) {
        if (++calls == 3) {
            throw std::runtime_error("generator died");
        }
        return inner(n);
    };
    auto test = perfect_source(99)(20);
    TrainResult r = train_streaming(c, FeatureMode::kPerfectSurface, flaky, test);
    EXPECT_EQ(r.report.error, "generator died");
    EXPECT_EQ(r.report.epochs.size(), 2u);
}

TEST(training, fixed_mode_learns_and_checkpoints) {
    TrainConfig c = tiny_config();
    c.mode = TrainMode::kFixed;
    c.epochs = 3;
    c.test_fraction = 0.1;
    c.checkpoint_path = ::testing::TempDir() + "qecw_training_test.ckpt";
    auto data = sample_perfect_shots(build_rotated_surface(3), 0.08, 5, 200);
    std::vector<int> seen;
    TrainResult r = train_fixed(c, FeatureMode::kPerfectSurface, data, std::nullopt,
                                [&](const EpochRecord &e) { seen.push_back(e.epoch); });
    EXPECT_EQ(seen, (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(r.report.checkpoint, c.checkpoint_path);
    Checkpoint ck = load_checkpoint(c.checkpoint_path);
    ASSERT_TRUE(ck.optimizer.has_value());
    EXPECT_EQ(ck.optimizer->step, r.optimizer.step);
    // 180 training graphs in batches of 16: 12 steps per epoch.
    EXPECT_EQ(r.optimizer.step, 3u * 12);
    // Resuming continues the optimizer step count.
    c.epochs = 1;
    TrainResult more = train_fixed(c, FeatureMode::kPerfectSurface, data, ck);
    EXPECT_EQ(more.optimizer.step, 4u * 12);
    std::remove(c.checkpoint_path.c_str());
}

TEST(training, fixed_mode_rejects_tiny_datasets) {
    TrainConfig c = tiny_config();
    c.mode = TrainMode::kFixed;
    auto data = sample_perfect_shots(build_rotated_surface(3), 0.08, 5, 50);
    EXPECT_THROW(train_fixed(c, FeatureMode::kPerfectSurface, data), std::invalid_argument);
}

TEST(training, accuracy_of_empty_graphs) {
    gnn::Model<float> m = gnn::init_model(tiny(FeatureMode::kPerfectSurface), 1);
    DetectorGraph g;
    g.mode = FeatureMode::kPerfectSurface;
    g.labels.set(LabelKind::kZ, 0);
    g.labels.set(LabelKind::kX, 0);
    std::vector<DetectorGraph> graphs{g, g};
    graphs[1].labels.set(LabelKind::kX, 1);
    EXPECT_DOUBLE_EQ(graph_accuracy(m, graphs, 8), 0.5);
}
