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

#include "qecw/ml_oracle.h"

#include <gtest/gtest.h>

#include <cmath>

#include "qecw/mwpm.h"
#include "qecw/perfect_sampler.h"

using namespace qecw;

namespace {

std::vector<DetectorEvent> events_of(const CodeLayout &layout, uint32_t syndrome) {
    std::vector<DetectorEvent> out;
    for (size_t s = 0; s < layout.num_stabilizers(); s++) {
        if ((syndrome >> s) & 1) {
            const auto &st = layout.stabilizers[s];
            out.push_back({st.type, st.ancilla.x2, st.ancilla.y2, 1});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

LogicalClass class_of(const LabelSet &labels) {
    return static_cast<LogicalClass>(labels.get(LabelKind::kZ) | (labels.get(LabelKind::kX) << 1));
}

}  // namespace

TEST(ml_oracle, labels_for_class) {
    EXPECT_EQ(labels_for_class(LogicalClass::kX).get(LabelKind::kZ), 1);
    EXPECT_EQ(labels_for_class(LogicalClass::kX).get(LabelKind::kX), 0);
    EXPECT_EQ(labels_for_class(LogicalClass::kZ).get(LabelKind::kX), 1);
    EXPECT_EQ(labels_for_class(LogicalClass::kY).get(LabelKind::kZ), 1);
    EXPECT_EQ(labels_for_class(LogicalClass::kY).get(LabelKind::kX), 1);
    EXPECT_EQ(labels_for_class(LogicalClass::kI).count(), 2);
}

TEST(ml_oracle, noiseless_code) {
    MlOracle oracle(build_rotated_surface(3), 0);
    const auto &c = oracle.cosets(0);
    EXPECT_EQ(c.p[0], 1.0);
    EXPECT_EQ(c.p[1] + c.p[2] + c.p[3], 0.0);
    EXPECT_EQ(oracle.cosets(1).total(), 0.0);
    EXPECT_EQ(oracle.cosets(1).normalized(), (std::array<double, 4>{0, 0, 0, 0}));
    EXPECT_EQ(oracle.failure_rate(), 0.0);
}

TEST(ml_oracle, probabilities_partition_the_space) {
    CodeLayout layout = build_rotated_surface(3);
    MlOracle oracle(layout, 0.1);
    ASSERT_EQ(oracle.num_syndromes(), 256u);
    double sum = 0;
    for (uint32_t s = 0; s < 256; s++) {
        const auto &c = oracle.cosets(s);
        for (double x : c.p) {
            EXPECT_GE(x, 0);
        }
        sum += c.total();
        auto n = c.normalized();
        if (c.total() > 0) {
            EXPECT_NEAR(n[0] + n[1] + n[2] + n[3], 1.0, 1e-12);
        }
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    // Every syndrome is reachable under depolarizing noise.
    EXPECT_GT(oracle.cosets(255).total(), 0);
    auto free = coset_probabilities(layout, 5, 0.1);
    EXPECT_EQ(free.p, oracle.cosets(5).p);
}

TEST(ml_oracle, syndrome_probability_matches_direct_enumeration) {
    // Independent check of one coset table entry by enumerating errors here.
    CodeLayout layout = build_rotated_surface(3);
    const double p = 0.07;
    MlOracle oracle(layout, p);
    std::array<double, 4> want{0, 0, 0, 0};
    const uint32_t target = 0b00010010;
    std::vector<uint8_t> x(9);
    std::vector<uint8_t> z(9);
    for (uint32_t code = 0; code < (1u << 18); code++) {
        double prob = 1;
        for (int q = 0; q < 9; q++) {
            uint32_t pauli = (code >> (2 * q)) & 3;  // 0 I, 1 X, 2 Z, 3 Y
            x[q] = pauli & 1;
            z[q] = pauli >> 1;
            prob *= pauli == 0 ? 1 - p : p / 3;
        }
        DataPoint dp = perfect_data_point(layout, x, z);
        if (oracle.syndrome_of(dp.detectors) != target) {
            continue;
        }
        want[static_cast<int>(class_of(dp.labels))] += prob;
    }
    for (int k = 0; k < 4; k++) {
        EXPECT_NEAR(oracle.cosets(target).p[k], want[k], 1e-15);
    }
}

TEST(ml_oracle, single_bulk_error_is_corrected) {
    CodeLayout layout = build_rotated_surface(3);
    MlOracle oracle(layout, 0.01);
    EXPECT_EQ(oracle.decode(0u), LogicalClass::kI);
    std::vector<uint8_t> x(9, 0);
    std::vector<uint8_t> z(9, 0);
    x[4] = 1;
    DataPoint dp = perfect_data_point(layout, x, z);
    EXPECT_EQ(oracle.decode(oracle.syndrome_of(dp.detectors)), LogicalClass::kI);
    EXPECT_EQ(oracle.decode(dp), dp.labels);
    EXPECT_EQ(ml_decode(layout, oracle.syndrome_of(dp.detectors), 0.01), LogicalClass::kI);
}

TEST(ml_oracle, tie_break_order) {
    CosetProbabilities c;
    c.p = {0.1, 0.3, 0.3, 0.3};
    EXPECT_EQ(c.most_likely(), LogicalClass::kX);
    c.p = {0.2, 0.1, 0.2, 0.2};
    EXPECT_EQ(c.most_likely(), LogicalClass::kI);
    c.p = {0.0, 0.1, 0.2, 0.2};
    EXPECT_EQ(c.most_likely(), LogicalClass::kZ);
}

TEST(ml_oracle, label_disagreement_converges_to_failure_rate) {
    CodeLayout layout = build_rotated_surface(3);
    const double p = 0.1;
    MlOracle oracle(layout, p);
    const size_t shots = 100000;
    size_t wrong = 0;
    for (const auto &dp : sample_perfect_shots(layout, p, 31, shots)) {
        wrong += oracle.decode(dp) != dp.labels;
    }
    const double f = oracle.failure_rate();
    const double sigma = std::sqrt(f * (1 - f) / shots);
    EXPECT_NEAR(static_cast<double>(wrong) / shots, f, 3 * sigma);
}

TEST(ml_oracle, beats_matching_over_the_syndrome_table) {
    CodeLayout layout = build_rotated_surface(3);
    for (double p : {0.01, 0.05, 0.1, 0.15}) {
        MlOracle oracle(layout, p);
        MwpmDecoder informed = MwpmDecoder::from_dem(perfect_stabilizer_dem(layout, p));
        UninformedMwpmDecoder uninformed(layout);
        double ml = oracle.failure_rate();
        double mw = oracle.failure_rate_of([&](uint32_t s) { return class_of(informed.decode(events_of(layout, s))); });
        double un =
            oracle.failure_rate_of([&](uint32_t s) { return class_of(uninformed.decode(events_of(layout, s))); });
        EXPECT_LE(ml, mw + 1e-15) << "p " << p;
        EXPECT_LE(ml, un + 1e-15) << "p " << p;
        EXPECT_LE(ml, oracle.failure_rate_of([](uint32_t) { return LogicalClass::kI; }));
    }
}

TEST(ml_oracle, rejects_unsupported_codes) {
    EXPECT_THROW(MlOracle(build_rotated_surface(5), 0.1), std::invalid_argument);
    EXPECT_THROW(MlOracle(build_repetition(3), 0.1), std::invalid_argument);
    EXPECT_THROW(MlOracle(build_rotated_surface(3), 1.5), std::invalid_argument);
}
