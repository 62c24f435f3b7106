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

#include "qecw/raw_records.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>

#include "qecw/frame_simulator.h"

using namespace qecw;

namespace {

RawSchema rep_schema(int d, int rounds) {
    RawSchema s;
    s.kind = CodeKind::kRepetition;
    s.distance = d;
    s.rounds = rounds;
    return s;
}

RawRecord zero_record(const RawSchema &s) {
    CodeLayout layout = s.layout();
    RawRecord r;
    r.initial_data.assign(layout.num_data(), 0);
    r.final_data.assign(layout.num_data(), 0);
    r.ancilla.assign(s.rounds, std::vector<uint8_t>(layout.num_stabilizers(), 0));
    return r;
}

}  // namespace

TEST(raw_records, all_zero_record_is_trivial) {
    RawSchema s = rep_schema(5, 4);
    RawRecord r = zero_record(s);
    DataPoint dp = ingest_record(r, s, s.layout());
    EXPECT_TRUE(dp.detectors.empty());
    EXPECT_EQ(dp.labels.get(LabelKind::kZ), 0);
    EXPECT_TRUE(dp.labels.has(LabelKind::kZ));
}

TEST(raw_records, single_ancilla_flip_fires_two_rounds) {
    RawSchema s = rep_schema(5, 4);
    RawRecord r = zero_record(s);
    r.ancilla[1][2] = 1;  // round 2, ancilla between qubits 2 and 3
    DataPoint dp = ingest_record(r, s, s.layout());
    std::vector<DetectorEvent> want{{PauliType::kZ, 5, 0, 2}, {PauliType::kZ, 5, 0, 3}};
    EXPECT_EQ(dp.detectors, want);
    EXPECT_EQ(dp.labels.get(LabelKind::kZ), 0);
}

TEST(raw_records, initial_and_final_data_bits) {
    RawSchema s = rep_schema(3, 2);
    RawRecord r = zero_record(s);
    // A data qubit prepared in |1> with consistent ancilla readings: nothing fires.
    r.initial_data = {1, 0, 0};
    r.ancilla = {{1, 0}, {1, 0}};
    r.final_data = {1, 0, 0};
    DataPoint dp = ingest_record(r, s, s.layout());
    EXPECT_TRUE(dp.detectors.empty());
    EXPECT_EQ(dp.labels.get(LabelKind::kZ), 0);
    // The same qubit flipping before the final readout: last-round detector and a label flip.
    r.final_data = {0, 0, 0};
    dp = ingest_record(r, s, s.layout());
    std::vector<DetectorEvent> want{{PauliType::kZ, 1, 0, 3}};
    EXPECT_EQ(dp.detectors, want);
    EXPECT_EQ(dp.labels.get(LabelKind::kZ), 1);
}

TEST(raw_records, malformed_records_are_rejected) {
    RawSchema s = rep_schema(3, 2);
    RawRecord r = zero_record(s);
    r.ancilla[0][0] = 2;
    EXPECT_THROW(check_record(r, s), std::invalid_argument);
    r = zero_record(s);
    r.final_data.pop_back();
    EXPECT_THROW(check_record(r, s), std::invalid_argument);
    r = zero_record(s);
    r.ancilla.pop_back();
    EXPECT_THROW(ingest_raw(std::span<const RawRecord>(&r, 1), s), std::invalid_argument);
}

TEST(raw_records, ingest_reproduces_the_sampler) {
    struct Case {
        CodeLayout layout;
        int rounds;
        Basis basis;
    };
    for (const auto &c : {Case{build_repetition(5), 6, Basis::kZ}, Case{build_rotated_surface(3), 3, Basis::kZ},
                          Case{build_rotated_surface(3), 2, Basis::kX}}) {
        Circuit circuit = build_memory_circuit(c.layout, c.rounds, c.basis, NoiseParams::uniform(0.02));
        auto points = sample_shots(circuit, 13, 2000);
        auto raw = sample_raw(circuit, 13, 2000);
        auto ingested = ingest_raw(raw, schema_for(circuit));
        ASSERT_EQ(ingested.size(), points.size());
        for (size_t k = 0; k < points.size(); k++) {
            ASSERT_TRUE(ingested[k].same_content(points[k])) << "shot " << k;
        }
    }
}

TEST(raw_records, file_round_trip_both_bit_orders) {
    Circuit circuit = build_memory_circuit(build_repetition(7), 5, Basis::kZ, NoiseParams::uniform(0.05));
    auto raw = sample_raw(circuit, 2, 300);
    for (BitOrder order : {BitOrder::kLsbFirst, BitOrder::kMsbFirst}) {
        RawSchema s = schema_for(circuit);
        s.bit_order = order;
        s.row_stride = order == BitOrder::kMsbFirst ? 16 : 0;
        std::string path = ::testing::TempDir() + "qecw_raw_test.bin";
        write_raw(path, s, raw);
        RawFile back = read_raw(path);
        EXPECT_EQ(back.schema.bit_order, order);
        EXPECT_EQ(back.schema.stride(), order == BitOrder::kMsbFirst ? 16u : (s.row_bits() + 7) / 8);
        ASSERT_EQ(back.records.size(), raw.size());
        for (size_t k = 0; k < raw.size(); k++) {
            EXPECT_EQ(back.records[k].initial_data, raw[k].initial_data);
            EXPECT_EQ(back.records[k].ancilla, raw[k].ancilla);
            EXPECT_EQ(back.records[k].final_data, raw[k].final_data);
        }
        std::remove(path.c_str());
        std::remove((path + ".schema").c_str());
    }
}

TEST(raw_records, schema_text_round_trip) {
    RawSchema s;
    s.kind = CodeKind::kRotatedSurface;
    s.distance = 5;
    s.rounds = 7;
    s.basis = Basis::kX;
    s.bit_order = BitOrder::kMsbFirst;
    s.row_stride = 64;
    RawSchema back = schema_from_text(schema_to_text(s));
    EXPECT_EQ(back.kind, s.kind);
    EXPECT_EQ(back.distance, 5);
    EXPECT_EQ(back.rounds, 7);
    EXPECT_EQ(back.basis, Basis::kX);
    EXPECT_EQ(back.bit_order, BitOrder::kMsbFirst);
    EXPECT_EQ(back.stride(), 64u);
    EXPECT_EQ(s.row_bits(), 25u * 2 + 7 * 24);
    EXPECT_THROW(schema_from_text("d=3\n"), std::invalid_argument);
    EXPECT_THROW(schema_from_text("garbage"), std::invalid_argument);
}

TEST(raw_records, subwindow_counts) {
    Circuit circuit = build_memory_circuit(build_repetition(25), 3, Basis::kZ, NoiseParams::uniform(0.01));
    auto raw = sample_raw(circuit, 4, 40);
    RawSchema s = schema_for(circuit);
    auto windows = subwindow(raw, s, 3);
    ASSERT_EQ(windows.size(), 23u);
    for (const auto &w : windows) {
        EXPECT_EQ(w.size(), 40u);
    }
    auto identity = subwindow(raw, s, 25);
    ASSERT_EQ(identity.size(), 1u);
    auto full = ingest_raw(raw, s);
    for (size_t k = 0; k < full.size(); k++) {
        EXPECT_TRUE(identity[0][k].same_content(full[k]));
    }
    EXPECT_THROW(subwindow(raw, s, 26), std::invalid_argument);
    EXPECT_THROW(subwindow(raw, s, 1), std::invalid_argument);
    RawSchema surface = s;
    surface.kind = CodeKind::kRotatedSurface;
    EXPECT_THROW(subwindow_schema(surface, 3), std::invalid_argument);
}

TEST(raw_records, window_label_comes_from_window_bits) {
    RawSchema s = rep_schema(5, 1);
    RawRecord r = zero_record(s);
    // Qubit 2 flipped before the final readout; the ancillas in round 1 saw nothing.
    r.final_data = {0, 0, 1, 0, 0};
    auto windows = subwindow(std::span<const RawRecord>(&r, 1), s, 3);
    ASSERT_EQ(windows.size(), 3u);
    // Window offset 2 covers qubits 2..4 and its logical is qubit 2.
    EXPECT_EQ(windows[2][0].labels.get(LabelKind::kZ), 1);
    EXPECT_EQ(windows[0][0].labels.get(LabelKind::kZ), 0);
    EXPECT_EQ(windows[1][0].labels.get(LabelKind::kZ), 0);
    // Offset 0 keeps ancillas 0,1: the flip on qubit 2 shows at ancilla 1 (x2 = 3).
    std::vector<DetectorEvent> want{{PauliType::kZ, 3, 0, 2}};
    EXPECT_EQ(windows[0][0].detectors, want);
}

TEST(raw_records, windows_match_direct_sampling_statistics) {
    // With data-only noise and perfect readout, an interior window of a D=5
    // chain is distributed exactly like a d=3 chain.
    const double p = 0.08;
    const size_t shots = 40000;
    Circuit big = build_memory_circuit(build_repetition(5), 4, Basis::kZ, NoiseParams::data_bitflip_only(p));
    Circuit small = build_memory_circuit(build_repetition(3), 4, Basis::kZ, NoiseParams::data_bitflip_only(p));
    auto windows = subwindow(sample_raw(big, 8, shots), schema_for(big), 3);
    auto direct = sample_shots(small, 9, shots);
    auto stats = [](const std::vector<DataPoint> &pts) {
        double dets = 0;
        double labels = 0;
        for (const auto &dp : pts) {
            dets += static_cast<double>(dp.detectors.size());
            labels += dp.labels.get(LabelKind::kZ);
        }
        return std::make_pair(dets / pts.size(), labels / pts.size());
    };
    auto [dd, dl] = stats(direct);
    for (const auto &w : windows) {
        auto [wd, wl] = stats(w);
        EXPECT_NEAR(wl, dl, 4 * std::sqrt(2 * dl * (1 - dl) / shots));
        EXPECT_NEAR(wd, dd, 0.05);
    }
}
