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

#include "qecw/dataset_io.h"

#include <gtest/gtest.h>

#include <sstream>

#include "qecw/frame_simulator.h"
#include "qecw/perfect_sampler.h"

using namespace qecw;

namespace {

std::string to_bytes(const DatasetHeader &h, std::span<const DataPoint> points) {
    std::ostringstream out(std::ios::binary);
    write_dataset(out, h, points);
    return out.str();
}

Dataset from_bytes(const std::string &bytes) {
    std::istringstream in(bytes, std::ios::binary);
    return read_dataset(in);
}

DatasetError::Kind error_kind(const std::string &bytes) {
    try {
        from_bytes(bytes);
    } catch (const DatasetError &e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected a DatasetError";
    return DatasetError::Kind::kIo;
}

DatasetHeader surface_header(int d, int rounds) {
    DatasetHeader h;
    h.kind = CodeKind::kRotatedSurface;
    h.distance = d;
    h.rounds = rounds;
    h.noise_p = 0.003;
    return h;
}

}  // namespace

TEST(dataset_io, label_byte_layout) {
    LabelSet z;
    z.set(LabelKind::kZ, 1);
    EXPECT_EQ(encode_label_byte(z), 0b101);
    LabelSet x;
    x.set(LabelKind::kX, 1);
    EXPECT_EQ(encode_label_byte(x), 0b111);
    LabelSet x0;
    x0.set(LabelKind::kX, 0);
    EXPECT_EQ(encode_label_byte(x0), 0b110);
    LabelSet both;
    both.set(LabelKind::kZ, 0);
    both.set(LabelKind::kX, 1);
    EXPECT_EQ(encode_label_byte(both), 0b11100);
    EXPECT_EQ(encode_label_byte(LabelSet{}), 0);
    for (const LabelSet &s : {z, x, x0, both, LabelSet{}}) {
        EXPECT_EQ(decode_label_byte(encode_label_byte(s)), s);
    }
    EXPECT_THROW(decode_label_byte(0x80), DatasetError);
    EXPECT_THROW(decode_label_byte(0b001), DatasetError);  // value without presence
}

TEST(dataset_io, empty_dataset_round_trips) {
    DatasetHeader h = surface_header(3, 2);
    h.records = 17;  // overwritten
    std::string bytes = to_bytes(h, {});
    Dataset back = from_bytes(bytes);
    EXPECT_EQ(back.header.records, 0u);
    EXPECT_TRUE(back.points.empty());
    EXPECT_EQ(back.header.distance, 3);
    EXPECT_EQ(back.header.rounds, 2);
    EXPECT_EQ(bytes.size(), 4u + 1 + 2 + 2 + 1 + 1 + 8 + 8);
}

TEST(dataset_io, sampled_shots_round_trip_bit_exactly) {
    Circuit c = build_memory_circuit(build_rotated_surface(3), 3, Basis::kX, NoiseParams::uniform(0.003));
    auto points = sample_shots(c, 1, 100000);
    DatasetHeader h = surface_header(3, 3);
    h.basis = Basis::kX;
    std::string bytes = to_bytes(h, points);
    Dataset back = from_bytes(bytes);
    ASSERT_EQ(back.points.size(), points.size());
    for (size_t k = 0; k < points.size(); k++) {
        ASSERT_TRUE(back.points[k].same_content(points[k])) << k;
        ASSERT_EQ(back.points[k].noise_p, 0.003);
    }
    EXPECT_EQ(back.header.basis, Basis::kX);
    EXPECT_EQ(to_bytes(back.header, back.points), bytes);
}

TEST(dataset_io, perfect_and_repetition_round_trip) {
    auto perfect = sample_perfect_shots(build_rotated_surface(5), 0.1, 2, 500);
    DatasetHeader h = surface_header(5, 1);
    h.mode = FeatureMode::kPerfectSurface;
    Dataset back = from_bytes(to_bytes(h, perfect));
    for (size_t k = 0; k < perfect.size(); k++) {
        EXPECT_TRUE(back.points[k].same_content(perfect[k]));
        EXPECT_EQ(back.points[k].labels.count(), 2);
    }
    EXPECT_EQ(back.header.mode, FeatureMode::kPerfectSurface);

    Circuit rc = build_memory_circuit(build_repetition(25), 50, Basis::kZ, NoiseParams::uniform(0.01));
    auto rep = sample_shots(rc, 3, 200);
    DatasetHeader rh;
    rh.kind = CodeKind::kRepetition;
    rh.distance = 25;
    rh.rounds = 50;
    rh.mode = FeatureMode::kRepetition;
    rh.noise_p = std::nan("");
    Dataset rb = from_bytes(to_bytes(rh, rep));
    for (size_t k = 0; k < rep.size(); k++) {
        EXPECT_TRUE(rb.points[k].same_content(rep[k]));
        EXPECT_TRUE(std::isnan(rb.points[k].noise_p));
    }
}

TEST(dataset_io, file_round_trip) {
    std::string path = ::testing::TempDir() + "qecw_dataset_test.qgd";
    auto points = sample_perfect_shots(build_rotated_surface(3), 0.1, 2, 100);
    DatasetHeader h = surface_header(3, 1);
    h.mode = FeatureMode::kPerfectSurface;
    save_dataset(path, h, points);
    Dataset back = load_dataset(path);
    ASSERT_EQ(back.points.size(), 100u);
    std::remove(path.c_str());
    try {
        load_dataset(path);
        ADD_FAILURE();
    } catch (const DatasetError &e) {
        EXPECT_EQ(e.kind(), DatasetError::Kind::kIo);
    }
}

TEST(dataset_io, corrupt_files_are_rejected) {
    auto points = sample_perfect_shots(build_rotated_surface(3), 0.2, 9, 50);
    DatasetHeader h = surface_header(3, 1);
    h.mode = FeatureMode::kPerfectSurface;
    std::string good = to_bytes(h, points);

    std::string magic = good;
    magic[0] = 'Z';
    EXPECT_EQ(error_kind(magic), DatasetError::Kind::kBadMagic);
    std::string version = good;
    version[3] = '2';
    EXPECT_EQ(error_kind(version), DatasetError::Kind::kVersion);
    EXPECT_EQ(error_kind(good.substr(0, good.size() - 1)), DatasetError::Kind::kTruncated);
    EXPECT_EQ(error_kind(good.substr(0, 10)), DatasetError::Kind::kTruncated);
    EXPECT_EQ(error_kind(""), DatasetError::Kind::kTruncated);
    EXPECT_EQ(error_kind(good + "x"), DatasetError::Kind::kBounds);
    std::string kind = good;
    kind[4] = 7;
    EXPECT_EQ(error_kind(kind), DatasetError::Kind::kBounds);
}

TEST(dataset_io, out_of_code_detectors_are_rejected) {
    DataPoint dp;
    dp.detectors.push_back({PauliType::kZ, 41, 1, 1});
    dp.labels.set(LabelKind::kZ, 0);
    std::ostringstream out(std::ios::binary);
    try {
        write_dataset(out, surface_header(3, 1), std::span<const DataPoint>(&dp, 1));
        ADD_FAILURE();
    } catch (const DatasetError &e) {
        EXPECT_EQ(e.kind(), DatasetError::Kind::kBounds);
    }
    dp.detectors[0] = {PauliType::kZ, 1, 1, 9};
    EXPECT_THROW(write_dataset(out, surface_header(3, 1), std::span<const DataPoint>(&dp, 1)), DatasetError);
}
