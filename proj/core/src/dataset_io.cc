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

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

namespace qecw {

namespace {

constexpr char kMagic[4] = {'Q', 'G', 'D', '1'};

static_assert(std::endian::native == std::endian::little, "dataset I/O assumes a little-endian host");

using Kind = DatasetError::Kind;

template <typename T>
void put(std::ostream &out, T v) {
    out.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T>
T get(std::istream &in) {
    T v;
    in.read(reinterpret_cast<char *>(&v), sizeof(T));
    if (in.gcount() != static_cast<std::streamsize>(sizeof(T))) {
        throw DatasetError(Kind::kTruncated, "dataset truncated");
    }
    return v;
}

void check_event(const DatasetHeader &h, const DetectorEvent &e) {
    const int hi = 2 * h.distance - 1;
    const bool rep = h.kind == CodeKind::kRepetition;
    bool ok = e.x2 >= -1 && e.x2 <= hi && e.t >= 1 && e.t <= h.rounds + 1;
    ok = ok && (rep ? (e.y2 == 0 && e.type == PauliType::kZ) : (e.y2 >= -1 && e.y2 <= hi));
    if (!ok) {
        throw DatasetError(Kind::kBounds, "detector outside the declared code");
    }
}

void check_header(const DatasetHeader &h) {
    if (h.distance < 2 || h.distance > std::numeric_limits<uint16_t>::max() / 2 - 1) {
        throw DatasetError(Kind::kBounds, "dataset distance out of range");
    }
    if (h.rounds < 1 || h.rounds >= std::numeric_limits<uint16_t>::max()) {
        throw DatasetError(Kind::kBounds, "dataset round count out of range");
    }
}

}  // namespace

uint8_t encode_label_byte(const LabelSet &labels) {
    const bool z = labels.has(LabelKind::kZ);
    const bool x = labels.has(LabelKind::kX);
    uint8_t b = 0;
    if (z) {
        b = 0x4 | labels.get(LabelKind::kZ);
        if (x) {
            b |= 0x10 | (labels.get(LabelKind::kX) << 3);
        }
    } else if (x) {
        b = 0x4 | 0x2 | labels.get(LabelKind::kX);
    }
    return b;
}

LabelSet decode_label_byte(uint8_t b) {
    LabelSet s;
    if (b & 0xE0) {
        throw DatasetError(Kind::kBounds, "label byte has reserved bits set");
    }
    const bool present = b & 0x4;
    const bool head_x = b & 0x2;
    const bool second = b & 0x10;
    if (!present) {
        if (b != 0) {
            throw DatasetError(Kind::kBounds, "label byte marks an absent label with data");
        }
        return s;
    }
    if (head_x && (b & 0x18)) {
        throw DatasetError(Kind::kBounds, "label byte has a second label after an X head");
    }
    if (!second && (b & 0x8)) {
        throw DatasetError(Kind::kBounds, "label byte has a value for an absent second label");
    }
    s.set(head_x ? LabelKind::kX : LabelKind::kZ, b & 1);
    if (second) {
        s.set(LabelKind::kX, (b >> 3) & 1);
    }
    return s;
}

void write_dataset(std::ostream &out, DatasetHeader header, std::span<const DataPoint> points) {
    check_header(header);
    header.records = points.size();
    out.write(kMagic, 4);
    put<uint8_t>(out, static_cast<uint8_t>(header.kind));
    put<uint16_t>(out, static_cast<uint16_t>(header.distance));
    put<uint16_t>(out, static_cast<uint16_t>(header.rounds));
    put<uint8_t>(out, static_cast<uint8_t>(header.basis));
    put<uint8_t>(out, static_cast<uint8_t>(header.mode));
    put<double>(out, header.noise_p);
    put<uint64_t>(out, header.records);
    for (const auto &dp : points) {
        if (dp.detectors.size() > std::numeric_limits<uint16_t>::max()) {
            throw DatasetError(Kind::kBounds, "too many detectors in one record");
        }
        put<uint16_t>(out, static_cast<uint16_t>(dp.detectors.size()));
        for (const auto &e : dp.detectors) {
            check_event(header, e);
            put<uint8_t>(out, static_cast<uint8_t>(e.type));
            put<int16_t>(out, static_cast<int16_t>(e.x2));
            put<int16_t>(out, static_cast<int16_t>(e.y2));
            put<uint16_t>(out, static_cast<uint16_t>(e.t));
        }
        put<uint8_t>(out, encode_label_byte(dp.labels));
    }
    if (!out) {
        throw DatasetError(Kind::kIo, "failed writing dataset");
    }
}

void save_dataset(const std::string &path, const DatasetHeader &header, std::span<const DataPoint> points) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DatasetError(Kind::kIo, "cannot open " + path + " for writing");
    }
    write_dataset(out, header, points);
}

Dataset read_dataset(std::istream &in) {
    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    if (in.gcount() != 4) {
        throw DatasetError(Kind::kTruncated, "dataset truncated");
    }
    if (std::memcmp(magic, kMagic, 3) != 0) {
        throw DatasetError(Kind::kBadMagic, "not a dataset file (bad magic)");
    }
    if (magic[3] != kMagic[3]) {
        throw DatasetError(Kind::kVersion, std::string("unsupported dataset version ") + magic[3]);
    }
    Dataset ds;
    auto &h = ds.header;
    uint8_t kind = get<uint8_t>(in);
    if (kind > static_cast<uint8_t>(CodeKind::kRotatedSurface)) {
        throw DatasetError(Kind::kBounds, "unknown code kind");
    }
    h.kind = static_cast<CodeKind>(kind);
    h.distance = get<uint16_t>(in);
    h.rounds = get<uint16_t>(in);
    uint8_t basis = get<uint8_t>(in);
    if (basis > 1) {
        throw DatasetError(Kind::kBounds, "unknown basis");
    }
    h.basis = static_cast<Basis>(basis);
    uint8_t mode = get<uint8_t>(in);
    if (mode > static_cast<uint8_t>(FeatureMode::kRepetition)) {
        throw DatasetError(Kind::kBounds, "unknown feature mode");
    }
    h.mode = static_cast<FeatureMode>(mode);
    h.noise_p = get<double>(in);
    h.records = get<uint64_t>(in);
    check_header(h);
    // Each record takes at least 3 bytes; guard the reservation against garbage.
    ds.points.reserve(static_cast<size_t>(std::min<uint64_t>(h.records, 1u << 24)));
    for (uint64_t r = 0; r < h.records; r++) {
        DataPoint dp;
        dp.basis = h.basis;
        dp.noise_p = h.noise_p;
        uint16_t n = get<uint16_t>(in);
        dp.detectors.resize(n);
        for (auto &e : dp.detectors) {
            uint8_t type = get<uint8_t>(in);
            if (type > 1) {
                throw DatasetError(Kind::kBounds, "unknown detector type");
            }
            e.type = static_cast<PauliType>(type);
            e.x2 = get<int16_t>(in);
            e.y2 = get<int16_t>(in);
            e.t = get<uint16_t>(in);
            check_event(h, e);
        }
        dp.labels = decode_label_byte(get<uint8_t>(in));
        ds.points.push_back(std::move(dp));
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw DatasetError(Kind::kBounds, "trailing bytes after the declared records");
    }
    return ds;
}

Dataset load_dataset(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DatasetError(Kind::kIo, "cannot open dataset " + path);
    }
    return read_dataset(in);
}

}  // namespace qecw
