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

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qecw/frame_simulator.h"

namespace qecw {

CodeLayout RawSchema::layout() const {
    return kind == CodeKind::kRepetition ? build_repetition(distance) : build_rotated_surface(distance);
}

size_t RawSchema::row_bits() const {
    const size_t n = kind == CodeKind::kRepetition ? distance : static_cast<size_t>(distance) * distance;
    const size_t stabs = kind == CodeKind::kRepetition ? distance - 1 : n - 1;
    return 2 * n + static_cast<size_t>(rounds) * stabs;
}

size_t RawSchema::stride() const {
    return row_stride == 0 ? (row_bits() + 7) / 8 : row_stride;
}

void check_record(const RawRecord &record, const RawSchema &schema) {
    const CodeLayout layout = schema.layout();
    auto check_bits = [](std::span<const uint8_t> bits, size_t expected, const char *what) {
        if (bits.size() != expected) {
            throw std::invalid_argument(std::string("raw record: wrong number of ") + what + " bits");
        }
        for (uint8_t b : bits) {
            if (b > 1) {
                throw std::invalid_argument("raw record: non-binary value");
            }
        }
    };
    check_bits(record.initial_data, layout.num_data(), "initial data");
    check_bits(record.final_data, layout.num_data(), "final data");
    if (record.ancilla.size() != static_cast<size_t>(schema.rounds)) {
        throw std::invalid_argument("raw record: wrong number of rounds");
    }
    for (const auto &round : record.ancilla) {
        check_bits(round, layout.num_stabilizers(), "ancilla");
    }
}

DataPoint ingest_record(const RawRecord &record, const RawSchema &schema, const CodeLayout &layout) {
    check_record(record, schema);
    const PauliType aligned = detector_type_for_basis(schema.basis);
    auto parity = [](std::span<const uint8_t> bits, const std::vector<uint32_t> &support) {
        uint8_t v = 0;
        for (uint32_t q : support) {
            v ^= bits[q];
        }
        return v;
    };
    DataPoint dp;
    dp.basis = schema.basis;
    const int rounds = schema.rounds;
    for (size_t s = 0; s < layout.num_stabilizers(); s++) {
        const auto &st = layout.stabilizers[s];
        auto fire = [&](int t) { dp.detectors.push_back({st.type, st.ancilla.x2, st.ancilla.y2, t}); };
        if (st.type == aligned && (record.ancilla[0][s] ^ parity(record.initial_data, st.support))) {
            fire(1);
        }
        for (int r = 1; r < rounds; r++) {
            if (record.ancilla[r][s] ^ record.ancilla[r - 1][s]) {
                fire(r + 1);
            }
        }
        if (st.type == aligned && (record.ancilla[rounds - 1][s] ^ parity(record.final_data, st.support))) {
            fire(rounds + 1);
        }
    }
    std::sort(dp.detectors.begin(), dp.detectors.end());
    const auto &logical = schema.basis == Basis::kZ ? layout.logical_z : layout.logical_x;
    dp.labels.set(label_for_basis(schema.basis),
                  parity(record.final_data, logical) ^ parity(record.initial_data, logical));
    return dp;
}

std::vector<DataPoint> ingest_raw(std::span<const RawRecord> records, const RawSchema &schema) {
    const CodeLayout layout = schema.layout();
    if (schema.basis == Basis::kX && layout.kind == CodeKind::kRepetition) {
        throw std::invalid_argument("the repetition code has no memory-X experiment");
    }
    std::vector<DataPoint> out;
    out.reserve(records.size());
    for (const auto &r : records) {
        out.push_back(ingest_record(r, schema, layout));
    }
    return out;
}

RawSchema schema_for(const Circuit &circuit) {
    RawSchema s;
    s.kind = circuit.layout.kind;
    s.distance = circuit.layout.distance;
    s.rounds = circuit.rounds;
    s.basis = circuit.basis;
    return s;
}

RawRecord raw_from_measurements(const Circuit &circuit, std::span<const uint8_t> measurements) {
    if (measurements.size() != circuit.num_measurements) {
        throw std::invalid_argument("measurement record has the wrong length");
    }
    RawRecord r;
    const size_t n = circuit.layout.num_data();
    r.initial_data.assign(n, 0);
    r.ancilla.resize(circuit.rounds);
    for (int k = 0; k < circuit.rounds; k++) {
        for (uint32_t m : circuit.ancilla_measurements[k]) {
            r.ancilla[k].push_back(measurements[m]);
        }
    }
    for (uint32_t m : circuit.data_measurements) {
        r.final_data.push_back(measurements[m]);
    }
    return r;
}

std::vector<RawRecord> sample_raw(const Circuit &circuit, uint64_t seed, size_t shots) {
    std::vector<RawRecord> out;
    out.reserve(shots);
    for (const auto &rec : sample_measurements(circuit, seed, shots)) {
        out.push_back(raw_from_measurements(circuit, rec));
    }
    return out;
}

std::string schema_to_text(const RawSchema &schema) {
    std::ostringstream out;
    out << "format=qecw-raw-1\n";
    out << "code=" << (schema.kind == CodeKind::kRepetition ? "rep" : "surface") << "\n";
    out << "d=" << schema.distance << "\n";
    out << "d_t=" << schema.rounds << "\n";
    out << "basis=" << (schema.basis == Basis::kZ ? "z" : "x") << "\n";
    out << "row_bits=" << schema.row_bits() << "\n";
    out << "row_stride=" << schema.stride() << "\n";
    out << "bit_order=" << (schema.bit_order == BitOrder::kLsbFirst ? "lsb" : "msb") << "\n";
    out << "row_layout=initial_data,ancilla_rounds,final_data\n";
    return out.str();
}

RawSchema schema_from_text(const std::string &text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("schema line without '=': " + line);
        }
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto need = [&](const char *key) -> const std::string & {
        auto it = kv.find(key);
        if (it == kv.end()) {
            throw std::invalid_argument(std::string("schema is missing '") + key + "'");
        }
        return it->second;
    };
    auto number = [&](const char *key) {
        const std::string &v = need(key);
        size_t used = 0;
        long long x = std::stoll(v, &used);
        if (used != v.size() || x < 0) {
            throw std::invalid_argument(std::string("schema field '") + key + "' is not a count");
        }
        return static_cast<size_t>(x);
    };
    RawSchema s;
    const std::string &code = need("code");
    if (code == "rep") {
        s.kind = CodeKind::kRepetition;
    } else if (code == "surface") {
        s.kind = CodeKind::kRotatedSurface;
    } else {
        throw std::invalid_argument("schema: unknown code '" + code + "'");
    }
    s.distance = static_cast<int>(number("d"));
    s.rounds = static_cast<int>(number("d_t"));
    const std::string &basis = need("basis");
    if (basis != "z" && basis != "x") {
        throw std::invalid_argument("schema: unknown basis '" + basis + "'");
    }
    s.basis = basis == "z" ? Basis::kZ : Basis::kX;
    if (kv.count("bit_order")) {
        const std::string &o = kv["bit_order"];
        if (o != "lsb" && o != "msb") {
            throw std::invalid_argument("schema: unknown bit order '" + o + "'");
        }
        s.bit_order = o == "lsb" ? BitOrder::kLsbFirst : BitOrder::kMsbFirst;
    }
    if (s.rounds < 1) {
        throw std::invalid_argument("schema: d_t must be at least 1");
    }
    s.row_stride = kv.count("row_stride") ? number("row_stride") : 0;
    if (s.row_stride != 0 && s.row_stride * 8 < s.row_bits()) {
        throw std::invalid_argument("schema: row stride shorter than a row");
    }
    if (kv.count("row_bits") && number("row_bits") != s.row_bits()) {
        throw std::invalid_argument("schema: row_bits does not match d and d_t");
    }
    return s;
}

namespace {

size_t bit_position(size_t k, BitOrder order) {
    return order == BitOrder::kLsbFirst ? k % 8 : 7 - k % 8;
}

}  // namespace

void write_raw(const std::string &path, const RawSchema &schema, std::span<const RawRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    const size_t stride = schema.stride();
    std::vector<uint8_t> row(stride);
    for (const auto &r : records) {
        check_record(r, schema);
        std::fill(row.begin(), row.end(), 0);
        size_t k = 0;
        auto push = [&](uint8_t bit) {
            row[k / 8] |= static_cast<uint8_t>(bit << bit_position(k, schema.bit_order));
            k++;
        };
        for (uint8_t b : r.initial_data) {
            push(b);
        }
        for (const auto &round : r.ancilla) {
            for (uint8_t b : round) {
                push(b);
            }
        }
        for (uint8_t b : r.final_data) {
            push(b);
        }
        out.write(reinterpret_cast<const char *>(row.data()), static_cast<std::streamsize>(stride));
    }
    std::ofstream side(path + ".schema");
    side << schema_to_text(schema);
    if (!out || !side) {
        throw std::runtime_error("failed writing raw records to " + path);
    }
}

RawFile read_raw(const std::string &path) {
    std::ifstream side(path + ".schema");
    if (!side) {
        throw std::runtime_error("missing schema sidecar " + path + ".schema");
    }
    std::stringstream text;
    text << side.rdbuf();
    RawFile f;
    f.schema = schema_from_text(text.str());
    const CodeLayout layout = f.schema.layout();
    const size_t n = layout.num_data();
    const size_t m = layout.num_stabilizers();
    const size_t stride = f.schema.stride();
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::vector<uint8_t> row(stride);
    while (true) {
        in.read(reinterpret_cast<char *>(row.data()), static_cast<std::streamsize>(stride));
        if (in.gcount() == 0) {
            break;
        }
        if (in.gcount() != static_cast<std::streamsize>(stride)) {
            throw std::invalid_argument("raw file length is not a multiple of the row stride");
        }
        size_t k = 0;
        auto pull = [&]() { return static_cast<uint8_t>((row[k / 8] >> bit_position(k++, f.schema.bit_order)) & 1); };
        RawRecord r;
        for (size_t q = 0; q < n; q++) {
            r.initial_data.push_back(pull());
        }
        r.ancilla.resize(f.schema.rounds);
        for (auto &round : r.ancilla) {
            for (size_t s = 0; s < m; s++) {
                round.push_back(pull());
            }
        }
        for (size_t q = 0; q < n; q++) {
            r.final_data.push_back(pull());
        }
        f.records.push_back(std::move(r));
    }
    return f;
}

RawSchema subwindow_schema(const RawSchema &schema, int d) {
    if (schema.kind != CodeKind::kRepetition) {
        throw std::invalid_argument("sub-windowing applies to repetition-code records");
    }
    if (d < 2 || d > schema.distance) {
        throw std::invalid_argument("window distance must lie in [2, D]");
    }
    RawSchema w = schema;
    w.distance = d;
    w.row_stride = 0;
    return w;
}

std::vector<std::vector<RawRecord>> subwindow_records(std::span<const RawRecord> records, const RawSchema &schema,
                                                      int d) {
    subwindow_schema(schema, d);
    const int windows = schema.distance - d + 1;
    std::vector<std::vector<RawRecord>> out(windows);
    for (const auto &r : records) {
        check_record(r, schema);
        for (int o = 0; o < windows; o++) {
            RawRecord w;
            w.initial_data.assign(r.initial_data.begin() + o, r.initial_data.begin() + o + d);
            w.final_data.assign(r.final_data.begin() + o, r.final_data.begin() + o + d);
            for (const auto &round : r.ancilla) {
                w.ancilla.emplace_back(round.begin() + o, round.begin() + o + d - 1);
            }
            out[o].push_back(std::move(w));
        }
    }
    return out;
}

std::vector<std::vector<DataPoint>> subwindow(std::span<const RawRecord> records, const RawSchema &schema, int d) {
    const RawSchema ws = subwindow_schema(schema, d);
    std::vector<std::vector<DataPoint>> out;
    for (const auto &window : subwindow_records(records, schema, d)) {
        out.push_back(ingest_raw(window, ws));
    }
    return out;
}

}  // namespace qecw
