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

#ifndef QECW_RAW_RECORDS_H
#define QECW_RAW_RECORDS_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qecw/circuit.h"
#include "qecw/code_layout.h"
#include "qecw/data_point.h"

namespace qecw {

// Raw measurement container: a binary file of dense bit-packed rows plus a
// text sidecar "<file>.schema" of key=value lines. Each row holds
//   [initial data bits (n)] [ancilla bits round 1 .. d_t (n_stab each)] [final data bits (n)]
// with bit k of the row at byte k / 8, position k % 8 (lsb) or 7 - k % 8 (msb),
// padded to `row_stride` bytes. Ancilla bits follow the layout's stabilizer
// order, data bits the layout's qubit order.

enum class BitOrder : uint8_t { kLsbFirst, kMsbFirst };

struct RawSchema {
    CodeKind kind = CodeKind::kRepetition;
    int distance = 0;
    int rounds = 0;
    Basis basis = Basis::kZ;
    BitOrder bit_order = BitOrder::kLsbFirst;
    /// 0 means the minimal stride, ceil(row_bits / 8).
    size_t row_stride = 0;

    CodeLayout layout() const;
    size_t row_bits() const;
    size_t stride() const;
};

/// One shot of raw measurement outcomes, one byte (0 or 1) per bit.
struct RawRecord {
    std::vector<uint8_t> initial_data;
    std::vector<std::vector<uint8_t>> ancilla;  // [round][stabilizer]
    std::vector<uint8_t> final_data;
};

/// Throws std::invalid_argument on a dimension mismatch or a non-binary value.
void check_record(const RawRecord &record, const RawSchema &schema);

/// Detectors and label of one raw record: consecutive-round XORs, the first
/// round compared with the stabilizer values implied by the initial data bits,
/// the final round with the parity of the final data bits.
DataPoint ingest_record(const RawRecord &record, const RawSchema &schema, const CodeLayout &layout);
std::vector<DataPoint> ingest_raw(std::span<const RawRecord> records, const RawSchema &schema);

/// The raw record a circuit's measurement record corresponds to. Initial data
/// bits are the all-zero reference preparation.
RawRecord raw_from_measurements(const Circuit &circuit, std::span<const uint8_t> measurements);
std::vector<RawRecord> sample_raw(const Circuit &circuit, uint64_t seed, size_t shots);
RawSchema schema_for(const Circuit &circuit);

void write_raw(const std::string &path, const RawSchema &schema, std::span<const RawRecord> records);
std::string schema_to_text(const RawSchema &schema);
RawSchema schema_from_text(const std::string &text);
struct RawFile {
    RawSchema schema;
    std::vector<RawRecord> records;
};
/// Reads `path` and its `path.schema` sidecar.
RawFile read_raw(const std::string &path);

/// Repetition-code sub-windowing: for every offset o in 0..D-d the window of
/// data qubits o..o+d-1 and ancillas o..o+d-2, relabelled from the window's own
/// data bits. Returns records[offset][shot].
std::vector<std::vector<RawRecord>> subwindow_records(std::span<const RawRecord> records, const RawSchema &schema,
                                                      int d);
RawSchema subwindow_schema(const RawSchema &schema, int d);
/// DataPoints of every window, points[offset][shot].
std::vector<std::vector<DataPoint>> subwindow(std::span<const RawRecord> records, const RawSchema &schema, int d);

}  // namespace qecw

#endif
