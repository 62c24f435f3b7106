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

#ifndef QECW_DATASET_IO_H
#define QECW_DATASET_IO_H

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qecw/code_layout.h"
#include "qecw/data_point.h"
#include "qecw/detector_graph.h"

namespace qecw {

// Dataset file, little-endian throughout:
//   header: "QGD1" u8 code_kind u16 d u16 d_t u8 basis u8 feature_mode
//           f64 noise_p u64 record_count
//   record: u16 n, n x (u8 type i16 x2 i16 y2 u16 t), u8 label
// Label byte: bit 0 value, bit 1 head (0 = Z, 1 = X), bit 2 present;
// bit 3 value and bit 4 presence of the X label when a record carries both
// (bit 1 is then 0). Bits 5-7 are zero.

struct DatasetHeader {
    CodeKind kind = CodeKind::kRotatedSurface;
    int distance = 0;
    int rounds = 0;
    Basis basis = Basis::kZ;
    FeatureMode mode = FeatureMode::kCircuitSurface;
    /// NaN for mixed or unknown noise.
    double noise_p = 0;
    uint64_t records = 0;
};

struct Dataset {
    DatasetHeader header;
    std::vector<DataPoint> points;
};

class DatasetError : public std::runtime_error {
   public:
    enum class Kind { kBadMagic, kVersion, kTruncated, kBounds, kIo };
    DatasetError(Kind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {
    }
    Kind kind() const {
        return kind_;
    }

   private:
    Kind kind_;
};

uint8_t encode_label_byte(const LabelSet &labels);
/// Throws DatasetError(kBounds) on reserved bits or an inconsistent layout.
LabelSet decode_label_byte(uint8_t byte);

/// `header.records` is overwritten with points.size(). Throws DatasetError
/// (kBounds) when a detector lies outside the declared code.
void write_dataset(std::ostream &out, DatasetHeader header, std::span<const DataPoint> points);
void save_dataset(const std::string &path, const DatasetHeader &header, std::span<const DataPoint> points);

Dataset read_dataset(std::istream &in);
Dataset load_dataset(const std::string &path);

}  // namespace qecw

#endif
