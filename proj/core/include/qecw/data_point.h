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

#ifndef QECW_DATA_POINT_H
#define QECW_DATA_POINT_H

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "qecw/code_layout.h"

namespace qecw {

/// Memory-experiment basis: memory-Z detects logical bit flips, memory-X phase flips.
enum class Basis : uint8_t { kZ = 0, kX = 1 };

inline LabelKind label_for_basis(Basis basis) {
    return basis == Basis::kZ ? LabelKind::kZ : LabelKind::kX;
}
inline PauliType detector_type_for_basis(Basis basis) {
    return basis == Basis::kZ ? PauliType::kZ : PauliType::kX;
}

/// One fired detector. Coordinates are doubled (see Coord2); t counts rounds
/// starting at 1.
struct DetectorEvent {
    PauliType type = PauliType::kZ;
    int x2 = 0;
    int y2 = 0;
    int t = 1;
    auto operator<=>(const DetectorEvent &) const = default;
};

/// Up to two binary labels, indexed by LabelKind, each with an availability bit.
struct LabelSet {
    std::array<uint8_t, 2> value{0, 0};
    std::array<bool, 2> present{false, false};

    bool has(LabelKind k) const {
        return present[static_cast<int>(k)];
    }
    uint8_t get(LabelKind k) const {
        return value[static_cast<int>(k)];
    }
    void set(LabelKind k, uint8_t v) {
        value[static_cast<int>(k)] = v & 1;
        present[static_cast<int>(k)] = true;
    }
    int count() const {
        return int(present[0]) + int(present[1]);
    }
    bool operator==(const LabelSet &) const = default;
};

struct DataPoint {
    std::vector<DetectorEvent> detectors;
    LabelSet labels;
    Basis basis = Basis::kZ;
    /// Physical error rate the shot was sampled at; NaN for external data.
    double noise_p = std::nan("");
    /// Free-form origin tag for ingested data.
    std::string source_id;

    bool same_content(const DataPoint &o) const {
        return detectors == o.detectors && labels == o.labels && basis == o.basis;
    }
};

}  // namespace qecw

#endif
