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

#ifndef QECW_CODE_LAYOUT_H
#define QECW_CODE_LAYOUT_H

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qecw {

enum class CodeKind : uint8_t { kRepetition = 0, kRotatedSurface = 1 };
enum class PauliType : uint8_t { kX = 0, kZ = 1 };

/// Which logical readout a label refers to. kZ is the memory-Z label (flips of
/// Z_L), kX the memory-X label. Also used as the GNN head index.
enum class LabelKind : uint8_t { kZ = 0, kX = 1 };

const char *to_string(CodeKind kind);
const char *to_string(PauliType type);

/// Planar coordinate stored at twice its value, so ancilla half-integers are exact.
struct Coord2 {
    int x2 = 0;
    int y2 = 0;
    auto operator<=>(const Coord2 &) const = default;
};

struct StabilizerDef {
    PauliType type = PauliType::kZ;
    std::vector<uint32_t> support;
    Coord2 ancilla;
};

/// A code instance. Data qubits sit on integer grid points (x, y) in
/// {0..d-1}^2 (y = 0 for the repetition code), stabilizer ancillas on the
/// half-integer plaquette centres. The northwest edge is the row y = 0 and the
/// southwest edge the column x = 0.
struct CodeLayout {
    CodeKind kind = CodeKind::kRotatedSurface;
    int distance = 0;
    std::vector<Coord2> data_qubits;
    std::vector<StabilizerDef> stabilizers;
    std::vector<uint32_t> logical_z;
    std::vector<uint32_t> logical_x;

    size_t num_data() const {
        return data_qubits.size();
    }
    size_t num_stabilizers() const {
        return stabilizers.size();
    }
    size_t count(PauliType type) const;
    /// Index of the stabilizer whose ancilla sits at `c`, or -1.
    int stabilizer_at(Coord2 c) const;
};

/// Rotated surface code on a d x d grid, d odd and >= 3.
CodeLayout build_rotated_surface(int d);

/// Repetition code with d data qubits in a line and d-1 ZZ stabilizers.
CodeLayout build_repetition(int d);

enum class ViolationKind : uint8_t {
    kStabilizerCount,
    kSupportSize,
    kDuplicateAncilla,
    kStabilizerCommutation,
    kLogicalCommutation,
    kLogicalAnticommutation,
    kQubitIndex,
};

struct Violation {
    ViolationKind kind;
    std::string message;
};

/// Checks every structural invariant of a layout. Reports, never throws.
std::vector<Violation> validate(const CodeLayout &layout);

/// True when the Pauli products (type_a on support_a) and (type_b on support_b)
/// commute, i.e. they are the same type or overlap on an even number of qubits.
bool commutes(PauliType type_a, std::span<const uint32_t> support_a, PauliType type_b,
              std::span<const uint32_t> support_b);

/// The cheapest way for an error chain that is detected by `detector_type`
/// stabilizers to leave the code through a boundary, starting from the ancilla
/// at `ancilla`. `distance` is the number of data-qubit errors on the straight
/// path (grid units); `flips_logical` tells whether that path crosses the
/// support of the logical operator the detector type protects.
struct BoundaryHop {
    int distance = 0;
    bool flips_logical = false;
};
BoundaryHop nearest_boundary(const CodeLayout &layout, PauliType detector_type, Coord2 ancilla);

/// Label read out by matching on detectors of this type: Z detectors see X
/// errors, which flip Z_L.
inline LabelKind label_for_detector_type(PauliType type) {
    return type == PauliType::kZ ? LabelKind::kZ : LabelKind::kX;
}

}  // namespace qecw

#endif
