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

#include "qecw/code_layout.h"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qecw {

const char *to_string(CodeKind kind) {
    return kind == CodeKind::kRepetition ? "rep" : "surface";
}

const char *to_string(PauliType type) {
    return type == PauliType::kX ? "X" : "Z";
}

size_t CodeLayout::count(PauliType type) const {
    return std::count_if(stabilizers.begin(), stabilizers.end(),
                         [&](const StabilizerDef &s) { return s.type == type; });
}

int CodeLayout::stabilizer_at(Coord2 c) const {
    for (size_t k = 0; k < stabilizers.size(); k++) {
        if (stabilizers[k].ancilla == c) {
            return static_cast<int>(k);
        }
    }
    return -1;
}

CodeLayout build_rotated_surface(int d) {
    if (d < 3 || d % 2 == 0) {
        throw std::invalid_argument("rotated surface code distance must be odd and >= 3, got " +
                                    std::to_string(d));
    }
    CodeLayout layout;
    layout.kind = CodeKind::kRotatedSurface;
    layout.distance = d;
    auto index = [d](int x, int y) { return static_cast<uint32_t>(y * d + x); };
    for (int y = 0; y < d; y++) {
        for (int x = 0; x < d; x++) {
            layout.data_qubits.push_back({2 * x, 2 * y});
        }
    }

    // Plaquette (a, b) covers data qubits x in {a, a+1}, y in {b, b+1}. The
    // checkerboard puts Z plaquettes on even a+b; weight-2 Z plaquettes live on
    // the west/east edges and weight-2 X plaquettes on the north/south edges.
    for (int b = -1; b < d; b++) {
        for (int a = -1; a < d; a++) {
            bool west_east = (a == -1 || a == d - 1);
            bool north_south = (b == -1 || b == d - 1);
            if (west_east && north_south) {
                continue;
            }
            PauliType type = ((a + b) % 2 == 0) ? PauliType::kZ : PauliType::kX;
            if (west_east && type != PauliType::kZ) {
                continue;
            }
            if (north_south && type != PauliType::kX) {
                continue;
            }
            StabilizerDef stab;
            stab.type = type;
            stab.ancilla = {2 * a + 1, 2 * b + 1};
            for (int dy = 0; dy <= 1; dy++) {
                for (int dx = 0; dx <= 1; dx++) {
                    int x = a + dx;
                    int y = b + dy;
                    if (x >= 0 && x < d && y >= 0 && y < d) {
                        stab.support.push_back(index(x, y));
                    }
                }
            }
            layout.stabilizers.push_back(std::move(stab));
        }
    }

    for (int x = 0; x < d; x++) {
        layout.logical_z.push_back(index(x, 0));
    }
    for (int y = 0; y < d; y++) {
        layout.logical_x.push_back(index(0, y));
    }
    return layout;
}

CodeLayout build_repetition(int d) {
    if (d < 2) {
        throw std::invalid_argument("repetition code distance must be >= 2, got " + std::to_string(d));
    }
    CodeLayout layout;
    layout.kind = CodeKind::kRepetition;
    layout.distance = d;
    for (int i = 0; i < d; i++) {
        layout.data_qubits.push_back({2 * i, 0});
        layout.logical_x.push_back(static_cast<uint32_t>(i));
    }
    for (int i = 0; i + 1 < d; i++) {
        StabilizerDef stab;
        stab.type = PauliType::kZ;
        stab.support = {static_cast<uint32_t>(i), static_cast<uint32_t>(i + 1)};
        stab.ancilla = {2 * i + 1, 0};
        layout.stabilizers.push_back(std::move(stab));
    }
    layout.logical_z = {0};
    return layout;
}

bool commutes(PauliType type_a, std::span<const uint32_t> support_a, PauliType type_b,
              std::span<const uint32_t> support_b) {
    if (type_a == type_b) {
        return true;
    }
    size_t overlap = 0;
    for (uint32_t q : support_a) {
        overlap += std::count(support_b.begin(), support_b.end(), q);
    }
    return overlap % 2 == 0;
}

std::vector<Violation> validate(const CodeLayout &layout) {
    std::vector<Violation> out;
    const int d = layout.distance;
    const size_t n = layout.num_data();
    auto add = [&](ViolationKind kind, std::string msg) { out.push_back({kind, std::move(msg)}); };

    if (layout.kind == CodeKind::kRotatedSurface) {
        size_t expected = static_cast<size_t>(d * d - 1);
        if (layout.num_stabilizers() != expected || layout.count(PauliType::kZ) != expected / 2 ||
            layout.count(PauliType::kX) != expected / 2) {
            add(ViolationKind::kStabilizerCount,
                "expected " + std::to_string(expected / 2) + " X and " + std::to_string(expected / 2) +
                    " Z stabilizers, got " + std::to_string(layout.count(PauliType::kX)) + " X and " +
                    std::to_string(layout.count(PauliType::kZ)) + " Z");
        }
    } else {
        if (layout.num_stabilizers() != static_cast<size_t>(d - 1) ||
            layout.count(PauliType::kZ) != layout.num_stabilizers()) {
            add(ViolationKind::kStabilizerCount, "repetition code needs d-1 Z stabilizers");
        }
    }

    std::set<Coord2> ancillas;
    for (size_t k = 0; k < layout.stabilizers.size(); k++) {
        const auto &s = layout.stabilizers[k];
        size_t w = s.support.size();
        bool ok_size = layout.kind == CodeKind::kRotatedSurface ? (w == 2 || w == 4) : (w == 2);
        if (!ok_size) {
            add(ViolationKind::kSupportSize,
                "stabilizer " + std::to_string(k) + " has weight " + std::to_string(w));
        }
        if (layout.kind == CodeKind::kRepetition && w == 2 && s.support[1] != s.support[0] + 1) {
            add(ViolationKind::kSupportSize, "stabilizer " + std::to_string(k) + " is not a neighboring pair");
        }
        for (uint32_t q : s.support) {
            if (q >= n) {
                add(ViolationKind::kQubitIndex,
                    "stabilizer " + std::to_string(k) + " references qubit " + std::to_string(q));
            }
        }
        if (!ancillas.insert(s.ancilla).second) {
            add(ViolationKind::kDuplicateAncilla, "stabilizer " + std::to_string(k) + " reuses an ancilla coordinate");
        }
    }

    for (size_t a = 0; a < layout.stabilizers.size(); a++) {
        for (size_t b = a + 1; b < layout.stabilizers.size(); b++) {
            const auto &sa = layout.stabilizers[a];
            const auto &sb = layout.stabilizers[b];
            if (!commutes(sa.type, sa.support, sb.type, sb.support)) {
                add(ViolationKind::kStabilizerCommutation,
                    "stabilizers " + std::to_string(a) + " (" + to_string(sa.type) + ") and " +
                        std::to_string(b) + " (" + to_string(sb.type) + ") anticommute");
            }
        }
    }

    struct Logical {
        const char *name;
        PauliType type;
        const std::vector<uint32_t> *support;
    };
    Logical logicals[] = {{"logical_z", PauliType::kZ, &layout.logical_z},
                          {"logical_x", PauliType::kX, &layout.logical_x}};
    for (const auto &l : logicals) {
        for (uint32_t q : *l.support) {
            if (q >= n) {
                add(ViolationKind::kQubitIndex, std::string(l.name) + " references qubit " + std::to_string(q));
            }
        }
        for (size_t k = 0; k < layout.stabilizers.size(); k++) {
            const auto &s = layout.stabilizers[k];
            if (!commutes(l.type, *l.support, s.type, s.support)) {
                add(ViolationKind::kLogicalCommutation,
                    std::string(l.name) + " anticommutes with stabilizer " + std::to_string(k));
            }
        }
    }
    if (layout.kind == CodeKind::kRotatedSurface &&
        commutes(PauliType::kZ, layout.logical_z, PauliType::kX, layout.logical_x)) {
        add(ViolationKind::kLogicalAnticommutation, "logical_z and logical_x commute");
    }
    return out;
}

BoundaryHop nearest_boundary(const CodeLayout &layout, PauliType detector_type, Coord2 ancilla) {
    const int d = layout.distance;
    // Z detectors see X chains and X detectors see Z chains. In both codes the
    // chain that exits on the side holding the protected logical's support
    // crosses it exactly once.
    int along;
    if (layout.kind == CodeKind::kRepetition) {
        along = ancilla.x2;
    } else {
        along = detector_type == PauliType::kZ ? ancilla.y2 : ancilla.x2;
    }
    int near = (along + 1) / 2;
    int far = d - near;
    if (near <= far) {
        return {near, true};
    }
    return {far, false};
}

}  // namespace qecw
