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

#ifndef QECW_CIRCUIT_H
#define QECW_CIRCUIT_H

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qecw/code_layout.h"
#include "qecw/data_point.h"

namespace qecw {

enum class Gate : uint8_t {
    kH,
    kCnot,  // targets are (control, target) pairs
    kMeasure,
    kReset,
    kDepolarize1,
    kDepolarize2,  // targets are qubit pairs
    kFlipMeasure,  // X flip right before a Z-basis measurement
    kFlipReset,    // X flip right after a reset
    kXError,       // bit-flip-only data noise
    kTick,
};

const char *to_string(Gate gate);
bool is_noise(Gate gate);

struct Instruction {
    Gate gate = Gate::kTick;
    double p = 0;
    std::vector<uint32_t> targets;
};

/// Circuit-level noise strengths. `uniform(p)` is the standard model: every
/// channel at the same p. `data_bitflip` is outside that model and only used for
/// analytic checks with perfect measurements.
struct NoiseParams {
    double data_depolarize = 0;  // on data qubits before each round
    double data_bitflip = 0;     // X flips on data qubits before each round
    double after_clifford1 = 0;  // after every H
    double after_clifford2 = 0;  // after every CNOT
    double measure_flip = 0;
    double reset_flip = 0;

    static NoiseParams uniform(double p);
    static NoiseParams data_bitflip_only(double p);
    bool is_noiseless() const;
    void check() const;
};

/// XOR of `measurements` is a detector for the stabilizer with ancilla at `coord`.
struct DetectorDef {
    std::vector<uint32_t> measurements;
    DetectorEvent event;
};

/// Doubled (dx, dy) offsets from an ancilla to the data qubit it couples to, per
/// entangling step. X ancillas sweep row by row and Z ancillas column by
/// column, so the two types never compete for a data qubit within a step and a
/// hook error from a mid-circuit ancilla fault lies perpendicular to the
/// logical operator it could otherwise shorten.
inline constexpr std::array<Coord2, 4> kXStabilizerSchedule{{{-1, -1}, {1, -1}, {-1, 1}, {1, 1}}};
inline constexpr std::array<Coord2, 4> kZStabilizerSchedule{{{-1, -1}, {-1, 1}, {1, -1}, {1, 1}}};
inline constexpr std::array<Coord2, 2> kRepetitionSchedule{{{-1, 0}, {1, 0}}};

struct Circuit {
    CodeLayout layout;
    int rounds = 0;
    Basis basis = Basis::kZ;
    NoiseParams noise;
    uint32_t num_qubits = 0;
    uint32_t num_measurements = 0;
    std::vector<Instruction> instructions;
    /// Sorted by event, so sampled detector lists come out in canonical order.
    std::vector<DetectorDef> detectors;
    std::vector<uint32_t> label_measurements;
    /// ancilla_measurements[r][s]: measurement index of stabilizer s in round r (0-based).
    std::vector<std::vector<uint32_t>> ancilla_measurements;
    /// data_measurements[q]: measurement index of data qubit q in the final readout.
    std::vector<uint32_t> data_measurements;

    uint32_t ancilla_qubit(size_t stabilizer) const {
        return static_cast<uint32_t>(layout.num_data() + stabilizer);
    }
    /// Lists structural problems; empty when the circuit is well formed.
    std::vector<std::string> check_well_formed() const;
};

/// Builds a memory experiment: data initialisation in `basis`, `rounds`
/// ancilla-mediated stabilizer rounds and a final transversal readout.
Circuit build_memory_circuit(const CodeLayout &layout, int rounds, Basis basis, const NoiseParams &noise);

}  // namespace qecw

#endif
