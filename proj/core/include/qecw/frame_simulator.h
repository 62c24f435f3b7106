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

#ifndef QECW_FRAME_SIMULATOR_H
#define QECW_FRAME_SIMULATOR_H

#include <cstdint>
#include <span>
#include <vector>

#include "qecw/circuit.h"
#include "qecw/data_point.h"
#include "qecw/rng.h"

namespace qecw {

/// Pauli bits: bit 0 = X, bit 1 = Z (so 3 = Y). Two-qubit sites use bits 0-1
/// for the first qubit of the pair and bits 2-3 for the second.
enum PauliBits : uint8_t { kPauliX = 1, kPauliZ = 2, kPauliY = 3 };

/// A deterministic fault injected at a noise site, applied on the selected lanes.
/// `slot` indexes the instruction's targets (or target pairs for DEPOLARIZE2).
struct Fault {
    uint32_t instruction = 0;
    uint32_t slot = 0;
    uint8_t pauli = 0;
    uint64_t lanes = ~uint64_t{0};
};

/// Bit-packed Pauli-frame simulator: each machine word holds the frame of one
/// qubit across 64 shots. Measurement results are reported as flips relative to
/// the noiseless reference run.
class FrameSimulator {
   public:
    static constexpr size_t kLanes = 64;

    explicit FrameSimulator(const Circuit &circuit);

    /// Runs one block of 64 shots. Stochastic noise is drawn from `rng`; pass
    /// nullptr to run noiselessly with only the injected `faults`.
    void run(Rng *rng, std::span<const Fault> faults = {});

    const std::vector<uint64_t> &measurements() const {
        return meas_;
    }
    uint64_t detector_word(size_t k) const;
    uint64_t label_word() const;

    /// Appends the fired detectors and label of `lane` to a DataPoint.
    DataPoint extract(size_t lane) const;

   private:
    const Circuit &circuit_;
    std::vector<uint64_t> x_;
    std::vector<uint64_t> z_;
    std::vector<uint64_t> meas_;
};

/// Samples `shots` memory-experiment shots. Shot i is lane i % 64 of block
/// i / 64 and block b draws from Rng(seed, b), so results do not depend on
/// `threads`.
std::vector<DataPoint> sample_shots(const Circuit &circuit, uint64_t seed, size_t shots, int threads = 1);

/// One shot; identical to sample_shots(circuit, seed, 1)[0].
DataPoint sample(const Circuit &circuit, uint64_t seed);

/// Per-shot measurement records (one byte per measurement, 0 or 1) drawn from
/// the same streams as sample_shots.
std::vector<std::vector<uint8_t>> sample_measurements(const Circuit &circuit, uint64_t seed, size_t shots);

/// Rebuilds a DataPoint from a measurement record using the circuit's
/// detector and label definitions.
DataPoint data_point_from_measurements(const Circuit &circuit, std::span<const uint8_t> record);

}  // namespace qecw

#endif
