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

#ifndef QECW_ERROR_MODEL_H
#define QECW_ERROR_MODEL_H

#include <cstdint>
#include <string>
#include <vector>

#include "qecw/circuit.h"
#include "qecw/code_layout.h"
#include "qecw/data_point.h"

namespace qecw {

/// One elementary fault class. `observables` bit k is set when the fault flips
/// the label of LabelKind k.
struct DemEntry {
    double probability = 0;
    std::vector<uint32_t> detectors;
    uint8_t observables = 0;
};

struct DetectorErrorModel {
    std::vector<DemEntry> entries;
    /// Detector index table, sorted.
    std::vector<DetectorEvent> detectors;

    /// Index of `event` in the detector table, or -1.
    int index_of(const DetectorEvent &event) const;

    /// Stim-flavoured text: `detector(x, y, t) D<k> <type>` lines followed by
    /// `error(p) D.. L..` lines. L0 is the Z label, L1 the X label.
    std::string to_text() const;
};

/// Independent-fault combination: probability that exactly one of two
/// independent events with probabilities a and b happens.
inline double xor_probability(double a, double b) {
    return a * (1 - b) + b * (1 - a);
}

/// Enumerates every single fault of the circuit (each noise site, each
/// non-identity outcome), propagates it noiselessly and merges faults with equal
/// signatures. Faults that fire no detector are dropped; the number of such
/// faults that still flip the label is reported through `undetectable_logical`.
DetectorErrorModel enumerate_single_faults(const Circuit &circuit, size_t *undetectable_logical = nullptr);

/// Error model of the code under perfect stabilizer readout with single-qubit
/// depolarizing noise of strength p on every data qubit. Detectors carry t = 1.
DetectorErrorModel perfect_stabilizer_dem(const CodeLayout &layout, double p);

}  // namespace qecw

#endif
