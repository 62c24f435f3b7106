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

#include "qecw/circuit.h"

#include <algorithm>
#include <stdexcept>

namespace qecw {

const char *to_string(Gate gate) {
    switch (gate) {
        case Gate::kH:
            return "H";
        case Gate::kCnot:
            return "CNOT";
        case Gate::kMeasure:
            return "M";
        case Gate::kReset:
            return "R";
        case Gate::kDepolarize1:
            return "DEPOLARIZE1";
        case Gate::kDepolarize2:
            return "DEPOLARIZE2";
        case Gate::kFlipMeasure:
            return "FLIP_MEAS";
        case Gate::kFlipReset:
            return "FLIP_RESET";
        case Gate::kXError:
            return "X_ERROR";
        case Gate::kTick:
            return "TICK";
    }
    return "?";
}

bool is_noise(Gate gate) {
    switch (gate) {
        case Gate::kDepolarize1:
        case Gate::kDepolarize2:
        case Gate::kFlipMeasure:
        case Gate::kFlipReset:
        case Gate::kXError:
            return true;
        default:
            return false;
    }
}

NoiseParams NoiseParams::uniform(double p) {
    NoiseParams n;
    n.data_depolarize = p;
    n.after_clifford1 = p;
    n.after_clifford2 = p;
    n.measure_flip = p;
    n.reset_flip = p;
    n.check();
    return n;
}

NoiseParams NoiseParams::data_bitflip_only(double p) {
    NoiseParams n;
    n.data_bitflip = p;
    n.check();
    return n;
}

bool NoiseParams::is_noiseless() const {
    return data_depolarize == 0 && data_bitflip == 0 && after_clifford1 == 0 && after_clifford2 == 0 &&
           measure_flip == 0 && reset_flip == 0;
}

void NoiseParams::check() const {
    for (double p : {data_depolarize, data_bitflip, after_clifford1, after_clifford2, measure_flip, reset_flip}) {
        if (!(p >= 0 && p < 1)) {
            throw std::invalid_argument("noise probability must lie in [0, 1), got " + std::to_string(p));
        }
    }
}

namespace {

class CircuitBuilder {
   public:
    explicit CircuitBuilder(Circuit &c) : c_(c) {
    }

    void gate(Gate g, std::vector<uint32_t> targets, double p = 0) {
        if (targets.empty()) {
            return;
        }
        if (is_noise(g) && p == 0) {
            return;
        }
        c_.instructions.push_back({g, p, std::move(targets)});
    }

    std::vector<uint32_t> measure(const std::vector<uint32_t> &qubits, double flip) {
        gate(Gate::kFlipMeasure, qubits, flip);
        gate(Gate::kMeasure, qubits);
        std::vector<uint32_t> ids;
        for (size_t k = 0; k < qubits.size(); k++) {
            ids.push_back(c_.num_measurements++);
        }
        return ids;
    }

    void tick() {
        c_.instructions.push_back({Gate::kTick, 0, {}});
    }

   private:
    Circuit &c_;
};

std::vector<uint32_t> range_u32(uint32_t begin, uint32_t end) {
    std::vector<uint32_t> out;
    for (uint32_t k = begin; k < end; k++) {
        out.push_back(k);
    }
    return out;
}

}  // namespace

Circuit build_memory_circuit(const CodeLayout &layout, int rounds, Basis basis, const NoiseParams &noise) {
    if (rounds < 1) {
        throw std::invalid_argument("a memory experiment needs at least one round, got " + std::to_string(rounds));
    }
    if (layout.kind == CodeKind::kRepetition && basis == Basis::kX) {
        throw std::invalid_argument("the repetition code cannot detect phase flips; memory-X is not supported");
    }
    auto violations = validate(layout);
    if (!violations.empty()) {
        throw std::invalid_argument("invalid code layout: " + violations.front().message);
    }
    noise.check();

    Circuit c;
    c.layout = layout;
    c.rounds = rounds;
    c.basis = basis;
    c.noise = noise;
    const uint32_t n = static_cast<uint32_t>(layout.num_data());
    const uint32_t m = static_cast<uint32_t>(layout.num_stabilizers());
    c.num_qubits = n + m;

    std::vector<uint32_t> data = range_u32(0, n);
    std::vector<uint32_t> ancillas = range_u32(n, n + m);
    std::vector<uint32_t> x_ancillas;
    for (uint32_t s = 0; s < m; s++) {
        if (layout.stabilizers[s].type == PauliType::kX) {
            x_ancillas.push_back(n + s);
        }
    }

    // Data qubit lookup by doubled coordinate.
    auto data_at = [&](Coord2 q) -> int {
        for (uint32_t k = 0; k < n; k++) {
            if (layout.data_qubits[k] == q) {
                return static_cast<int>(k);
            }
        }
        return -1;
    };

    CircuitBuilder b(c);
    b.gate(Gate::kReset, data);
    b.gate(Gate::kFlipReset, data, noise.reset_flip);
    if (basis == Basis::kX) {
        b.gate(Gate::kH, data);
        b.gate(Gate::kDepolarize1, data, noise.after_clifford1);
    }
    b.tick();

    const size_t steps = layout.kind == CodeKind::kRepetition ? kRepetitionSchedule.size() : kXStabilizerSchedule.size();
    for (int r = 0; r < rounds; r++) {
        b.gate(Gate::kDepolarize1, data, noise.data_depolarize);
        b.gate(Gate::kXError, data, noise.data_bitflip);
        b.gate(Gate::kReset, ancillas);
        b.gate(Gate::kFlipReset, ancillas, noise.reset_flip);
        b.gate(Gate::kH, x_ancillas);
        b.gate(Gate::kDepolarize1, x_ancillas, noise.after_clifford1);
        for (size_t step = 0; step < steps; step++) {
            std::vector<uint32_t> pairs;
            for (uint32_t s = 0; s < m; s++) {
                const auto &stab = layout.stabilizers[s];
                Coord2 offset;
                if (layout.kind == CodeKind::kRepetition) {
                    offset = kRepetitionSchedule[step];
                } else if (stab.type == PauliType::kX) {
                    offset = kXStabilizerSchedule[step];
                } else {
                    offset = kZStabilizerSchedule[step];
                }
                int q = data_at({stab.ancilla.x2 + offset.x2, stab.ancilla.y2 + offset.y2});
                if (q < 0) {
                    continue;
                }
                if (stab.type == PauliType::kX) {
                    pairs.push_back(n + s);
                    pairs.push_back(static_cast<uint32_t>(q));
                } else {
                    pairs.push_back(static_cast<uint32_t>(q));
                    pairs.push_back(n + s);
                }
            }
            b.gate(Gate::kCnot, pairs);
            b.gate(Gate::kDepolarize2, pairs, noise.after_clifford2);
        }
        b.gate(Gate::kH, x_ancillas);
        b.gate(Gate::kDepolarize1, x_ancillas, noise.after_clifford1);
        c.ancilla_measurements.push_back(b.measure(ancillas, noise.measure_flip));
        b.tick();
    }

    if (basis == Basis::kX) {
        b.gate(Gate::kH, data);
        b.gate(Gate::kDepolarize1, data, noise.after_clifford1);
    }
    c.data_measurements = b.measure(data, noise.measure_flip);

    const PauliType aligned = detector_type_for_basis(basis);
    for (uint32_t s = 0; s < m; s++) {
        const auto &stab = layout.stabilizers[s];
        auto event = [&](int t) { return DetectorEvent{stab.type, stab.ancilla.x2, stab.ancilla.y2, t}; };
        if (stab.type == aligned) {
            // Round 1 against the deterministic initial value, then changes
            // between rounds, then the last round against the data readout.
            c.detectors.push_back({{c.ancilla_measurements[0][s]}, event(1)});
            for (int r = 1; r < rounds; r++) {
                c.detectors.push_back({{c.ancilla_measurements[r - 1][s], c.ancilla_measurements[r][s]}, event(r + 1)});
            }
            DetectorDef last{{c.ancilla_measurements[rounds - 1][s]}, event(rounds + 1)};
            for (uint32_t q : stab.support) {
                last.measurements.push_back(c.data_measurements[q]);
            }
            c.detectors.push_back(std::move(last));
        } else {
            // First-round outcomes of the other type are random; they only
            // serve as the reference for later rounds.
            for (int r = 1; r < rounds; r++) {
                c.detectors.push_back({{c.ancilla_measurements[r - 1][s], c.ancilla_measurements[r][s]}, event(r + 1)});
            }
        }
    }
    std::sort(c.detectors.begin(), c.detectors.end(),
              [](const DetectorDef &a, const DetectorDef &b) { return a.event < b.event; });

    const auto &support = basis == Basis::kZ ? layout.logical_z : layout.logical_x;
    for (uint32_t q : support) {
        c.label_measurements.push_back(c.data_measurements[q]);
    }
    return c;
}

std::vector<std::string> Circuit::check_well_formed() const {
    std::vector<std::string> out;
    for (size_t k = 0; k < detectors.size(); k++) {
        for (uint32_t mi : detectors[k].measurements) {
            if (mi >= num_measurements) {
                out.push_back("detector " + std::to_string(k) + " references missing measurement " + std::to_string(mi));
            }
        }
    }
    for (uint32_t mi : label_measurements) {
        if (mi >= num_measurements) {
            out.push_back("label references missing measurement " + std::to_string(mi));
        }
    }
    // Measurement -> round index (final readout counts as round `rounds`).
    std::vector<int> round_of(num_measurements, -1);
    for (size_t r = 0; r < ancilla_measurements.size(); r++) {
        for (uint32_t mi : ancilla_measurements[r]) {
            if (mi < num_measurements) {
                round_of[mi] = static_cast<int>(r);
            }
        }
    }
    for (uint32_t mi : data_measurements) {
        if (mi < num_measurements) {
            round_of[mi] = rounds;
        }
    }
    for (size_t k = 0; k < detectors.size(); k++) {
        int lo = rounds + 1;
        int hi = -1;
        for (uint32_t mi : detectors[k].measurements) {
            if (mi < num_measurements) {
                lo = std::min(lo, round_of[mi]);
                hi = std::max(hi, round_of[mi]);
            }
        }
        if (hi - lo > 1) {
            out.push_back("detector " + std::to_string(k) + " spans more than one round");
        }
    }
    for (size_t k = 0; k < instructions.size(); k++) {
        for (uint32_t q : instructions[k].targets) {
            if (q >= num_qubits) {
                out.push_back("instruction " + std::to_string(k) + " targets missing qubit " + std::to_string(q));
            }
        }
    }
    return out;
}

}  // namespace qecw
