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

#include "qecw/error_model.h"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <map>
#include <sstream>

#include "qecw/frame_simulator.h"

namespace qecw {

int DetectorErrorModel::index_of(const DetectorEvent &event) const {
    auto it = std::lower_bound(detectors.begin(), detectors.end(), event);
    if (it == detectors.end() || *it != event) {
        return -1;
    }
    return static_cast<int>(it - detectors.begin());
}

std::string DetectorErrorModel::to_text() const {
    std::ostringstream out;
    char buf[96];
    for (size_t k = 0; k < detectors.size(); k++) {
        const auto &e = detectors[k];
        std::snprintf(buf, sizeof(buf), "detector(%g, %g, %d) D%zu %s\n", e.x2 / 2.0, e.y2 / 2.0, e.t, k,
                      to_string(e.type));
        out << buf;
    }
    for (const auto &entry : entries) {
        std::snprintf(buf, sizeof(buf), "error(%.9g)", entry.probability);
        out << buf;
        for (uint32_t d : entry.detectors) {
            out << " D" << d;
        }
        for (int k = 0; k < 2; k++) {
            if ((entry.observables >> k) & 1) {
                out << " L" << k;
            }
        }
        out << "\n";
    }
    return out.str();
}

namespace {

struct Signature {
    std::vector<uint32_t> detectors;
    uint8_t observables;
    auto operator<=>(const Signature &) const = default;
};

class DemAccumulator {
   public:
    void add(Signature sig, double q) {
        auto [it, inserted] = merged_.try_emplace(std::move(sig), q);
        if (!inserted) {
            it->second = xor_probability(it->second, q);
        }
    }

    std::vector<DemEntry> finish() const {
        std::vector<DemEntry> out;
        for (const auto &[sig, q] : merged_) {
            out.push_back({q, sig.detectors, sig.observables});
        }
        return out;
    }

   private:
    std::map<Signature, double> merged_;
};

}  // namespace

DetectorErrorModel enumerate_single_faults(const Circuit &circuit, size_t *undetectable_logical) {
    struct Candidate {
        Fault fault;
        double probability;
    };
    std::vector<Candidate> candidates;
    for (uint32_t k = 0; k < circuit.instructions.size(); k++) {
        const Instruction &ins = circuit.instructions[k];
        if (!is_noise(ins.gate) || ins.p <= 0) {
            continue;
        }
        switch (ins.gate) {
            case Gate::kDepolarize1:
                for (uint32_t s = 0; s < ins.targets.size(); s++) {
                    for (uint8_t pauli = 1; pauli <= 3; pauli++) {
                        candidates.push_back({{k, s, pauli, 0}, ins.p / 3});
                    }
                }
                break;
            case Gate::kDepolarize2:
                for (uint32_t s = 0; s < ins.targets.size() / 2; s++) {
                    for (uint8_t pauli = 1; pauli <= 15; pauli++) {
                        candidates.push_back({{k, s, pauli, 0}, ins.p / 15});
                    }
                }
                break;
            default:
                for (uint32_t s = 0; s < ins.targets.size(); s++) {
                    candidates.push_back({{k, s, kPauliX, 0}, ins.p});
                }
                break;
        }
    }

    DetectorErrorModel dem;
    for (const auto &d : circuit.detectors) {
        dem.detectors.push_back(d.event);
    }
    const uint8_t label_bit = static_cast<uint8_t>(1u << static_cast<int>(label_for_basis(circuit.basis)));

    DemAccumulator acc;
    size_t undetectable = 0;
    FrameSimulator sim(circuit);
    for (size_t start = 0; start < candidates.size(); start += FrameSimulator::kLanes) {
        size_t count = std::min(FrameSimulator::kLanes, candidates.size() - start);
        std::vector<Fault> faults;
        for (size_t lane = 0; lane < count; lane++) {
            Fault f = candidates[start + lane].fault;
            f.lanes = uint64_t{1} << lane;
            faults.push_back(f);
        }
        sim.run(nullptr, faults);
        std::vector<Signature> sigs(count);
        for (size_t k = 0; k < circuit.detectors.size(); k++) {
            uint64_t w = sim.detector_word(k);
            while (w) {
                int lane = std::countr_zero(w);
                w &= w - 1;
                if (static_cast<size_t>(lane) < count) {
                    sigs[lane].detectors.push_back(static_cast<uint32_t>(k));
                }
            }
        }
        uint64_t label = sim.label_word();
        for (size_t lane = 0; lane < count; lane++) {
            sigs[lane].observables = ((label >> lane) & 1) ? label_bit : 0;
            if (sigs[lane].detectors.empty()) {
                if (sigs[lane].observables) {
                    undetectable++;
                }
                continue;
            }
            acc.add(std::move(sigs[lane]), candidates[start + lane].probability);
        }
    }
    dem.entries = acc.finish();
    if (undetectable_logical != nullptr) {
        *undetectable_logical = undetectable;
    }
    return dem;
}

DetectorErrorModel perfect_stabilizer_dem(const CodeLayout &layout, double p) {
    DetectorErrorModel dem;
    std::vector<std::pair<DetectorEvent, size_t>> order;
    for (size_t s = 0; s < layout.num_stabilizers(); s++) {
        const auto &stab = layout.stabilizers[s];
        order.push_back({{stab.type, stab.ancilla.x2, stab.ancilla.y2, 1}, s});
    }
    std::sort(order.begin(), order.end());
    std::vector<uint32_t> index_of_stab(layout.num_stabilizers());
    for (size_t k = 0; k < order.size(); k++) {
        dem.detectors.push_back(order[k].first);
        index_of_stab[order[k].second] = static_cast<uint32_t>(k);
    }
    if (p <= 0) {
        return dem;
    }

    auto on = [](const std::vector<uint32_t> &support, uint32_t q) {
        return std::find(support.begin(), support.end(), q) != support.end();
    };
    DemAccumulator acc;
    for (uint32_t q = 0; q < layout.num_data(); q++) {
        for (uint8_t pauli = 1; pauli <= 3; pauli++) {
            Signature sig;
            for (size_t s = 0; s < layout.num_stabilizers(); s++) {
                const auto &stab = layout.stabilizers[s];
                // Z stabilizers detect the X component and vice versa.
                bool hit = stab.type == PauliType::kZ ? (pauli & kPauliX) : (pauli & kPauliZ);
                if (hit && on(stab.support, q)) {
                    sig.detectors.push_back(index_of_stab[s]);
                }
            }
            std::sort(sig.detectors.begin(), sig.detectors.end());
            sig.observables = 0;
            if ((pauli & kPauliX) && on(layout.logical_z, q)) {
                sig.observables |= 1u << static_cast<int>(LabelKind::kZ);
            }
            if ((pauli & kPauliZ) && on(layout.logical_x, q)) {
                sig.observables |= 1u << static_cast<int>(LabelKind::kX);
            }
            if (sig.detectors.empty()) {
                continue;
            }
            acc.add(std::move(sig), p / 3);
        }
    }
    dem.entries = acc.finish();
    return dem;
}

}  // namespace qecw
