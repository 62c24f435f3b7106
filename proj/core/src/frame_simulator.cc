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

#include "qecw/frame_simulator.h"

#include <algorithm>
#include <bit>
#include <thread>

namespace qecw {

FrameSimulator::FrameSimulator(const Circuit &circuit)
    : circuit_(circuit), x_(circuit.num_qubits), z_(circuit.num_qubits), meas_(circuit.num_measurements) {
}

namespace {

inline void apply_pauli(uint64_t &x, uint64_t &z, uint8_t pauli, uint64_t lanes) {
    if (pauli & kPauliX) {
        x ^= lanes;
    }
    if (pauli & kPauliZ) {
        z ^= lanes;
    }
}

}  // namespace

void FrameSimulator::run(Rng *rng, std::span<const Fault> faults) {
    std::fill(x_.begin(), x_.end(), 0);
    std::fill(z_.begin(), z_.end(), 0);
    std::fill(meas_.begin(), meas_.end(), 0);

    std::vector<Fault> pending(faults.begin(), faults.end());
    std::stable_sort(pending.begin(), pending.end(),
                     [](const Fault &a, const Fault &b) { return a.instruction < b.instruction; });
    size_t next_fault = 0;

    size_t mi = 0;
    const auto &instructions = circuit_.instructions;
    for (size_t k = 0; k < instructions.size(); k++) {
        const Instruction &ins = instructions[k];
        const auto &t = ins.targets;
        switch (ins.gate) {
            case Gate::kH:
                for (uint32_t q : t) {
                    std::swap(x_[q], z_[q]);
                }
                break;
            case Gate::kCnot:
                for (size_t i = 0; i + 1 < t.size(); i += 2) {
                    x_[t[i + 1]] ^= x_[t[i]];
                    z_[t[i]] ^= z_[t[i + 1]];
                }
                break;
            case Gate::kMeasure:
                for (uint32_t q : t) {
                    meas_[mi++] = x_[q];
                }
                break;
            case Gate::kReset:
                for (uint32_t q : t) {
                    x_[q] = 0;
                    z_[q] = 0;
                }
                break;
            case Gate::kDepolarize1:
                if (rng != nullptr) {
                    for (uint32_t q : t) {
                        uint64_t hits = bernoulli_word(*rng, ins.p);
                        while (hits) {
                            uint64_t lane = hits & (~hits + 1);
                            hits ^= lane;
                            apply_pauli(x_[q], z_[q], static_cast<uint8_t>(rng->below(3) + 1), lane);
                        }
                    }
                }
                break;
            case Gate::kDepolarize2:
                if (rng != nullptr) {
                    for (size_t i = 0; i + 1 < t.size(); i += 2) {
                        uint64_t hits = bernoulli_word(*rng, ins.p);
                        while (hits) {
                            uint64_t lane = hits & (~hits + 1);
                            hits ^= lane;
                            uint8_t pp = static_cast<uint8_t>(rng->below(15) + 1);
                            apply_pauli(x_[t[i]], z_[t[i]], pp & 3, lane);
                            apply_pauli(x_[t[i + 1]], z_[t[i + 1]], pp >> 2, lane);
                        }
                    }
                }
                break;
            case Gate::kFlipMeasure:
            case Gate::kFlipReset:
            case Gate::kXError:
                if (rng != nullptr) {
                    for (uint32_t q : t) {
                        x_[q] ^= bernoulli_word(*rng, ins.p);
                    }
                }
                break;
            case Gate::kTick:
                break;
        }

        while (next_fault < pending.size() && pending[next_fault].instruction == k) {
            const Fault &f = pending[next_fault++];
            if (ins.gate == Gate::kDepolarize2) {
                uint32_t a = t[2 * f.slot];
                uint32_t b = t[2 * f.slot + 1];
                apply_pauli(x_[a], z_[a], f.pauli & 3, f.lanes);
                apply_pauli(x_[b], z_[b], f.pauli >> 2, f.lanes);
            } else {
                uint32_t q = t[f.slot];
                apply_pauli(x_[q], z_[q], f.pauli & 3, f.lanes);
            }
        }
    }
}

uint64_t FrameSimulator::detector_word(size_t k) const {
    uint64_t w = 0;
    for (uint32_t mi : circuit_.detectors[k].measurements) {
        w ^= meas_[mi];
    }
    return w;
}

uint64_t FrameSimulator::label_word() const {
    uint64_t w = 0;
    for (uint32_t mi : circuit_.label_measurements) {
        w ^= meas_[mi];
    }
    return w;
}

namespace {

double nominal_p(const NoiseParams &n) {
    return std::max({n.data_depolarize, n.data_bitflip, n.after_clifford1, n.after_clifford2, n.measure_flip,
                     n.reset_flip});
}

DataPoint empty_point(const Circuit &circuit) {
    DataPoint dp;
    dp.basis = circuit.basis;
    dp.noise_p = nominal_p(circuit.noise);
    return dp;
}

void fill_block(const Circuit &circuit, const FrameSimulator &sim, std::span<DataPoint> out) {
    const uint64_t valid = out.size() >= 64 ? ~uint64_t{0} : ((uint64_t{1} << out.size()) - 1);
    for (auto &dp : out) {
        dp = empty_point(circuit);
    }
    for (size_t k = 0; k < circuit.detectors.size(); k++) {
        uint64_t w = sim.detector_word(k) & valid;
        while (w) {
            int lane = std::countr_zero(w);
            w &= w - 1;
            out[lane].detectors.push_back(circuit.detectors[k].event);
        }
    }
    const uint64_t label = sim.label_word();
    const LabelKind kind = label_for_basis(circuit.basis);
    for (size_t lane = 0; lane < out.size(); lane++) {
        out[lane].labels.set(kind, static_cast<uint8_t>((label >> lane) & 1));
    }
}

}  // namespace

DataPoint FrameSimulator::extract(size_t lane) const {
    DataPoint dp = empty_point(circuit_);
    for (size_t k = 0; k < circuit_.detectors.size(); k++) {
        if ((detector_word(k) >> lane) & 1) {
            dp.detectors.push_back(circuit_.detectors[k].event);
        }
    }
    dp.labels.set(label_for_basis(circuit_.basis), static_cast<uint8_t>((label_word() >> lane) & 1));
    return dp;
}

std::vector<DataPoint> sample_shots(const Circuit &circuit, uint64_t seed, size_t shots, int threads) {
    std::vector<DataPoint> out(shots);
    const size_t blocks = (shots + FrameSimulator::kLanes - 1) / FrameSimulator::kLanes;
    auto work = [&](size_t first_block, size_t end_block) {
        FrameSimulator sim(circuit);
        for (size_t b = first_block; b < end_block; b++) {
            Rng rng(seed, b);
            sim.run(&rng);
            size_t begin = b * FrameSimulator::kLanes;
            size_t count = std::min(FrameSimulator::kLanes, shots - begin);
            fill_block(circuit, sim, std::span<DataPoint>(out).subspan(begin, count));
        }
    };
    threads = std::max(1, threads);
    if (threads == 1 || blocks < 2) {
        work(0, blocks);
        return out;
    }
    std::vector<std::thread> pool;
    size_t per = (blocks + threads - 1) / threads;
    for (size_t b = 0; b < blocks; b += per) {
        pool.emplace_back(work, b, std::min(blocks, b + per));
    }
    for (auto &th : pool) {
        th.join();
    }
    return out;
}

DataPoint sample(const Circuit &circuit, uint64_t seed) {
    return sample_shots(circuit, seed, 1).front();
}

std::vector<std::vector<uint8_t>> sample_measurements(const Circuit &circuit, uint64_t seed, size_t shots) {
    std::vector<std::vector<uint8_t>> out(shots, std::vector<uint8_t>(circuit.num_measurements));
    FrameSimulator sim(circuit);
    const size_t blocks = (shots + FrameSimulator::kLanes - 1) / FrameSimulator::kLanes;
    for (size_t b = 0; b < blocks; b++) {
        Rng rng(seed, b);
        sim.run(&rng);
        size_t begin = b * FrameSimulator::kLanes;
        size_t count = std::min(FrameSimulator::kLanes, shots - begin);
        for (size_t mi = 0; mi < circuit.num_measurements; mi++) {
            uint64_t w = sim.measurements()[mi];
            for (size_t lane = 0; lane < count; lane++) {
                out[begin + lane][mi] = static_cast<uint8_t>((w >> lane) & 1);
            }
        }
    }
    return out;
}

DataPoint data_point_from_measurements(const Circuit &circuit, std::span<const uint8_t> record) {
    DataPoint dp = empty_point(circuit);
    for (const auto &det : circuit.detectors) {
        uint8_t v = 0;
        for (uint32_t mi : det.measurements) {
            v ^= record[mi];
        }
        if (v & 1) {
            dp.detectors.push_back(det.event);
        }
    }
    uint8_t label = 0;
    for (uint32_t mi : circuit.label_measurements) {
        label ^= record[mi];
    }
    dp.labels.set(label_for_basis(circuit.basis), label);
    return dp;
}

}  // namespace qecw
