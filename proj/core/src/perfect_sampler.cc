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

#include "qecw/perfect_sampler.h"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "qecw/rng.h"

namespace qecw {

namespace {

struct StabOrder {
    std::vector<size_t> sorted;  // stabilizer indices in DetectorEvent order
};

StabOrder sorted_stabilizers(const CodeLayout &layout) {
    StabOrder o;
    o.sorted.resize(layout.num_stabilizers());
    for (size_t k = 0; k < o.sorted.size(); k++) {
        o.sorted[k] = k;
    }
    auto event = [&](size_t s) {
        const auto &st = layout.stabilizers[s];
        return DetectorEvent{st.type, st.ancilla.x2, st.ancilla.y2, 1};
    };
    std::sort(o.sorted.begin(), o.sorted.end(), [&](size_t a, size_t b) { return event(a) < event(b); });
    return o;
}

void check_layout(const CodeLayout &layout) {
    if (layout.kind != CodeKind::kRotatedSurface) {
        throw std::invalid_argument("perfect-stabilizer sampling expects a rotated surface code");
    }
}

}  // namespace

DataPoint perfect_data_point(const CodeLayout &layout, std::span<const uint8_t> x_errors,
                             std::span<const uint8_t> z_errors) {
    check_layout(layout);
    DataPoint dp;
    dp.basis = Basis::kZ;
    for (size_t s : sorted_stabilizers(layout).sorted) {
        const auto &st = layout.stabilizers[s];
        const auto &errors = st.type == PauliType::kZ ? x_errors : z_errors;
        uint8_t parity = 0;
        for (uint32_t q : st.support) {
            parity ^= errors[q] & 1;
        }
        if (parity) {
            dp.detectors.push_back({st.type, st.ancilla.x2, st.ancilla.y2, 1});
        }
    }
    uint8_t lz = 0;
    uint8_t lx = 0;
    for (uint32_t q : layout.logical_z) {
        lz ^= x_errors[q] & 1;
    }
    for (uint32_t q : layout.logical_x) {
        lx ^= z_errors[q] & 1;
    }
    dp.labels.set(LabelKind::kZ, lz);
    dp.labels.set(LabelKind::kX, lx);
    return dp;
}

std::vector<DataPoint> sample_perfect_shots(const CodeLayout &layout, double p, uint64_t seed, size_t shots) {
    check_layout(layout);
    if (!(p >= 0 && p < 1)) {
        throw std::invalid_argument("depolarizing probability must lie in [0, 1)");
    }
    const auto order = sorted_stabilizers(layout);
    const size_t n = layout.num_data();
    std::vector<DataPoint> out(shots);
    std::vector<uint64_t> xw(n);
    std::vector<uint64_t> zw(n);
    const size_t blocks = (shots + 63) / 64;
    for (size_t b = 0; b < blocks; b++) {
        Rng rng(seed, b);
        for (size_t q = 0; q < n; q++) {
            xw[q] = 0;
            zw[q] = 0;
            uint64_t hits = bernoulli_word(rng, p);
            while (hits) {
                uint64_t lane = hits & (~hits + 1);
                hits ^= lane;
                uint64_t pauli = rng.below(3) + 1;
                if (pauli & 1) {
                    xw[q] |= lane;
                }
                if (pauli & 2) {
                    zw[q] |= lane;
                }
            }
        }
        const size_t begin = b * 64;
        const size_t count = std::min<size_t>(64, shots - begin);
        const uint64_t valid = count >= 64 ? ~uint64_t{0} : ((uint64_t{1} << count) - 1);
        for (size_t lane = 0; lane < count; lane++) {
            out[begin + lane].basis = Basis::kZ;
            out[begin + lane].noise_p = p;
        }
        for (size_t s : order.sorted) {
            const auto &st = layout.stabilizers[s];
            const auto &errors = st.type == PauliType::kZ ? xw : zw;
            uint64_t w = 0;
            for (uint32_t q : st.support) {
                w ^= errors[q];
            }
            w &= valid;
            while (w) {
                int lane = std::countr_zero(w);
                w &= w - 1;
                out[begin + lane].detectors.push_back({st.type, st.ancilla.x2, st.ancilla.y2, 1});
            }
        }
        uint64_t lz = 0;
        uint64_t lx = 0;
        for (uint32_t q : layout.logical_z) {
            lz ^= xw[q];
        }
        for (uint32_t q : layout.logical_x) {
            lx ^= zw[q];
        }
        for (size_t lane = 0; lane < count; lane++) {
            out[begin + lane].labels.set(LabelKind::kZ, static_cast<uint8_t>((lz >> lane) & 1));
            out[begin + lane].labels.set(LabelKind::kX, static_cast<uint8_t>((lx >> lane) & 1));
        }
    }
    return out;
}

DataPoint sample_perfect(const CodeLayout &layout, double p, uint64_t seed) {
    return sample_perfect_shots(layout, p, seed, 1).front();
}

}  // namespace qecw
