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

#include "qecw/ml_oracle.h"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qecw {

LabelSet labels_for_class(LogicalClass c) {
    LabelSet s;
    s.set(LabelKind::kZ, (c == LogicalClass::kX || c == LogicalClass::kY) ? 1 : 0);
    s.set(LabelKind::kX, (c == LogicalClass::kZ || c == LogicalClass::kY) ? 1 : 0);
    return s;
}

std::array<double, 4> CosetProbabilities::normalized() const {
    std::array<double, 4> out{0, 0, 0, 0};
    double t = total();
    if (t > 0) {
        for (int k = 0; k < 4; k++) {
            out[k] = p[k] / t;
        }
    }
    return out;
}

LogicalClass CosetProbabilities::most_likely() const {
    int best = 0;
    for (int k = 1; k < 4; k++) {
        if (p[k] > p[best]) {
            best = k;
        }
    }
    return static_cast<LogicalClass>(best);
}

MlOracle::MlOracle(const CodeLayout &layout, double p) : layout_(layout) {
    if (layout.kind != CodeKind::kRotatedSurface) {
        throw std::invalid_argument("maximum-likelihood oracle expects a rotated surface code");
    }
    if (layout.distance > 3) {
        throw std::invalid_argument("maximum-likelihood oracle is limited to d <= 3");
    }
    if (!(p >= 0 && p <= 1)) {
        throw std::invalid_argument("depolarizing probability must lie in [0, 1]");
    }
    const size_t n = layout.num_data();
    const size_t m = layout.num_stabilizers();
    const uint32_t span = 1u << n;

    auto mask_of = [](const std::vector<uint32_t> &support) {
        uint32_t mask = 0;
        for (uint32_t q : support) {
            mask |= 1u << q;
        }
        return mask;
    };
    // X errors are seen by Z stabilizers and Z errors by X stabilizers.
    std::vector<uint32_t> syn_from_x(span, 0);
    std::vector<uint32_t> syn_from_z(span, 0);
    std::vector<uint32_t> stab_mask(m);
    for (size_t s = 0; s < m; s++) {
        stab_mask[s] = mask_of(layout.stabilizers[s].support);
    }
    for (uint32_t e = 0; e < span; e++) {
        for (size_t s = 0; s < m; s++) {
            uint32_t bit = std::popcount(e & stab_mask[s]) & 1;
            if (layout.stabilizers[s].type == PauliType::kZ) {
                syn_from_x[e] |= bit << s;
            } else {
                syn_from_z[e] |= bit << s;
            }
        }
    }
    const uint32_t lz = mask_of(layout.logical_z);
    const uint32_t lx = mask_of(layout.logical_x);

    std::vector<double> weight_prob(n + 1);
    for (size_t w = 0; w <= n; w++) {
        weight_prob[w] = std::pow(1 - p, static_cast<double>(n - w)) * std::pow(p / 3, static_cast<double>(w));
    }
    table_.assign(size_t{1} << m, {});
    for (uint32_t x = 0; x < span; x++) {
        const uint32_t flips_z = std::popcount(x & lz) & 1;
        for (uint32_t z = 0; z < span; z++) {
            const uint32_t flips_x = std::popcount(z & lx) & 1;
            const uint32_t syndrome = syn_from_x[x] | syn_from_z[z];
            const int cls = static_cast<int>(flips_z) | (static_cast<int>(flips_x) << 1);
            table_[syndrome].p[cls] += weight_prob[std::popcount(x | z)];
        }
    }
}

uint32_t MlOracle::syndrome_of(std::span<const DetectorEvent> detectors) const {
    uint32_t s = 0;
    for (const auto &e : detectors) {
        int idx = layout_.stabilizer_at({e.x2, e.y2});
        if (idx < 0 || layout_.stabilizers[idx].type != e.type) {
            throw std::invalid_argument("detector does not match any stabilizer of the layout");
        }
        s ^= 1u << idx;
    }
    return s;
}

const CosetProbabilities &MlOracle::cosets(uint32_t syndrome) const {
    if (syndrome >= table_.size()) {
        throw std::invalid_argument("syndrome out of range");
    }
    return table_[syndrome];
}

LogicalClass MlOracle::decode(uint32_t syndrome) const {
    return cosets(syndrome).most_likely();
}

double MlOracle::failure_rate() const {
    return failure_rate_of([this](uint32_t s) { return table_[s].most_likely(); });
}

CosetProbabilities coset_probabilities(const CodeLayout &layout, uint32_t syndrome, double p) {
    return MlOracle(layout, p).cosets(syndrome);
}

LogicalClass ml_decode(const CodeLayout &layout, uint32_t syndrome, double p) {
    return MlOracle(layout, p).decode(syndrome);
}

}  // namespace qecw
