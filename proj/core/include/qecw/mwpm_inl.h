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

#ifndef QECW_MWPM_INL_H
#define QECW_MWPM_INL_H

#include <cmath>
#include <stdexcept>

#include "qecw/blossom.h"

namespace qecw {

inline constexpr double kMatchingScale = 1 << 20;

template <typename PairFn, typename BoundaryFn>
PairingSolution min_weight_pairing(size_t k, PairFn pair, BoundaryFn to_boundary) {
    PairingSolution out;
    if (k == 0) {
        return out;
    }
    std::vector<PathCost> bcost(k);
    std::vector<std::vector<PathCost>> pcost(k, std::vector<PathCost>(k));
    double longest = 0;
    for (size_t i = 0; i < k; i++) {
        bcost[i] = to_boundary(i);
        if (std::isfinite(bcost[i].distance)) {
            longest = std::max(longest, bcost[i].distance);
        }
        for (size_t j = i + 1; j < k; j++) {
            pcost[i][j] = pair(i, j);
            if (std::isfinite(pcost[i][j].distance)) {
                longest = std::max(longest, pcost[i][j].distance);
            }
        }
    }
    const int64_t ceiling = std::llround(longest * kMatchingScale) + 1;
    auto scaled = [&](double d) { return ceiling - std::llround(d * kMatchingScale); };
    std::vector<MatchingEdge> edges;
    const int n = static_cast<int>(k);
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            if (std::isfinite(pcost[i][j].distance)) {
                edges.push_back({i, j, scaled(pcost[i][j].distance)});
            }
        }
        if (std::isfinite(bcost[i].distance)) {
            edges.push_back({i, n + i, scaled(bcost[i].distance)});
        }
        for (int j = i + 1; j < n; j++) {
            edges.push_back({n + i, n + j, ceiling});
        }
    }
    std::vector<int> mate = max_weight_matching(2 * n, edges, true);
    out.partner.assign(k, 0);
    for (int i = 0; i < n; i++) {
        int m = mate[i];
        if (m < 0) {
            throw std::runtime_error("no perfect matching exists for this syndrome");
        }
        if (m == n + i) {
            out.partner[i] = PairingSolution::kBoundary;
            out.weight += bcost[i].distance;
            out.flip ^= bcost[i].flips ? 1 : 0;
        } else if (m < n) {
            out.partner[i] = m;
            if (m > i) {
                out.weight += pcost[i][m].distance;
                out.flip ^= pcost[i][m].flips ? 1 : 0;
            }
        } else {
            throw std::logic_error("detector matched to a foreign boundary copy");
        }
    }
    return out;
}

template <typename PairFn, typename BoundaryFn>
uint8_t match_and_flip(size_t k, PairFn pair, BoundaryFn to_boundary) {
    return min_weight_pairing(k, pair, to_boundary).flip;
}

}  // namespace qecw

#endif
