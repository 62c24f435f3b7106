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

#include "qecw/detector_graph.h"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace qecw {

int feature_width(FeatureMode mode) {
    switch (mode) {
        case FeatureMode::kCircuitSurface:
            return 5;
        case FeatureMode::kPerfectSurface:
            return 4;
        case FeatureMode::kRepetition:
            return 2;
    }
    return 0;
}

int head_count(FeatureMode mode) {
    return mode == FeatureMode::kRepetition ? 1 : 2;
}

const char *to_string(FeatureMode mode) {
    switch (mode) {
        case FeatureMode::kCircuitSurface:
            return "circuit";
        case FeatureMode::kPerfectSurface:
            return "perfect";
        case FeatureMode::kRepetition:
            return "repetition";
    }
    return "?";
}

std::optional<FeatureMode> parse_feature_mode(const std::string &s) {
    if (s == "circuit") {
        return FeatureMode::kCircuitSurface;
    }
    if (s == "perfect") {
        return FeatureMode::kPerfectSurface;
    }
    if (s == "repetition" || s == "rep") {
        return FeatureMode::kRepetition;
    }
    return std::nullopt;
}

std::vector<int> DetectorGraph::degrees() const {
    std::vector<int> deg(num_nodes(), 0);
    for (const auto &e : edges) {
        deg[e.a]++;
        deg[e.b]++;
    }
    return deg;
}

double edge_weight(const DetectorEvent &a, const DetectorEvent &b, FeatureMode mode) {
    int m = std::abs(a.x2 - b.x2);
    if (mode != FeatureMode::kRepetition) {
        m = std::max(m, std::abs(a.y2 - b.y2));
    }
    if (mode != FeatureMode::kPerfectSurface) {
        m = std::max(m, 2 * std::abs(a.t - b.t));
    }
    if (m == 0) {
        throw std::invalid_argument("edge_weight: detectors share a space-time coordinate");
    }
    // Coordinates are doubled, so the real distance is m / 2.
    return 4.0 / (static_cast<double>(m) * static_cast<double>(m));
}

std::vector<double> node_features(const DetectorEvent &e, FeatureMode mode) {
    const double x = e.x2 / 2.0;
    const double y = e.y2 / 2.0;
    const double t = e.t;
    const double b1 = e.type == PauliType::kX ? 1.0 : 0.0;
    const double b2 = 1.0 - b1;
    switch (mode) {
        case FeatureMode::kCircuitSurface:
            return {b1, b2, x, y, t};
        case FeatureMode::kPerfectSurface:
            return {b1, b2, x, y};
        case FeatureMode::kRepetition:
            return {x, t};
    }
    return {};
}

DetectorGraph build_graph(const DataPoint &point, FeatureMode mode, const GraphOptions &options) {
    DetectorGraph g;
    g.mode = mode;
    g.events = point.detectors;
    g.labels = point.labels;
    const size_t n = g.events.size();
    g.features.reserve(n * feature_width(mode));
    for (const auto &e : g.events) {
        auto f = node_features(e, mode);
        g.features.insert(g.features.end(), f.begin(), f.end());
    }
    if (n < 2) {
        return g;
    }

    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) { return g.events[a] < g.events[b]; });
    std::vector<uint32_t> rank(n);
    for (uint32_t k = 0; k < n; k++) {
        rank[order[k]] = k;
    }

    struct Candidate {
        double weight;
        uint32_t lo_rank;
        uint32_t hi_rank;
        uint32_t a;
        uint32_t b;
    };
    std::vector<Candidate> all;
    all.reserve(n * (n - 1) / 2);
    for (uint32_t i = 0; i < n; i++) {
        for (uint32_t j = i + 1; j < n; j++) {
            uint32_t ri = rank[i];
            uint32_t rj = rank[j];
            all.push_back({edge_weight(g.events[i], g.events[j], mode), std::min(ri, rj), std::max(ri, rj), i, j});
        }
    }
    auto heavier = [](const Candidate &x, const Candidate &y) {
        if (x.weight != y.weight) {
            return x.weight > y.weight;
        }
        if (x.lo_rank != y.lo_rank) {
            return x.lo_rank < y.lo_rank;
        }
        return x.hi_rank < y.hi_rank;
    };
    std::sort(all.begin(), all.end(), heavier);

    const int cap = options.max_degree;
    if (options.rule == DegreeCapRule::kHardCap) {
        std::vector<int> deg(n, 0);
        for (const auto &c : all) {
            if (deg[c.a] < cap && deg[c.b] < cap) {
                deg[c.a]++;
                deg[c.b]++;
                g.edges.push_back({c.a, c.b, c.weight});
            }
        }
    } else {
        std::vector<int> kept(n, 0);
        std::vector<char> keep(all.size(), 0);
        for (size_t k = 0; k < all.size(); k++) {
            const auto &c = all[k];
            if (kept[c.a] < cap) {
                kept[c.a]++;
                keep[k] = 1;
            }
            if (kept[c.b] < cap) {
                kept[c.b]++;
                keep[k] = 1;
            }
        }
        for (size_t k = 0; k < all.size(); k++) {
            if (keep[k]) {
                g.edges.push_back({all[k].a, all[k].b, all[k].weight});
            }
        }
    }
    std::sort(g.edges.begin(), g.edges.end(),
              [](const GraphEdge &x, const GraphEdge &y) { return x.a != y.a ? x.a < y.a : x.b < y.b; });
    return g;
}

}  // namespace qecw
