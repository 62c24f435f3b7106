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

#include "qecw/mwpm.h"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <queue>

namespace qecw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Graphs up to this many nodes get every shortest-path tree precomputed.
constexpr size_t kAllPairsLimit = 3000;

struct MergedEdge {
    double probability = 0;
    double flip_mass = 0;
    double keep_mass = 0;
};

}  // namespace

int MatchingGraph::index_of(const DetectorEvent &e) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), e);
    if (it == nodes.end() || *it != e) {
        return -1;
    }
    return static_cast<int>(it - nodes.begin());
}

std::vector<MatchingGraph> matching_graphs_from_dem(const DetectorErrorModel &dem, size_t *clamped_edges) {
    std::vector<MatchingGraph> graphs;
    std::vector<int> graph_of_type(2, -1);
    std::vector<uint32_t> local(dem.detectors.size());
    for (PauliType type : {PauliType::kX, PauliType::kZ}) {
        MatchingGraph g;
        g.type = type;
        for (size_t k = 0; k < dem.detectors.size(); k++) {
            if (dem.detectors[k].type == type) {
                local[k] = static_cast<uint32_t>(g.nodes.size());
                g.nodes.push_back(dem.detectors[k]);
            }
        }
        if (!g.nodes.empty()) {
            graph_of_type[static_cast<int>(type)] = static_cast<int>(graphs.size());
            graphs.push_back(std::move(g));
        }
    }

    std::vector<std::map<std::pair<uint32_t, uint32_t>, MergedEdge>> merged(graphs.size());
    auto add = [&](size_t gi, uint32_t a, uint32_t b, double q, bool flips) {
        if (a > b) {
            std::swap(a, b);
        }
        auto &e = merged[gi][{a, b}];
        e.probability = xor_probability(e.probability, q);
        (flips ? e.flip_mass : e.keep_mass) += q;
    };
    for (const auto &entry : dem.entries) {
        if (entry.probability <= 0) {
            continue;
        }
        for (size_t gi = 0; gi < graphs.size(); gi++) {
            const PauliType type = graphs[gi].type;
            std::vector<uint32_t> part;
            for (uint32_t d : entry.detectors) {
                if (dem.detectors[d].type == type) {
                    part.push_back(local[d]);
                }
            }
            if (part.empty()) {
                continue;
            }
            std::sort(part.begin(), part.end());
            const bool flips = (entry.observables >> static_cast<int>(label_for_detector_type(type))) & 1;
            const uint32_t boundary = graphs[gi].boundary();
            bool first = true;
            size_t i = 0;
            for (; i + 1 < part.size(); i += 2) {
                add(gi, part[i], part[i + 1], entry.probability, first && flips);
                first = false;
            }
            if (i < part.size()) {
                add(gi, part[i], boundary, entry.probability, first && flips);
            }
        }
    }
    size_t clamped = 0;
    for (size_t gi = 0; gi < graphs.size(); gi++) {
        for (const auto &[key, e] : merged[gi]) {
            MatchingGraphEdge edge;
            edge.a = key.first;
            edge.b = key.second;
            edge.probability = e.probability;
            edge.flips_label = e.flip_mass > e.keep_mass;
            if (e.probability >= 0.5) {
                edge.weight = 0;
                clamped++;
            } else {
                edge.weight = std::log((1 - e.probability) / e.probability);
            }
            graphs[gi].edges.push_back(edge);
        }
    }
    if (clamped_edges) {
        *clamped_edges = clamped;
    }
    return graphs;
}

MwpmDecoder::MwpmDecoder(std::vector<MatchingGraph> graphs) : graphs_(std::move(graphs)) {
    adjacency_.resize(graphs_.size());
    all_pairs_.resize(graphs_.size());
    for (size_t gi = 0; gi < graphs_.size(); gi++) {
        const auto &g = graphs_[gi];
        auto &adj = adjacency_[gi];
        adj.assign(g.nodes.size() + 1, {});
        for (const auto &e : g.edges) {
            if (e.a > g.boundary() || e.b > g.boundary() || e.a == e.b) {
                throw std::invalid_argument("matching graph edge out of range");
            }
            if (!(e.weight >= 0)) {
                throw std::invalid_argument("matching graph edge weights must be non-negative");
            }
            if (e.probability >= 0.5) {
                clamped_++;
            }
            adj[e.a].push_back({e.b, e.weight, e.flips_label});
            adj[e.b].push_back({e.a, e.weight, e.flips_label});
        }
        if (g.nodes.size() <= kAllPairsLimit) {
            for (uint32_t s = 0; s < g.nodes.size(); s++) {
                all_pairs_[gi].push_back(shortest_paths(gi, s));
            }
        }
    }
}

MwpmDecoder MwpmDecoder::from_dem(const DetectorErrorModel &dem) {
    return MwpmDecoder(matching_graphs_from_dem(dem));
}

MwpmDecoder::Paths MwpmDecoder::shortest_paths(size_t graph, uint32_t source) const {
    const auto &adj = adjacency_[graph];
    const uint32_t boundary = graphs_[graph].boundary();
    Paths p;
    p.dist.assign(adj.size(), kInf);
    p.flip.assign(adj.size(), 0);
    using Item = std::pair<double, uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    p.dist[source] = 0;
    heap.push({0, source});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > p.dist[u]) {
            continue;
        }
        // Paths end at the boundary; they never pass through it.
        if (u == boundary) {
            continue;
        }
        for (const auto &a : adj[u]) {
            double nd = d + a.weight;
            if (nd < p.dist[a.to]) {
                p.dist[a.to] = nd;
                p.flip[a.to] = p.flip[u] ^ (a.flips ? 1 : 0);
                heap.push({nd, a.to});
            }
        }
    }
    return p;
}

uint8_t MwpmDecoder::decode_graph(size_t graph, std::span<const uint32_t> fired) const {
    const uint32_t boundary = graphs_[graph].boundary();
    std::vector<Paths> local;
    const std::vector<Paths> *trees = &all_pairs_[graph];
    if (trees->empty() && !fired.empty()) {
        for (uint32_t s : fired) {
            local.push_back(shortest_paths(graph, s));
        }
    }
    auto tree = [&](size_t i) -> const Paths & { return trees->empty() ? local[i] : (*trees)[fired[i]]; };
    return match_and_flip(
        fired.size(),
        [&](size_t i, size_t j) {
            const Paths &t = tree(i);
            return PathCost{t.dist[fired[j]], t.flip[fired[j]] != 0};
        },
        [&](size_t i) {
            const Paths &t = tree(i);
            return PathCost{t.dist[boundary], t.flip[boundary] != 0};
        });
}

LabelSet MwpmDecoder::decode(std::span<const DetectorEvent> detectors) const {
    std::vector<std::vector<uint32_t>> fired(graphs_.size());
    for (const auto &e : detectors) {
        bool found = false;
        for (size_t gi = 0; gi < graphs_.size() && !found; gi++) {
            if (graphs_[gi].type != e.type) {
                continue;
            }
            int idx = graphs_[gi].index_of(e);
            if (idx >= 0) {
                fired[gi].push_back(static_cast<uint32_t>(idx));
                found = true;
            }
        }
        if (!found) {
            throw std::invalid_argument("detector not present in the matching graph");
        }
    }
    LabelSet out;
    for (size_t gi = 0; gi < graphs_.size(); gi++) {
        std::sort(fired[gi].begin(), fired[gi].end());
        // A repeated detector cancels out.
        std::vector<uint32_t> odd;
        for (size_t k = 0; k < fired[gi].size();) {
            size_t j = k;
            while (j < fired[gi].size() && fired[gi][j] == fired[gi][k]) {
                j++;
            }
            if ((j - k) & 1) {
                odd.push_back(fired[gi][k]);
            }
            k = j;
        }
        out.set(label_for_detector_type(graphs_[gi].type), decode_graph(gi, odd));
    }
    return out;
}

LabelSet UninformedMwpmDecoder::decode(std::span<const DetectorEvent> detectors) const {
    LabelSet out;
    for (PauliType type : {PauliType::kX, PauliType::kZ}) {
        if (layout_.count(type) == 0) {
            continue;
        }
        std::vector<DetectorEvent> fired;
        for (const auto &e : detectors) {
            if (e.type == type) {
                fired.push_back(e);
            }
        }
        uint8_t flip = match_and_flip(
            fired.size(),
            [&](size_t i, size_t j) {
                const auto &a = fired[i];
                const auto &b = fired[j];
                double d = (std::abs(a.x2 - b.x2) + std::abs(a.y2 - b.y2)) / 2.0 + std::abs(a.t - b.t);
                return PathCost{d, false};
            },
            [&](size_t i) {
                BoundaryHop hop = nearest_boundary(layout_, type, {fired[i].x2, fired[i].y2});
                return PathCost{static_cast<double>(hop.distance), hop.flips_logical};
            });
        out.set(label_for_detector_type(type), flip);
    }
    return out;
}

}  // namespace qecw
