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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "qecw/frame_simulator.h"

using namespace qecw;

namespace {

// Plain greedy reference: repeatedly scan every pair for the heaviest
// admissible candidate, ties going to the lexicographically smaller pair of
// sorted-order positions.
std::vector<std::pair<DetectorEvent, DetectorEvent>> reference_edges(std::vector<DetectorEvent> events,
                                                                     FeatureMode mode, int cap) {
    std::sort(events.begin(), events.end());
    const size_t n = events.size();
    std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
    std::vector<int> deg(n, 0);
    std::vector<std::pair<DetectorEvent, DetectorEvent>> out;
    while (true) {
        int bi = -1;
        int bj = -1;
        double bw = -1;
        for (size_t i = 0; i < n; i++) {
            for (size_t j = i + 1; j < n; j++) {
                if (used[i][j]) {
                    continue;
                }
                double w = edge_weight(events[i], events[j], mode);
                if (w > bw) {
                    bw = w;
                    bi = static_cast<int>(i);
                    bj = static_cast<int>(j);
                }
            }
        }
        if (bi < 0) {
            break;
        }
        used[bi][bj] = true;
        if (deg[bi] < cap && deg[bj] < cap) {
            deg[bi]++;
            deg[bj]++;
            out.push_back({events[bi], events[bj]});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<DetectorEvent, DetectorEvent>> edges_by_event(const DetectorGraph &g) {
    std::vector<std::pair<DetectorEvent, DetectorEvent>> out;
    for (const auto &e : g.edges) {
        auto a = g.events[e.a];
        auto b = g.events[e.b];
        out.push_back(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
    }
    std::sort(out.begin(), out.end());
    return out;
}

DataPoint point_of(std::vector<DetectorEvent> events) {
    DataPoint dp;
    dp.detectors = std::move(events);
    dp.labels.set(LabelKind::kZ, 1);
    return dp;
}

}  // namespace

TEST(detector_graph, edge_weight_examples) {
    // Grid (1,1,1) and (1,2,3): doubled (2,2) and (2,4).
    EXPECT_DOUBLE_EQ(edge_weight({PauliType::kZ, 2, 2, 1}, {PauliType::kZ, 2, 4, 3}, FeatureMode::kCircuitSurface),
                     0.25);
    EXPECT_DOUBLE_EQ(edge_weight({PauliType::kZ, 1, 2, 1}, {PauliType::kX, 2, 2, 1}, FeatureMode::kCircuitSurface),
                     4.0);
    EXPECT_THROW(edge_weight({PauliType::kZ, 1, 2, 1}, {PauliType::kX, 1, 2, 1}, FeatureMode::kCircuitSurface),
                 std::invalid_argument);
    // Perfect mode ignores t; repetition ignores y.
    EXPECT_DOUBLE_EQ(edge_weight({PauliType::kZ, 1, 1, 1}, {PauliType::kZ, 3, 1, 9}, FeatureMode::kPerfectSurface),
                     1.0);
    EXPECT_DOUBLE_EQ(edge_weight({PauliType::kZ, 1, 0, 1}, {PauliType::kZ, 1, 8, 2}, FeatureMode::kRepetition), 1.0);
}

TEST(detector_graph, node_features) {
    DetectorEvent e{PauliType::kX, 3, 5, 2};
    EXPECT_EQ(node_features(e, FeatureMode::kCircuitSurface), (std::vector<double>{1, 0, 1.5, 2.5, 2}));
    EXPECT_EQ(node_features(e, FeatureMode::kPerfectSurface), (std::vector<double>{1, 0, 1.5, 2.5}));
    DetectorEvent r{PauliType::kZ, 7, 0, 4};
    EXPECT_EQ(node_features(r, FeatureMode::kRepetition), (std::vector<double>{3.5, 4}));
    EXPECT_EQ(node_features(r, FeatureMode::kCircuitSurface)[1], 1.0);
}

TEST(detector_graph, small_graphs) {
    DetectorGraph g0 = build_graph(point_of({}), FeatureMode::kCircuitSurface);
    EXPECT_EQ(g0.num_nodes(), 0u);
    EXPECT_TRUE(g0.edges.empty());
    EXPECT_EQ(g0.labels.get(LabelKind::kZ), 1);

    DetectorGraph g2 =
        build_graph(point_of({{PauliType::kZ, 2, 2, 1}, {PauliType::kZ, 2, 4, 3}}), FeatureMode::kCircuitSurface);
    ASSERT_EQ(g2.edges.size(), 1u);
    EXPECT_DOUBLE_EQ(g2.edges[0].weight, 0.25);
    EXPECT_EQ(g2.features.size(), 10u);
}

TEST(detector_graph, equidistant_cube_matches_greedy_reference) {
    // The 8 corners of a unit cube in (x, y, t) are pairwise at sup distance 1.
    std::vector<DetectorEvent> events;
    for (int x = 0; x < 2; x++) {
        for (int y = 0; y < 2; y++) {
            for (int t = 1; t <= 2; t++) {
                events.push_back({PauliType::kZ, 2 * x + 1, 2 * y + 1, t});
            }
        }
    }
    DetectorGraph g = build_graph(point_of(events), FeatureMode::kCircuitSurface);
    auto want = reference_edges(events, FeatureMode::kCircuitSurface, 6);
    EXPECT_EQ(edges_by_event(g), want);
    // Greedy admission in lexicographic order strands the last nodes below the
    // cap: 21 of the 24 edges a 6-regular graph would have.
    EXPECT_EQ(g.edges.size(), 21u);
    for (int d : g.degrees()) {
        EXPECT_LE(d, 6);
    }
    for (const auto &e : g.edges) {
        EXPECT_DOUBLE_EQ(e.weight, 4.0 / 4.0);
    }
}

TEST(detector_graph, random_points_match_reference_and_cap) {
    CodeLayout layout = build_rotated_surface(5);
    Circuit c = build_memory_circuit(layout, 5, Basis::kZ, NoiseParams::uniform(0.01));
    size_t checked = 0;
    for (const auto &dp : sample_shots(c, 4, 300)) {
        DetectorGraph g = build_graph(dp, FeatureMode::kCircuitSurface);
        for (int d : g.degrees()) {
            ASSERT_LE(d, 6);
        }
        for (const auto &e : g.edges) {
            ASSERT_LT(e.a, e.b);
            ASSERT_EQ(e.weight, edge_weight(g.events[e.a], g.events[e.b], g.mode));
        }
        if (dp.detectors.size() <= 40) {
            EXPECT_EQ(edges_by_event(g), reference_edges(dp.detectors, FeatureMode::kCircuitSurface, 6));
            checked++;
        }
    }
    EXPECT_GT(checked, 100u);
}

TEST(detector_graph, permutation_gives_isomorphic_graph) {
    Circuit c = build_memory_circuit(build_rotated_surface(5), 5, Basis::kZ, NoiseParams::uniform(0.01));
    std::mt19937_64 gen(3);
    for (const auto &dp : sample_shots(c, 6, 50)) {
        DataPoint shuffled = dp;
        std::shuffle(shuffled.detectors.begin(), shuffled.detectors.end(), gen);
        DetectorGraph a = build_graph(dp, FeatureMode::kCircuitSurface);
        DetectorGraph b = build_graph(shuffled, FeatureMode::kCircuitSurface);
        EXPECT_EQ(edges_by_event(a), edges_by_event(b));
        EXPECT_EQ(b.events, shuffled.detectors);
    }
}

TEST(detector_graph, per_node_top_k_can_exceed_cap) {
    // A hub at the centre of a cube whose 8 corners are twice as far from each
    // other as from the hub: every corner keeps its hub edge.
    std::vector<DetectorEvent> events{{PauliType::kZ, 5, 5, 3}};
    for (int x : {1, 9}) {
        for (int y : {1, 9}) {
            for (int t : {1, 5}) {
                events.push_back({PauliType::kZ, x, y, t});
            }
        }
    }
    GraphOptions topk{6, DegreeCapRule::kPerNodeTopK};
    DetectorGraph g = build_graph(point_of(events), FeatureMode::kCircuitSurface, topk);
    EXPECT_EQ(g.degrees()[0], 8);
    DetectorGraph h = build_graph(point_of(events), FeatureMode::kCircuitSurface);
    auto deg = h.degrees();
    EXPECT_EQ(deg[0], 6);
    EXPECT_LE(*std::max_element(deg.begin(), deg.end()), 6);
}
