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

#include "qecw/blossom.h"

#include <gtest/gtest.h>

#include <random>

using namespace qecw;

namespace {

struct Score {
    int cardinality = 0;
    int64_t weight = 0;
};

// Exhaustive search over all matchings by recursion on the lowest vertex.
void brute(int n, const std::vector<std::vector<int64_t>> &w, std::vector<bool> &used, int from, Score cur,
           bool maxcard, Score &best) {
    int v = from;
    while (v < n && used[v]) {
        v++;
    }
    if (v == n) {
        bool better = maxcard ? (cur.cardinality > best.cardinality ||
                                 (cur.cardinality == best.cardinality && cur.weight > best.weight))
                              : cur.weight > best.weight;
        if (better) {
            best = cur;
        }
        return;
    }
    used[v] = true;
    brute(n, w, used, v + 1, cur, maxcard, best);  // v stays single
    for (int u = v + 1; u < n; u++) {
        if (!used[u] && w[v][u] != INT64_MIN) {
            used[u] = true;
            brute(n, w, used, v + 1, {cur.cardinality + 1, cur.weight + w[v][u]}, maxcard, best);
            used[u] = false;
        }
    }
    used[v] = false;
}

}  // namespace

TEST(blossom, trivial_cases) {
    EXPECT_EQ(max_weight_matching(0, {}, false), std::vector<int>{});
    EXPECT_EQ(max_weight_matching(3, {}, true), (std::vector<int>{-1, -1, -1}));
    std::vector<MatchingEdge> one{{0, 1, 5}};
    EXPECT_EQ(max_weight_matching(2, one, false), (std::vector<int>{1, 0}));
    // A negative edge is left out unless cardinality is demanded.
    std::vector<MatchingEdge> neg{{0, 1, -5}};
    EXPECT_EQ(max_weight_matching(2, neg, false), (std::vector<int>{-1, -1}));
    EXPECT_EQ(max_weight_matching(2, neg, true), (std::vector<int>{1, 0}));
}

TEST(blossom, path_prefers_heavy_ends) {
    // 0-1 (5), 1-2 (8), 2-3 (5): the two end edges (10) beat the middle one.
    std::vector<MatchingEdge> e{{0, 1, 5}, {1, 2, 8}, {2, 3, 5}};
    EXPECT_EQ(max_weight_matching(4, e, false), (std::vector<int>{1, 0, 3, 2}));
    std::vector<MatchingEdge> f{{0, 1, 3}, {1, 2, 8}, {2, 3, 3}};
    EXPECT_EQ(max_weight_matching(4, f, false), (std::vector<int>{-1, 2, 1, -1}));
    EXPECT_EQ(max_weight_matching(4, f, true), (std::vector<int>{1, 0, 3, 2}));
}

TEST(blossom, odd_cycle_blossom) {
    // Triangle 0-1-2 with a pendant at 2: the optimum uses the triangle's
    // cheapest edge only after contracting it into a blossom.
    std::vector<MatchingEdge> e{{0, 1, 8}, {0, 2, 9}, {1, 2, 10}, {2, 3, 7}};
    EXPECT_EQ(max_weight_matching(4, e, false), (std::vector<int>{1, 0, 3, 2}));
    // Growing the blossom further forces an augmentation through it.
    e.push_back({0, 5, 5});
    e.push_back({3, 4, 6});
    EXPECT_EQ(max_weight_matching(6, e, false), (std::vector<int>{5, 2, 1, 4, 3, 0}));
}

TEST(blossom, matches_brute_force_on_random_graphs) {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 1500; trial++) {
        const int n = 2 + static_cast<int>(gen() % 9);
        const double density = 0.3 + 0.7 * static_cast<double>(gen() % 100) / 100.0;
        std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, INT64_MIN));
        std::vector<MatchingEdge> edges;
        const int64_t span = trial % 3 == 0 ? 4 : 1000;  // small spans create ties
        for (int u = 0; u < n; u++) {
            for (int v = u + 1; v < n; v++) {
                if (static_cast<double>(gen() % 1000) / 1000.0 < density) {
                    int64_t x = static_cast<int64_t>(gen() % span) - (trial % 5 == 0 ? span / 3 : 0);
                    w[u][v] = w[v][u] = x;
                    edges.push_back({u, v, x});
                }
            }
        }
        for (bool maxcard : {false, true}) {
            auto mate = max_weight_matching(n, edges, maxcard);
            ASSERT_EQ(static_cast<int>(mate.size()), n);
            Score got;
            for (int v = 0; v < n; v++) {
                if (mate[v] >= 0) {
                    ASSERT_EQ(mate[mate[v]], v);
                    ASSERT_NE(w[v][mate[v]], INT64_MIN);
                    if (v < mate[v]) {
                        got.cardinality++;
                        got.weight += w[v][mate[v]];
                    }
                }
            }
            Score best{0, 0};
            std::vector<bool> used(n, false);
            brute(n, w, used, 0, {0, 0}, maxcard, best);
            ASSERT_EQ(got.weight, best.weight) << "trial " << trial << " maxcard " << maxcard;
            if (maxcard) {
                ASSERT_EQ(got.cardinality, best.cardinality) << "trial " << trial;
            }
        }
    }
}

TEST(blossom, large_complete_graph_is_perfect) {
    std::mt19937_64 gen(5);
    const int n = 60;
    std::vector<MatchingEdge> edges;
    for (int u = 0; u < n; u++) {
        for (int v = u + 1; v < n; v++) {
            edges.push_back({u, v, static_cast<int64_t>(gen() % 100000)});
        }
    }
    auto mate = max_weight_matching(n, edges, true);
    for (int v = 0; v < n; v++) {
        ASSERT_GE(mate[v], 0);
        EXPECT_EQ(mate[mate[v]], v);
    }
}
