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

#ifndef QECW_DETECTOR_GRAPH_H
#define QECW_DETECTOR_GRAPH_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qecw/data_point.h"

namespace qecw {

/// Node annotation layout.
///   kCircuitSurface: (b1, b2, x, y, t)
///   kPerfectSurface: (b1, b2, x, y)
///   kRepetition:     (x, t)
/// (b1, b2) = (1, 0) for an X detector and (0, 1) for a Z detector.
enum class FeatureMode : uint8_t { kCircuitSurface = 0, kPerfectSurface = 1, kRepetition = 2 };

int feature_width(FeatureMode mode);
int head_count(FeatureMode mode);
const char *to_string(FeatureMode mode);
std::optional<FeatureMode> parse_feature_mode(const std::string &s);

struct GraphEdge {
    uint32_t a = 0;
    uint32_t b = 0;
    double weight = 0;
    bool operator==(const GraphEdge &) const = default;
};

struct DetectorGraph {
    FeatureMode mode = FeatureMode::kCircuitSurface;
    std::vector<DetectorEvent> events;
    /// Row-major, events.size() x feature_width(mode).
    std::vector<double> features;
    /// Undirected, a < b, sorted.
    std::vector<GraphEdge> edges;
    LabelSet labels;

    size_t num_nodes() const {
        return events.size();
    }
    int width() const {
        return feature_width(mode);
    }
    std::vector<int> degrees() const;
};

enum class DegreeCapRule : uint8_t {
    /// Global greedy admission by descending weight; both endpoints must have
    /// spare degree. Guarantees max degree <= cap.
    kHardCap,
    /// Each node keeps its `cap` heaviest edges; the union is retained, so
    /// receiving nodes may exceed the cap.
    kPerNodeTopK,
};

struct GraphOptions {
    int max_degree = 6;
    DegreeCapRule rule = DegreeCapRule::kHardCap;
};

/// Inverse square sup-norm distance between two detectors. The y term is
/// dropped for the repetition code and the t term for perfect stabilizers.
/// Throws std::invalid_argument on coincident coordinates.
double edge_weight(const DetectorEvent &a, const DetectorEvent &b, FeatureMode mode);

std::vector<double> node_features(const DetectorEvent &e, FeatureMode mode);

/// Builds the degree-capped detector graph. Node order follows the input
/// detector order; weight ties are broken on the sorted-event rank of the
/// endpoints, so the edge set does not depend on input order.
DetectorGraph build_graph(const DataPoint &point, FeatureMode mode, const GraphOptions &options = {});

}  // namespace qecw

#endif
