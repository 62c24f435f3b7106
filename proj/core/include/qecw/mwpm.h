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

#ifndef QECW_MWPM_H
#define QECW_MWPM_H

#include <cstdint>
#include <span>
#include <vector>

#include "qecw/code_layout.h"
#include "qecw/data_point.h"
#include "qecw/error_model.h"

namespace qecw {

/// Edge of a matching graph. `b` equal to the node count denotes the boundary.
struct MatchingGraphEdge {
    uint32_t a = 0;
    uint32_t b = 0;
    double probability = 0;
    double weight = 0;
    bool flips_label = false;
};

/// Detectors of one Pauli type and the edges between them.
struct MatchingGraph {
    PauliType type = PauliType::kZ;
    std::vector<DetectorEvent> nodes;  // sorted
    std::vector<MatchingGraphEdge> edges;

    uint32_t boundary() const {
        return static_cast<uint32_t>(nodes.size());
    }
    int index_of(const DetectorEvent &e) const;
};

/// Splits a DEM into per-type matching graphs. Within a type, a fault touching
/// more than two detectors is cut into consecutive pairs in detector order (an
/// odd leftover goes to the boundary) and the label flip rides on the first
/// piece. Parallel edges merge by independent-XOR of their probabilities and
/// keep the label flip of the likelier one. Edges with probability >= 0.5 get
/// weight 0 and are counted in `clamped_edges`.
std::vector<MatchingGraph> matching_graphs_from_dem(const DetectorErrorModel &dem, size_t *clamped_edges = nullptr);

/// Minimum-weight perfect matching decoder. For every graph it predicts the
/// label of the matching Pauli type (Z detectors -> Z label).
class MwpmDecoder {
   public:
    explicit MwpmDecoder(std::vector<MatchingGraph> graphs);
    static MwpmDecoder from_dem(const DetectorErrorModel &dem);

    /// Throws std::invalid_argument on a detector not in any graph and
    /// std::runtime_error when no perfect matching exists.
    LabelSet decode(std::span<const DetectorEvent> detectors) const;
    LabelSet decode(const DataPoint &point) const {
        return decode(point.detectors);
    }

    /// Flip parity for one graph given its fired node indices.
    uint8_t decode_graph(size_t graph, std::span<const uint32_t> fired) const;

    const std::vector<MatchingGraph> &graphs() const {
        return graphs_;
    }
    size_t clamped_edges() const {
        return clamped_;
    }

   private:
    struct Adjacent {
        uint32_t to;
        double weight;
        bool flips;
    };
    struct Paths {
        std::vector<double> dist;   // per node, boundary last
        std::vector<uint8_t> flip;  // label parity along the shortest path
    };
    Paths shortest_paths(size_t graph, uint32_t source) const;

    std::vector<MatchingGraph> graphs_;
    std::vector<std::vector<std::vector<Adjacent>>> adjacency_;
    std::vector<std::vector<Paths>> all_pairs_;
    size_t clamped_ = 0;
};

/// Matching with no noise model: complete graph on the fired detectors of each
/// type with 1-norm space-time distance, boundary distance to the nearest
/// boundary of the right kind. Only boundary hops flip the label.
class UninformedMwpmDecoder {
   public:
    explicit UninformedMwpmDecoder(CodeLayout layout) : layout_(std::move(layout)) {
    }
    LabelSet decode(std::span<const DetectorEvent> detectors) const;
    LabelSet decode(const DataPoint &point) const {
        return decode(point.detectors);
    }

   private:
    CodeLayout layout_;
};

/// Solves min-weight perfect matching over `k` fired detectors plus k boundary
/// copies. `pair(i, j)` and `to_boundary(i)` return distances (infinite when
/// unreachable) and the label flip of the corresponding path; the XOR of the
/// flips on the chosen matching is returned.
struct PathCost {
    double distance;
    bool flips;
};
template <typename PairFn, typename BoundaryFn>
uint8_t match_and_flip(size_t k, PairFn pair, BoundaryFn to_boundary);

/// The minimum-weight pairing itself: partner[i] is the detector matched to i
/// or kBoundary, `weight` the summed distance, `flip` as in match_and_flip.
struct PairingSolution {
    static constexpr int kBoundary = -1;
    std::vector<int> partner;
    double weight = 0;
    uint8_t flip = 0;
};
template <typename PairFn, typename BoundaryFn>
PairingSolution min_weight_pairing(size_t k, PairFn pair, BoundaryFn to_boundary);

}  // namespace qecw

#include "qecw/mwpm_inl.h"

#endif
