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

#ifndef QECW_ML_ORACLE_H
#define QECW_ML_ORACLE_H

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qecw/code_layout.h"
#include "qecw/data_point.h"

namespace qecw {

/// Logical class of an error relative to the reference correction. kX flips
/// the Z label, kZ flips the X label, kY flips both. Numeric order is the
/// tie-break order.
enum class LogicalClass : uint8_t { kI = 0, kX = 1, kZ = 2, kY = 3 };

LabelSet labels_for_class(LogicalClass c);

struct CosetProbabilities {
    /// Indexed by LogicalClass.
    std::array<double, 4> p{0, 0, 0, 0};

    double total() const {
        return p[0] + p[1] + p[2] + p[3];
    }
    /// Conditional class probabilities given the syndrome; all zero when the
    /// syndrome is impossible.
    std::array<double, 4> normalized() const;
    LogicalClass most_likely() const;
};

/// Exact maximum-likelihood decoding of a rotated surface code under
/// independent single-qubit depolarizing noise with perfect stabilizer
/// readout, by enumerating all 4^n Pauli errors. Only d = 3 is accepted.
class MlOracle {
   public:
    MlOracle(const CodeLayout &layout, double p);

    /// Bit s set when stabilizer s (layout order) fires.
    uint32_t syndrome_of(std::span<const DetectorEvent> detectors) const;
    uint32_t num_syndromes() const {
        return static_cast<uint32_t>(table_.size());
    }

    const CosetProbabilities &cosets(uint32_t syndrome) const;
    LogicalClass decode(uint32_t syndrome) const;
    LabelSet decode(std::span<const DetectorEvent> detectors) const {
        return labels_for_class(decode(syndrome_of(detectors)));
    }
    LabelSet decode(const DataPoint &point) const {
        return decode(point.detectors);
    }

    /// Expected failure rate of ML decoding: sum over syndromes of
    /// (total - max class).
    double failure_rate() const;

    /// Expected failure rate of an arbitrary syndrome -> class rule.
    template <typename Rule>
    double failure_rate_of(Rule rule) const {
        double f = 0;
        for (uint32_t s = 0; s < table_.size(); s++) {
            f += table_[s].total() - table_[s].p[static_cast<int>(rule(s))];
        }
        return f;
    }

    const CodeLayout &layout() const {
        return layout_;
    }

   private:
    CodeLayout layout_;
    std::vector<CosetProbabilities> table_;
};

/// Free-function forms; each builds the table, so prefer MlOracle for repeated use.
CosetProbabilities coset_probabilities(const CodeLayout &layout, uint32_t syndrome, double p);
LogicalClass ml_decode(const CodeLayout &layout, uint32_t syndrome, double p);

}  // namespace qecw

#endif
