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

#ifndef QECW_RNG_H
#define QECW_RNG_H

#include <cmath>
#include <cstdint>
#include <limits>

namespace qecw {

inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based 64-bit generator. Output n of stream (seed, stream) is a pure
/// function of those three values, so independent workers can carve
/// non-overlapping streams out of one master seed with `split`.
class Rng {
   public:
    using result_type = uint64_t;

    explicit Rng(uint64_t seed, uint64_t stream = 0)
        : key_(mix64(seed ^ 0x9e3779b97f4a7c15ULL) ^ mix64(stream + 0x632be59bd9b4e019ULL)) {
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<uint64_t>::max();
    }

    result_type operator()() {
        return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<unsigned __int128>((*this)()) * n) >> 64);
    }

    Rng split(uint64_t stream) const {
        return Rng(key_, stream);
    }

    uint64_t counter() const {
        return counter_;
    }

   private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

/// Draws a 64-lane mask where each lane is set independently with probability p.
/// Uses geometric gaps between set lanes, so the cost scales with 64 * p.
inline uint64_t bernoulli_word(Rng &rng, double p) {
    if (p <= 0) {
        return 0;
    }
    if (p >= 1) {
        return ~uint64_t{0};
    }
    const double log_q = std::log1p(-p);
    uint64_t mask = 0;
    double pos = -1;
    while (true) {
        double u = rng.uniform();
        // 1 - u lies in (0, 1], so the log is finite.
        pos += 1 + std::floor(std::log1p(-u) / log_q);
        if (pos >= 64) {
            break;
        }
        mask |= uint64_t{1} << static_cast<int>(pos);
    }
    return mask;
}

}  // namespace qecw

#endif
