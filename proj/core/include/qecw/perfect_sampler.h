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

#ifndef QECW_PERFECT_SAMPLER_H
#define QECW_PERFECT_SAMPLER_H

#include <cstdint>
#include <span>
#include <vector>

#include "qecw/code_layout.h"
#include "qecw/data_point.h"

namespace qecw {

// Perfect-stabilizer sampling: one round of single-qubit depolarizing noise on
// every data qubit followed by a noiseless stabilizer readout. Both labels are
// known exactly. Detectors carry t = 1.

/// DataPoint produced by an explicit error with X part `x_errors` and Z part
/// `z_errors` (one byte per data qubit).
DataPoint perfect_data_point(const CodeLayout &layout, std::span<const uint8_t> x_errors,
                             std::span<const uint8_t> z_errors);

/// Shot i is lane i % 64 of block i / 64, block b drawing from Rng(seed, b).
std::vector<DataPoint> sample_perfect_shots(const CodeLayout &layout, double p, uint64_t seed, size_t shots);

DataPoint sample_perfect(const CodeLayout &layout, double p, uint64_t seed);

}  // namespace qecw

#endif
