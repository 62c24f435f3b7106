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

#ifndef QECW_CHECKPOINT_H
#define QECW_CHECKPOINT_H

#include <iosfwd>
#include <optional>
#include <string>

#include "qecw/gnn.h"

namespace qecw {

// Binary checkpoint, little-endian:
//   "QGNN" u32 version u8 feature_mode u8 heads u8 conv_rule u8 has_optimizer
//   u32 n_conv, u32 widths...; u32 n_dense, u32 widths...
//   tensors in Model::tensors() order, each u32 rows u32 cols then f32 data
//   if has_optimizer: u64 step f64 lr beta1 beta2 eps, then m and v tensors

struct Checkpoint {
    gnn::Model<float> model;
    std::optional<gnn::AdamState<float>> optimizer;
};

void write_checkpoint(std::ostream &out, const Checkpoint &ckpt);
void save_checkpoint(const std::string &path, const Checkpoint &ckpt);

/// Throws std::runtime_error on a bad magic, unsupported version, truncated
/// stream or inconsistent tensor shape.
Checkpoint read_checkpoint(std::istream &in);
Checkpoint load_checkpoint(const std::string &path);

}  // namespace qecw

#endif
