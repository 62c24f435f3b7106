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

#include "qecw/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qecw {

namespace {

constexpr char kMagic[4] = {'Q', 'G', 'N', 'N'};
constexpr uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

template <typename T>
void put(std::ostream &out, T v) {
    out.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T>
T get(std::istream &in) {
    T v;
    in.read(reinterpret_cast<char *>(&v), sizeof(T));
    if (!in) {
        throw std::runtime_error("checkpoint truncated");
    }
    return v;
}

void put_tensors(std::ostream &out, const gnn::Model<float> &m) {
    for (const auto *t : m.tensors()) {
        put<uint32_t>(out, static_cast<uint32_t>(t->rows()));
        put<uint32_t>(out, static_cast<uint32_t>(t->cols()));
        out.write(reinterpret_cast<const char *>(t->data()), static_cast<std::streamsize>(t->size() * sizeof(float)));
    }
}

void get_tensors(std::istream &in, gnn::Model<float> &m) {
    for (auto *t : m.tensors()) {
        uint32_t rows = get<uint32_t>(in);
        uint32_t cols = get<uint32_t>(in);
        if (rows != t->rows() || cols != t->cols()) {
            throw std::runtime_error("checkpoint tensor shape does not match its architecture");
        }
        in.read(reinterpret_cast<char *>(t->data()), static_cast<std::streamsize>(t->size() * sizeof(float)));
        if (!in) {
            throw std::runtime_error("checkpoint truncated");
        }
    }
}

std::vector<int> get_widths(std::istream &in) {
    uint32_t n = get<uint32_t>(in);
    if (n == 0 || n > 1024) {
        throw std::runtime_error("checkpoint has an implausible layer count");
    }
    std::vector<int> w(n);
    for (auto &x : w) {
        uint32_t v = get<uint32_t>(in);
        if (v == 0 || v > (1u << 20)) {
            throw std::runtime_error("checkpoint has an implausible layer width");
        }
        x = static_cast<int>(v);
    }
    return w;
}

}  // namespace

void write_checkpoint(std::ostream &out, const Checkpoint &ckpt) {
    const auto &arch = ckpt.model.arch;
    out.write(kMagic, 4);
    put<uint32_t>(out, kVersion);
    put<uint8_t>(out, static_cast<uint8_t>(arch.mode));
    put<uint8_t>(out, static_cast<uint8_t>(arch.heads()));
    put<uint8_t>(out, static_cast<uint8_t>(arch.rule));
    put<uint8_t>(out, ckpt.optimizer ? 1 : 0);
    put<uint32_t>(out, static_cast<uint32_t>(arch.conv_widths.size()));
    for (int w : arch.conv_widths) {
        put<uint32_t>(out, static_cast<uint32_t>(w));
    }
    put<uint32_t>(out, static_cast<uint32_t>(arch.head_widths.size()));
    for (int w : arch.head_widths) {
        put<uint32_t>(out, static_cast<uint32_t>(w));
    }
    put_tensors(out, ckpt.model);
    if (ckpt.optimizer) {
        const auto &opt = *ckpt.optimizer;
        put<uint64_t>(out, opt.step);
        put<double>(out, opt.hyper.lr);
        put<double>(out, opt.hyper.beta1);
        put<double>(out, opt.hyper.beta2);
        put<double>(out, opt.hyper.eps);
        put_tensors(out, opt.m);
        put_tensors(out, opt.v);
    }
    if (!out) {
        throw std::runtime_error("failed writing checkpoint");
    }
}

void save_checkpoint(const std::string &path, const Checkpoint &ckpt) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    write_checkpoint(out, ckpt);
}

Checkpoint read_checkpoint(std::istream &in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("not a model checkpoint (bad magic)");
    }
    uint32_t version = get<uint32_t>(in);
    if (version != kVersion) {
        throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
    }
    uint8_t mode = get<uint8_t>(in);
    if (mode > static_cast<uint8_t>(FeatureMode::kRepetition)) {
        throw std::runtime_error("checkpoint has an unknown feature mode");
    }
    uint8_t heads = get<uint8_t>(in);
    uint8_t rule = get<uint8_t>(in);
    if (rule > static_cast<uint8_t>(gnn::ConvRule::kSelfFeatures)) {
        throw std::runtime_error("checkpoint has an unknown convolution rule");
    }
    uint8_t has_opt = get<uint8_t>(in);
    gnn::Architecture arch;
    arch.mode = static_cast<FeatureMode>(mode);
    arch.rule = static_cast<gnn::ConvRule>(rule);
    if (heads != arch.heads()) {
        throw std::runtime_error("checkpoint head count does not match its feature mode");
    }
    arch.conv_widths = get_widths(in);
    arch.head_widths = get_widths(in);
    Checkpoint ckpt;
    try {
        ckpt.model = gnn::Model<float>::zeros(arch);
    } catch (const std::invalid_argument &e) {
        throw std::runtime_error(std::string("checkpoint architecture invalid: ") + e.what());
    }
    get_tensors(in, ckpt.model);
    if (has_opt) {
        auto opt = gnn::AdamState<float>::for_model(ckpt.model);
        opt.step = get<uint64_t>(in);
        opt.hyper.lr = get<double>(in);
        opt.hyper.beta1 = get<double>(in);
        opt.hyper.beta2 = get<double>(in);
        opt.hyper.eps = get<double>(in);
        get_tensors(in, opt.m);
        get_tensors(in, opt.v);
        ckpt.optimizer = std::move(opt);
    }
    return ckpt;
}

Checkpoint load_checkpoint(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open checkpoint " + path);
    }
    return read_checkpoint(in);
}

}  // namespace qecw
