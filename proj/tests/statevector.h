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

#ifndef QECW_TESTS_STATEVECTOR_H
#define QECW_TESTS_STATEVECTOR_H

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "qecw/circuit.h"

namespace qecw::testing {

// Dense state-vector simulator for tiny circuits. Noise instructions are
// skipped; one Pauli can be injected after a chosen instruction. Random
// measurement outcomes take the 0 branch when it has weight.
class StateVector {
   public:
    explicit StateVector(uint32_t n) : n_(n), amp_(size_t{1} << n, 0) {
        amp_[0] = 1;
    }

    void h(uint32_t q) {
        const double r = 1 / std::sqrt(2.0);
        const size_t bit = size_t{1} << q;
        for (size_t i = 0; i < amp_.size(); i++) {
            if (!(i & bit)) {
                auto a = amp_[i];
                auto b = amp_[i | bit];
                amp_[i] = r * (a + b);
                amp_[i | bit] = r * (a - b);
            }
        }
    }
    void cnot(uint32_t c, uint32_t t) {
        const size_t cb = size_t{1} << c;
        const size_t tb = size_t{1} << t;
        for (size_t i = 0; i < amp_.size(); i++) {
            if ((i & cb) && !(i & tb)) {
                std::swap(amp_[i], amp_[i | tb]);
            }
        }
    }
    void x(uint32_t q) {
        const size_t bit = size_t{1} << q;
        for (size_t i = 0; i < amp_.size(); i++) {
            if (!(i & bit)) {
                std::swap(amp_[i], amp_[i | bit]);
            }
        }
    }
    void z(uint32_t q) {
        const size_t bit = size_t{1} << q;
        for (size_t i = 0; i < amp_.size(); i++) {
            if (i & bit) {
                amp_[i] = -amp_[i];
            }
        }
    }
    void pauli(uint32_t q, uint8_t bits) {
        if (bits & 1) {
            x(q);
        }
        if (bits & 2) {
            z(q);
        }
    }
    uint8_t measure(uint32_t q) {
        const size_t bit = size_t{1} << q;
        double p0 = 0;
        for (size_t i = 0; i < amp_.size(); i++) {
            if (!(i & bit)) {
                p0 += std::norm(amp_[i]);
            }
        }
        const uint8_t outcome = p0 > 1e-9 ? 0 : 1;
        const double keep = outcome ? 1 - p0 : p0;
        const double s = 1 / std::sqrt(keep);
        for (size_t i = 0; i < amp_.size(); i++) {
            bool one = (i & bit) != 0;
            amp_[i] = (one == (outcome != 0)) ? amp_[i] * s : 0;
        }
        return outcome;
    }
    void reset(uint32_t q) {
        if (measure(q)) {
            x(q);
        }
    }

   private:
    uint32_t n_;
    std::vector<std::complex<double>> amp_;
};

struct InjectedPauli {
    int instruction = -1;
    std::vector<std::pair<uint32_t, uint8_t>> paulis;  // (qubit, bits)
};

// Measurement record of a noiseless run with an optional injected Pauli.
inline std::vector<uint8_t> run_statevector(const Circuit &c, const InjectedPauli &inject) {
    StateVector sv(c.num_qubits);
    std::vector<uint8_t> record;
    for (size_t k = 0; k < c.instructions.size(); k++) {
        const auto &ins = c.instructions[k];
        const auto &t = ins.targets;
        switch (ins.gate) {
            case Gate::kH:
                for (uint32_t q : t) {
                    sv.h(q);
                }
                break;
            case Gate::kCnot:
                for (size_t i = 0; i + 1 < t.size(); i += 2) {
                    sv.cnot(t[i], t[i + 1]);
                }
                break;
            case Gate::kMeasure:
                for (uint32_t q : t) {
                    record.push_back(sv.measure(q));
                }
                break;
            case Gate::kReset:
                for (uint32_t q : t) {
                    sv.reset(q);
                }
                break;
            default:
                break;
        }
        if (static_cast<int>(k) == inject.instruction) {
            for (auto [q, bits] : inject.paulis) {
                sv.pauli(q, bits);
            }
        }
    }
    return record;
}

}  // namespace qecw::testing

#endif
