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

#include "qecw/frame_simulator.h"

#include <gtest/gtest.h>

#include <random>

#include "statevector.h"

using namespace qecw;

namespace {

struct Site {
    Fault fault;
    qecw::testing::InjectedPauli inject;
};

std::vector<Site> all_single_faults(const Circuit &c) {
    std::vector<Site> out;
    for (uint32_t k = 0; k < c.instructions.size(); k++) {
        const auto &ins = c.instructions[k];
        if (!is_noise(ins.gate)) {
            continue;
        }
        const auto &t = ins.targets;
        if (ins.gate == Gate::kDepolarize2) {
            for (uint32_t s = 0; 2 * s < t.size(); s++) {
                for (uint8_t pp = 1; pp < 16; pp++) {
                    Site site{{k, s, pp, ~uint64_t{0}}, {int(k), {}}};
                    site.inject.paulis = {{t[2 * s], uint8_t(pp & 3)}, {t[2 * s + 1], uint8_t(pp >> 2)}};
                    out.push_back(site);
                }
            }
        } else {
            const bool depol = ins.gate == Gate::kDepolarize1;
            for (uint32_t s = 0; s < t.size(); s++) {
                for (uint8_t pp = 1; pp <= (depol ? 3 : 1); pp++) {
                    out.push_back({{k, s, pp, ~uint64_t{0}}, {int(k), {{t[s], pp}}}});
                }
            }
        }
    }
    return out;
}

DataPoint reference_point(const Circuit &c, const qecw::testing::InjectedPauli &inject) {
    auto record = qecw::testing::run_statevector(c, inject);
    EXPECT_EQ(record.size(), c.num_measurements);
    return data_point_from_measurements(c, record);
}

void check_faults_against_statevector(const Circuit &c, size_t max_sites, uint64_t seed) {
    // The noiseless run fires nothing.
    DataPoint clean = reference_point(c, {});
    EXPECT_TRUE(clean.detectors.empty());
    EXPECT_EQ(clean.labels.get(label_for_basis(c.basis)), 0);

    auto sites = all_single_faults(c);
    ASSERT_FALSE(sites.empty());
    if (sites.size() > max_sites) {
        std::mt19937_64 gen(seed);
        std::shuffle(sites.begin(), sites.end(), gen);
        sites.resize(max_sites);
    }
    FrameSimulator sim(c);
    for (const auto &site : sites) {
        sim.run(nullptr, std::span<const Fault>(&site.fault, 1));
        DataPoint got = sim.extract(5);
        DataPoint want = reference_point(c, site.inject);
        EXPECT_EQ(got.detectors, want.detectors) << "instruction " << site.fault.instruction << " slot "
                                                 << site.fault.slot << " pauli " << int(site.fault.pauli);
        EXPECT_EQ(got.labels, want.labels) << "instruction " << site.fault.instruction;
    }
}

}  // namespace

TEST(frame_simulator, repetition_single_faults_match_statevector) {
    Circuit c = build_memory_circuit(build_repetition(3), 2, Basis::kZ, NoiseParams::uniform(0.01));
    check_faults_against_statevector(c, 100000, 0);
}

TEST(frame_simulator, surface_memory_z_faults_match_statevector) {
    Circuit c = build_memory_circuit(build_rotated_surface(3), 1, Basis::kZ, NoiseParams::uniform(0.01));
    check_faults_against_statevector(c, 40, 11);
}

TEST(frame_simulator, surface_memory_x_faults_match_statevector) {
    Circuit c = build_memory_circuit(build_rotated_surface(3), 1, Basis::kX, NoiseParams::uniform(0.01));
    check_faults_against_statevector(c, 40, 12);
}

TEST(frame_simulator, noiseless_circuit_fires_nothing) {
    Circuit c = build_memory_circuit(build_rotated_surface(5), 3, Basis::kZ, NoiseParams{});
    for (const auto &dp : sample_shots(c, 1, 200)) {
        EXPECT_TRUE(dp.detectors.empty());
        EXPECT_EQ(dp.labels.get(LabelKind::kZ), 0);
    }
}

TEST(frame_simulator, deterministic_and_thread_independent) {
    Circuit c = build_memory_circuit(build_rotated_surface(3), 3, Basis::kZ, NoiseParams::uniform(0.01));
    auto a = sample_shots(c, 42, 1000, 1);
    auto b = sample_shots(c, 42, 1000, 3);
    auto other = sample_shots(c, 43, 1000, 1);
    ASSERT_EQ(a.size(), b.size());
    bool any_difference = false;
    for (size_t k = 0; k < a.size(); k++) {
        EXPECT_TRUE(a[k].same_content(b[k]));
        any_difference |= !a[k].same_content(other[k]);
    }
    EXPECT_TRUE(any_difference);
    EXPECT_TRUE(sample(c, 42).same_content(a[0]));
}

TEST(frame_simulator, measurements_rebuild_the_same_points) {
    Circuit c = build_memory_circuit(build_rotated_surface(3), 2, Basis::kX, NoiseParams::uniform(0.02));
    auto points = sample_shots(c, 9, 300);
    auto records = sample_measurements(c, 9, 300);
    ASSERT_EQ(records.size(), points.size());
    for (size_t k = 0; k < points.size(); k++) {
        EXPECT_TRUE(data_point_from_measurements(c, records[k]).same_content(points[k]));
    }
}

TEST(frame_simulator, detectors_come_out_sorted) {
    Circuit c = build_memory_circuit(build_rotated_surface(3), 3, Basis::kZ, NoiseParams::uniform(0.05));
    for (const auto &dp : sample_shots(c, 3, 500)) {
        EXPECT_TRUE(std::is_sorted(dp.detectors.begin(), dp.detectors.end()));
        EXPECT_DOUBLE_EQ(dp.noise_p, 0.05);
    }
}

TEST(frame_simulator, bitflip_rate_matches_binomial) {
    // Repetition d=3, one round, data bit flips only: each detector fires with
    // probability 2p(1-p) when its two neighbours' flips differ.
    const double p = 0.1;
    Circuit c = build_memory_circuit(build_repetition(3), 1, Basis::kZ, NoiseParams::data_bitflip_only(p));
    const size_t shots = 50000;
    size_t fired = 0;
    for (const auto &dp : sample_shots(c, 5, shots)) {
        for (const auto &e : dp.detectors) {
            fired += (e.x2 == 1 && e.t == 1);
        }
    }
    const double expect = 2 * p * (1 - p);
    const double sigma = std::sqrt(expect * (1 - expect) / shots);
    EXPECT_NEAR(static_cast<double>(fired) / shots, expect, 4 * sigma);
}
