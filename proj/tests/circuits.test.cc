// Copyright 2026 The varivery Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"
#include "varivery/brick.hpp"
#include "varivery/circuits.hpp"
#include "varivery/error.hpp"

using namespace varivery;

TEST(circuits, prepare_real_amplitudes_reproduces_target) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> amp(std::size_t{1} << n);
            double norm = 0.0;
            for (auto &a : amp) {
                a = (trial % 2 == 0 && u(rng) < 0.5) ? 0.0 : u(rng);
                norm += a * a;
            }
            if (norm == 0.0) {
                amp[0] = 1.0;
                norm = 1.0;
            }
            for (auto &a : amp) a /= std::sqrt(norm);
            std::vector<int> qubits(n);
            for (int q = 0; q < n; ++q) qubits[q] = n - 1 - q;
            StateVector s = varivery::apply(prepare_real_amplitudes(amp, qubits), zero_state(n));
            for (std::size_t i = 0; i < amp.size(); ++i) {
                // index bits follow `qubits`, which is reversed here
                std::size_t j = 0;
                for (int b = 0; b < n; ++b) j |= ((i >> b) & 1U) << (n - 1 - b);
                EXPECT_NEAR(std::abs(s[j] - amp[i]), 0.0, 1e-12) << n << " " << i;
            }
        }
    }
}

TEST(circuits, prepare_real_amplitudes_on_subregister) {
    std::vector<double> amp = {0.0, 0.6, 0.0, 0.8};
    std::vector<int> qubits = {1, 2};
    StateVector s = varivery::apply(prepare_real_amplitudes(amp, qubits), zero_state(3));
    EXPECT_NEAR(s[0b001].real(), 0.6, 1e-12);
    EXPECT_NEAR(s[0b011].real(), 0.8, 1e-12);
}

TEST(circuits, random_circuit_is_deterministic) {
    EXPECT_EQ(random_circuit(3, 2, 5), random_circuit(3, 2, 5));
    EXPECT_NE(random_circuit(3, 2, 5), random_circuit(3, 2, 6));
    EXPECT_EQ(random_circuit(3, 2, 5).size(), std::size_t{2 * (3 * 3 + 2)});
}

TEST(brick, zero_angles_give_identity) {
    BrickAngles zero{};
    auto u = brick_unitary(zero);
    EXPECT_LT((oracle::from_flat(u, 4) - oracle::Dense::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(brick, interaction_block_closed_form) {
    const double c1 = 0.3, c2 = -0.8, c3 = 1.7;
    oracle::Dense X = oracle::mat2({0, 1, 1, 0}), Y = oracle::mat2({0, {0, -1}, {0, 1}, 0}),
                  Z = oracle::mat2({1, 0, 0, -1});
    auto ex = [](double c, const oracle::Dense &p) {
        return (std::cos(c) * oracle::Dense::Identity(4, 4) + oracle::cplx(0, std::sin(c)) * oracle::kron(p, p)).eval();
    };
    oracle::Dense want = ex(c1, X) * ex(c2, Y) * ex(c3, Z);
    EXPECT_LT((oracle::from_flat(interaction_unitary(c1, c2, c3), 4) - want).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(brick, structure_matches_definition) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> a(-3.0, 3.0);
    BrickAngles t;
    for (auto &v : t) v = a(rng);
    auto e = [&](int k) { return oracle::mat2(euler_zxz(t[k], t[k + 1], t[k + 2])); };
    oracle::Dense want = oracle::kron(e(9), e(12)) * oracle::from_flat(interaction_unitary(t[6], t[7], t[8]), 4) *
                         oracle::kron(e(0), e(3));
    EXPECT_LT((oracle::from_flat(brick_unitary(t), 4) - want).cwiseAbs().maxCoeff(), 1e-14);
    oracle::Dense ezxz = oracle::mat2(rz_matrix(0.4)) * oracle::mat2(rx_matrix(0.5)) * oracle::mat2(rz_matrix(0.6));
    EXPECT_LT((oracle::mat2(euler_zxz(0.4, 0.5, 0.6)) - ezxz).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(brick, random_unitaries_round_trip) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        oracle::Dense u = oracle::random_unitary(4, rng);
        BrickAngles t = brick_angles(oracle::flat(u));
        EXPECT_LT(oracle::phase_free_distance(oracle::from_flat(brick_unitary(t), 4), u), 1e-10) << trial;
    }
}

TEST(brick, special_gates_round_trip) {
    std::vector<std::vector<cplx>> gates = {
        {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0},  // CNOT
        {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1},  // SWAP
        {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1},  // CZ
        {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1},
    };
    oracle::Dense h = oracle::mat2(hadamard_matrix());
    gates.push_back(oracle::flat(oracle::kron(h, oracle::Dense::Identity(2, 2))));
    gates.push_back(oracle::flat(oracle::kron(h, h)));
    for (const auto &g : gates) {
        BrickAngles t = brick_angles(g);
        EXPECT_LT(phase_insensitive_distance(brick_unitary(t), g), 1e-10);
    }
}

TEST(brick, phase_insensitive_distance_ignores_global_phase) {
    auto u = brick_unitary(BrickAngles{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5});
    std::vector<cplx> v = u;
    for (auto &z : v) z *= std::polar(1.0, 0.77);
    EXPECT_LT(phase_insensitive_distance(u, v), 1e-14);
}
