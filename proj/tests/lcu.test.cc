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
#include <numeric>
#include <random>
#include <set>

#include "oracles.h"
#include "varivery/error.hpp"
#include "varivery/hardfn.hpp"
#include "varivery/circuits.hpp"
#include "varivery/lcu.hpp"

using namespace varivery;

namespace {

ErrorKind kind_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::Numerical;
}

oracle::Dense product_of(const std::vector<ElementaryGate> &gates, int n) {
    const auto d = Eigen::Index{1} << n;
    oracle::Dense u = oracle::Dense::Identity(d, d);
    for (const auto &g : gates) {
        EXPECT_LE(g.qubits.size(), 2u);
        u = oracle::on(n, g.qubits, oracle::from_flat(g.matrix, std::size_t{1} << g.qubits.size())) * u;
    }
    return u;
}

oracle::Dense unitary_of(const Circuit &c, int n) {
    return oracle::from_flat(circuit_unitary(c, n), std::size_t{1} << n);
}

KernelModel random_basis_model(int n, int count, std::mt19937_64 &rng) {
    FeatureMap fm = FeatureMap::computational_basis(n);
    std::vector<Input> all(std::size_t{1} << n);
    std::iota(all.begin(), all.end(), Input{0});
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<Input> support(all.begin(), all.begin() + count);
    std::normal_distribution<double> nd;
    Eigen::VectorXd alpha(count);
    for (auto &a : alpha) a = nd(rng);
    return KernelModel{alpha, support, fm, 1e-3, 0.0};
}

}  // namespace

TEST(lcu, single_term_model) {
    FeatureMap fm = FeatureMap::computational_basis(2);
    KernelModel m{Eigen::VectorXd::Constant(1, -0.4), {2}, fm, 1e-3, 0.0};
    LcuCircuit lcu = compile_lcu(m);
    EXPECT_EQ(lcu.n_ancilla, 1);
    EXPECT_EQ(lcu.n_work, 2);
    EXPECT_DOUBLE_EQ(lcu.scale, 0.4);
    EXPECT_EQ(lcu.signs[0], -1);
    for (Input x = 0; x < 4; ++x) EXPECT_NEAR(lcu.predict(x), predict(m, x), 1e-14);
}

TEST(lcu, opposite_coefficients_on_orthogonal_states) {
    FeatureMap fm = FeatureMap::computational_basis(1);
    KernelModel m{Eigen::Vector2d(1.0, -1.0), {0, 1}, fm, 1e-3, 0.0};
    LcuCircuit lcu = compile_lcu(m);
    EXPECT_EQ(lcu.signs, (std::vector<int>{1, -1}));
    EXPECT_NEAR(lcu.beta[0], std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(lcu.predict(0), 1.0, 1e-14);
    EXPECT_NEAR(lcu.predict(1), -1.0, 1e-14);
}

TEST(lcu, random_models_match_kernel_predictions) {
    std::mt19937_64 rng(17);
    for (int n = 1; n <= 3; ++n) {
        for (int count = 1; count <= std::min(4, 1 << n); ++count) {
            KernelModel m = random_basis_model(n, count, rng);
            LcuCircuit lcu = compile_lcu(m);
            double b2 = 0.0;
            for (double b : lcu.beta) b2 += b * b;
            EXPECT_NEAR(b2, 1.0, 1e-14);
            EXPECT_NEAR(lcu.scale, m.alpha.cwiseAbs().sum(), 1e-14);
            for (int i = 0; i < count; ++i) {
                EXPECT_EQ(lcu.signs[i], m.alpha[i] < 0 ? -1 : 1);
                EXPECT_NEAR(lcu.beta[i] * lcu.beta[i], std::abs(m.alpha[i]) / lcu.scale, 1e-14);
            }
            for (Input x = 0; x < (Input{1} << n); ++x) EXPECT_NEAR(lcu.predict(x), predict(m, x), 1e-12);
        }
    }
}

TEST(lcu, dlp_model_matches_kernel_predictions) {
    FeatureMap fm = FeatureMap::dlp(23, 5, 2);
    KernelModel m{Eigen::Vector3d(0.7, -1.2, 0.3), {5, 7, 19}, fm, 1e-3, 0.0};
    LcuCircuit lcu = compile_lcu(m);
    EXPECT_EQ(lcu.n_ancilla, 2);
    EXPECT_EQ(lcu.n_work, 5);
    for (Input x = 1; x < 23; ++x) EXPECT_NEAR(lcu.predict(x), predict(m, x), 1e-12);
}

TEST(lcu, zero_coefficients_are_degenerate) {
    FeatureMap fm = FeatureMap::computational_basis(1);
    KernelModel m{Eigen::Vector2d(0.0, 0.0), {0, 1}, fm, 1e-3, 0.0};
    EXPECT_EQ(kind_of([&] { compile_lcu(m); }), ErrorKind::DegenerateModel);
}

TEST(lcu, expansion_reproduces_unitaries) {
    std::mt19937_64 rng(5);
    auto u1 = [&] { return oracle::flat(oracle::random_unitary(2, rng)); };
    std::vector<std::pair<int, Circuit>> cases = {
        {2, {GateOp::cnot(0, 1), GateOp::rx(1, 0.3), GateOp::h(0)}},
        {3, {GateOp::controlled({0, 2}, 1, {GateOp::fixed({1}, u1())})}},
        {3, {GateOp::controlled({2, 1}, 0, {GateOp::rz(0, 0.8), GateOp::x(0)})}},
        {4, {GateOp::controlled({0}, 1, {GateOp::controlled({1, 3}, 2, {GateOp::fixed({2}, u1())})})}},
        {4, {GateOp::controlled({3, 0, 1}, 5, {GateOp::fixed({2}, u1())})}},
        {2, {GateOp::fixed({1, 0}, oracle::flat(oracle::random_unitary(4, rng)))}},
    };
    for (int t = 1; t <= 4; ++t) {
        std::vector<int> q(t);
        std::iota(q.begin(), q.end(), 0);
        cases.push_back({t, {GateOp::adder(q, 1)}});
        cases.push_back({t, {GateOp::adder(q, 3)}});
    }
    cases.push_back({4, {GateOp::controlled({0}, 0, {GateOp::adder({1, 2, 3}, 1)})}});
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto &[n, c] = cases[i];
        oracle::Dense got = product_of(expand_to_elementary(c), n);
        EXPECT_LT((got - unitary_of(c, n)).cwiseAbs().maxCoeff(), 1e-10) << "case " << i;
    }
}

TEST(lcu, expansion_limits) {
    std::vector<int> five = {0, 1, 2, 3, 4};
    EXPECT_EQ(kind_of([&] { expand_to_elementary({GateOp::adder(five)}); }), ErrorKind::Decomposition);
    std::vector<cplx> id8(64, 0.0);
    for (int i = 0; i < 8; ++i) id8[i * 9] = 1.0;
    id8[0] = -1.0;
    EXPECT_EQ(kind_of([&] { expand_to_elementary({GateOp::fixed({0, 1, 2}, id8)}); }), ErrorKind::Decomposition);
    std::vector<cplx> cz = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1};
    EXPECT_EQ(kind_of([&] { expand_to_elementary({GateOp::controlled({0}, 1, {GateOp::fixed({1, 2}, cz)})}); }),
              ErrorKind::Decomposition);
}

TEST(lcu, brick_counts_for_cnots) {
    BrickworkLayout adj = compile_brickwork({GateOp::cnot(0, 1)}, 2);
    EXPECT_EQ(adj.placed_bricks, 1);
    EXPECT_EQ(adj.depth, 1);
    BrickworkLayout far = compile_brickwork({GateOp::cnot(0, 2)}, 3);
    EXPECT_EQ(far.placed_bricks, 3);
    EXPECT_EQ(far.total_params(), static_cast<int>(far.slots.size()) * 15);
    EXPECT_EQ(static_cast<int>(far.param_map.size()), far.total_params());
    EXPECT_LT(oracle::phase_free_distance(unitary_of(far.instantiate(far.param_map), 3),
                                          unitary_of({GateOp::cnot(0, 2)}, 3)),
              1e-10);
}

TEST(lcu, layout_reproduces_circuits) {
    std::mt19937_64 rng(8);
    for (int n = 2; n <= 4; ++n) {
        Circuit c = random_circuit(n, 2, 30 + n);
        c.push_back(GateOp::controlled({n - 1}, 1, {GateOp::h(0)}));
        BrickworkLayout layout = compile_brickwork(c, n);
        EXPECT_LT(oracle::phase_free_distance(unitary_of(layout.instantiate(layout.param_map), n), unitary_of(c, n)),
                  1e-9)
            << n;
    }
}

TEST(lcu, identity_padding_is_inert) {
    BrickworkLayout layout = compile_brickwork({GateOp::cnot(0, 1), GateOp::cnot(2, 3)}, 5);
    // The grid is full; slots without a source brick carry zero angles.
    int zero_slots = 0;
    for (const auto &s : layout.slots) {
        bool all_zero = true;
        for (int k = 0; k < 15; ++k) all_zero = all_zero && layout.param_map[s.offset + k] == 0.0;
        zero_slots += all_zero;
        if (all_zero) {
            std::span<const double> a(layout.param_map.data() + s.offset, 15);
            EXPECT_LT((oracle::from_flat(brick_unitary(a), 4) - oracle::Dense::Identity(4, 4)).cwiseAbs().maxCoeff(),
                      1e-15);
        }
    }
    EXPECT_EQ(zero_slots, static_cast<int>(layout.slots.size()) - layout.placed_bricks);
    EXPECT_EQ(layout.to_json().at("param_map").size(), layout.slots.size());
}

TEST(lcu, brickwork_template_end_to_end) {
    FeatureMap fm = FeatureMap::computational_basis(1);
    KernelModel m{Eigen::Vector2d(0.8, -0.3), {0, 1}, fm, 1e-3, 0.0};
    LcuCircuit lcu = compile_lcu(m);
    BrickworkLayout layout = compile_brickwork(lcu.fixed_part(), lcu.n_qubits());
    CircuitTemplate tmpl = lcu_brickwork_template(lcu, layout);
    EXPECT_EQ(tmpl.param_count(), layout.total_params());
    for (Input x = 0; x < 2; ++x) {
        EXPECT_NEAR(lcu.scale * tmpl.evaluate(x, layout.param_map), predict(m, x), 1e-10);
    }
}

TEST(lcu, prop1_small_instance) {
    Prop1Config cfg;
    cfg.n_train = 2;
    cfg.bp_n_x = 2;
    cfg.bp_n_theta = 4;
    Prop1Record rec = run_prop1_experiment(cfg);
    EXPECT_LT(rec.lcu_deviation, 1e-10);
    EXPECT_LT(rec.brickwork_deviation, 1e-6);
    EXPECT_DOUBLE_EQ(rec.circuit_train_accuracy, rec.kernel_train_accuracy);
    EXPECT_EQ(rec.layout.n_qubits, rec.lcu.n_qubits());
}
