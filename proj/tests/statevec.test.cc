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
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.h"
#include "varivery/error.hpp"
#include "varivery/statevec.hpp"

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

double max_diff(const oracle::Dense &a, const oracle::Dense &b) { return (a - b).cwiseAbs().maxCoeff(); }

oracle::Dense unitary_of(const Circuit &c, int n) {
    return oracle::from_flat(circuit_unitary(c, n), std::size_t{1} << n);
}

}  // namespace

TEST(statevec, single_qubit_gates_match_kronecker_products) {
    const int n = 3;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ang(-3.0, 3.0);
    for (int q = 0; q < n; ++q) {
        double a = ang(rng);
        EXPECT_LT(max_diff(unitary_of({GateOp::rx(q, a)}, n), oracle::single(n, q, oracle::mat2(rx_matrix(a)))), 1e-14);
        EXPECT_LT(max_diff(unitary_of({GateOp::rz(q, a)}, n), oracle::single(n, q, oracle::mat2(rz_matrix(a)))), 1e-14);
        EXPECT_LT(max_diff(unitary_of({GateOp::h(q)}, n), oracle::single(n, q, oracle::mat2(hadamard_matrix()))), 1e-14);
        EXPECT_LT(max_diff(unitary_of({GateOp::x(q)}, n), oracle::single(n, q, oracle::mat2(pauli_x_matrix()))), 1e-14);
    }
}

TEST(statevec, rotation_matrices_closed_form) {
    const double a = 0.7;
    const oracle::cplx i(0.0, 1.0);
    auto rx = rx_matrix(a);
    EXPECT_NEAR(std::abs(rx[0] - std::cos(a / 2)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(rx[1] + i * std::sin(a / 2)), 0.0, 1e-15);
    auto rz = rz_matrix(a);
    EXPECT_NEAR(std::abs(rz[0] - std::exp(-i * a / 2.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(rz[3] - std::exp(i * a / 2.0)), 0.0, 1e-15);
    auto ry = ry_matrix(a);
    EXPECT_NEAR(std::abs(ry[2] - std::sin(a / 2)), 0.0, 1e-15);
}

TEST(statevec, two_qubit_fixed_gates_on_any_pair) {
    const int n = 4;
    std::mt19937_64 rng(11);
    std::vector<std::vector<int>> pairs = {{0, 1}, {1, 0}, {0, 3}, {3, 1}, {2, 3}};
    for (const auto &t : pairs) {
        oracle::Dense u = oracle::random_unitary(4, rng);
        auto got = unitary_of({GateOp::fixed(t, oracle::flat(u))}, n);
        EXPECT_LT(max_diff(got, oracle::on(n, t, u)), 1e-13) << t[0] << "," << t[1];
    }
}

TEST(statevec, three_qubit_fixed_gate) {
    std::mt19937_64 rng(12);
    oracle::Dense u = oracle::random_unitary(8, rng);
    std::vector<int> t = {3, 0, 2};
    EXPECT_LT(max_diff(unitary_of({GateOp::fixed(t, oracle::flat(u))}, 4), oracle::on(4, t, u)), 1e-13);
}

TEST(statevec, controlled_gates_follow_pattern) {
    const int n = 4;
    std::mt19937_64 rng(3);
    oracle::Dense u = oracle::random_unitary(2, rng);
    for (std::uint64_t pattern = 0; pattern < 4; ++pattern) {
        Circuit c = {GateOp::controlled({2, 0}, pattern, {GateOp::fixed({3}, oracle::flat(u))})};
        EXPECT_LT(max_diff(unitary_of(c, n), oracle::controlled(n, {2, 0}, pattern, 3, u)), 1e-13) << pattern;
    }
    EXPECT_LT(max_diff(unitary_of({GateOp::cnot(1, 0)}, 2),
                       oracle::controlled(2, {1}, 1, 0, oracle::mat2(pauli_x_matrix()))),
              1e-15);
}

TEST(statevec, controlled_block_applies_inner_in_order) {
    std::mt19937_64 rng(4);
    oracle::Dense a = oracle::random_unitary(2, rng), b = oracle::random_unitary(2, rng);
    Circuit c = {GateOp::controlled({0}, 1, {GateOp::fixed({1}, oracle::flat(a)), GateOp::fixed({1}, oracle::flat(b))})};
    EXPECT_LT(max_diff(unitary_of(c, 2), oracle::controlled(2, {0}, 1, 1, b * a)), 1e-13);
}

TEST(statevec, adder_is_a_cyclic_shift) {
    const int n = 5;
    std::vector<int> counter = {1, 3, 4};
    for (int step : {1, 3, 7}) {
        for (std::uint64_t idx = 0; idx < 32; ++idx) {
            StateVector s = varivery::apply(GateOp::adder(counter, step), StateVector::basis(n, idx));
            std::uint64_t b = 0;
            for (int q : counter) b = (b << 1) | ((idx >> (n - 1 - q)) & 1U);
            std::uint64_t nb = (b + step) % 8;
            std::uint64_t expect = idx;
            for (int k = 0; k < 3; ++k) {
                std::uint64_t mask = std::uint64_t{1} << (n - 1 - counter[k]);
                expect = ((nb >> (2 - k)) & 1U) ? (expect | mask) : (expect & ~mask);
            }
            EXPECT_NEAR(std::abs(s[expect]), 1.0, 1e-15);
        }
    }
}

TEST(statevec, circuit_then_adjoint_is_identity) {
    std::mt19937_64 rng(5);
    oracle::Dense u = oracle::random_unitary(4, rng);
    Circuit c = {GateOp::rx(0, 0.3), GateOp::fixed({2, 0}, oracle::flat(u)), GateOp::adder({0, 1, 2}, 3),
                 GateOp::controlled({1}, 0, {GateOp::rz(2, 1.1), GateOp::h(0)})};
    Circuit full = c;
    for (const auto &g : adjoint(c)) full.push_back(g);
    EXPECT_LT(max_diff(unitary_of(full, 3), oracle::Dense::Identity(8, 8)), 1e-13);
}

TEST(statevec, shift_and_remap_move_gates) {
    Circuit c = {GateOp::cnot(0, 1)};
    Circuit s = shift(c, 2);
    EXPECT_EQ(gate_support(s[0]), (std::vector<int>{2, 3}));
    std::vector<int> map = {3, 0};
    EXPECT_EQ(gate_support(remap(c, map)[0]), (std::vector<int>{0, 3}));
}

TEST(statevec, tensor_puts_first_factor_high) {
    StateVector t = tensor(StateVector::basis(1, 1), StateVector::basis(2, 2));
    EXPECT_EQ(t.n_qubits(), 3);
    EXPECT_NEAR(std::abs(t[0b110]), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(overlap(t, StateVector::basis(3, 6)) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(overlap(t, StateVector::basis(3, 3))), 0.0, 1e-15);
}

TEST(statevec, overlap_is_conjugate_linear_in_first_argument) {
    const double h = 1.0 / std::sqrt(2.0);
    StateVector a = StateVector::from_amplitudes({h, oracle::cplx(0, h)});
    StateVector b = StateVector::from_amplitudes({1.0, 0.0});
    EXPECT_NEAR(std::abs(overlap(a, b) - h), 0.0, 1e-15);
    StateVector c = StateVector::from_amplitudes({0.0, 1.0});
    EXPECT_NEAR(std::abs(overlap(a, c) - oracle::cplx(0, -h)), 0.0, 1e-15);
}

TEST(statevec, pauli_expectations_match_dense_oracle) {
    std::mt19937_64 rng(9);
    oracle::Dense u = oracle::random_unitary(8, rng);
    StateVector s = varivery::apply(Circuit{GateOp::fixed({0, 1, 2}, oracle::flat(u))}, zero_state(3));
    Eigen::VectorXcd v = oracle::vec(s);
    oracle::Dense X = oracle::mat2({0, 1, 1, 0}), Y = oracle::mat2({0, {0, -1}, {0, 1}, 0}),
                  Z = oracle::mat2({1, 0, 0, -1}), I = oracle::Dense::Identity(2, 2);
    auto op = [&](char c) { return c == 'X' ? X : c == 'Y' ? Y : c == 'Z' ? Z : I; };
    std::vector<PauliTerm> terms = {{0.5, "XYZ"}, {-1.25, "ZIZ"}, {2.0, "IYI"}, {0.75, "III"}};
    oracle::Dense m = oracle::Dense::Zero(8, 8);
    for (const auto &t : terms) m += t.coefficient * oracle::kron_chain({op(t.word[0]), op(t.word[1]), op(t.word[2])});
    double want = (v.adjoint() * m * v)(0, 0).real();
    EXPECT_NEAR(expectation(s, Observable::pauli_sum(3, terms)), want, 1e-13);

    std::vector<int> zq = {0, 2};
    double zz = (v.adjoint() * oracle::kron_chain({Z, I, Z}) * v)(0, 0).real();
    EXPECT_NEAR(expectation(s, Observable::z_product(3, zq)), zz, 1e-13);
    double z1 = (v.adjoint() * oracle::kron_chain({I, Z, I}) * v)(0, 0).real();
    EXPECT_NEAR(expectation(s, Observable::pauli_z(3, 1)), z1, 1e-13);
}

TEST(statevec, dense_projector_and_tensor_observables) {
    std::mt19937_64 rng(10);
    oracle::Dense u = oracle::random_unitary(8, rng);
    StateVector s = varivery::apply(Circuit{GateOp::fixed({0, 1, 2}, oracle::flat(u))}, zero_state(3));
    Eigen::VectorXcd v = oracle::vec(s);
    oracle::Dense h = oracle::random_unitary(4, rng);
    h = (h + h.adjoint()).eval();
    std::vector<int> q = {2, 0};
    double want = (v.adjoint() * oracle::on(3, q, h) * v)(0, 0).real();
    EXPECT_NEAR(expectation(s, Observable::dense(q, oracle::flat(h))), want, 1e-13);

    oracle::Dense p0 = oracle::projector(0);
    double proj = (v.adjoint() * oracle::kron_chain({oracle::Dense::Identity(2, 2), p0, p0}) * v)(0, 0).real();
    EXPECT_NEAR(expectation(s, Observable::zero_projector({1, 2})), proj, 1e-13);

    oracle::Dense d = oracle::Dense::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -1.0;
    Observable tp = Observable::tensor_pair(Observable::dense({0}, oracle::flat(d)), Observable::zero_projector({1, 2}));
    double tw = (v.adjoint() * oracle::kron_chain({d, p0, p0}) * v)(0, 0).real();
    EXPECT_NEAR(expectation(s, tp), tw, 1e-13);
    EXPECT_EQ(tp.support(), (std::vector<int>{0, 1, 2}));
}

TEST(statevec, error_kinds) {
    EXPECT_EQ(kind_of([] { StateVector s(0); }), ErrorKind::Capacity);
    EXPECT_EQ(kind_of([] { StateVector s(kMaxQubits + 1); }), ErrorKind::Capacity);
    EXPECT_EQ(kind_of([] { StateVector s(2); s.apply(GateOp::x(2)); }), ErrorKind::Index);
    EXPECT_EQ(kind_of([] { StateVector::basis(2, 4); }), ErrorKind::Index);
    EXPECT_EQ(kind_of([] { StateVector s(2); s.apply(GateOp::fixed({0, 0}, std::vector<cplx>(16, 0.5))); }),
              ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { StateVector s(1); s.apply(GateOp::fixed({0}, {1.0, 1.0, 0.0, 1.0})); }),
              ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { StateVector s(2); s.apply(GateOp::controlled({0}, 2, {GateOp::x(1)})); }),
              ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { StateVector s(2); s.apply(GateOp::controlled({0}, 1, {GateOp::x(0)})); }),
              ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { StateVector::from_amplitudes({1.0, 0.0, 0.0}); }), ErrorKind::Shape);
    EXPECT_EQ(kind_of([] { StateVector::from_amplitudes({1.0, 1.0}); }), ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { Observable::pauli_sum(2, {{1.0, "Z"}}); }), ErrorKind::Shape);
    EXPECT_EQ(kind_of([] { Observable::pauli_sum(2, {{1.0, "ZQ"}}); }), ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { Observable::dense({0}, {0.0, 1.0, 0.0, 0.0}); }), ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { Observable::tensor_pair(Observable::zero_projector({0}), Observable::zero_projector({0})); }),
              ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { overlap(zero_state(1), zero_state(2)); }), ErrorKind::Shape);
    EXPECT_EQ(kind_of([] { expectation(zero_state(1), Observable::pauli_z(2, 1)); }), ErrorKind::Shape);
}

TEST(statevec, dump_format) {
    std::ostringstream out;
    write_dump(out, StateVector::basis(1, 1));
    EXPECT_EQ(out.str(), "0\t0\t0\n1\t1\t0\n");
}
