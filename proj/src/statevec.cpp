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

#include "varivery/statevec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <set>

#include "varivery/error.hpp"

namespace varivery {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Capacity:
            return "capacity";
        case ErrorKind::Index:
            return "index";
        case ErrorKind::Validation:
            return "validation";
        case ErrorKind::Shape:
            return "shape";
        case ErrorKind::Domain:
            return "domain";
        case ErrorKind::UnsupportedMethod:
            return "unsupported-method";
        case ErrorKind::Conditioning:
            return "conditioning";
        case ErrorKind::DegenerateModel:
            return "degenerate-model";
        case ErrorKind::Decomposition:
            return "decomposition";
        case ErrorKind::Numerical:
            return "numerical";
    }
    return "unknown";
}

namespace {

inline std::uint64_t qubit_bit(int n_qubits, int qubit) { return std::uint64_t{1} << (n_qubits - 1 - qubit); }

void check_capacity(int n_qubits) {
    require(n_qubits >= 1 && n_qubits <= kMaxQubits, ErrorKind::Capacity,
            "qubit count " + std::to_string(n_qubits) + " outside [1, " + std::to_string(kMaxQubits) + "]");
}

void check_qubits(std::span<const int> qubits, int n_qubits, const char *what) {
    std::set<int> seen;
    for (int q : qubits) {
        require(q >= 0 && q < n_qubits, ErrorKind::Index,
                std::string(what) + " qubit " + std::to_string(q) + " outside register of " +
                    std::to_string(n_qubits));
        require(seen.insert(q).second, ErrorKind::Validation,
                std::string(what) + " qubit " + std::to_string(q) + " listed twice");
    }
}

// Applies a 2^k x 2^k matrix to the listed qubits on the subspace where
// (index & control_mask) == control_value.
void apply_matrix(std::vector<cplx> &amps, int n_qubits, std::span<const int> targets, std::span<const cplx> m,
                  std::uint64_t control_mask, std::uint64_t control_value) {
    const std::size_t k = targets.size();
    const std::size_t d = std::size_t{1} << k;
    std::uint64_t target_mask = 0;
    std::vector<std::uint64_t> offsets(d, 0);
    for (std::size_t b = 0; b < k; ++b) {
        std::uint64_t bit = qubit_bit(n_qubits, targets[b]);
        target_mask |= bit;
        for (std::size_t j = 0; j < d; ++j) {
            if ((j >> (k - 1 - b)) & 1U) {
                offsets[j] |= bit;
            }
        }
    }
    const std::uint64_t dim = amps.size();
    if (k == 1) {
        const cplx m00 = m[0], m01 = m[1], m10 = m[2], m11 = m[3];
        const std::uint64_t bit = offsets[1];
        for (std::uint64_t base = 0; base < dim; ++base) {
            if ((base & target_mask) || (base & control_mask) != control_value) {
                continue;
            }
            cplx a0 = amps[base];
            cplx a1 = amps[base | bit];
            amps[base] = m00 * a0 + m01 * a1;
            amps[base | bit] = m10 * a0 + m11 * a1;
        }
        return;
    }
    std::vector<cplx> in(d), out(d);
    for (std::uint64_t base = 0; base < dim; ++base) {
        if ((base & target_mask) || (base & control_mask) != control_value) {
            continue;
        }
        for (std::size_t j = 0; j < d; ++j) {
            in[j] = amps[base | offsets[j]];
        }
        for (std::size_t r = 0; r < d; ++r) {
            cplx acc = 0.0;
            const cplx *row = m.data() + r * d;
            for (std::size_t c = 0; c < d; ++c) {
                acc += row[c] * in[c];
            }
            out[r] = acc;
        }
        for (std::size_t j = 0; j < d; ++j) {
            amps[base | offsets[j]] = out[j];
        }
    }
}

void apply_adder(std::vector<cplx> &amps, int n_qubits, std::span<const int> targets, int step,
                 std::uint64_t control_mask, std::uint64_t control_value) {
    const std::size_t t = targets.size();
    const std::uint64_t modulus = std::uint64_t{1} << t;
    std::vector<std::uint64_t> bits(t);
    std::uint64_t target_mask = 0;
    for (std::size_t b = 0; b < t; ++b) {
        bits[b] = qubit_bit(n_qubits, targets[b]);
        target_mask |= bits[b];
    }
    const std::uint64_t shift = static_cast<std::uint64_t>(((step % static_cast<std::int64_t>(modulus)) +
                                                            static_cast<std::int64_t>(modulus)) %
                                                           static_cast<std::int64_t>(modulus));
    std::vector<cplx> out(amps.size());
    for (std::uint64_t idx = 0; idx < amps.size(); ++idx) {
        if ((idx & control_mask) != control_value) {
            out[idx] = amps[idx];
            continue;
        }
        std::uint64_t value = 0;
        for (std::size_t b = 0; b < t; ++b) {
            value = (value << 1) | ((idx & bits[b]) ? 1U : 0U);
        }
        std::uint64_t next = (value + shift) % modulus;
        std::uint64_t dest = idx & ~target_mask;
        for (std::size_t b = 0; b < t; ++b) {
            if ((next >> (t - 1 - b)) & 1U) {
                dest |= bits[b];
            }
        }
        out[dest] = amps[idx];
    }
    amps.swap(out);
}

std::vector<cplx> single_qubit_matrix(const GateOp &gate) {
    switch (gate.kind) {
        case GateKind::RotationX:
            return rx_matrix(gate.angle);
        case GateKind::RotationZ:
            return rz_matrix(gate.angle);
        case GateKind::Hadamard:
            return hadamard_matrix();
        case GateKind::PauliX:
            return pauli_x_matrix();
        default:
            fail(ErrorKind::Validation, "not a single-qubit primitive");
    }
}

void validate_gate(const GateOp &gate, int n_qubits, std::span<const int> outer_controls) {
    switch (gate.kind) {
        case GateKind::RotationX:
        case GateKind::RotationZ:
        case GateKind::Hadamard:
        case GateKind::PauliX:
            require(gate.targets.size() == 1, ErrorKind::Validation,
                    gate_kind_name(gate.kind) + " acts on exactly one qubit");
            check_qubits(gate.targets, n_qubits, "target");
            break;
        case GateKind::FixedUnitary: {
            require(!gate.targets.empty(), ErrorKind::Validation, "FixedUnitary needs targets");
            check_qubits(gate.targets, n_qubits, "target");
            std::size_t d = std::size_t{1} << gate.targets.size();
            require(gate.matrix.size() == d * d, ErrorKind::Validation, "FixedUnitary matrix size mismatch");
            require(unitarity_defect(gate.matrix) <= kUnitarityTolerance, ErrorKind::Validation,
                    "FixedUnitary matrix is not unitary");
            break;
        }
        case GateKind::Adder:
            require(!gate.targets.empty() && gate.targets.size() < 63, ErrorKind::Validation,
                    "Adder needs 1..62 targets");
            check_qubits(gate.targets, n_qubits, "target");
            break;
        case GateKind::Controlled: {
            require(!gate.controls.empty() && gate.controls.size() < 63, ErrorKind::Validation,
                    "Controlled block needs 1..62 controls");
            check_qubits(gate.controls, n_qubits, "control");
            require(gate.pattern < (std::uint64_t{1} << gate.controls.size()), ErrorKind::Validation,
                    "control pattern wider than control register");
            std::vector<int> all(outer_controls.begin(), outer_controls.end());
            all.insert(all.end(), gate.controls.begin(), gate.controls.end());
            check_qubits(all, n_qubits, "control");
            for (const auto &g : gate.inner) {
                for (int q : gate_support(g)) {
                    require(std::find(all.begin(), all.end(), q) == all.end(), ErrorKind::Validation,
                            "controlled block acts on one of its own controls");
                }
                validate_gate(g, n_qubits, all);
            }
            break;
        }
    }
}

void apply_gate(std::vector<cplx> &amps, int n_qubits, const GateOp &gate, std::uint64_t control_mask,
                std::uint64_t control_value) {
    switch (gate.kind) {
        case GateKind::RotationX:
        case GateKind::RotationZ:
        case GateKind::Hadamard:
        case GateKind::PauliX: {
            auto m = single_qubit_matrix(gate);
            apply_matrix(amps, n_qubits, gate.targets, m, control_mask, control_value);
            break;
        }
        case GateKind::FixedUnitary:
            apply_matrix(amps, n_qubits, gate.targets, gate.matrix, control_mask, control_value);
            break;
        case GateKind::Adder:
            apply_adder(amps, n_qubits, gate.targets, gate.adder_step, control_mask, control_value);
            break;
        case GateKind::Controlled: {
            std::uint64_t mask = control_mask;
            std::uint64_t value = control_value;
            const std::size_t c = gate.controls.size();
            for (std::size_t b = 0; b < c; ++b) {
                std::uint64_t bit = qubit_bit(n_qubits, gate.controls[b]);
                mask |= bit;
                if ((gate.pattern >> (c - 1 - b)) & 1U) {
                    value |= bit;
                }
            }
            for (const auto &g : gate.inner) {
                apply_gate(amps, n_qubits, g, mask, value);
            }
            break;
        }
    }
}

void collect_support(const GateOp &gate, std::set<int> &out) {
    out.insert(gate.targets.begin(), gate.targets.end());
    out.insert(gate.controls.begin(), gate.controls.end());
    for (const auto &g : gate.inner) {
        collect_support(g, out);
    }
}

}  // namespace

std::string gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::FixedUnitary:
            return "FixedUnitary";
        case GateKind::RotationX:
            return "RotationX";
        case GateKind::RotationZ:
            return "RotationZ";
        case GateKind::Hadamard:
            return "Hadamard";
        case GateKind::PauliX:
            return "PauliX";
        case GateKind::Controlled:
            return "Controlled";
        case GateKind::Adder:
            return "Adder";
    }
    return "?";
}

GateKind gate_kind_from_name(const std::string &name) {
    for (GateKind k : {GateKind::FixedUnitary, GateKind::RotationX, GateKind::RotationZ, GateKind::Hadamard,
                       GateKind::PauliX, GateKind::Controlled, GateKind::Adder}) {
        if (gate_kind_name(k) == name) {
            return k;
        }
    }
    fail(ErrorKind::Validation, "unknown gate kind '" + name + "'");
}

GateOp GateOp::fixed(std::vector<int> targets, std::vector<cplx> matrix) {
    GateOp g;
    g.kind = GateKind::FixedUnitary;
    g.targets = std::move(targets);
    g.matrix = std::move(matrix);
    return g;
}

GateOp GateOp::rx(int qubit, double angle) {
    GateOp g;
    g.kind = GateKind::RotationX;
    g.targets = {qubit};
    g.angle = angle;
    return g;
}

GateOp GateOp::rz(int qubit, double angle) {
    GateOp g;
    g.kind = GateKind::RotationZ;
    g.targets = {qubit};
    g.angle = angle;
    return g;
}

GateOp GateOp::h(int qubit) {
    GateOp g;
    g.kind = GateKind::Hadamard;
    g.targets = {qubit};
    return g;
}

GateOp GateOp::x(int qubit) {
    GateOp g;
    g.kind = GateKind::PauliX;
    g.targets = {qubit};
    return g;
}

GateOp GateOp::controlled(std::vector<int> controls, std::uint64_t pattern, std::vector<GateOp> inner) {
    GateOp g;
    g.kind = GateKind::Controlled;
    g.controls = std::move(controls);
    g.pattern = pattern;
    g.inner = std::move(inner);
    return g;
}

GateOp GateOp::cnot(int control, int target) { return controlled({control}, 1, {x(target)}); }

GateOp GateOp::adder(std::vector<int> targets, int step) {
    GateOp g;
    g.kind = GateKind::Adder;
    g.targets = std::move(targets);
    g.adder_step = step;
    return g;
}

std::vector<int> gate_support(const GateOp &gate) {
    std::set<int> s;
    collect_support(gate, s);
    return {s.begin(), s.end()};
}

std::vector<int> circuit_support(const Circuit &circuit) {
    std::set<int> s;
    for (const auto &g : circuit) {
        collect_support(g, s);
    }
    return {s.begin(), s.end()};
}

GateOp adjoint(const GateOp &gate) {
    GateOp out = gate;
    switch (gate.kind) {
        case GateKind::RotationX:
        case GateKind::RotationZ:
            out.angle = -gate.angle;
            break;
        case GateKind::Hadamard:
        case GateKind::PauliX:
            break;
        case GateKind::FixedUnitary: {
            std::size_t d = std::size_t{1} << gate.targets.size();
            for (std::size_t r = 0; r < d; ++r) {
                for (std::size_t c = 0; c < d; ++c) {
                    out.matrix[r * d + c] = std::conj(gate.matrix[c * d + r]);
                }
            }
            break;
        }
        case GateKind::Adder:
            out.adder_step = -gate.adder_step;
            break;
        case GateKind::Controlled:
            out.inner = adjoint(gate.inner);
            break;
    }
    return out;
}

Circuit adjoint(const Circuit &circuit) {
    Circuit out;
    out.reserve(circuit.size());
    for (auto it = circuit.rbegin(); it != circuit.rend(); ++it) {
        out.push_back(adjoint(*it));
    }
    return out;
}

GateOp remap(const GateOp &gate, std::span<const int> mapping) {
    GateOp out = gate;
    for (int &q : out.targets) {
        q = mapping[q];
    }
    for (int &q : out.controls) {
        q = mapping[q];
    }
    out.inner = remap(gate.inner, mapping);
    return out;
}

Circuit remap(const Circuit &circuit, std::span<const int> mapping) {
    Circuit out;
    out.reserve(circuit.size());
    for (const auto &g : circuit) {
        out.push_back(remap(g, mapping));
    }
    return out;
}

Circuit shift(const Circuit &circuit, int offset) {
    int top = 0;
    for (int q : circuit_support(circuit)) {
        top = std::max(top, q + 1);
    }
    std::vector<int> mapping(top);
    for (int q = 0; q < top; ++q) {
        mapping[q] = q + offset;
    }
    return remap(circuit, mapping);
}

std::vector<cplx> rx_matrix(double angle) {
    double c = std::cos(angle / 2), s = std::sin(angle / 2);
    return {c, cplx(0, -s), cplx(0, -s), c};
}

std::vector<cplx> ry_matrix(double angle) {
    double c = std::cos(angle / 2), s = std::sin(angle / 2);
    return {c, -s, s, c};
}

std::vector<cplx> rz_matrix(double angle) {
    return {std::polar(1.0, -angle / 2), 0.0, 0.0, std::polar(1.0, angle / 2)};
}

std::vector<cplx> hadamard_matrix() {
    const double r = std::numbers::sqrt2 / 2;
    return {r, r, r, -r};
}

std::vector<cplx> pauli_x_matrix() { return {0.0, 1.0, 1.0, 0.0}; }

double unitarity_defect(std::span<const cplx> matrix) {
    std::size_t d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(matrix.size()))));
    if (d * d != matrix.size()) {
        return INFINITY;
    }
    double worst = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                acc += std::conj(matrix[k * d + r]) * matrix[k * d + c];
            }
            if (r == c) {
                acc -= 1.0;
            }
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    check_capacity(n_qubits);
    amplitudes_.assign(std::size_t{1} << n_qubits, cplx(0.0));
    amplitudes_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<cplx> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
    StateVector s(n_qubits);
    require(index < s.dim(), ErrorKind::Index, "basis index outside register");
    s.amplitudes_[0] = 0.0;
    s.amplitudes_[index] = 1.0;
    return s;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amplitudes) {
    require(!amplitudes.empty() && std::has_single_bit(amplitudes.size()), ErrorKind::Shape,
            "amplitude count must be a power of two");
    int n = std::countr_zero(amplitudes.size());
    check_capacity(n);
    StateVector s(n, std::move(amplitudes));
    require(std::abs(s.norm() - 1.0) <= kNormTolerance, ErrorKind::Validation, "state is not normalized");
    return s;
}

double StateVector::norm() const {
    double acc = 0.0;
    for (const auto &a : amplitudes_) {
        acc += std::norm(a);
    }
    return std::sqrt(acc);
}

void StateVector::apply(const GateOp &gate) {
    validate_gate(gate, n_qubits_, {});
    apply_gate(amplitudes_, n_qubits_, gate, 0, 0);
}

void StateVector::apply(const Circuit &circuit) {
    for (const auto &g : circuit) {
        apply(g);
    }
}

StateVector zero_state(int n_qubits) { return StateVector(n_qubits); }

StateVector apply(const GateOp &gate, StateVector state) {
    state.apply(gate);
    return state;
}

StateVector apply(const Circuit &circuit, StateVector state) {
    state.apply(circuit);
    return state;
}

cplx overlap(const StateVector &a, const StateVector &b) {
    require(a.dim() == b.dim(), ErrorKind::Shape, "overlap of states with different dimensions");
    cplx acc = 0.0;
    auto x = a.amplitudes();
    auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::conj(x[i]) * y[i];
    }
    return acc;
}

StateVector tensor(const StateVector &a, const StateVector &b) {
    int n = a.n_qubits() + b.n_qubits();
    require(n <= kMaxQubits, ErrorKind::Capacity, "tensor product exceeds the qubit cap");
    std::vector<cplx> out(std::size_t{1} << n);
    auto x = a.amplitudes();
    auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            out[i * y.size() + j] = x[i] * y[j];
        }
    }
    return StateVector::from_amplitudes(std::move(out));
}

std::vector<cplx> circuit_unitary(const Circuit &circuit, int n_qubits) {
    check_capacity(n_qubits);
    std::size_t d = std::size_t{1} << n_qubits;
    std::vector<cplx> u(d * d);
    for (std::size_t c = 0; c < d; ++c) {
        auto s = apply(circuit, StateVector::basis(n_qubits, c));
        for (std::size_t r = 0; r < d; ++r) {
            u[r * d + c] = s[r];
        }
    }
    return u;
}

// --- Observable ---

Observable Observable::pauli_sum(int n_qubits, std::vector<PauliTerm> terms) {
    check_capacity(n_qubits);
    for (const auto &t : terms) {
        require(static_cast<int>(t.word.size()) == n_qubits, ErrorKind::Shape,
                "Pauli word length differs from register size");
        require(std::isfinite(t.coefficient), ErrorKind::Validation, "Pauli coefficient must be finite");
        for (char c : t.word) {
            require(c == 'I' || c == 'X' || c == 'Y' || c == 'Z', ErrorKind::Validation,
                    std::string("invalid Pauli letter '") + c + "'");
        }
    }
    Observable o;
    o.form_ = Form::PauliStringSum;
    o.register_size_ = n_qubits;
    o.terms_ = std::move(terms);
    return o;
}

Observable Observable::pauli_z(int n_qubits, int qubit) {
    int q[] = {qubit};
    return z_product(n_qubits, q);
}

Observable Observable::z_product(int n_qubits, std::span<const int> qubits) {
    check_capacity(n_qubits);
    check_qubits(qubits, n_qubits, "observable");
    std::string word(n_qubits, 'I');
    for (int q : qubits) {
        word[q] = 'Z';
    }
    return pauli_sum(n_qubits, {{1.0, word}});
}

Observable Observable::dense(std::vector<int> qubits, std::vector<cplx> matrix) {
    require(!qubits.empty() && static_cast<int>(qubits.size()) <= kMaxDenseObservableQubits, ErrorKind::Capacity,
            "dense observables are limited to " + std::to_string(kMaxDenseObservableQubits) + " qubits");
    check_qubits(qubits, kMaxQubits, "observable");
    std::size_t d = std::size_t{1} << qubits.size();
    require(matrix.size() == d * d, ErrorKind::Shape, "dense observable matrix size mismatch");
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            require(std::abs(matrix[r * d + c] - std::conj(matrix[c * d + r])) <= kHermiticityTolerance,
                    ErrorKind::Validation, "dense observable is not Hermitian");
        }
    }
    Observable o;
    o.form_ = Form::DenseHermitian;
    o.qubits_ = std::move(qubits);
    o.matrix_ = std::move(matrix);
    return o;
}

Observable Observable::zero_projector(std::vector<int> qubits) {
    require(!qubits.empty(), ErrorKind::Validation, "zero projector needs at least one qubit");
    check_qubits(qubits, kMaxQubits, "observable");
    Observable o;
    o.form_ = Form::ZeroProjector;
    o.qubits_ = std::move(qubits);
    return o;
}

Observable Observable::tensor_pair(Observable left, Observable right) {
    auto a = left.support();
    auto b = right.support();
    std::vector<int> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    require(common.empty(), ErrorKind::Validation, "tensor pair factors must act on disjoint qubits");
    Observable o;
    o.form_ = Form::TensorPair;
    o.left_ = std::make_shared<const Observable>(std::move(left));
    o.right_ = std::make_shared<const Observable>(std::move(right));
    return o;
}

std::vector<int> Observable::support() const {
    std::set<int> s;
    switch (form_) {
        case Form::PauliStringSum:
            for (const auto &t : terms_) {
                for (int q = 0; q < static_cast<int>(t.word.size()); ++q) {
                    if (t.word[q] != 'I') {
                        s.insert(q);
                    }
                }
            }
            break;
        case Form::DenseHermitian:
        case Form::ZeroProjector:
            s.insert(qubits_.begin(), qubits_.end());
            break;
        case Form::TensorPair: {
            auto a = left_->support();
            auto b = right_->support();
            s.insert(a.begin(), a.end());
            s.insert(b.begin(), b.end());
            break;
        }
    }
    return {s.begin(), s.end()};
}

int Observable::min_qubits() const {
    switch (form_) {
        case Form::PauliStringSum:
            return register_size_;
        case Form::DenseHermitian:
        case Form::ZeroProjector:
            return *std::max_element(qubits_.begin(), qubits_.end()) + 1;
        case Form::TensorPair:
            return std::max(left_->min_qubits(), right_->min_qubits());
    }
    return 0;
}

namespace {

void apply_observable(const Observable &obs, std::vector<cplx> &amps, int n_qubits) {
    switch (obs.form()) {
        case Observable::Form::PauliStringSum: {
            require(obs.register_size() == n_qubits, ErrorKind::Shape,
                    "Pauli observable register differs from state register");
            std::vector<cplx> out(amps.size(), cplx(0.0));
            for (const auto &term : obs.terms()) {
                std::uint64_t xmask = 0, phase_mask = 0;
                int n_y = 0;
                for (int q = 0; q < n_qubits; ++q) {
                    std::uint64_t bit = qubit_bit(n_qubits, q);
                    char c = term.word[q];
                    if (c == 'X' || c == 'Y') {
                        xmask |= bit;
                    }
                    if (c == 'Z' || c == 'Y') {
                        phase_mask |= bit;
                    }
                    n_y += (c == 'Y');
                }
                static const cplx kIPowers[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
                cplx base = term.coefficient * kIPowers[n_y % 4];
                for (std::uint64_t i = 0; i < amps.size(); ++i) {
                    cplx f = (std::popcount(i & phase_mask) & 1) ? -base : base;
                    out[i ^ xmask] += f * amps[i];
                }
            }
            amps.swap(out);
            break;
        }
        case Observable::Form::DenseHermitian:
            apply_matrix(amps, n_qubits, obs.qubits(), obs.matrix(), 0, 0);
            break;
        case Observable::Form::ZeroProjector: {
            std::uint64_t mask = 0;
            for (int q : obs.qubits()) {
                mask |= qubit_bit(n_qubits, q);
            }
            for (std::uint64_t i = 0; i < amps.size(); ++i) {
                if (i & mask) {
                    amps[i] = 0.0;
                }
            }
            break;
        }
        case Observable::Form::TensorPair:
            apply_observable(obs.right(), amps, n_qubits);
            apply_observable(obs.left(), amps, n_qubits);
            break;
    }
}

double coefficient_scale(const Observable &obs) {
    switch (obs.form()) {
        case Observable::Form::PauliStringSum: {
            double s = 0.0;
            for (const auto &t : obs.terms()) {
                s += std::abs(t.coefficient);
            }
            return s;
        }
        case Observable::Form::DenseHermitian: {
            double s = 0.0;
            for (const auto &v : obs.matrix()) {
                s = std::max(s, std::abs(v));
            }
            return s * std::sqrt(static_cast<double>(obs.matrix().size()));
        }
        case Observable::Form::ZeroProjector:
            return 1.0;
        case Observable::Form::TensorPair:
            return coefficient_scale(obs.left()) * coefficient_scale(obs.right());
    }
    return 1.0;
}

}  // namespace

std::vector<cplx> Observable::apply_to(const StateVector &state) const {
    require(min_qubits() <= state.n_qubits(), ErrorKind::Shape, "observable acts outside the state's register");
    std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
    apply_observable(*this, amps, state.n_qubits());
    return amps;
}

bool operator==(const Observable &a, const Observable &b) {
    if (a.form_ != b.form_) {
        return false;
    }
    if (a.form_ == Observable::Form::TensorPair) {
        return *a.left_ == *b.left_ && *a.right_ == *b.right_;
    }
    return a.register_size_ == b.register_size_ && a.terms_ == b.terms_ && a.qubits_ == b.qubits_ &&
           a.matrix_ == b.matrix_;
}

double expectation(const StateVector &state, const Observable &obs) {
    auto m_psi = obs.apply_to(state);
    auto psi = state.amplitudes();
    cplx acc = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        acc += std::conj(psi[i]) * m_psi[i];
    }
    double tol = 1e-10 * std::max(1.0, coefficient_scale(obs));
    require(std::abs(acc.imag()) <= tol, ErrorKind::Numerical,
            "expectation value has imaginary residue " + std::to_string(acc.imag()));
    return acc.real();
}

void write_dump(std::ostream &out, const StateVector &state) {
    auto old = out.precision(17);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        out << i << '\t' << state[i].real() << '\t' << state[i].imag() << '\n';
    }
    out.precision(old);
}

}  // namespace varivery
