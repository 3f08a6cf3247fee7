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

/**
 * @file
 * Dense pure-state simulator.
 *
 * Qubit 0 is the most significant bit of an amplitude index: in a register of
 * n qubits, qubit q corresponds to bit (n - 1 - q). Multi-qubit matrices and
 * control patterns follow the same convention over their own qubit lists, so
 * the first listed qubit is the most significant one.
 */

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace varivery {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 24;
inline constexpr int kMaxDenseObservableQubits = 12;
inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kUnitarityTolerance = 1e-10;
inline constexpr double kHermiticityTolerance = 1e-12;

enum class GateKind {
    FixedUnitary,
    RotationX,
    RotationZ,
    Hadamard,
    PauliX,
    Controlled,
    Adder,
};

std::string gate_kind_name(GateKind kind);
GateKind gate_kind_from_name(const std::string &name);

/// One gate application. Which fields are meaningful depends on `kind`.
struct GateOp {
    GateKind kind = GateKind::PauliX;
    /// Acted-on qubits, most significant first. Unused for `Controlled`.
    std::vector<int> targets;
    /// Rotation angle in radians.
    double angle = 0.0;
    /// Row-major 2^k x 2^k matrix for `FixedUnitary`.
    std::vector<cplx> matrix;
    /// Control register for `Controlled`, most significant first.
    std::vector<int> controls;
    /// Value the control register must hold for the block to act.
    std::uint64_t pattern = 0;
    /// Gates applied, in order, on the matching subspace.
    std::vector<GateOp> inner;
    /// `Adder` maps |b> to |b + step mod 2^t>.
    int adder_step = 1;

    static GateOp fixed(std::vector<int> targets, std::vector<cplx> matrix);
    static GateOp rx(int qubit, double angle);
    static GateOp rz(int qubit, double angle);
    static GateOp h(int qubit);
    static GateOp x(int qubit);
    static GateOp controlled(std::vector<int> controls, std::uint64_t pattern, std::vector<GateOp> inner);
    /// Single-control shorthand: `inner` acts when `control` reads |1>.
    static GateOp cnot(int control, int target);
    static GateOp adder(std::vector<int> targets, int step = 1);

    friend bool operator==(const GateOp &, const GateOp &) = default;
};

using Circuit = std::vector<GateOp>;

/// Sorted union of every qubit a gate touches, controls included.
std::vector<int> gate_support(const GateOp &gate);
std::vector<int> circuit_support(const Circuit &circuit);

GateOp adjoint(const GateOp &gate);
Circuit adjoint(const Circuit &circuit);

/// Renames qubits: qubit q becomes mapping[q].
GateOp remap(const GateOp &gate, std::span<const int> mapping);
Circuit remap(const Circuit &circuit, std::span<const int> mapping);
/// Adds `offset` to every qubit index.
Circuit shift(const Circuit &circuit, int offset);

std::vector<cplx> rx_matrix(double angle);
std::vector<cplx> ry_matrix(double angle);
std::vector<cplx> rz_matrix(double angle);
std::vector<cplx> hadamard_matrix();
std::vector<cplx> pauli_x_matrix();

/// Largest elementwise deviation of U^dagger U from the identity.
double unitarity_defect(std::span<const cplx> matrix);

class StateVector {
   public:
    /// The all-zero computational basis state.
    explicit StateVector(int n_qubits);

    static StateVector basis(int n_qubits, std::uint64_t index);
    /// Takes ownership of amplitudes; the length must be a power of two and
    /// the norm must be 1 within kNormTolerance.
    static StateVector from_amplitudes(std::vector<cplx> amplitudes);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dim() const noexcept { return amplitudes_.size(); }
    std::span<const cplx> amplitudes() const noexcept { return amplitudes_; }
    cplx operator[](std::size_t index) const { return amplitudes_[index]; }
    double norm() const;

    void apply(const GateOp &gate);
    void apply(const Circuit &circuit);

   private:
    StateVector(int n_qubits, std::vector<cplx> amplitudes);

    int n_qubits_;
    std::vector<cplx> amplitudes_;
};

StateVector zero_state(int n_qubits);
StateVector apply(const GateOp &gate, StateVector state);
StateVector apply(const Circuit &circuit, StateVector state);

/// <a|b>.
cplx overlap(const StateVector &a, const StateVector &b);
/// Kronecker product; `a` occupies the high-order qubits.
StateVector tensor(const StateVector &a, const StateVector &b);

/// Dense matrix of a circuit on `n_qubits`, built column by column.
std::vector<cplx> circuit_unitary(const Circuit &circuit, int n_qubits);

struct PauliTerm {
    double coefficient = 0.0;
    /// One of I, X, Y, Z per qubit; length equals the register size.
    std::string word;

    friend bool operator==(const PauliTerm &, const PauliTerm &) = default;
};

/// Hermitian measurement operator.
class Observable {
   public:
    enum class Form { PauliStringSum, DenseHermitian, ZeroProjector, TensorPair };

    static Observable pauli_sum(int n_qubits, std::vector<PauliTerm> terms);
    static Observable pauli_z(int n_qubits, int qubit);
    /// Z on every qubit in `qubits`, identity elsewhere.
    static Observable z_product(int n_qubits, std::span<const int> qubits);
    static Observable dense(std::vector<int> qubits, std::vector<cplx> matrix);
    /// |0...0><0...0| on the listed qubits.
    static Observable zero_projector(std::vector<int> qubits);
    /// Product of two observables on disjoint qubit sets.
    static Observable tensor_pair(Observable left, Observable right);

    Form form() const noexcept { return form_; }
    const std::vector<PauliTerm> &terms() const noexcept { return terms_; }
    int register_size() const noexcept { return register_size_; }
    const std::vector<int> &qubits() const noexcept { return qubits_; }
    const std::vector<cplx> &matrix() const noexcept { return matrix_; }
    const Observable &left() const { return *left_; }
    const Observable &right() const { return *right_; }

    /// Qubits the operator acts on non-trivially (sorted).
    std::vector<int> support() const;
    /// Smallest register this observable can be measured on.
    int min_qubits() const;

    /// M|psi> as a raw amplitude vector.
    std::vector<cplx> apply_to(const StateVector &state) const;

    friend bool operator==(const Observable &a, const Observable &b);

   private:
    Form form_ = Form::PauliStringSum;
    int register_size_ = 0;
    std::vector<PauliTerm> terms_;
    std::vector<int> qubits_;
    std::vector<cplx> matrix_;
    std::shared_ptr<const Observable> left_;
    std::shared_ptr<const Observable> right_;
};

/// <psi|M|psi>. The imaginary residue must be below 1e-10 and is discarded.
double expectation(const StateVector &state, const Observable &obs);

/// Debug dump: one `index<TAB>re<TAB>im` line per amplitude, 17 significant digits.
void write_dump(std::ostream &out, const StateVector &state);

}  // namespace varivery
