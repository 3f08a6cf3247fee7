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
 * Kernel models as circuits.
 *
 * `compile_lcu` turns f(x) = sum_i alpha_i k(x, x_i) into a linear combination
 * of unitaries: an ancilla register prepared in sum_i beta_i |i>, the feature
 * circuit V(x) on the work register and V(x_i)^dagger controlled on |i>. The
 * measurement D (x) |0><0| with D = diag(sign alpha_i) gives f(x) / ||alpha||_1.
 *
 * `compile_brickwork` rewrites any circuit of 1- and 2-qubit gates (after
 * expanding controls and adders) as a 1-D brickwork of 15-angle bricks.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "varivery/ansatz.hpp"
#include "varivery/brick.hpp"
#include "varivery/diagnostics.hpp"
#include "varivery/kernel.hpp"

namespace varivery {

struct LcuCircuit {
    int n_ancilla = 0;
    int n_work = 0;
    /// Ancilla amplitudes, length 2^n_ancilla (zero-padded).
    std::vector<double> beta{};
    /// Diagonal of D, length 2^n_ancilla (+1 on padding).
    std::vector<int> signs{};
    double scale = 0.0;
    /// Ancilla state preparation on qubits 0..n_ancilla-1.
    Circuit prep{};
    struct Block {
        std::uint64_t pattern = 0;
        Input support_x = 0;
    };
    std::vector<Block> blocks{};
    FeatureMap feature_map;
    Observable measurement;

    int n_qubits() const { return n_ancilla + n_work; }
    std::vector<int> work_qubits() const;
    /// x-independent part: prep followed by the controlled V(x_i)^dagger blocks.
    Circuit fixed_part() const;
    /// V(x) on the work register.
    Circuit data_part(Input x) const;
    Circuit circuit(Input x) const;
    double expectation(Input x) const;
    /// scale * expectation(x).
    double predict(Input x) const { return scale * expectation(x); }
};

/// Needs at least one non-zero alpha.
LcuCircuit compile_lcu(const KernelModel &model);

/// A 1- or 2-qubit gate with its dense matrix (first qubit most significant).
struct ElementaryGate {
    std::vector<int> qubits;
    std::vector<cplx> matrix;
};

inline constexpr int kMaxAdderExpansion = 4;

/// Rewrites a circuit into 1- and 2-qubit gates: controls are expanded
/// recursively through controlled square roots, adders up to 4 qubits become
/// multi-controlled flips. Wider fixed unitaries are a decomposition error.
std::vector<ElementaryGate> expand_to_elementary(const Circuit &circuit);

struct BrickSlot {
    int layer = 0;
    /// The brick acts on (qubit, qubit + 1).
    int qubit = 0;
    /// First parameter index of this brick.
    int offset = 0;
};

struct BrickworkLayout {
    int n_qubits = 0;
    int depth = 0;
    /// Full grid, layer-major: even layers start at qubit 0, odd layers at 1.
    std::vector<BrickSlot> slots;
    /// Resolved angles for every slot (identity slots are all zero).
    std::vector<double> param_map;
    /// Number of source bricks before padding.
    int placed_bricks = 0;

    int total_params() const { return static_cast<int>(slots.size()) * kBrickParams; }
    /// The layout's brick layers as template layers.
    std::vector<LayerSpec> layers() const;
    Circuit instantiate(std::span<const double> theta) const;
    nlohmann::json to_json() const;
};

BrickworkLayout compile_brickwork(const Circuit &circuit, int n_qubits);

/// Template: V(x) on the work register, then the brickwork of the fixed part,
/// measured with the LCU observable.
CircuitTemplate lcu_brickwork_template(const LcuCircuit &lcu, const BrickworkLayout &layout);

struct Prop1Config {
    std::uint64_t p = 23;
    std::uint64_t g = 5;
    int k_window = 2;
    std::size_t n_train = 4;
    double lambda = 1e-3;
    std::size_t bp_n_x = 8;
    std::size_t bp_n_theta = 64;
    std::uint64_t seed = 0;
};

struct Prop1Record {
    KernelModel model;
    LcuCircuit lcu;
    BrickworkLayout layout;
    Dataset train;
    double kernel_train_accuracy = 0.0;
    double circuit_train_accuracy = 0.0;
    /// Largest |scale * f_lcu(x) - predict(x)| over the group.
    double lcu_deviation = 0.0;
    /// Largest |scale * f_brick(x; param_map) - scale * f_lcu(x)| over the group.
    double brickwork_deviation = 0.0;
    BpEstimate uniform_bp{};

    nlohmann::json to_json() const;
};

Prop1Record run_prop1_experiment(const Prop1Config &cfg);

}  // namespace varivery
