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
 * Layered parametrized circuit templates and the builders for every circuit
 * family in the project: the hardware-efficient brickwork (HEA), the
 * counter-gated gadget U~(x), and the repeated-layer model
 * V(x; theta) = prod_j U~(x) (x) RX(theta_j).
 *
 * A template maps (x, theta) to a circuit; f(x; theta) is the expectation of
 * the template's observable on that circuit applied to |0...0>.
 */

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "varivery/hardfn.hpp"
#include "varivery/sampling.hpp"
#include "varivery/statevec.hpp"

namespace varivery {

enum class ParamKind { RotationX, RotationZ, Brick };

std::string param_kind_name(ParamKind kind);

/// Number of angles a slot of this kind consumes.
int param_width(ParamKind kind);

struct SlotEntry {
    enum class Kind { Data, Param, Fixed };

    Kind kind = Kind::Fixed;
    /// Data: builder id and its arguments; see `realize_data_slot`.
    std::string builder;
    nlohmann::json args;
    /// Param: rotation kind and the first parameter index it reads.
    ParamKind param_kind = ParamKind::RotationX;
    int index = 0;
    /// Data and Param slots: qubits the slot acts on.
    std::vector<int> qubits;
    /// Fixed: the gate.
    GateOp gate;

    static SlotEntry data(std::string builder, nlohmann::json args, std::vector<int> qubits);
    static SlotEntry param(ParamKind kind, int index, std::vector<int> qubits);
    static SlotEntry fixed(GateOp gate);
};

/// A column of slots acting on pairwise disjoint qubits.
struct LayerSpec {
    std::vector<SlotEntry> gates;
};

/// Data-dependent circuit x -> gates.
using DataCircuit = std::function<Circuit(Input)>;

/// Resolves a data slot to its circuit builder. Known builders:
///   planted     {"planted": spec}                 U(x) on the slot qubits
///   tilde_u     {"planted": spec, "t": t}         U~(x); last t slot qubits form the counter
///   bit_flips   {}                                X on slot qubit b when bit b of x is set
///   dlp_feature {"p": p, "g": g, "k_window": k}   coset superposition
DataCircuit realize_data_slot(const std::string &builder, const nlohmann::json &args, std::span<const int> qubits);

/// Perturbation of a single parameter slot, used for parameter-shift probes.
struct SlotShift {
    std::size_t layer = 0;
    std::size_t slot = 0;
    double delta = 0.0;
};

class CircuitTemplate {
   public:
    /// Validates qubit bounds, per-layer disjointness and parameter indices.
    CircuitTemplate(int n_qubits, std::vector<LayerSpec> layers, Observable observable);

    int n_qubits() const noexcept { return n_qubits_; }
    const std::vector<LayerSpec> &layers() const noexcept { return layers_; }
    const Observable &observable() const noexcept { return observable_; }
    int param_count() const noexcept { return param_count_; }
    bool has_data_slots() const noexcept { return !data_slots_.empty(); }

    /// Every (layer, slot) that reads parameter j.
    const std::vector<std::pair<std::size_t, std::size_t>> &occurrences(int j) const { return occurrences_[j]; }

    /// Gate list for (x, theta), optionally with one slot's angle shifted.
    Circuit realize(Input x, std::span<const double> theta, const SlotShift *shift = nullptr) const;
    StateVector prepare(Input x, std::span<const double> theta, const SlotShift *shift = nullptr) const;
    /// f(x; theta).
    double evaluate(Input x, std::span<const double> theta, const SlotShift *shift = nullptr) const;

    nlohmann::json to_json() const;
    static CircuitTemplate from_json(const nlohmann::json &j);

   private:
    void check_theta(std::span<const double> theta) const;

    int n_qubits_;
    std::vector<LayerSpec> layers_;
    Observable observable_;
    int param_count_ = 0;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> occurrences_;
    // Data slots grouped by identical (builder, args, qubits); each group is
    // realized once per evaluation.
    struct DataSlotRef {
        std::size_t layer, slot, group;
    };
    std::vector<DataSlotRef> data_slots_;
    std::vector<DataCircuit> data_groups_;
};

// --- JSON for gates and observables (also used by the circuit format) ---

nlohmann::json gate_to_json(const GateOp &gate);
GateOp gate_from_json(const nlohmann::json &j);
nlohmann::json observable_to_json(const Observable &obs);
Observable observable_from_json(const nlohmann::json &j);

// --- builders ---

inline constexpr int kMaxAdderQubits = 8;

/// A|b> = |b + 1 mod 2^t> on qubits 0..t-1.
GateOp adder_gate(int t);

/// U~(x) on n + t qubits: U(x) on the first n qubits applied only when the
/// last t qubits read |0...0>, then the adder on the last t qubits.
DataCircuit build_tilde_u(DataCircuit u_of_x, int n_data, int t);

struct VariVeryConfig {
    /// Planted function spec (see planted_from_spec).
    nlohmann::json planted;
    int t = 3;
    int layers = 4;
    int n_data = 2;

    int n_qubits() const { return n_data + t + 1; }
    int trainable_qubit() const { return n_data + t; }
    void validate() const;
};

/// L identical layers of U~(x) on data+counter tensored with RX(theta_j) on
/// the trainable qubit; observable Z(data qubit 0) Z(trainable qubit).
CircuitTemplate build_varivery(const VariVeryConfig &cfg);

struct HeaConfig {
    enum class ObservableKind { LocalZ1, GlobalZAll, Custom };

    int n_qubits = 2;
    int depth = 1;
    ObservableKind observable_kind = ObservableKind::LocalZ1;
    std::optional<Observable> custom_observable;
    /// Prepend a data layer flipping qubit b when bit b of x is set.
    bool encode_bits = true;

    void validate() const;
};

/// Number of bricks in brickwork layer `layer` over `n_qubits` (even layers
/// start at qubit 0, odd layers at qubit 1).
int bricks_in_layer(int n_qubits, int layer);
int hea_param_count(const HeaConfig &cfg);

/// 1-D brickwork of 15-angle bricks, alternating even/odd offsets.
CircuitTemplate build_hea(const HeaConfig &cfg);
/// Same, additionally checking that `theta` fits the template.
CircuitTemplate build_hea(const HeaConfig &cfg, std::span<const double> theta);

/// Recorded alongside a template so the structural properties can be checked.
struct ConstructionMeta {
    std::string family;
    int layer_count = 0;
    /// Largest admissible layer count (exclusive), 0 if unbounded.
    int layer_window = 0;
    bool starts_from_zero = true;
    /// Rebuilds the same family with a different layer count.
    std::function<CircuitTemplate(int)> rebuild;
};

ConstructionMeta varivery_meta(const VariVeryConfig &cfg);
ConstructionMeta hea_meta(const HeaConfig &cfg);

struct PropertyReport {
    enum class Evidence { Pending, Satisfied, Failed };

    bool identical_layers = false;
    bool tunable_layer_count = false;
    bool starts_from_zero = false;
    bool observable_layer_independent = false;
    /// Gradient-based trainability is behavioural; filled from a training run.
    Evidence trainable = Evidence::Pending;
    std::string trainable_evidence;

    bool structural_ok() const {
        return identical_layers && tunable_layer_count && starts_from_zero && observable_layer_independent;
    }
    nlohmann::json to_json() const;
};

PropertyReport validate_varivery(const CircuitTemplate &tmpl, const ConstructionMeta &meta);

}  // namespace varivery
