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

#include "varivery/ansatz.hpp"

#include <algorithm>
#include <memory>
#include <numeric>

#include "varivery/brick.hpp"
#include "varivery/error.hpp"

namespace varivery {

std::string param_kind_name(ParamKind kind) {
    switch (kind) {
        case ParamKind::RotationX:
            return "RotationX";
        case ParamKind::RotationZ:
            return "RotationZ";
        case ParamKind::Brick:
            return "Brick15";
    }
    return "?";
}

static ParamKind param_kind_from_name(const std::string &name) {
    if (name == "RotationX") return ParamKind::RotationX;
    if (name == "RotationZ") return ParamKind::RotationZ;
    if (name == "Brick15") return ParamKind::Brick;
    fail(ErrorKind::Validation, "unknown parameter slot kind '" + name + "'");
}

int param_width(ParamKind kind) { return kind == ParamKind::Brick ? kBrickParams : 1; }

SlotEntry SlotEntry::data(std::string builder, nlohmann::json args, std::vector<int> qubits) {
    SlotEntry e;
    e.kind = Kind::Data;
    e.builder = std::move(builder);
    e.args = std::move(args);
    e.qubits = std::move(qubits);
    return e;
}

SlotEntry SlotEntry::param(ParamKind kind, int index, std::vector<int> qubits) {
    SlotEntry e;
    e.kind = Kind::Param;
    e.param_kind = kind;
    e.index = index;
    e.qubits = std::move(qubits);
    return e;
}

SlotEntry SlotEntry::fixed(GateOp gate) {
    SlotEntry e;
    e.kind = Kind::Fixed;
    e.gate = std::move(gate);
    return e;
}

// ---------------------------------------------------------------------------
// Data slots

GateOp adder_gate(int t) {
    require(t >= 1 && t <= kMaxAdderQubits, ErrorKind::Capacity,
            "adder width must be in [1, " + std::to_string(kMaxAdderQubits) + "], got " + std::to_string(t));
    std::vector<int> targets(t);
    std::iota(targets.begin(), targets.end(), 0);
    return GateOp::adder(std::move(targets));
}

DataCircuit build_tilde_u(DataCircuit u_of_x, int n_data, int t) {
    require(n_data >= 1, ErrorKind::Validation, "U~ needs at least one data qubit");
    require(n_data + t <= kMaxQubits, ErrorKind::Capacity, "U~ register exceeds the qubit cap");
    GateOp adder = shift({adder_gate(t)}, n_data)[0];
    std::vector<int> counter(t);
    std::iota(counter.begin(), counter.end(), n_data);
    return [u = std::move(u_of_x), adder, counter, n_data](Input x) {
        Circuit inner = u(x);
        for (int q : circuit_support(inner)) {
            require(q < n_data, ErrorKind::Index, "U(x) touches a qubit outside the data register");
        }
        Circuit out;
        if (!inner.empty()) {
            out.push_back(GateOp::controlled(counter, 0, std::move(inner)));
        }
        out.push_back(adder);
        return out;
    };
}

DataCircuit realize_data_slot(const std::string &builder, const nlohmann::json &args, std::span<const int> qubits) {
    std::vector<int> mapping(qubits.begin(), qubits.end());
    require(!mapping.empty(), ErrorKind::Validation, "data slot '" + builder + "' has no qubits");
    if (builder == "planted") {
        auto fn = std::make_shared<PlantedFunction>(planted_from_spec(args.at("planted")));
        return [fn, mapping](Input x) { return remap(fn->circuit(x), mapping); };
    }
    if (builder == "tilde_u") {
        int t = args.at("t").get<int>();
        int n_data = static_cast<int>(mapping.size()) - t;
        require(t >= 1 && n_data >= 1, ErrorKind::Validation, "tilde_u slot needs data and counter qubits");
        auto fn = std::make_shared<PlantedFunction>(planted_from_spec(args.at("planted")));
        DataCircuit local = build_tilde_u([fn](Input x) { return fn->circuit(x); }, n_data, t);
        return [local, mapping](Input x) { return remap(local(x), mapping); };
    }
    if (builder == "bit_flips") {
        return [mapping](Input x) {
            const int n = static_cast<int>(mapping.size());
            require(n >= 64 || (x >> n) == 0, ErrorKind::Domain, "input wider than the encoding register");
            Circuit out;
            for (int b = 0; b < n; ++b) {
                if ((x >> (n - 1 - b)) & 1U) {
                    out.push_back(GateOp::x(mapping[b]));
                }
            }
            return out;
        };
    }
    if (builder == "dlp_feature") {
        auto inst = std::make_shared<DlpInstance>(args.at("p").get<std::uint64_t>(), args.at("g").get<std::uint64_t>());
        int k = args.at("k_window").get<int>();
        require(static_cast<int>(mapping.size()) == inst->n_bits(), ErrorKind::Shape,
                "dlp_feature slot width must equal the element bit width");
        return [inst, k, mapping](Input x) { return remap(dlp_feature_circuit(*inst, k, x), mapping); };
    }
    fail(ErrorKind::Validation, "unknown data builder '" + builder + "'");
}

// ---------------------------------------------------------------------------
// Template

CircuitTemplate::CircuitTemplate(int n_qubits, std::vector<LayerSpec> layers, Observable observable)
    : n_qubits_(n_qubits), layers_(std::move(layers)), observable_(std::move(observable)) {
    require(n_qubits >= 1 && n_qubits <= kMaxQubits, ErrorKind::Capacity,
            "template register must have 1.." + std::to_string(kMaxQubits) + " qubits");
    require(observable_.min_qubits() <= n_qubits, ErrorKind::Shape, "observable does not fit the register");

    int max_index = -1;
    std::vector<std::pair<std::string, std::size_t>> groups;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        std::vector<bool> used(n_qubits, false);
        for (std::size_t s = 0; s < layers_[l].gates.size(); ++s) {
            const SlotEntry &e = layers_[l].gates[s];
            std::vector<int> touched = e.kind == SlotEntry::Kind::Fixed ? gate_support(e.gate) : e.qubits;
            for (int q : touched) {
                require(q >= 0 && q < n_qubits, ErrorKind::Index,
                        "layer " + std::to_string(l) + " slot " + std::to_string(s) + " touches qubit " +
                            std::to_string(q) + " outside the register");
                require(!used[q], ErrorKind::Validation,
                        "layer " + std::to_string(l) + " uses qubit " + std::to_string(q) + " twice");
                used[q] = true;
            }
            if (e.kind == SlotEntry::Kind::Param) {
                int arity = e.param_kind == ParamKind::Brick ? 2 : 1;
                require(static_cast<int>(e.qubits.size()) == arity, ErrorKind::Shape,
                        param_kind_name(e.param_kind) + " slot needs " + std::to_string(arity) + " qubit(s)");
                require(e.index >= 0, ErrorKind::Index, "negative parameter index");
                max_index = std::max(max_index, e.index + param_width(e.param_kind) - 1);
            } else if (e.kind == SlotEntry::Kind::Data) {
                std::string key = e.builder + "|" + e.args.dump() + "|" + nlohmann::json(e.qubits).dump();
                auto it = std::find_if(groups.begin(), groups.end(), [&](const auto &g) { return g.first == key; });
                std::size_t group = 0;
                if (it == groups.end()) {
                    group = data_groups_.size();
                    groups.emplace_back(key, group);
                    data_groups_.push_back(realize_data_slot(e.builder, e.args, e.qubits));
                } else {
                    group = it->second;
                }
                data_slots_.push_back({l, s, group});
            }
        }
    }
    param_count_ = max_index + 1;
    occurrences_.assign(param_count_, {});
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        for (std::size_t s = 0; s < layers_[l].gates.size(); ++s) {
            const SlotEntry &e = layers_[l].gates[s];
            if (e.kind == SlotEntry::Kind::Param) {
                for (int k = 0; k < param_width(e.param_kind); ++k) {
                    occurrences_[e.index + k].emplace_back(l, s);
                }
            }
        }
    }
}

void CircuitTemplate::check_theta(std::span<const double> theta) const {
    require(static_cast<int>(theta.size()) == param_count_, ErrorKind::Shape,
            "template takes " + std::to_string(param_count_) + " parameters, got " + std::to_string(theta.size()));
}

Circuit CircuitTemplate::realize(Input x, std::span<const double> theta, const SlotShift *shift) const {
    check_theta(theta);
    std::vector<Circuit> realized(data_groups_.size());
    std::vector<bool> done(data_groups_.size(), false);
    std::size_t next_data = 0;
    Circuit out;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        for (std::size_t s = 0; s < layers_[l].gates.size(); ++s) {
            const SlotEntry &e = layers_[l].gates[s];
            switch (e.kind) {
                case SlotEntry::Kind::Data: {
                    std::size_t g = data_slots_[next_data++].group;
                    if (!done[g]) {
                        realized[g] = data_groups_[g](x);
                        done[g] = true;
                    }
                    out.insert(out.end(), realized[g].begin(), realized[g].end());
                    break;
                }
                case SlotEntry::Kind::Param: {
                    double delta = (shift && shift->layer == l && shift->slot == s) ? shift->delta : 0.0;
                    if (e.param_kind == ParamKind::RotationX) {
                        out.push_back(GateOp::rx(e.qubits[0], theta[e.index] + delta));
                    } else if (e.param_kind == ParamKind::RotationZ) {
                        out.push_back(GateOp::rz(e.qubits[0], theta[e.index] + delta));
                    } else {
                        require(delta == 0.0, ErrorKind::UnsupportedMethod, "brick slots cannot be shifted as a whole");
                        out.push_back(GateOp::fixed(e.qubits, brick_unitary(theta.subspan(e.index, kBrickParams))));
                    }
                    break;
                }
                case SlotEntry::Kind::Fixed:
                    out.push_back(e.gate);
                    break;
            }
        }
    }
    return out;
}

StateVector CircuitTemplate::prepare(Input x, std::span<const double> theta, const SlotShift *shift) const {
    StateVector state(n_qubits_);
    state.apply(realize(x, theta, shift));
    return state;
}

double CircuitTemplate::evaluate(Input x, std::span<const double> theta, const SlotShift *shift) const {
    return expectation(prepare(x, theta, shift), observable_);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json matrix_to_json(const std::vector<cplx> &m) {
    nlohmann::json out = nlohmann::json::array();
    for (const cplx &c : m) {
        out.push_back({c.real(), c.imag()});
    }
    return out;
}

std::vector<cplx> matrix_from_json(const nlohmann::json &j) {
    std::vector<cplx> out;
    for (const auto &c : j) {
        require(c.is_array() && c.size() == 2, ErrorKind::Validation, "matrix entries are [re, im] pairs");
        out.emplace_back(c[0].get<double>(), c[1].get<double>());
    }
    return out;
}

nlohmann::json slot_to_json(const SlotEntry &e) {
    switch (e.kind) {
        case SlotEntry::Kind::Data:
            return {{"slot", "data"}, {"builder", e.builder}, {"args", e.args}, {"qubits", e.qubits}};
        case SlotEntry::Kind::Param:
            return {{"slot", "param"}, {"kind", param_kind_name(e.param_kind)}, {"index", e.index}, {"qubits", e.qubits}};
        case SlotEntry::Kind::Fixed:
            return {{"slot", "fixed"}, {"gate", gate_to_json(e.gate)}};
    }
    return {};
}

SlotEntry slot_from_json(const nlohmann::json &j) {
    std::string slot = j.at("slot").get<std::string>();
    if (slot == "data") {
        return SlotEntry::data(j.at("builder").get<std::string>(), j.at("args"), j.at("qubits").get<std::vector<int>>());
    }
    if (slot == "param") {
        return SlotEntry::param(param_kind_from_name(j.at("kind").get<std::string>()), j.at("index").get<int>(),
                                j.at("qubits").get<std::vector<int>>());
    }
    if (slot == "fixed") {
        return SlotEntry::fixed(gate_from_json(j.at("gate")));
    }
    fail(ErrorKind::Validation, "unknown slot type '" + slot + "'");
}

nlohmann::json layer_to_json(const LayerSpec &layer, bool drop_index) {
    nlohmann::json gates = nlohmann::json::array();
    for (const SlotEntry &e : layer.gates) {
        nlohmann::json g = slot_to_json(e);
        if (drop_index) {
            g.erase("index");
        }
        gates.push_back(std::move(g));
    }
    return {{"gates", gates}};
}

}  // namespace

nlohmann::json gate_to_json(const GateOp &gate) {
    nlohmann::json j = {{"kind", gate_kind_name(gate.kind)}};
    switch (gate.kind) {
        case GateKind::FixedUnitary:
            j["targets"] = gate.targets;
            j["matrix"] = matrix_to_json(gate.matrix);
            break;
        case GateKind::RotationX:
        case GateKind::RotationZ:
            j["targets"] = gate.targets;
            j["angle"] = gate.angle;
            break;
        case GateKind::Hadamard:
        case GateKind::PauliX:
            j["targets"] = gate.targets;
            break;
        case GateKind::Controlled: {
            j["controls"] = gate.controls;
            j["pattern"] = gate.pattern;
            nlohmann::json inner = nlohmann::json::array();
            for (const GateOp &g : gate.inner) {
                inner.push_back(gate_to_json(g));
            }
            j["inner"] = inner;
            break;
        }
        case GateKind::Adder:
            j["targets"] = gate.targets;
            j["step"] = gate.adder_step;
            break;
    }
    return j;
}

GateOp gate_from_json(const nlohmann::json &j) {
    GateKind kind = gate_kind_from_name(j.at("kind").get<std::string>());
    auto targets = [&] { return j.at("targets").get<std::vector<int>>(); };
    auto single = [&] {
        auto t = targets();
        require(t.size() == 1, ErrorKind::Shape, "single-qubit gate with " + std::to_string(t.size()) + " targets");
        return t[0];
    };
    switch (kind) {
        case GateKind::FixedUnitary:
            return GateOp::fixed(targets(), matrix_from_json(j.at("matrix")));
        case GateKind::RotationX:
            return GateOp::rx(single(), j.at("angle").get<double>());
        case GateKind::RotationZ:
            return GateOp::rz(single(), j.at("angle").get<double>());
        case GateKind::Hadamard:
            return GateOp::h(single());
        case GateKind::PauliX:
            return GateOp::x(single());
        case GateKind::Controlled: {
            std::vector<GateOp> inner;
            for (const auto &g : j.at("inner")) {
                inner.push_back(gate_from_json(g));
            }
            return GateOp::controlled(j.at("controls").get<std::vector<int>>(), j.at("pattern").get<std::uint64_t>(),
                                      std::move(inner));
        }
        case GateKind::Adder:
            return GateOp::adder(targets(), j.value("step", 1));
    }
    fail(ErrorKind::Validation, "unreachable gate kind");
}

nlohmann::json observable_to_json(const Observable &obs) {
    switch (obs.form()) {
        case Observable::Form::PauliStringSum: {
            nlohmann::json terms = nlohmann::json::array();
            for (const PauliTerm &t : obs.terms()) {
                terms.push_back({{"coefficient", t.coefficient}, {"word", t.word}});
            }
            return {{"form", "PauliStringSum"}, {"n_qubits", obs.register_size()}, {"terms", terms}};
        }
        case Observable::Form::DenseHermitian:
            return {{"form", "DenseHermitian"}, {"qubits", obs.qubits()}, {"matrix", matrix_to_json(obs.matrix())}};
        case Observable::Form::ZeroProjector:
            return {{"form", "ZeroProjector"}, {"qubits", obs.qubits()}};
        case Observable::Form::TensorPair:
            return {{"form", "TensorPair"},
                    {"left", observable_to_json(obs.left())},
                    {"right", observable_to_json(obs.right())}};
    }
    return {};
}

Observable observable_from_json(const nlohmann::json &j) {
    std::string form = j.at("form").get<std::string>();
    if (form == "PauliStringSum") {
        std::vector<PauliTerm> terms;
        for (const auto &t : j.at("terms")) {
            terms.push_back({t.at("coefficient").get<double>(), t.at("word").get<std::string>()});
        }
        return Observable::pauli_sum(j.at("n_qubits").get<int>(), std::move(terms));
    }
    if (form == "DenseHermitian") {
        return Observable::dense(j.at("qubits").get<std::vector<int>>(), matrix_from_json(j.at("matrix")));
    }
    if (form == "ZeroProjector") {
        return Observable::zero_projector(j.at("qubits").get<std::vector<int>>());
    }
    if (form == "TensorPair") {
        return Observable::tensor_pair(observable_from_json(j.at("left")), observable_from_json(j.at("right")));
    }
    fail(ErrorKind::Validation, "unknown observable form '" + form + "'");
}

nlohmann::json CircuitTemplate::to_json() const {
    nlohmann::json layers = nlohmann::json::array();
    for (const LayerSpec &layer : layers_) {
        layers.push_back(layer_to_json(layer, false));
    }
    return {{"n_qubits", n_qubits_},
            {"param_count", param_count_},
            {"layers", layers},
            {"observable", observable_to_json(observable_)}};
}

CircuitTemplate CircuitTemplate::from_json(const nlohmann::json &j) {
    std::vector<LayerSpec> layers;
    for (const auto &layer : j.at("layers")) {
        LayerSpec spec;
        for (const auto &g : layer.at("gates")) {
            spec.gates.push_back(slot_from_json(g));
        }
        layers.push_back(std::move(spec));
    }
    CircuitTemplate out(j.at("n_qubits").get<int>(), std::move(layers), observable_from_json(j.at("observable")));
    if (j.contains("param_count")) {
        require(j.at("param_count").get<int>() == out.param_count(), ErrorKind::Validation,
                "declared param_count disagrees with the slots");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Builders

void VariVeryConfig::validate() const {
    require(t >= 1 && t <= kMaxAdderQubits, ErrorKind::Capacity, "counter width t must be in [1, 8]");
    require(layers >= 1, ErrorKind::Validation, "layer count must be at least 1");
    require(layers < (1 << t), ErrorKind::Validation,
            "layer count " + std::to_string(layers) + " must be below 2^t = " + std::to_string(1 << t));
    require(n_data >= 1, ErrorKind::Validation, "data register needs at least one qubit");
    require(n_qubits() <= kMaxQubits, ErrorKind::Capacity, "register exceeds the qubit cap");
    planted_from_spec(planted);
}

CircuitTemplate build_varivery(const VariVeryConfig &cfg) {
    cfg.validate();
    std::vector<int> gadget_qubits(cfg.n_data + cfg.t);
    std::iota(gadget_qubits.begin(), gadget_qubits.end(), 0);
    nlohmann::json args = {{"planted", cfg.planted}, {"t", cfg.t}};
    std::vector<LayerSpec> layers;
    for (int j = 0; j < cfg.layers; ++j) {
        LayerSpec layer;
        layer.gates.push_back(SlotEntry::data("tilde_u", args, gadget_qubits));
        layer.gates.push_back(SlotEntry::param(ParamKind::RotationX, j, {cfg.trainable_qubit()}));
        layers.push_back(std::move(layer));
    }
    const int measured[] = {0, cfg.trainable_qubit()};
    return CircuitTemplate(cfg.n_qubits(), std::move(layers), Observable::z_product(cfg.n_qubits(), measured));
}

void HeaConfig::validate() const {
    require(n_qubits >= 2 && n_qubits <= kMaxQubits, ErrorKind::Capacity, "HEA needs 2.." +
                                                                              std::to_string(kMaxQubits) + " qubits");
    require(depth >= 1, ErrorKind::Validation, "HEA depth must be at least 1");
    if (observable_kind == ObservableKind::Custom) {
        require(custom_observable.has_value(), ErrorKind::Validation, "custom observable missing");
        require(custom_observable->min_qubits() <= n_qubits, ErrorKind::Shape, "custom observable too wide");
    }
}

int bricks_in_layer(int n_qubits, int layer) {
    int offset = layer % 2;
    return std::max(0, (n_qubits - offset) / 2);
}

int hea_param_count(const HeaConfig &cfg) {
    int total = 0;
    for (int d = 0; d < cfg.depth; ++d) {
        total += bricks_in_layer(cfg.n_qubits, d) * kBrickParams;
    }
    return total;
}

CircuitTemplate build_hea(const HeaConfig &cfg) {
    cfg.validate();
    std::vector<LayerSpec> layers;
    if (cfg.encode_bits) {
        std::vector<int> all(cfg.n_qubits);
        std::iota(all.begin(), all.end(), 0);
        layers.push_back({{SlotEntry::data("bit_flips", nlohmann::json::object(), all)}});
    }
    int index = 0;
    for (int d = 0; d < cfg.depth; ++d) {
        LayerSpec layer;
        for (int q = d % 2; q + 1 < cfg.n_qubits; q += 2) {
            layer.gates.push_back(SlotEntry::param(ParamKind::Brick, index, {q, q + 1}));
            index += kBrickParams;
        }
        layers.push_back(std::move(layer));
    }
    Observable obs = [&] {
        switch (cfg.observable_kind) {
            case HeaConfig::ObservableKind::LocalZ1:
                return Observable::pauli_z(cfg.n_qubits, 0);
            case HeaConfig::ObservableKind::GlobalZAll: {
                std::vector<int> all(cfg.n_qubits);
                std::iota(all.begin(), all.end(), 0);
                return Observable::z_product(cfg.n_qubits, all);
            }
            case HeaConfig::ObservableKind::Custom:
                break;
        }
        return *cfg.custom_observable;
    }();
    return CircuitTemplate(cfg.n_qubits, std::move(layers), std::move(obs));
}

CircuitTemplate build_hea(const HeaConfig &cfg, std::span<const double> theta) {
    require(static_cast<int>(theta.size()) == hea_param_count(cfg), ErrorKind::Shape,
            "HEA with this shape takes " + std::to_string(hea_param_count(cfg)) + " angles, got " +
                std::to_string(theta.size()));
    return build_hea(cfg);
}

ConstructionMeta varivery_meta(const VariVeryConfig &cfg) {
    ConstructionMeta meta;
    meta.family = "varivery";
    meta.layer_count = cfg.layers;
    meta.layer_window = 1 << cfg.t;
    meta.rebuild = [cfg](int l) {
        VariVeryConfig c = cfg;
        c.layers = l;
        return build_varivery(c);
    };
    return meta;
}

ConstructionMeta hea_meta(const HeaConfig &cfg) {
    ConstructionMeta meta;
    meta.family = "hea";
    meta.layer_count = cfg.depth;
    meta.rebuild = [cfg](int l) {
        HeaConfig c = cfg;
        c.depth = l;
        return build_hea(c);
    };
    return meta;
}

// ---------------------------------------------------------------------------
// Structural properties

nlohmann::json PropertyReport::to_json() const {
    auto evidence = [](Evidence e) -> std::string {
        switch (e) {
            case Evidence::Pending:
                return "pending";
            case Evidence::Satisfied:
                return "satisfied";
            case Evidence::Failed:
                return "failed";
        }
        return "?";
    };
    return {{"identical_layers", identical_layers},
            {"tunable_layer_count", tunable_layer_count},
            {"starts_from_zero", starts_from_zero},
            {"observable_layer_independent", observable_layer_independent},
            {"trainable", evidence(trainable)},
            {"trainable_evidence", trainable_evidence}};
}

PropertyReport validate_varivery(const CircuitTemplate &tmpl, const ConstructionMeta &meta) {
    PropertyReport report;
    const auto &layers = tmpl.layers();

    report.identical_layers = !layers.empty();
    if (!layers.empty()) {
        const nlohmann::json first = layer_to_json(layers[0], true);
        for (const LayerSpec &layer : layers) {
            if (layer_to_json(layer, true) != first) {
                report.identical_layers = false;
                break;
            }
        }
    }

    report.starts_from_zero = meta.starts_from_zero;

    if (!meta.rebuild) {
        return report;
    }
    std::vector<int> probes = {1};
    if (meta.layer_window == 0 || meta.layer_count + 1 < meta.layer_window) {
        probes.push_back(meta.layer_count + 1);
    }
    // Families may carry fixed non-repeated layers (e.g. an encoding layer).
    const int fixed_layers = static_cast<int>(layers.size()) - meta.layer_count;
    bool tunable = fixed_layers >= 0;
    bool same_observable = true;
    for (int l : probes) {
        try {
            CircuitTemplate other = meta.rebuild(l);
            tunable = tunable && static_cast<int>(other.layers().size()) == l + fixed_layers && other.n_qubits() == tmpl.n_qubits();
            same_observable = same_observable && other.observable() == tmpl.observable();
        } catch (const Error &) {
            tunable = false;
            same_observable = false;
        }
    }
    report.tunable_layer_count = tunable;
    report.observable_layer_independent = same_observable;
    return report;
}

}  // namespace varivery
