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

#include "varivery/lcu.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "varivery/circuits.hpp"
#include "varivery/error.hpp"
#include "varivery/parallel.hpp"
#include "varivery/rng.hpp"

namespace varivery {

// ---------------------------------------------------------------------------
// LCU

std::vector<int> LcuCircuit::work_qubits() const {
    std::vector<int> q(n_work);
    std::iota(q.begin(), q.end(), n_ancilla);
    return q;
}

Circuit LcuCircuit::fixed_part() const {
    Circuit out = prep;
    std::vector<int> ancilla(n_ancilla);
    std::iota(ancilla.begin(), ancilla.end(), 0);
    for (const Block &b : blocks) {
        Circuit inner = shift(adjoint(feature_map.circuit(b.support_x)), n_ancilla);
        if (!inner.empty()) {
            out.push_back(GateOp::controlled(ancilla, b.pattern, std::move(inner)));
        }
    }
    return out;
}

Circuit LcuCircuit::data_part(Input x) const { return shift(feature_map.circuit(x), n_ancilla); }

Circuit LcuCircuit::circuit(Input x) const {
    Circuit out = data_part(x);
    Circuit rest = fixed_part();
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

double LcuCircuit::expectation(Input x) const {
    StateVector s(n_qubits());
    s.apply(circuit(x));
    return varivery::expectation(s, measurement);
}

LcuCircuit compile_lcu(const KernelModel &model) {
    const std::size_t n = model.support.size();
    require(n >= 1 && static_cast<std::size_t>(model.alpha.size()) == n, ErrorKind::Shape,
            "model needs one coefficient per support point");
    double norm1 = model.alpha.lpNorm<1>();
    require(norm1 > 0.0, ErrorKind::DegenerateModel, "all kernel coefficients are zero");
    require(std::isfinite(norm1), ErrorKind::Numerical, "non-finite kernel coefficients");

    LcuCircuit lcu{.feature_map = model.feature_map, .measurement = Observable::zero_projector({0})};
    lcu.n_ancilla = std::max(1, static_cast<int>(std::bit_width(n - 1)));
    lcu.n_work = model.feature_map.n_qubits();
    require(lcu.n_qubits() <= kMaxQubits, ErrorKind::Capacity, "ancilla plus work register exceeds the qubit cap");
    require(lcu.n_ancilla <= kMaxDenseObservableQubits, ErrorKind::Capacity, "ancilla register too wide");
    lcu.scale = norm1;

    const std::size_t dim = std::size_t{1} << lcu.n_ancilla;
    lcu.beta.assign(dim, 0.0);
    lcu.signs.assign(dim, 1);
    for (std::size_t i = 0; i < n; ++i) {
        double a = model.alpha[static_cast<Eigen::Index>(i)];
        lcu.beta[i] = std::sqrt(std::abs(a) / norm1);
        lcu.signs[i] = a < 0 ? -1 : 1;
        if (a != 0.0) {
            lcu.blocks.push_back({i, model.support[i]});
        }
    }
    std::vector<int> ancilla(lcu.n_ancilla);
    std::iota(ancilla.begin(), ancilla.end(), 0);
    lcu.prep = prepare_real_amplitudes(lcu.beta, ancilla);

    std::vector<cplx> d(dim * dim, cplx(0.0));
    for (std::size_t i = 0; i < dim; ++i) {
        d[i * dim + i] = static_cast<double>(lcu.signs[i]);
    }
    lcu.measurement = Observable::tensor_pair(Observable::dense(ancilla, std::move(d)),
                                              Observable::zero_projector(lcu.work_qubits()));
    return lcu;
}

// ---------------------------------------------------------------------------
// Control expansion

namespace {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

Mat2 mat2(std::span<const cplx> m) {
    Mat2 out;
    out << m[0], m[1], m[2], m[3];
    return out;
}

std::vector<cplx> flat(const Mat2 &m) { return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)}; }

std::vector<cplx> flat(const Mat4 &m) {
    std::vector<cplx> out(16);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            out[r * 4 + c] = m(r, c);
        }
    }
    return out;
}

Mat4 mat4(std::span<const cplx> m) {
    Mat4 out;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            out(r, c) = m[r * 4 + c];
        }
    }
    return out;
}

Mat4 kron(const Mat2 &a, const Mat2 &b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    return out;
}

const Mat4 &swap4() {
    static const Mat4 s = [] {
        Mat4 m = Mat4::Zero();
        m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
        return m;
    }();
    return s;
}

Mat2 pauli_x2() {
    Mat2 x;
    x << 0, 1, 1, 0;
    return x;
}

// Principal square root of a 2x2 unitary via its Schur form (diagonal for normal matrices).
Mat2 unitary_sqrt(const Mat2 &u) {
    Eigen::ComplexSchur<Mat2> schur(u);
    Mat2 t = schur.matrixT();
    Mat2 root = Mat2::Zero();
    root(0, 0) = std::sqrt(t(0, 0));
    root(1, 1) = std::sqrt(t(1, 1));
    return schur.matrixU() * root * schur.matrixU().adjoint();
}

bool is_identity(const Mat2 &u) { return (u - Mat2::Identity()).cwiseAbs().maxCoeff() <= 1e-15; }

class Expander {
   public:
    std::vector<ElementaryGate> out;

    void gate(const GateOp &g, std::vector<int> &ctrls, std::vector<int> &vals) {
        switch (g.kind) {
            case GateKind::RotationX:
                single(ctrls, vals, g.targets[0], mat2(rx_matrix(g.angle)));
                return;
            case GateKind::RotationZ:
                single(ctrls, vals, g.targets[0], mat2(rz_matrix(g.angle)));
                return;
            case GateKind::Hadamard:
                single(ctrls, vals, g.targets[0], mat2(hadamard_matrix()));
                return;
            case GateKind::PauliX:
                single(ctrls, vals, g.targets[0], pauli_x2());
                return;
            case GateKind::FixedUnitary:
                if (g.targets.size() == 1) {
                    single(ctrls, vals, g.targets[0], mat2(g.matrix));
                    return;
                }
                require(g.targets.size() == 2 && ctrls.empty(), ErrorKind::Decomposition,
                        "cannot expand a " + std::to_string(g.targets.size()) + "-qubit fixed unitary with " +
                            std::to_string(ctrls.size()) + " controls");
                out.push_back({g.targets, g.matrix});
                return;
            case GateKind::Controlled: {
                const std::size_t base = ctrls.size();
                const int m = static_cast<int>(g.controls.size());
                for (int k = 0; k < m; ++k) {
                    ctrls.push_back(g.controls[k]);
                    vals.push_back(static_cast<int>((g.pattern >> (m - 1 - k)) & 1U));
                }
                for (const GateOp &inner : g.inner) {
                    gate(inner, ctrls, vals);
                }
                ctrls.resize(base);
                vals.resize(base);
                return;
            }
            case GateKind::Adder: {
                const int t = static_cast<int>(g.targets.size());
                require(t <= kMaxAdderExpansion, ErrorKind::Decomposition,
                        "built-in adder decomposition covers at most 4 qubits");
                const int mod = 1 << t;
                const int steps = ((g.adder_step % mod) + mod) % mod;
                const std::size_t base = ctrls.size();
                for (int s = 0; s < steps; ++s) {
                    // Flip bit i when every less significant bit is 1, most significant first.
                    for (int i = 0; i < t; ++i) {
                        for (int j = i + 1; j < t; ++j) {
                            ctrls.push_back(g.targets[j]);
                            vals.push_back(1);
                        }
                        single(ctrls, vals, g.targets[i], pauli_x2());
                        ctrls.resize(base);
                        vals.resize(base);
                    }
                }
                return;
            }
        }
    }

   private:
    void emit1(int q, const Mat2 &u) { out.push_back({{q}, flat(u)}); }

    void emit_controlled(int c, int t, const Mat2 &u) {
        Mat4 m = Mat4::Identity();
        m.block<2, 2>(2, 2) = u;
        out.push_back({{c, t}, flat(m)});
    }

    void single(const std::vector<int> &ctrls, const std::vector<int> &vals, int target, const Mat2 &u) {
        if (is_identity(u)) {
            return;
        }
        for (std::size_t k = 0; k < ctrls.size(); ++k) {
            if (vals[k] == 0) {
                emit1(ctrls[k], pauli_x2());
            }
        }
        all_ones(ctrls, target, u);
        for (std::size_t k = 0; k < ctrls.size(); ++k) {
            if (vals[k] == 0) {
                emit1(ctrls[k], pauli_x2());
            }
        }
    }

    // C^k(U) = C_{c_k}(V) . C^{k-1}X(c_k) . C_{c_k}(V^dagger) . C^{k-1}X(c_k) . C^{k-1}(V), V^2 = U.
    void all_ones(std::span<const int> ctrls, int target, const Mat2 &u) {
        if (ctrls.empty()) {
            emit1(target, u);
            return;
        }
        if (ctrls.size() == 1) {
            emit_controlled(ctrls[0], target, u);
            return;
        }
        Mat2 v = unitary_sqrt(u);
        int last = ctrls.back();
        auto rest = ctrls.first(ctrls.size() - 1);
        emit_controlled(last, target, v);
        all_ones(rest, last, pauli_x2());
        emit_controlled(last, target, v.adjoint());
        all_ones(rest, last, pauli_x2());
        all_ones(rest, target, v);
    }
};

}  // namespace

std::vector<ElementaryGate> expand_to_elementary(const Circuit &circuit) {
    Expander ex;
    std::vector<int> ctrls, vals;
    for (const GateOp &g : circuit) {
        ex.gate(g, ctrls, vals);
    }
    return std::move(ex.out);
}

// ---------------------------------------------------------------------------
// Brickwork

std::vector<LayerSpec> BrickworkLayout::layers() const {
    std::vector<LayerSpec> out(depth);
    for (const BrickSlot &s : slots) {
        out[s.layer].gates.push_back(SlotEntry::param(ParamKind::Brick, s.offset, {s.qubit, s.qubit + 1}));
    }
    return out;
}

Circuit BrickworkLayout::instantiate(std::span<const double> theta) const {
    require(static_cast<int>(theta.size()) == total_params(), ErrorKind::Shape,
            "layout takes " + std::to_string(total_params()) + " angles");
    Circuit out;
    for (const BrickSlot &s : slots) {
        out.push_back(GateOp::fixed({s.qubit, s.qubit + 1}, brick_unitary(theta.subspan(s.offset, kBrickParams))));
    }
    return out;
}

nlohmann::json BrickworkLayout::to_json() const {
    nlohmann::json bricks = nlohmann::json::array();
    for (const BrickSlot &s : slots) {
        std::vector<double> angles(param_map.begin() + s.offset, param_map.begin() + s.offset + kBrickParams);
        bricks.push_back({{"layer", s.layer}, {"qubits", {s.qubit, s.qubit + 1}}, {"angles", angles}});
    }
    nlohmann::json layers = nlohmann::json::array();
    for (const LayerSpec &l : this->layers()) {
        nlohmann::json gates = nlohmann::json::array();
        for (const SlotEntry &e : l.gates) {
            gates.push_back({{"slot", "param"}, {"kind", param_kind_name(e.param_kind)}, {"index", e.index},
                             {"qubits", e.qubits}});
        }
        layers.push_back({{"gates", gates}});
    }
    return {{"n_qubits", n_qubits},
            {"depth", depth},
            {"param_count", total_params()},
            {"placed_bricks", placed_bricks},
            {"layers", layers},
            {"param_map", bricks}};
}

namespace {

struct LocalGate {
    int q;  // lower qubit; 2-qubit gates act on (q, q + 1)
    bool two;
    Mat2 m2;
    Mat4 m4;
};

std::vector<LocalGate> route(const std::vector<ElementaryGate> &gates) {
    std::vector<LocalGate> out;
    auto push_swap = [&](int q) { out.push_back({q, true, Mat2::Identity(), swap4()}); };
    for (const ElementaryGate &g : gates) {
        if (g.qubits.size() == 1) {
            out.push_back({g.qubits[0], false, mat2(g.matrix), Mat4::Identity()});
            continue;
        }
        int a = g.qubits[0], b = g.qubits[1];
        Mat4 m = mat4(g.matrix);
        if (a > b) {
            std::swap(a, b);
            m = swap4() * m * swap4();
        }
        // Move the lower qubit up next to the upper one, act, move it back.
        for (int s = a; s + 1 < b; ++s) {
            push_swap(s);
        }
        out.push_back({b - 1, true, Mat2::Identity(), m});
        for (int s = b - 2; s >= a; --s) {
            push_swap(s);
        }
    }
    return out;
}

}  // namespace

BrickworkLayout compile_brickwork(const Circuit &circuit, int n_qubits) {
    require(n_qubits >= 2 && n_qubits <= kMaxQubits, ErrorKind::Capacity, "brickwork needs 2..24 qubits");
    for (int q : circuit_support(circuit)) {
        require(q < n_qubits, ErrorKind::Index, "circuit touches qubit " + std::to_string(q) + " outside the register");
    }
    std::vector<LocalGate> local = route(expand_to_elementary(circuit));

    struct Brick {
        int q;
        Mat4 m;
    };
    std::vector<Brick> bricks;
    std::vector<int> last(n_qubits, -1);
    std::vector<Mat2> pending(n_qubits, Mat2::Identity());
    for (const LocalGate &g : local) {
        if (!g.two) {
            int b = last[g.q];
            if (b < 0) {
                pending[g.q] = g.m2 * pending[g.q];
            } else {
                Mat4 e = bricks[b].q == g.q ? kron(g.m2, Mat2::Identity()) : kron(Mat2::Identity(), g.m2);
                bricks[b].m = e * bricks[b].m;
            }
            continue;
        }
        int q = g.q;
        if (last[q] >= 0 && last[q] == last[q + 1]) {
            bricks[last[q]].m = g.m4 * bricks[last[q]].m;
            continue;
        }
        bricks.push_back({q, g.m4 * kron(pending[q], pending[q + 1])});
        pending[q] = pending[q + 1] = Mat2::Identity();
        last[q] = last[q + 1] = static_cast<int>(bricks.size()) - 1;
    }
    for (int q = 0; q < n_qubits; ++q) {
        if (!pending[q].isIdentity(0.0)) {
            int lo = q + 1 < n_qubits ? q : q - 1;
            Mat4 m = lo == q ? kron(pending[q], Mat2::Identity()) : kron(Mat2::Identity(), pending[q]);
            bricks.push_back({lo, m});
            pending[q] = Mat2::Identity();
        }
    }

    // Earliest layer of matching parity after both qubits are free.
    std::vector<int> ready(n_qubits, 0);
    std::vector<int> layer_of(bricks.size());
    int depth = 0;
    for (std::size_t i = 0; i < bricks.size(); ++i) {
        int q = bricks[i].q;
        int l = std::max(ready[q], ready[q + 1]);
        if (l % 2 != q % 2) {
            ++l;
        }
        layer_of[i] = l;
        ready[q] = ready[q + 1] = l + 1;
        depth = std::max(depth, l + 1);
    }

    BrickworkLayout layout;
    layout.n_qubits = n_qubits;
    layout.depth = depth;
    layout.placed_bricks = static_cast<int>(bricks.size());
    std::vector<std::vector<int>> slot_index(depth, std::vector<int>(n_qubits, -1));
    for (int l = 0; l < depth; ++l) {
        for (int q = l % 2; q + 1 < n_qubits; q += 2) {
            slot_index[l][q] = static_cast<int>(layout.slots.size());
            layout.slots.push_back({l, q, static_cast<int>(layout.slots.size()) * kBrickParams});
        }
    }
    layout.param_map.assign(layout.slots.size() * kBrickParams, 0.0);
    std::vector<BrickAngles> angles(bricks.size());
    parallel_for(bricks.size(), [&](std::size_t i) { angles[i] = brick_angles(flat(bricks[i].m)); });
    for (std::size_t i = 0; i < bricks.size(); ++i) {
        const BrickSlot &s = layout.slots[slot_index[layer_of[i]][bricks[i].q]];
        std::copy(angles[i].begin(), angles[i].end(), layout.param_map.begin() + s.offset);
    }
    return layout;
}

CircuitTemplate lcu_brickwork_template(const LcuCircuit &lcu, const BrickworkLayout &layout) {
    require(layout.n_qubits == lcu.n_qubits(), ErrorKind::Shape, "layout width does not match the LCU register");
    std::vector<LayerSpec> layers;
    const nlohmann::json &spec = lcu.feature_map.spec();
    const std::string name = spec.value("name", "");
    if (name == "dlp") {
        layers.push_back({{SlotEntry::data("dlp_feature", {{"p", spec.at("p")}, {"g", spec.at("g")},
                                                           {"k_window", spec.at("k_window")}},
                                           lcu.work_qubits())}});
    } else if (name == "basis") {
        layers.push_back({{SlotEntry::data("bit_flips", nlohmann::json::object(), lcu.work_qubits())}});
    } else if (name != "constant") {
        fail(ErrorKind::UnsupportedMethod, "no data-slot builder for feature map '" + lcu.feature_map.id() + "'");
    }
    for (LayerSpec &l : layout.layers()) {
        layers.push_back(std::move(l));
    }
    return CircuitTemplate(lcu.n_qubits(), std::move(layers), lcu.measurement);
}

// ---------------------------------------------------------------------------
// End-to-end run

nlohmann::json Prop1Record::to_json() const {
    return {{"model", model.to_json()},
            {"ancilla_qubits", lcu.n_ancilla},
            {"work_qubits", lcu.n_work},
            {"scale", lcu.scale},
            {"layout", {{"n_qubits", layout.n_qubits},
                        {"depth", layout.depth},
                        {"total_params", layout.total_params()},
                        {"placed_bricks", layout.placed_bricks}}},
            {"kernel_train_accuracy", kernel_train_accuracy},
            {"circuit_train_accuracy", circuit_train_accuracy},
            {"lcu_deviation", lcu_deviation},
            {"brickwork_deviation", brickwork_deviation},
            {"uniform_bp", uniform_bp.to_json()}};
}

Prop1Record run_prop1_experiment(const Prop1Config &cfg) {
    auto inst = std::make_shared<const DlpInstance>(cfg.p, cfg.g);
    PlantedFunction fn = dlp_msb(inst);
    FeatureMap fm = FeatureMap::dlp(cfg.p, cfg.g, cfg.k_window);
    Dataset train = Dataset::from_planted(fn, cfg.n_train, cfg.seed, "train");

    std::vector<Input> xs;
    std::vector<double> ys;
    for (const Sample &s : train.samples) {
        xs.push_back(s.x);
        ys.push_back(s.y);
    }
    KernelModel model = fit(gram(fm, xs), ys, cfg.lambda, fm);
    LcuCircuit lcu = compile_lcu(model);
    BrickworkLayout layout = compile_brickwork(lcu.fixed_part(), lcu.n_qubits());
    CircuitTemplate family = lcu_brickwork_template(lcu, layout);

    const auto &group = inst->elements();
    std::vector<double> dev_lcu(group.size()), dev_brick(group.size());
    parallel_for(group.size(), [&](std::size_t i) {
        Input x = group[i];
        double lcu_value = lcu.predict(x);
        dev_lcu[i] = std::abs(lcu_value - predict(model, x));
        dev_brick[i] = std::abs(lcu.scale * family.evaluate(x, layout.param_map) - lcu_value);
    });

    Prop1Record rec{.model = model, .lcu = lcu, .layout = layout, .train = train};
    rec.lcu_deviation = *std::max_element(dev_lcu.begin(), dev_lcu.end());
    rec.brickwork_deviation = *std::max_element(dev_brick.begin(), dev_brick.end());

    std::size_t kernel_hits = 0, circuit_hits = 0;
    for (const Sample &s : train.samples) {
        kernel_hits += classify(predict(model, s.x)) == s.y ? 1 : 0;
        circuit_hits += classify(lcu.scale * family.evaluate(s.x, layout.param_map)) == s.y ? 1 : 0;
    }
    rec.kernel_train_accuracy = static_cast<double>(kernel_hits) / static_cast<double>(train.size());
    rec.circuit_train_accuracy = static_cast<double>(circuit_hits) / static_cast<double>(train.size());

    rec.uniform_bp = estimate_bp(family, Distribution::uniform_angles(), fn.domain, cfg.bp_n_x, cfg.bp_n_theta,
                                 derive_seed(cfg.seed, "bp"));
    return rec;
}

}  // namespace varivery
