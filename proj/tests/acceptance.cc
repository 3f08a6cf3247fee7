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

// Acceptance suite: one PASS/FAIL line per criterion, fixed seeds throughout.
// Exit status is non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "varivery/ansatz.hpp"
#include "varivery/circuits.hpp"
#include "varivery/diagnostics.hpp"
#include "varivery/error.hpp"
#include "varivery/experiments.hpp"
#include "varivery/hardfn.hpp"
#include "varivery/io.hpp"
#include "varivery/kernel.hpp"
#include "varivery/lcu.hpp"
#include "varivery/parallel.hpp"
#include "varivery/rng.hpp"
#include "varivery/train.hpp"

using namespace varivery;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(const std::string &name, bool ok, const std::string &detail, Clock::time_point start) {
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::ostringstream s;
    s.precision(3);
    s << (ok ? "PASS " : "FAIL ") << name << ": " << detail << " [" << std::fixed << secs << " s]";
    std::cout << s.str() << std::endl;
    failures += ok ? 0 : 1;
}

std::string g(double v) { return format_real(v); }

// ---------------------------------------------------------------------------

void tilde_u_telescoping() {
    auto start = Clock::now();
    double worst = 1.0;
    for (int n = 1; n <= 3; ++n) {
        for (int t = 2; t <= 4; ++t) {
            for (int trial = 0; trial < 20; ++trial) {
                Circuit u = random_circuit(n, 2, derive_seed(0, "acceptance_tilde_u", 100 * n + 10 * t + trial));
                Circuit gadget = build_tilde_u([&u](Input) { return u; }, n, t)(0);
                StateVector u_state = varivery::apply(u, zero_state(n));
                StateVector s(n + t);
                for (int l = 1; l < (1 << t); ++l) {
                    s.apply(gadget);
                    double ov = std::abs(overlap(s, tensor(u_state, StateVector::basis(t, l))));
                    worst = std::min(worst, ov);
                }
            }
        }
    }
    report("tilde_u_telescoping", worst >= 1.0 - 1e-9 && Clock::now() - start < std::chrono::minutes(1),
           "min overlap " + g(worst) + " over n<=3, t in {2,3,4}, all L < 2^t, 20 unitaries", start);
}

void cor2_trainability() {
    auto start = Clock::now();
    const std::vector<std::pair<std::string, nlohmann::json>> tasks = {
        {"parity", parity_fn(2).spec},
        {"dlp_msb", {{"name", "dlp_msb"}, {"p", 23}, {"g", 5}}},
    };
    bool fit_ok = true, wrap_ok = true;
    std::ostringstream detail;
    for (const auto &[task, spec] : tasks) {
        for (int layers : {1, 4, 7}) {
            VariVeryConfig cfg;
            cfg.planted = spec;
            cfg.n_data = 2;
            cfg.t = 3;
            cfg.layers = layers;
            int good = 0, wrapped = 0;
            double worst_wrap = 0.0;
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                TrainConfig tc;
                tc.steps = 500;
                tc.rate = RateRule::constant(0.1);
                tc.seed = seed;
                Cor2Record rec = run_cor2_experiment(cfg, tc, 32, 64, seed);
                good += rec.final_risk <= 1e-4 && rec.test_accuracy == 1.0 ? 1 : 0;
                wrapped += std::abs(rec.wrapped_angle_sum) <= 1e-2 ? 1 : 0;
                worst_wrap = std::max(worst_wrap, std::abs(rec.wrapped_angle_sum));
            }
            fit_ok = fit_ok && good >= 9;
            wrap_ok = wrap_ok && wrapped >= 9;
            detail << task << "/L=" << layers << " fit " << good << "/10 wrap " << wrapped << "/10 (max |wrap| "
                   << g(worst_wrap) << "); ";
        }
    }
    bool fast = Clock::now() - start < std::chrono::minutes(5);
    report("cor2_trainability", fit_ok && wrap_ok && fast, detail.str(), start);
}

void reduction_identity() {
    auto start = Clock::now();
    Stream rng(derive_seed(0, "acceptance_reduction"));
    double worst = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        VariVeryConfig cfg;
        cfg.planted = draw % 2 == 0 ? parity_fn(3).spec : nlohmann::json{{"name", "dlp_msb"}, {"p", 23}, {"g", 5}};
        cfg.n_data = 2;
        cfg.t = 3;
        cfg.layers = 1 + static_cast<int>(rng.next_below(7));
        CircuitTemplate tmpl = build_varivery(cfg);
        Dataset data = Dataset::from_planted(planted_from_spec(cfg.planted), 1 + rng.next_below(32), rng.next_u64());
        std::vector<double> theta(cfg.layers);
        for (auto &a : theta) a = rng.next_uniform(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
        double s = std::accumulate(theta.begin(), theta.end(), 0.0);
        double closed = 0.5 * (std::cos(s) - 1.0) * (std::cos(s) - 1.0);
        worst = std::max(worst, std::abs(empirical_mse(tmpl, theta, data) - closed));
    }
    report("reduction_identity", worst <= 1e-9, "max deviation " + g(worst) + " over 100 draws", start);
}

void gradient_correctness() {
    auto start = Clock::now();
    Stream rng(derive_seed(0, "acceptance_gradient"));
    double worst = 0.0;
    for (int c = 0; c < 50; ++c) {
        VariVeryConfig cfg;
        cfg.planted = parity_fn(2).spec;
        cfg.n_data = 2;
        cfg.t = 3;
        cfg.layers = 1 + static_cast<int>(rng.next_below(7));
        CircuitTemplate tmpl = build_varivery(cfg);
        Dataset data;
        data.n_bits = 2;
        for (int i = 0; i < 8; ++i) {
            data.samples.push_back({rng.next_below(4), rng.next_below(2) == 0 ? -1 : 1});
        }
        std::vector<double> theta(cfg.layers);
        for (auto &a : theta) a = rng.next_uniform(0.0, 2.0 * std::numbers::pi);
        auto ps = gradient(tmpl, theta, data, GradientMethod::param_shift());
        auto fd = gradient(tmpl, theta, data, GradientMethod::finite_diff(1e-5));
        for (std::size_t j = 0; j < ps.size(); ++j) worst = std::max(worst, std::abs(ps[j] - fd[j]));
    }
    report("gradient_correctness", worst <= 1e-6, "max |param-shift - finite-diff| " + g(worst) + " over 50 configs",
           start);
}

void bp_scaling() {
    auto start = Clock::now();
    SweepParams sp;
    sp.n_x = 32;
    sp.n_theta = 256;
    sp.seed = 0;
    std::vector<int> deep_n, shallow_n;
    for (int n = 2; n <= 8; ++n) deep_n.push_back(n);
    for (int n = 2; n <= 10; ++n) shallow_n.push_back(n);
    VarianceCurve deep = bp_scaling_sweep(
        [](int n) { return build_hea({n, n, HeaConfig::ObservableKind::GlobalZAll, std::nullopt, true}); }, deep_n, sp);
    VarianceCurve shallow = bp_scaling_sweep(
        [](int n) { return build_hea({n, 1, HeaConfig::ObservableKind::LocalZ1, std::nullopt, true}); }, shallow_n, sp);
    bool deep_ok = deep.fit.defined && deep.fit.slope < 0 && std::abs(deep.fit.slope) > 2 * deep.fit.standard_error;
    bool shallow_ok = shallow.fit.defined && std::abs(shallow.fit.slope) < 2 * shallow.fit.standard_error;
    bool fast = Clock::now() - start < std::chrono::minutes(15);
    report("bp_scaling", deep_ok && shallow_ok && fast,
           "deep slope " + g(deep.fit.slope) + " +- " + g(deep.fit.standard_error) + ", shallow slope " +
               g(shallow.fit.slope) + " +- " + g(shallow.fit.standard_error),
           start);
}

void single_qubit_oracle() {
    auto start = Clock::now();
    // f = cos(theta) both ways: RX then Z, and H RZ then X.
    CircuitTemplate rx(1, {{{SlotEntry::param(ParamKind::RotationX, 0, {0})}}}, Observable::pauli_z(1, 0));
    CircuitTemplate rz(1,
                       {{{SlotEntry::fixed(GateOp::h(0))}}, {{SlotEntry::param(ParamKind::RotationZ, 0, {0})}}},
                       Observable::pauli_sum(1, {{1.0, "X"}}));
    int hits_x = 0, hits_z = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto within = [&](const CircuitTemplate &t) {
            BpEstimate e = estimate_bp(t, Distribution::uniform_angles(), Distribution::uniform_bitstrings(1), 4, 256,
                                       seed);
            return std::abs(e.point_estimate - 0.5) <= 3.0 * e.standard_error;
        };
        hits_x += within(rx) ? 1 : 0;
        hits_z += within(rz) ? 1 : 0;
    }
    report("single_qubit_oracle", hits_x >= 95 && hits_z >= 95,
           "within 3 SE of 1/2: RotationX " + std::to_string(hits_x) + "/100, RotationZ " + std::to_string(hits_z) +
               "/100",
           start);
}

void kernel_pipeline() {
    auto start = Clock::now();
    auto inst = std::make_shared<const DlpInstance>(23, 5);
    PlantedFunction fn = dlp_msb(inst);
    Dataset train = Dataset::from_planted(fn, 32, 0);
    FeatureMap fm = FeatureMap::dlp(23, 5, 2);
    std::vector<Input> xs;
    std::vector<double> y;
    for (const auto &s : train.samples) {
        xs.push_back(s.x);
        y.push_back(s.y);
    }
    GramMatrix gm = gram(fm, xs);
    double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gm.entries).eigenvalues().minCoeff();
    KernelModel model = fit(gm, y, 1e-3, fm);
    std::vector<double> f;
    for (Input x : xs) f.push_back(predict(model, x));
    double acc = sign_accuracy(f, train);
    BpEstimate sim = estimate_vanishing_similarity(fm, fn.domain, 512, 0);
    bool ok = min_eig >= -1e-8 && acc == 1.0 && model.residual <= 1e-8 &&
              sim.point_estimate > 3.0 * sim.standard_error;
    report("kernel_pipeline", ok,
           "min eig " + g(min_eig) + ", train accuracy " + g(acc) + ", residual " + g(model.residual) +
               ", similarity variance " + g(sim.point_estimate) + " +- " + g(sim.standard_error),
           start);
}

// Arbitrary feature map: a seeded random circuit per input.
FeatureMap random_feature_map(int n, std::uint64_t key) {
    return FeatureMap("random", n, [n, key](Input x) { return random_circuit(n, 1, derive_seed(key, "fm", x)); });
}

void prop1_end_to_end() {
    auto start = Clock::now();
    Stream rng(derive_seed(0, "acceptance_prop1"));
    double worst_lcu = 0.0, worst_brick = 0.0;
    for (int c = 0; c < 100; ++c) {
        const int n = 1 + static_cast<int>(rng.next_below(3));
        const int count = 1 + static_cast<int>(rng.next_below(4));
        const bool basis = c % 2 == 0;
        FeatureMap fm = basis ? FeatureMap::computational_basis(n) : random_feature_map(n, rng.next_u64());
        const Input domain = Input{1} << (n + 2);
        std::vector<Input> support;
        while (static_cast<int>(support.size()) < count) {
            Input x = basis ? rng.next_below(Input{1} << n) : rng.next_below(domain);
            if (basis && static_cast<int>(support.size()) >= (1 << n)) break;
            if (std::find(support.begin(), support.end(), x) == support.end()) support.push_back(x);
        }
        Eigen::VectorXd alpha(static_cast<Eigen::Index>(support.size()));
        for (auto &a : alpha) a = rng.next_normal();
        KernelModel model{alpha, support, fm, 1e-3, 0.0};
        LcuCircuit lcu = compile_lcu(model);
        BrickworkLayout layout = compile_brickwork(lcu.fixed_part(), lcu.n_qubits());
        Circuit brick = layout.instantiate(layout.param_map);
        const Input probes = basis ? (Input{1} << n) : 8;
        for (Input i = 0; i < probes; ++i) {
            Input x = basis ? i : rng.next_below(domain);
            double want = predict(model, x);
            double via_lcu = lcu.predict(x);
            Circuit full = lcu.data_part(x);
            full.insert(full.end(), brick.begin(), brick.end());
            double via_brick = lcu.scale * expectation(varivery::apply(full, zero_state(lcu.n_qubits())),
                                                       lcu.measurement);
            worst_lcu = std::max(worst_lcu, std::abs(via_lcu - want));
            worst_brick = std::max(worst_brick, std::abs(via_brick - via_lcu));
        }
    }
    Prop1Config cfg;
    cfg.seed = 0;
    Prop1Record rec = run_prop1_experiment(cfg);
    worst_lcu = std::max(worst_lcu, rec.lcu_deviation);
    worst_brick = std::max(worst_brick, rec.brickwork_deviation);
    const BpEstimate &bp = rec.uniform_bp;
    bool ok = worst_lcu <= 1e-8 && worst_brick <= 1e-6 && bp.point_estimate < 0.5 - 3.0 * bp.standard_error;
    report("prop1_end_to_end", ok,
           "max |LCU - kernel| " + g(worst_lcu) + ", max |brickwork - LCU| " + g(worst_brick) +
               ", DLP brickwork uniform variance " + g(bp.point_estimate) + " +- " + g(bp.standard_error) + " (" +
               std::to_string(rec.layout.n_qubits) + " qubits, depth " + std::to_string(rec.layout.depth) + ")",
           start);
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void reproducibility() {
    auto start = Clock::now();
    fs::path root = fs::temp_directory_path() / "varivery_acceptance_repro";
    bool ok = true;
    std::ostringstream detail;
    for (const auto &info : experiment_registry()) {
        nlohmann::json resolved = resolve_config({{"experiment", info.name}, {"seed", 0}});
        std::vector<std::string> reference;
        bool same = true;
        for (int threads : {1, 2, 0}) {
            set_thread_count(threads);
            fs::path dir = root / (info.name + "_" + std::to_string(threads));
            fs::remove_all(dir);
            ExperimentResult res = run_experiment(resolved, dir);
            std::vector<std::string> contents;
            for (const auto &f : res.files) {
                if (f.size() > 4 && f.substr(f.size() - 4) == ".csv") contents.push_back(slurp(dir / f));
            }
            if (reference.empty()) {
                reference = contents;
                same = same && !contents.empty();
            } else {
                same = same && contents == reference;
            }
        }
        ok = ok && same;
        detail << info.name << (same ? " identical" : " DIFFERS") << "; ";
    }
    set_thread_count(0);
    fs::remove_all(root);
    report("reproducibility", ok, detail.str() + "threads 1, 2, " + std::to_string(thread_count()), start);
}

}  // namespace

int main() {
    const std::vector<std::pair<const char *, void (*)()>> criteria = {
        {"tilde_u_telescoping", tilde_u_telescoping}, {"cor2_trainability", cor2_trainability},
        {"reduction_identity", reduction_identity},   {"gradient_correctness", gradient_correctness},
        {"bp_scaling", bp_scaling},                   {"single_qubit_oracle", single_qubit_oracle},
        {"kernel_pipeline", kernel_pipeline},         {"prop1_end_to_end", prop1_end_to_end},
        {"reproducibility", reproducibility},
    };
    for (const auto &[name, run] : criteria) {
        try {
            run();
        } catch (const std::exception &e) {
            report(name, false, std::string("raised: ") + e.what(), Clock::now());
        }
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
