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

#include "varivery/experiments.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>

#include "varivery/ansatz.hpp"
#include "varivery/circuits.hpp"
#include "varivery/diagnostics.hpp"
#include "varivery/error.hpp"
#include "varivery/io.hpp"
#include "varivery/kernel.hpp"
#include "varivery/lcu.hpp"
#include "varivery/parallel.hpp"
#include "varivery/rng.hpp"
#include "varivery/train.hpp"

namespace varivery {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<ExperimentInfo> &experiment_registry() {
    static const std::vector<ExperimentInfo> registry = {
        {"tilde_u_check", "counter-gated gadget applied L times equals one application of U(x)",
         "Corollary 2 construction"},
        {"cor2_train", "gradient training of the layered model on a planted task", "Corollary 2"},
        {"bp_sweep", "variance of f over uniform parameters versus qubit count", "Definition 2"},
        {"vanishing_similarity", "variance of kernel values over random input pairs", "Appendix C"},
        {"kernel_dlp", "discrete-log kernel ridge model against linear baselines", "Section 2.1"},
        {"prop1_lcu", "kernel model compiled to an LCU circuit and a brickwork ansatz", "Proposition 1"},
        {"grad_check", "parameter-shift gradient against central finite differences", "Appendix E"},
    };
    return registry;
}

json default_params(const std::string &experiment) {
    if (experiment == "tilde_u_check") {
        return {{"n_data", 2}, {"t", 3}, {"trials", 20}, {"circuit_layers", 2}};
    }
    if (experiment == "cor2_train") {
        return {{"planted", "parity"}, {"n_data", 2},       {"t", 3},         {"layers", 4},
                {"n_train", 32},       {"n_test", 64},      {"steps", 500},   {"rate", "Constant"},
                {"eta", 0.1},          {"epsilon", 1e-8},   {"p", 23},        {"g", 5},
                {"data_seed", 1},      {"risk_threshold", 1e-4}};
    }
    if (experiment == "bp_sweep") {
        return {{"family", "hea_deep_global"}, {"n_min", 2}, {"n_max", 8}, {"n_x", 32}, {"n_theta", 256}};
    }
    if (experiment == "vanishing_similarity") {
        return {{"feature_map", "dlp"}, {"p", 23}, {"g", 5}, {"k_window", 2}, {"n_bits", 4}, {"n_pairs", 512}};
    }
    if (experiment == "kernel_dlp") {
        return {{"p", 23},        {"g", 5},       {"k_window", 2}, {"n_train", 32},
                {"n_test", 16},   {"lambda", 1e-3}, {"n_pairs", 512}};
    }
    if (experiment == "prop1_lcu") {
        return {{"p", 23},         {"g", 5},      {"k_window", 2},     {"n_train", 4},
                {"lambda", 1e-3},  {"bp_n_x", 8}, {"bp_n_theta", 64}};
    }
    if (experiment == "grad_check") {
        return {{"configs", 50}, {"n_data", 2}, {"t", 3}, {"n_train", 8}, {"h", 1e-5}};
    }
    fail(ErrorKind::Validation, "unknown experiment '" + experiment + "'");
}

void apply_override(json &config, const std::string &assignment) {
    auto eq = assignment.find('=');
    require(eq != std::string::npos && eq > 0, ErrorKind::Validation, "override must be key=value: " + assignment);
    std::string key = assignment.substr(0, eq);
    std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) {
        value = text;
    }
    if (key == "seed" || key == "experiment") {
        config[key] = value;
    } else {
        config["params"][key] = value;
    }
}

namespace {

bool same_type(const json &expected, const json &given) {
    if (expected.is_number_integer()) {
        return given.is_number_integer();
    }
    if (expected.is_number()) {
        return given.is_number();
    }
    return expected.type() == given.type();
}

}  // namespace

json resolve_config(const json &config) {
    require(config.is_object(), ErrorKind::Validation, "config must be a JSON object");
    for (const auto &[key, value] : config.items()) {
        require(key == "experiment" || key == "seed" || key == "params", ErrorKind::Validation,
                "unknown config key '" + key + "'");
    }
    require(config.contains("experiment") && config["experiment"].is_string(), ErrorKind::Validation,
            "config needs a string 'experiment'");
    std::string name = config["experiment"].get<std::string>();
    json params = default_params(name);
    if (config.contains("params")) {
        require(config["params"].is_object(), ErrorKind::Validation, "'params' must be an object");
        for (const auto &[key, value] : config["params"].items()) {
            require(params.contains(key), ErrorKind::Validation,
                    "unknown parameter '" + key + "' for experiment " + name);
            require(same_type(params[key], value), ErrorKind::Validation,
                    "parameter '" + key + "' expects " + std::string(params[key].type_name()));
            params[key] = value;
        }
    }
    std::uint64_t seed = 0;
    if (config.contains("seed")) {
        const json &sj = config["seed"];
        require(sj.is_number_unsigned() || (sj.is_number_integer() && sj.get<std::int64_t>() >= 0),
                ErrorKind::Validation, "seed must be a non-negative integer");
        seed = config["seed"].get<std::uint64_t>();
    }
    return {{"experiment", name}, {"seed", seed}, {"params", params}};
}

namespace {

struct Context {
    const json &params;
    std::uint64_t seed;
    fs::path out_dir;
    std::vector<std::string> files;

    int i(const char *key) const { return params.at(key).get<int>(); }
    std::size_t count(const char *key) const {
        int v = i(key);
        require(v >= 0, ErrorKind::Validation, std::string(key) + " must be non-negative");
        return static_cast<std::size_t>(v);
    }
    double d(const char *key) const { return params.at(key).get<double>(); }
    std::string s(const char *key) const { return params.at(key).get<std::string>(); }

    std::ofstream open(const std::string &name) {
        std::ofstream out(out_dir / name, std::ios::binary);
        require(static_cast<bool>(out), ErrorKind::Validation, "cannot write " + (out_dir / name).string());
        files.push_back(name);
        return out;
    }
};

json tilde_u_check(Context &ctx) {
    const int n = ctx.i("n_data"), t = ctx.i("t"), layers = ctx.i("circuit_layers");
    const std::size_t trials = ctx.count("trials");
    require(n >= 1 && t >= 1 && t <= kMaxAdderQubits, ErrorKind::Validation, "need n_data >= 1 and 1 <= t <= 8");
    const int max_l = (1 << t) - 1;
    std::vector<std::vector<double>> overlaps(trials, std::vector<double>(max_l));
    parallel_for(trials, [&](std::size_t trial) {
        Circuit u = random_circuit(n, layers, derive_seed(ctx.seed, "tilde_u", trial));
        Circuit gadget = build_tilde_u([&u](Input) { return u; }, n, t)(0);
        StateVector state(n + t);
        StateVector u_state = varivery::apply(u, zero_state(n));
        for (int l = 1; l <= max_l; ++l) {
            state.apply(gadget);
            overlaps[trial][l - 1] = std::abs(overlap(state, tensor(u_state, StateVector::basis(t, l))));
        }
    });
    double worst = 0.0;
    auto out = ctx.open("tilde_u.csv");
    out << "L,trial,overlap_abs\n";
    for (int l = 1; l <= max_l; ++l) {
        for (std::size_t trial = 0; trial < trials; ++trial) {
            double ov = overlaps[trial][l - 1];
            worst = std::max(worst, 1.0 - ov);
            out << l << ',' << trial << ',' << format_real(ov) << '\n';
        }
    }
    return {{"max_telescoping_deviation", worst}, {"layer_counts_checked", max_l}, {"within_1e-9", worst <= 1e-9}};
}

json planted_spec(const Context &ctx) {
    std::string name = ctx.s("planted");
    if (name == "parity") {
        return {{"name", "parity"}, {"n", ctx.i("n_data")}};
    }
    if (name == "dlp_msb") {
        return {{"name", "dlp_msb"}, {"p", ctx.i("p")}, {"g", ctx.i("g")}};
    }
    fail(ErrorKind::Validation, "planted must be 'parity' or 'dlp_msb'");
}

RateRule rate_rule(const Context &ctx) {
    std::string rule = ctx.s("rate");
    if (rule == "Constant") return RateRule::constant(ctx.d("eta"));
    if (rule == "InverseT") return RateRule::inverse_t(ctx.d("eta"));
    if (rule == "GradNormScaled") return RateRule::grad_norm_scaled(ctx.d("eta"), ctx.d("epsilon"));
    fail(ErrorKind::Validation, "rate must be Constant, InverseT or GradNormScaled");
}

json cor2_train(Context &ctx) {
    VariVeryConfig cfg{planted_spec(ctx), ctx.i("t"), ctx.i("layers"), ctx.i("n_data")};
    TrainConfig tc;
    tc.steps = ctx.i("steps");
    tc.rate = rate_rule(ctx);
    tc.seed = ctx.seed;
    Cor2Record rec = run_cor2_experiment(cfg, tc, ctx.count("n_train"), ctx.count("n_test"),
                                         static_cast<std::uint64_t>(ctx.i("data_seed")), ctx.d("risk_threshold"));
    auto out = ctx.open("trace.csv");
    write_trace_csv(out, rec.trace);
    return rec.to_json();
}

json bp_sweep(Context &ctx) {
    std::string family = ctx.s("family");
    std::function<CircuitTemplate(int)> builder;
    if (family == "hea_deep_global") {
        builder = [](int n) {
            return build_hea({n, n, HeaConfig::ObservableKind::GlobalZAll, std::nullopt, true});
        };
    } else if (family == "hea_shallow_local") {
        builder = [](int n) { return build_hea({n, 1, HeaConfig::ObservableKind::LocalZ1, std::nullopt, true}); };
    } else if (family == "rotation_x") {
        builder = [](int n) {
            std::vector<int> all(n);
            for (int q = 0; q < n; ++q) all[q] = q;
            return CircuitTemplate(n,
                                   {{{SlotEntry::data("bit_flips", json::object(), all)}},
                                    {{SlotEntry::param(ParamKind::RotationX, 0, {0})}}},
                                   Observable::pauli_z(n, 0));
        };
    } else {
        fail(ErrorKind::Validation, "family must be hea_deep_global, hea_shallow_local or rotation_x");
    }
    std::vector<int> ns;
    for (int n = ctx.i("n_min"); n <= ctx.i("n_max"); ++n) {
        ns.push_back(n);
    }
    SweepParams sp;
    sp.n_x = ctx.count("n_x");
    sp.n_theta = ctx.count("n_theta");
    sp.seed = ctx.seed;
    VarianceCurve curve = bp_scaling_sweep(builder, ns, sp);
    auto out = ctx.open("bp_sweep.csv");
    write_bp_csv(out, curve);
    return curve.to_json();
}

std::pair<FeatureMap, Distribution> similarity_setup(const Context &ctx) {
    std::string kind = ctx.s("feature_map");
    if (kind == "dlp") {
        DlpInstance inst(ctx.i("p"), ctx.i("g"));
        return {FeatureMap::dlp(inst.p(), inst.g(), ctx.i("k_window")),
                Distribution::group_elements(inst.p(), inst.g(), inst.elements())};
    }
    if (kind == "basis") {
        return {FeatureMap::computational_basis(ctx.i("n_bits")), Distribution::uniform_bitstrings(ctx.i("n_bits"))};
    }
    if (kind == "constant") {
        return {FeatureMap::constant(ctx.i("n_bits")), Distribution::uniform_bitstrings(ctx.i("n_bits"))};
    }
    fail(ErrorKind::Validation, "feature_map must be dlp, basis or constant");
}

json vanishing_similarity(Context &ctx) {
    auto [fm, dx] = similarity_setup(ctx);
    const std::size_t pairs = ctx.count("n_pairs");
    BpEstimate est = estimate_vanishing_similarity(fm, dx, pairs, ctx.seed);
    auto out = ctx.open("similarity.csv");
    out << "pair,x,x_prime,k\n";
    for (std::size_t i = 0; i < pairs; ++i) {
        Input a = dx.sample_input(ctx.seed, 2 * i), b = dx.sample_input(ctx.seed, 2 * i + 1);
        out << i << ',' << a << ',' << b << ',' << format_real(kernel_value(fm, a, b)) << '\n';
    }
    return {{"estimate", est.to_json()}, {"above_3se", est.point_estimate > 3.0 * est.standard_error}};
}

json kernel_dlp(Context &ctx) {
    auto inst = std::make_shared<const DlpInstance>(ctx.i("p"), ctx.i("g"));
    PlantedFunction fn = dlp_msb(inst);
    FeatureMap fm = FeatureMap::dlp(inst->p(), inst->g(), ctx.i("k_window"));
    Dataset train = Dataset::from_planted(fn, ctx.count("n_train"), ctx.seed, "train");
    Dataset test = Dataset::from_planted(fn, ctx.count("n_test"), ctx.seed, "test");
    std::vector<Input> xs;
    std::vector<double> ys;
    for (const Sample &s : train.samples) {
        xs.push_back(s.x);
        ys.push_back(s.y);
    }
    GramMatrix k = gram(fm, xs);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k.entries, Eigen::EigenvaluesOnly);
    double asym = (k.entries - k.entries.transpose()).cwiseAbs().maxCoeff();
    KernelModel model = fit(k, ys, ctx.d("lambda"), fm);

    auto out = ctx.open("predictions.csv");
    out << "split,x,label,score,predicted\n";
    auto score_set = [&](const Dataset &data, const char *split, double &accuracy, double &risk) {
        std::size_t hits = 0;
        std::vector<double> sq;
        for (const Sample &s : data.samples) {
            double f = predict(model, s.x);
            int label = classify(f);
            hits += label == s.y ? 1 : 0;
            sq.push_back((f - s.y) * (f - s.y));
            out << split << ',' << s.x << ',' << s.y << ',' << format_real(f) << ',' << label << '\n';
        }
        accuracy = static_cast<double>(hits) / static_cast<double>(data.size());
        risk = pairwise_sum(sq) / (2.0 * static_cast<double>(data.size()));
    };
    double train_acc = 0, train_risk = 0, test_acc = 0, test_risk = 0;
    score_set(train, "train", train_acc, train_risk);
    score_set(test, "test", test_acc, test_risk);
    auto gram_out = ctx.open("gram.csv");
    write_gram_csv(gram_out, k);

    json baselines = json::object();
    for (auto kind : {LinearClassifier::Kind::LinearOnBits, LinearClassifier::Kind::LogisticOnBits}) {
        LinearClassifier c = classical_baseline_fit(train, kind);
        baselines[kind == LinearClassifier::Kind::LinearOnBits ? "LinearOnBits" : "LogisticOnBits"] = {
            {"train_accuracy", c.accuracy(train)}, {"test_accuracy", c.accuracy(test)}};
    }
    BpEstimate sim = estimate_vanishing_similarity(fm, fn.domain, ctx.count("n_pairs"), derive_seed(ctx.seed, "pairs"));
    return {{"gram_min_eigenvalue", eig.eigenvalues().minCoeff()},
            {"gram_asymmetry", asym},
            {"ridge_residual", model.residual},
            {"train_accuracy", train_acc},
            {"train_risk", train_risk},
            {"test_accuracy", test_acc},
            {"test_risk", test_risk},
            {"baselines", baselines},
            {"vanishing_similarity", sim.to_json()},
            {"model", model.to_json()}};
}

json prop1_lcu(Context &ctx) {
    Prop1Config cfg;
    cfg.p = static_cast<std::uint64_t>(ctx.i("p"));
    cfg.g = static_cast<std::uint64_t>(ctx.i("g"));
    cfg.k_window = ctx.i("k_window");
    cfg.n_train = ctx.count("n_train");
    cfg.lambda = ctx.d("lambda");
    cfg.bp_n_x = ctx.count("bp_n_x");
    cfg.bp_n_theta = ctx.count("bp_n_theta");
    cfg.seed = ctx.seed;
    Prop1Record rec = run_prop1_experiment(cfg);
    CircuitTemplate family = lcu_brickwork_template(rec.lcu, rec.layout);
    DlpInstance inst(cfg.p, cfg.g);
    const auto &group = inst.elements();
    std::vector<double> lcu_score(group.size()), brick_score(group.size());
    parallel_for(group.size(), [&](std::size_t i) {
        lcu_score[i] = rec.lcu.predict(group[i]);
        brick_score[i] = rec.lcu.scale * family.evaluate(group[i], rec.layout.param_map);
    });
    auto out = ctx.open("prop1.csv");
    out << "x,kernel_score,lcu_score,brickwork_score\n";
    for (std::size_t i = 0; i < group.size(); ++i) {
        out << group[i] << ',' << format_real(predict(rec.model, group[i])) << ',' << format_real(lcu_score[i]) << ','
            << format_real(brick_score[i]) << '\n';
    }
    auto layout = ctx.open("layout.json");
    layout << rec.layout.to_json().dump() << '\n';
    json m = rec.to_json();
    m["variance_below_half_minus_3se"] = rec.uniform_bp.point_estimate < 0.5 - 3.0 * rec.uniform_bp.standard_error;
    return m;
}

json grad_check(Context &ctx) {
    const std::size_t configs = ctx.count("configs");
    const int n = ctx.i("n_data"), t = ctx.i("t");
    const double h = ctx.d("h");
    std::vector<double> worst(configs);
    std::vector<int> layer_counts(configs);
    parallel_for(configs, [&](std::size_t c) {
        Stream rng(derive_seed(ctx.seed, "grad_check", c));
        int layers = 1 + static_cast<int>(rng.next_below((1u << t) - 1));
        layer_counts[c] = layers;
        VariVeryConfig cfg{{{"name", "parity"}, {"n", n}}, t, layers, n};
        CircuitTemplate tmpl = build_varivery(cfg);
        Dataset data = Dataset::from_planted(parity_fn(n), ctx.count("n_train"), derive_seed(ctx.seed, "data", c));
        // Random labels exercise the chain rule away from the planted optimum.
        for (Sample &s : data.samples) {
            s.y = rng.next_below(2) == 0 ? -1 : 1;
        }
        std::vector<double> theta(layers);
        for (double &a : theta) {
            a = rng.next_uniform(0.0, 2.0 * std::numbers::pi);
        }
        auto ps = gradient(tmpl, theta, data, GradientMethod::param_shift());
        auto fd = gradient(tmpl, theta, data, GradientMethod::finite_diff(h));
        double m = 0.0;
        for (int j = 0; j < layers; ++j) {
            m = std::max(m, std::abs(ps[j] - fd[j]));
        }
        worst[c] = m;
    });
    auto out = ctx.open("grad_check.csv");
    out << "config,layers,max_abs_diff\n";
    for (std::size_t c = 0; c < configs; ++c) {
        out << c << ',' << layer_counts[c] << ',' << format_real(worst[c]) << '\n';
    }
    double overall = configs ? *std::max_element(worst.begin(), worst.end()) : 0.0;
    return {{"max_abs_diff", overall}, {"within_1e-6", overall <= 1e-6}};
}

}  // namespace

ExperimentResult run_experiment(const json &resolved, const fs::path &out_dir) {
    const std::string name = resolved.at("experiment").get<std::string>();
    fs::create_directories(out_dir);
    Context ctx{resolved.at("params"), resolved.at("seed").get<std::uint64_t>(), out_dir, {}};
    auto start = std::chrono::steady_clock::now();
    json metrics;
    if (name == "tilde_u_check") {
        metrics = tilde_u_check(ctx);
    } else if (name == "cor2_train") {
        metrics = cor2_train(ctx);
    } else if (name == "bp_sweep") {
        metrics = bp_sweep(ctx);
    } else if (name == "vanishing_similarity") {
        metrics = vanishing_similarity(ctx);
    } else if (name == "kernel_dlp") {
        metrics = kernel_dlp(ctx);
    } else if (name == "prop1_lcu") {
        metrics = prop1_lcu(ctx);
    } else if (name == "grad_check") {
        metrics = grad_check(ctx);
    } else {
        fail(ErrorKind::Validation, "unknown experiment '" + name + "'");
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ctx.files.push_back("summary.json");
    json summary = {{"experiment", name},
                    {"config", resolved},
                    {"metrics", metrics},
                    {"wall_seconds", seconds},
                    {"threads", thread_count()},
                    {"files", ctx.files}};
    std::ofstream out(out_dir / "summary.json", std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::Validation, "cannot write summary.json");
    out << summary.dump(2) << '\n';
    return {metrics, ctx.files};
}

}  // namespace varivery
