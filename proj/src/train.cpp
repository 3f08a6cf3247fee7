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

#include "varivery/train.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "varivery/error.hpp"
#include "varivery/io.hpp"
#include "varivery/parallel.hpp"
#include "varivery/rng.hpp"

namespace varivery {

void Dataset::validate() const {
    require(n_bits >= 1 && n_bits <= 63, ErrorKind::Validation, "dataset bit width must be in [1, 63]");
    for (const Sample &s : samples) {
        require(s.y == 1 || s.y == -1, ErrorKind::Validation, "labels must be +1 or -1");
        require((s.x >> n_bits) == 0, ErrorKind::Validation, "input wider than the dataset bit width");
    }
}

Dataset Dataset::from_planted(const PlantedFunction &fn, std::size_t count, std::uint64_t seed, std::string_view tag) {
    Dataset out;
    out.n_bits = fn.n_bits;
    const std::uint64_t stream = derive_seed(seed, tag);
    for (std::size_t i = 0; i < count; ++i) {
        Input x = fn.domain.sample_input(stream, i);
        out.samples.push_back({x, fn.label(x)});
    }
    return out;
}

std::vector<double> predictions(const CircuitTemplate &tmpl, std::span<const double> theta, const Dataset &data,
                                const SlotShift *shift) {
    std::vector<double> out(data.size());
    parallel_for(data.size(), [&](std::size_t i) { out[i] = tmpl.evaluate(data.samples[i].x, theta, shift); });
    return out;
}

double risk_from_predictions(std::span<const double> f, const Dataset &data) {
    require(f.size() == data.size() && !f.empty(), ErrorKind::Shape, "one prediction per sample required");
    std::vector<double> sq(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        double r = f[i] - data.samples[i].y;
        sq[i] = r * r;
    }
    return pairwise_sum(sq) / (2.0 * static_cast<double>(f.size()));
}

double empirical_mse(const CircuitTemplate &tmpl, std::span<const double> theta, const Dataset &data) {
    return risk_from_predictions(predictions(tmpl, theta, data), data);
}

double sign_accuracy(std::span<const double> f, const Dataset &data) {
    require(f.size() == data.size() && !f.empty(), ErrorKind::Shape, "one prediction per sample required");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        int label = f[i] >= -1e-12 ? 1 : -1;
        hits += label == data.samples[i].y ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(f.size());
}

RiskOracle::RiskOracle(const CircuitTemplate &tmpl, const Dataset &data) : tmpl_(tmpl), data_(data) {
    require(!data.samples.empty(), ErrorKind::Validation, "dataset is empty");
}

std::vector<double> RiskOracle::predictions(std::span<const double> theta, const SlotShift *shift) {
    ++evaluations_;
    return varivery::predictions(tmpl_, theta, data_, shift);
}

double RiskOracle::risk(std::span<const double> theta) { return risk_from_predictions(predictions(theta), data_); }

std::vector<double> RiskOracle::gradient(std::span<const double> theta, std::span<const double> f_at_theta,
                                         const GradientMethod &method) {
    const int p = tmpl_.param_count();
    require(static_cast<int>(theta.size()) == p, ErrorKind::Shape, "theta length does not match the template");
    std::vector<double> grad(p, 0.0);
    const double n = static_cast<double>(data_.size());

    if (method.kind == GradientMethod::Kind::FiniteDiff) {
        require(method.h > 0.0, ErrorKind::Validation, "finite-difference step must be positive");
        std::vector<double> probe(theta.begin(), theta.end());
        for (int j = 0; j < p; ++j) {
            probe[j] = theta[j] + method.h;
            double up = risk(probe);
            probe[j] = theta[j] - method.h;
            double down = risk(probe);
            probe[j] = theta[j];
            grad[j] = (up - down) / (2.0 * method.h);
        }
        return grad;
    }

    for (std::size_t l = 0; l < tmpl_.layers().size(); ++l) {
        for (const SlotEntry &e : tmpl_.layers()[l].gates) {
            if (e.kind == SlotEntry::Kind::Param && e.param_kind == ParamKind::Brick) {
                fail(ErrorKind::UnsupportedMethod, "parameter shift needs Pauli-rotation slots; brick slot in layer " +
                                                       std::to_string(l));
            }
        }
    }
    std::vector<double> residual(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) {
        residual[i] = f_at_theta[i] - data_.samples[i].y;
    }
    std::vector<double> terms(data_.size());
    for (int j = 0; j < p; ++j) {
        double total = 0.0;
        for (const auto &[layer, slot] : tmpl_.occurrences(j)) {
            SlotShift plus{layer, slot, std::numbers::pi / 2.0};
            SlotShift minus{layer, slot, -std::numbers::pi / 2.0};
            auto fp = predictions(theta, &plus);
            auto fm = predictions(theta, &minus);
            for (std::size_t i = 0; i < data_.size(); ++i) {
                terms[i] = residual[i] * (fp[i] - fm[i]) / 2.0;
            }
            total += pairwise_sum(terms) / n;
        }
        grad[j] = total;
    }
    return grad;
}

std::vector<double> gradient(const CircuitTemplate &tmpl, std::span<const double> theta, const Dataset &data,
                             const GradientMethod &method) {
    RiskOracle oracle(tmpl, data);
    std::vector<double> f = method.kind == GradientMethod::Kind::ParamShift ? oracle.predictions(theta)
                                                                            : std::vector<double>{};
    return oracle.gradient(theta, f, method);
}

double RateRule::rate(int t, std::span<const double> grad) const {
    switch (kind) {
        case Kind::Constant:
            return eta;
        case Kind::InverseT:
            return eta / static_cast<double>(t);
        case Kind::GradNormScaled: {
            double norm = 0.0;
            for (double g : grad) {
                norm += g * g;
            }
            return eta / (std::sqrt(norm) + epsilon);
        }
    }
    return eta;
}

nlohmann::json RateRule::to_json() const {
    switch (kind) {
        case Kind::Constant:
            return {{"rule", "Constant"}, {"eta", eta}};
        case Kind::InverseT:
            return {{"rule", "InverseT"}, {"eta0", eta}};
        case Kind::GradNormScaled:
            return {{"rule", "GradNormScaled"}, {"eta", eta}, {"epsilon", epsilon}};
    }
    return {};
}

void TrainConfig::validate() const {
    require(steps >= 0, ErrorKind::Validation, "step count must be non-negative");
    require(rate.eta > 0.0 && std::isfinite(rate.eta), ErrorKind::Validation, "learning rate must be positive");
    require(rate.kind != RateRule::Kind::GradNormScaled || rate.epsilon > 0.0, ErrorKind::Validation,
            "epsilon must be positive");
    require(init.samples_angles(), ErrorKind::Validation, "initial parameters need an angle distribution");
}

namespace {

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

TrainTrace train_gradient_based(const CircuitTemplate &tmpl, const Dataset &data, const TrainConfig &cfg) {
    cfg.validate();
    data.validate();
    RiskOracle oracle(tmpl, data);
    TrainTrace trace;
    std::vector<double> theta = cfg.init.sample_angles(cfg.seed, 0, tmpl.param_count());
    const double sign = cfg.ascent ? 1.0 : -1.0;

    for (int t = 0; t < cfg.steps; ++t) {
        std::vector<double> f = oracle.predictions(theta);
        double risk = risk_from_predictions(f, data);
        std::vector<double> grad = oracle.gradient(theta, f, cfg.method);
        trace.steps.push_back({t, theta, risk, inf_norm(grad)});
        if (!std::isfinite(risk) || !all_finite(grad)) {
            trace.final_theta = theta;
            trace.risk_evaluations = oracle.evaluations();
            throw Error(ErrorKind::Numerical, "non-finite risk or gradient at step " + std::to_string(t));
        }
        double eta = cfg.rate.rate(t + 1, grad);
        for (std::size_t j = 0; j < theta.size(); ++j) {
            theta[j] += sign * eta * grad[j];
        }
    }
    double risk = oracle.risk(theta);
    trace.steps.push_back({cfg.steps, theta, risk, std::numeric_limits<double>::quiet_NaN()});
    trace.final_theta = theta;
    trace.risk_evaluations = oracle.evaluations();
    require(std::isfinite(risk) && all_finite(theta), ErrorKind::Numerical, "non-finite final iterate");
    return trace;
}

void write_trace_csv(std::ostream &out, const TrainTrace &trace) {
    out << "step,risk,grad_inf_norm\n";
    for (const TrainStep &s : trace.steps) {
        out << s.step << ',' << format_real(s.risk) << ',' << format_real(s.grad_inf_norm) << '\n';
    }
}

nlohmann::json Cor2Record::to_json() const {
    return {{"final_risk", final_risk},
            {"train_accuracy", train_accuracy},
            {"test_accuracy", test_accuracy},
            {"test_risk", test_risk},
            {"wrapped_angle_sum", wrapped_angle_sum},
            {"final_theta", trace.final_theta},
            {"risk_evaluations", trace.risk_evaluations},
            {"properties", properties.to_json()}};
}

Cor2Record run_cor2_experiment(const VariVeryConfig &cfg, const TrainConfig &train_cfg, std::size_t n_train,
                               std::size_t n_test, std::uint64_t data_seed, double risk_threshold) {
    require(n_train >= 1 && n_test >= 1, ErrorKind::Validation, "train and test sets must be non-empty");
    CircuitTemplate tmpl = build_varivery(cfg);
    PlantedFunction fn = planted_from_spec(cfg.planted);
    Dataset train = Dataset::from_planted(fn, n_train, data_seed, "train");
    Dataset test = Dataset::from_planted(fn, n_test, data_seed, "test");

    Cor2Record rec;
    rec.trace = train_gradient_based(tmpl, train, train_cfg);
    const auto &theta = rec.trace.final_theta;
    rec.final_risk = rec.trace.final_risk();
    rec.train_accuracy = sign_accuracy(predictions(tmpl, theta, train), train);
    auto f_test = predictions(tmpl, theta, test);
    rec.test_accuracy = sign_accuracy(f_test, test);
    rec.test_risk = risk_from_predictions(f_test, test);
    double sum = 0.0;
    for (double a : theta) {
        sum += a;
    }
    rec.wrapped_angle_sum = wrap_angle(sum);

    rec.properties = validate_varivery(tmpl, varivery_meta(cfg));
    bool ok = rec.final_risk <= risk_threshold;
    rec.properties.trainable = ok ? PropertyReport::Evidence::Satisfied : PropertyReport::Evidence::Failed;
    rec.properties.trainable_evidence = "final empirical risk " + format_real(rec.final_risk) + (ok ? " <= " : " > ") +
                                        format_real(risk_threshold) + " after " + std::to_string(train_cfg.steps) +
                                        " steps";
    return rec;
}

}  // namespace varivery
