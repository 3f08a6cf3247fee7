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
 * Gradient-based training of circuit templates on labelled data.
 *
 * The empirical risk is R(theta) = (1 / 2N) sum_i (f(x_i; theta) - y_i)^2.
 * The trainer only ever sees R along its own iterate path and at the probe
 * points its gradient rule needs; `RiskOracle` counts those evaluations.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include <json.hpp>

#include "varivery/ansatz.hpp"
#include "varivery/sampling.hpp"

namespace varivery {

struct Sample {
    Input x = 0;
    int y = 1;
};

struct Dataset {
    std::vector<Sample> samples;
    int n_bits = 0;

    std::size_t size() const noexcept { return samples.size(); }
    /// Labels must be +-1 and inputs must fit in n_bits.
    void validate() const;

    /// `count` inputs drawn from the function's domain under stream `tag`, labelled by y(x).
    static Dataset from_planted(const PlantedFunction &fn, std::size_t count, std::uint64_t seed,
                                std::string_view tag = "train");
};

/// f(x_i; theta) for every sample.
std::vector<double> predictions(const CircuitTemplate &tmpl, std::span<const double> theta, const Dataset &data,
                                const SlotShift *shift = nullptr);

double risk_from_predictions(std::span<const double> f, const Dataset &data);
double empirical_mse(const CircuitTemplate &tmpl, std::span<const double> theta, const Dataset &data);

/// Fraction of samples whose predicted sign matches the label (score 0 counts as +1).
double sign_accuracy(std::span<const double> f, const Dataset &data);

struct GradientMethod {
    enum class Kind { ParamShift, FiniteDiff };
    Kind kind = Kind::ParamShift;
    double h = 1e-5;

    static GradientMethod param_shift() { return {}; }
    static GradientMethod finite_diff(double h) { return {Kind::FiniteDiff, h}; }
};

/// Counts every pass of the template over the dataset.
class RiskOracle {
   public:
    RiskOracle(const CircuitTemplate &tmpl, const Dataset &data);

    std::vector<double> predictions(std::span<const double> theta, const SlotShift *shift = nullptr);
    double risk(std::span<const double> theta);
    /// Uses already-computed predictions at theta for the chain rule.
    std::vector<double> gradient(std::span<const double> theta, std::span<const double> f_at_theta,
                                 const GradientMethod &method);

    std::size_t evaluations() const noexcept { return evaluations_; }
    const CircuitTemplate &tmpl() const noexcept { return tmpl_; }

   private:
    const CircuitTemplate &tmpl_;
    const Dataset &data_;
    std::size_t evaluations_ = 0;
};

/// dR/dtheta.
std::vector<double> gradient(const CircuitTemplate &tmpl, std::span<const double> theta, const Dataset &data,
                             const GradientMethod &method);

struct RateRule {
    enum class Kind { Constant, InverseT, GradNormScaled };
    Kind kind = Kind::Constant;
    double eta = 0.1;
    double epsilon = 1e-8;

    static RateRule constant(double eta) { return {Kind::Constant, eta, 0.0}; }
    static RateRule inverse_t(double eta0) { return {Kind::InverseT, eta0, 0.0}; }
    static RateRule grad_norm_scaled(double eta, double epsilon) { return {Kind::GradNormScaled, eta, epsilon}; }

    /// Step size for update number t >= 1.
    double rate(int t, std::span<const double> grad) const;
    nlohmann::json to_json() const;
};

struct TrainConfig {
    Distribution init = Distribution::uniform_angles();
    int steps = 500;
    RateRule rate = RateRule::constant(0.1);
    std::uint64_t seed = 0;
    /// Maximize instead of minimize the risk.
    bool ascent = false;
    GradientMethod method;

    void validate() const;
};

struct TrainStep {
    int step = 0;
    std::vector<double> theta;
    double risk = 0.0;
    /// Gradient at this iterate; NaN for the final iterate, where none is taken.
    double grad_inf_norm = std::numeric_limits<double>::quiet_NaN();
};

struct TrainTrace {
    std::vector<TrainStep> steps;
    std::vector<double> final_theta;
    std::size_t risk_evaluations = 0;

    double final_risk() const { return steps.back().risk; }
};

/// theta_t = theta_{t-1} -/+ C_t grad R(theta_{t-1}); theta_0 ~ cfg.init.
TrainTrace train_gradient_based(const CircuitTemplate &tmpl, const Dataset &data, const TrainConfig &cfg);

void write_trace_csv(std::ostream &out, const TrainTrace &trace);

struct Cor2Record {
    TrainTrace trace;
    double final_risk = 0.0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    double test_risk = 0.0;
    /// Sum of the final angles wrapped into (-pi, pi].
    double wrapped_angle_sum = 0.0;
    PropertyReport properties;

    nlohmann::json to_json() const;
};

/// Samples a labelled set from the planted function, trains the layered
/// model on it and scores it on a fresh held-out set.
Cor2Record run_cor2_experiment(const VariVeryConfig &cfg, const TrainConfig &train_cfg, std::size_t n_train,
                               std::size_t n_test, std::uint64_t data_seed, double risk_threshold = 1e-4);

}  // namespace varivery
