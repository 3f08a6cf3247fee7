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
 * Monte-Carlo concentration diagnostics.
 *
 * `estimate_bp` estimates E_x[Var_theta f_theta(x)]; `estimate_vanishing_similarity`
 * estimates Var_{x,x'} k(x, x'). Both report a bootstrap standard error and are
 * bitwise reproducible for a fixed seed at any thread count.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "varivery/ansatz.hpp"
#include "varivery/kernel.hpp"
#include "varivery/sampling.hpp"

namespace varivery {

inline constexpr int kBootstrapResamples = 200;

struct BpEstimate {
    double point_estimate = 0.0;
    double standard_error = 0.0;
    std::size_t n_x_samples = 0;
    std::size_t n_theta_samples = 0;
    int n_qubits = 0;
    std::uint64_t seed = 0;

    /// Estimate below -3 SE: more negative than sampling noise explains.
    bool flagged() const { return point_estimate < -3.0 * standard_error; }
    nlohmann::json to_json() const;
};

/// Draw (i, j) uses x_i = d_x.sample_input(seed, i) and
/// theta_ij = p_theta.sample_angles(seed, i * n_theta + j, param_count).
BpEstimate estimate_bp(const CircuitTemplate &family, const Distribution &p_theta, const Distribution &d_x,
                       std::size_t n_x, std::size_t n_theta, std::uint64_t seed);

/// Pair i uses inputs d_x.sample_input(seed, 2i) and d_x.sample_input(seed, 2i + 1).
BpEstimate estimate_vanishing_similarity(const FeatureMap &fm, const Distribution &d_x, std::size_t n_pairs,
                                         std::uint64_t seed);

struct SlopeFit {
    bool defined = false;
    double slope = 0.0;
    double standard_error = 0.0;
    double intercept = 0.0;
};

/// Weighted least squares of log(estimate) on n with sigma_i = SE_i / estimate_i
/// (unweighted if some SE is zero). Undefined if any estimate is <= 0 or fewer
/// than two points are given.
SlopeFit fit_log_slope(const std::vector<int> &n, const std::vector<BpEstimate> &estimates);

struct VarianceCurve {
    std::vector<int> n;
    std::vector<BpEstimate> estimates;
    SlopeFit fit;

    nlohmann::json to_json() const;
};

struct SweepParams {
    Distribution p_theta = Distribution::uniform_angles();
    /// Input distribution for width n.
    std::function<Distribution(int)> d_x = [](int n) { return Distribution::uniform_bitstrings(n); };
    std::size_t n_x = 32;
    std::size_t n_theta = 256;
    std::uint64_t seed = 0;
};

/// One estimate per width; width n is sampled with seed derive_seed(seed, "sweep", n).
VarianceCurve bp_scaling_sweep(const std::function<CircuitTemplate(int)> &family_builder, const std::vector<int> &n_list,
                               const SweepParams &params);

void write_bp_csv(std::ostream &out, const VarianceCurve &curve);

}  // namespace varivery
