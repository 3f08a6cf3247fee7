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

#include "varivery/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "varivery/error.hpp"
#include "varivery/io.hpp"
#include "varivery/parallel.hpp"
#include "varivery/rng.hpp"

namespace varivery {

namespace {

// Row-major n_rows x n_cols table of f-values, one row per outer sample.
struct Table {
    std::size_t rows, cols;
    std::vector<double> values;

    std::span<const double> row(std::size_t r) const { return std::span<const double>(values).subspan(r * cols, cols); }
};

double mean_of_row_variances(const Table &t) {
    std::vector<double> v(t.rows);
    for (std::size_t r = 0; r < t.rows; ++r) {
        v[r] = sample_variance(t.row(r));
    }
    return mean(v);
}

// Nested bootstrap: resample rows, then columns within each chosen row.
double nested_bootstrap_se(const Table &t, std::uint64_t seed) {
    std::vector<double> replicates(kBootstrapResamples);
    parallel_for(kBootstrapResamples, [&](std::size_t b) {
        Stream rng(derive_seed(seed, "bootstrap", b));
        std::vector<double> row_vars(t.rows);
        std::vector<double> picked(t.cols);
        for (std::size_t r = 0; r < t.rows; ++r) {
            std::size_t src = t.rows == 1 ? 0 : rng.next_below(t.rows);
            auto row = t.row(src);
            for (std::size_t c = 0; c < t.cols; ++c) {
                picked[c] = row[rng.next_below(t.cols)];
            }
            row_vars[r] = sample_variance(picked);
        }
        replicates[b] = mean(row_vars);
    });
    return std::sqrt(sample_variance(replicates));
}

}  // namespace

nlohmann::json BpEstimate::to_json() const {
    return {{"point_estimate", point_estimate}, {"std_error", standard_error}, {"n_x", n_x_samples},
            {"n_theta", n_theta_samples},       {"n_qubits", n_qubits},       {"seed", seed},
            {"flagged", flagged()}};
}

BpEstimate estimate_bp(const CircuitTemplate &family, const Distribution &p_theta, const Distribution &d_x,
                       std::size_t n_x, std::size_t n_theta, std::uint64_t seed) {
    require(n_theta >= 2, ErrorKind::Validation, "n_theta must be at least 2");
    require(n_x >= 1, ErrorKind::Validation, "n_x must be at least 1");
    require(p_theta.samples_angles(), ErrorKind::Validation, "parameter distribution must sample angles");
    require(!d_x.samples_angles(), ErrorKind::Validation, "data distribution must sample inputs");

    std::vector<Input> xs(n_x);
    for (std::size_t i = 0; i < n_x; ++i) {
        xs[i] = d_x.sample_input(seed, i);
    }
    Table t{n_x, n_theta, std::vector<double>(n_x * n_theta)};
    parallel_for(n_x * n_theta, [&](std::size_t k) {
        std::vector<double> theta = p_theta.sample_angles(seed, k, family.param_count());
        t.values[k] = family.evaluate(xs[k / n_theta], theta);
    });

    BpEstimate est;
    est.point_estimate = mean_of_row_variances(t);
    est.standard_error = nested_bootstrap_se(t, seed);
    est.n_x_samples = n_x;
    est.n_theta_samples = n_theta;
    est.n_qubits = family.n_qubits();
    est.seed = seed;
    require(std::isfinite(est.point_estimate) && std::isfinite(est.standard_error), ErrorKind::Numerical,
            "non-finite variance estimate");
    return est;
}

BpEstimate estimate_vanishing_similarity(const FeatureMap &fm, const Distribution &d_x, std::size_t n_pairs,
                                         std::uint64_t seed) {
    require(n_pairs >= 2, ErrorKind::Validation, "n_pairs must be at least 2");
    require(!d_x.samples_angles(), ErrorKind::Validation, "data distribution must sample inputs");
    Table t{1, n_pairs, std::vector<double>(n_pairs)};
    parallel_for(n_pairs, [&](std::size_t i) {
        t.values[i] = kernel_value(fm, d_x.sample_input(seed, 2 * i), d_x.sample_input(seed, 2 * i + 1));
    });
    BpEstimate est;
    est.point_estimate = sample_variance(t.values);
    est.standard_error = nested_bootstrap_se(t, seed);
    est.n_x_samples = n_pairs;
    est.n_theta_samples = 0;
    est.n_qubits = fm.n_qubits();
    est.seed = seed;
    return est;
}

SlopeFit fit_log_slope(const std::vector<int> &n, const std::vector<BpEstimate> &estimates) {
    require(n.size() == estimates.size(), ErrorKind::Shape, "one estimate per width required");
    SlopeFit fit;
    if (n.size() < 2) {
        return fit;
    }
    bool weighted = true;
    for (const BpEstimate &e : estimates) {
        if (!(e.point_estimate > 0.0)) {
            return fit;
        }
        weighted = weighted && e.standard_error > 0.0;
    }
    const std::size_t m = n.size();
    std::vector<double> w(m), xw(m), yw(m);
    for (std::size_t i = 0; i < m; ++i) {
        double sigma = estimates[i].standard_error / estimates[i].point_estimate;
        w[i] = weighted ? 1.0 / (sigma * sigma) : 1.0;
        xw[i] = w[i] * n[i];
        yw[i] = w[i] * std::log(estimates[i].point_estimate);
    }
    double sw = pairwise_sum(w);
    double xbar = pairwise_sum(xw) / sw;
    double ybar = pairwise_sum(yw) / sw;
    std::vector<double> sxx(m), sxy(m), res(m);
    for (std::size_t i = 0; i < m; ++i) {
        double dx = n[i] - xbar;
        sxx[i] = w[i] * dx * dx;
        sxy[i] = w[i] * dx * (std::log(estimates[i].point_estimate) - ybar);
    }
    double s_xx = pairwise_sum(sxx);
    if (!(s_xx > 0.0)) {
        return fit;
    }
    fit.slope = pairwise_sum(sxy) / s_xx;
    fit.intercept = ybar - fit.slope * xbar;
    if (weighted) {
        fit.standard_error = std::sqrt(1.0 / s_xx);
    } else {
        // Unweighted: residual-based error, needs at least three points.
        for (std::size_t i = 0; i < m; ++i) {
            double r = std::log(estimates[i].point_estimate) - fit.intercept - fit.slope * n[i];
            res[i] = r * r;
        }
        fit.standard_error = m > 2 ? std::sqrt(pairwise_sum(res) / static_cast<double>(m - 2) / s_xx) : INFINITY;
    }
    fit.defined = std::isfinite(fit.slope) && std::isfinite(fit.standard_error);
    return fit;
}

nlohmann::json VarianceCurve::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const BpEstimate &e : estimates) {
        rows.push_back(e.to_json());
    }
    nlohmann::json slope = {{"defined", fit.defined}};
    if (fit.defined) {
        slope["slope"] = fit.slope;
        slope["std_error"] = fit.standard_error;
        slope["intercept"] = fit.intercept;
    }
    return {{"n", n}, {"estimates", rows}, {"log_slope", slope}};
}

VarianceCurve bp_scaling_sweep(const std::function<CircuitTemplate(int)> &family_builder, const std::vector<int> &n_list,
                               const SweepParams &params) {
    require(!n_list.empty(), ErrorKind::Validation, "sweep needs at least one width");
    require(std::is_sorted(n_list.begin(), n_list.end()) &&
                std::adjacent_find(n_list.begin(), n_list.end()) == n_list.end(),
            ErrorKind::Validation, "sweep widths must be strictly ascending");
    VarianceCurve curve;
    curve.n = n_list;
    for (int n : n_list) {
        CircuitTemplate family = family_builder(n);
        curve.estimates.push_back(estimate_bp(family, params.p_theta, params.d_x(n), params.n_x, params.n_theta,
                                              derive_seed(params.seed, "sweep", static_cast<std::uint64_t>(n))));
    }
    curve.fit = fit_log_slope(curve.n, curve.estimates);
    return curve;
}

void write_bp_csv(std::ostream &out, const VarianceCurve &curve) {
    out << "n,point_estimate,std_error,n_x,n_theta,seed\n";
    for (std::size_t i = 0; i < curve.n.size(); ++i) {
        const BpEstimate &e = curve.estimates[i];
        out << curve.n[i] << ',' << format_real(e.point_estimate) << ',' << format_real(e.standard_error) << ','
            << e.n_x_samples << ',' << e.n_theta_samples << ',' << e.seed << '\n';
    }
}

}  // namespace varivery
