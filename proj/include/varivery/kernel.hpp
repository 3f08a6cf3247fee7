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
 * Fidelity kernels k(x, x') = |<phi(x)|phi(x')>|^2, kernel ridge regression
 * and linear baselines on raw input bits.
 */

#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "varivery/ansatz.hpp"
#include "varivery/train.hpp"

namespace varivery {

/// x -> |phi(x)> given by a state-preparation circuit on n qubits.
class FeatureMap {
   public:
    FeatureMap(std::string id, int n_qubits, DataCircuit circuit, nlohmann::json spec = {});

    /// Coset superposition over {g^(log x + i) : 0 <= i < 2^k}.
    static FeatureMap dlp(std::uint64_t p, std::uint64_t g, int k_window);
    /// x -> |x> on n qubits.
    static FeatureMap computational_basis(int n_qubits);
    /// x -> |0...0>.
    static FeatureMap constant(int n_qubits);

    const std::string &id() const noexcept { return id_; }
    int n_qubits() const noexcept { return n_qubits_; }
    const nlohmann::json &spec() const noexcept { return spec_; }
    Circuit circuit(Input x) const { return circuit_(x); }
    StateVector state(Input x) const;

   private:
    std::string id_;
    int n_qubits_;
    DataCircuit circuit_;
    nlohmann::json spec_;
};

double kernel_value(const FeatureMap &fm, Input a, Input b);

struct GramMatrix {
    Eigen::MatrixXd entries;
    std::vector<Input> support;
};

GramMatrix gram(const FeatureMap &fm, std::span<const Input> inputs);

struct KernelModel {
    Eigen::VectorXd alpha;
    std::vector<Input> support;
    FeatureMap feature_map;
    double lambda = 1e-3;
    /// ||(K + lambda I) alpha - y||_inf at fit time.
    double residual = 0.0;

    nlohmann::json to_json() const;
};

/// alpha = (K + lambda I)^-1 y.
KernelModel fit(const GramMatrix &gram, std::span<const double> labels, double lambda, const FeatureMap &fm);

/// sum_i alpha_i k(x, x_i).
double predict(const KernelModel &model, Input x);
/// sign(score) with |score| <= 1e-12 mapped to +1.
int classify(double score);

void write_gram_csv(std::ostream &out, const GramMatrix &gram);

struct LinearClassifier {
    enum class Kind { LogisticOnBits, LinearOnBits };
    Kind kind = Kind::LinearOnBits;
    int n_bits = 0;
    /// One weight per bit (most significant first), then the bias.
    Eigen::VectorXd weights;

    double score(Input x) const;
    int predict(Input x) const { return classify(score(x)); }
    double accuracy(const Dataset &data) const;
};

/// Least squares (LinearOnBits) or L2-regularized logistic regression by
/// full-batch gradient descent from zero (LogisticOnBits).
LinearClassifier classical_baseline_fit(const Dataset &data, LinearClassifier::Kind kind);

}  // namespace varivery
