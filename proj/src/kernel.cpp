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

#include "varivery/kernel.hpp"

#include <cmath>
#include <memory>
#include <ostream>

#include "varivery/error.hpp"
#include "varivery/io.hpp"
#include "varivery/parallel.hpp"

namespace varivery {

FeatureMap::FeatureMap(std::string id, int n_qubits, DataCircuit circuit, nlohmann::json spec)
    : id_(std::move(id)), n_qubits_(n_qubits), circuit_(std::move(circuit)), spec_(std::move(spec)) {
    require(n_qubits >= 1 && n_qubits <= kMaxQubits, ErrorKind::Capacity, "feature register exceeds the qubit cap");
    require(static_cast<bool>(circuit_), ErrorKind::Validation, "feature map needs a circuit");
}

FeatureMap FeatureMap::dlp(std::uint64_t p, std::uint64_t g, int k_window) {
    auto inst = std::make_shared<DlpInstance>(p, g);
    dlp_coset(*inst, k_window, 1);
    return FeatureMap("dlp", inst->n_bits(), [inst, k_window](Input x) { return dlp_feature_circuit(*inst, k_window, x); },
                      {{"name", "dlp"}, {"p", p}, {"g", g}, {"k_window", k_window}});
}

FeatureMap FeatureMap::computational_basis(int n_qubits) {
    return FeatureMap("basis", n_qubits,
                      [n_qubits](Input x) {
                          require(n_qubits >= 64 || (x >> n_qubits) == 0, ErrorKind::Domain,
                                  "input wider than the feature register");
                          Circuit c;
                          for (int q = 0; q < n_qubits; ++q) {
                              if ((x >> (n_qubits - 1 - q)) & 1U) {
                                  c.push_back(GateOp::x(q));
                              }
                          }
                          return c;
                      },
                      {{"name", "basis"}, {"n", n_qubits}});
}

FeatureMap FeatureMap::constant(int n_qubits) {
    return FeatureMap("constant", n_qubits, [](Input) { return Circuit{}; }, {{"name", "constant"}, {"n", n_qubits}});
}

StateVector FeatureMap::state(Input x) const {
    StateVector s(n_qubits_);
    s.apply(circuit_(x));
    return s;
}

double kernel_value(const FeatureMap &fm, Input a, Input b) { return std::norm(overlap(fm.state(a), fm.state(b))); }

GramMatrix gram(const FeatureMap &fm, std::span<const Input> inputs) {
    const std::size_t n = inputs.size();
    std::vector<StateVector> states(n, StateVector(1));
    parallel_for(n, [&](std::size_t i) { states[i] = fm.state(inputs[i]); });
    GramMatrix out;
    out.support.assign(inputs.begin(), inputs.end());
    out.entries = Eigen::MatrixXd::Zero(n, n);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            pairs.emplace_back(i, j);
        }
    }
    std::vector<double> values(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t k) {
        values[k] = std::norm(overlap(states[pairs[k].first], states[pairs[k].second]));
    });
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        auto [i, j] = pairs[k];
        out.entries(i, j) = values[k];
        out.entries(j, i) = values[k];
    }
    return out;
}

nlohmann::json KernelModel::to_json() const {
    std::vector<double> a(alpha.data(), alpha.data() + alpha.size());
    return {{"alpha", a}, {"support", support}, {"lambda", lambda}, {"feature_map", feature_map.spec()}};
}

KernelModel fit(const GramMatrix &gram, std::span<const double> labels, double lambda, const FeatureMap &fm) {
    const auto n = gram.entries.rows();
    require(gram.entries.cols() == n && static_cast<std::size_t>(n) == gram.support.size(), ErrorKind::Shape,
            "malformed Gram matrix");
    require(static_cast<Eigen::Index>(labels.size()) == n, ErrorKind::Shape, "one label per support point required");
    require(lambda > 0.0 && std::isfinite(lambda), ErrorKind::Validation, "ridge parameter must be positive");
    Eigen::MatrixXd a = gram.entries + lambda * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(labels.data(), n);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    Eigen::VectorXd alpha = ldlt.solve(y);
    double residual = (a * alpha - y).lpNorm<Eigen::Infinity>();
    if (ldlt.info() != Eigen::Success || !alpha.allFinite() || !(residual <= 1e-8)) {
        double rcond = ldlt.rcond();
        fail(ErrorKind::Conditioning, "ridge system residual " + format_real(residual) +
                                          " exceeds 1e-8; condition estimate " + format_real(1.0 / rcond));
    }
    return KernelModel{alpha, gram.support, fm, lambda, residual};
}

double predict(const KernelModel &model, Input x) {
    StateVector phi = model.feature_map.state(x);
    std::vector<double> terms(model.support.size());
    for (std::size_t i = 0; i < model.support.size(); ++i) {
        terms[i] = model.alpha[static_cast<Eigen::Index>(i)] *
                   std::norm(overlap(phi, model.feature_map.state(model.support[i])));
    }
    return pairwise_sum(terms);
}

int classify(double score) { return score >= -1e-12 ? 1 : -1; }

void write_gram_csv(std::ostream &out, const GramMatrix &gram) {
    out << "i,j,x_i,x_j,k\n";
    for (Eigen::Index i = 0; i < gram.entries.rows(); ++i) {
        for (Eigen::Index j = 0; j < gram.entries.cols(); ++j) {
            out << i << ',' << j << ',' << gram.support[i] << ',' << gram.support[j] << ','
                << format_real(gram.entries(i, j)) << '\n';
        }
    }
}

namespace {

Eigen::VectorXd bit_features(Input x, int n_bits) {
    Eigen::VectorXd f(n_bits + 1);
    for (int b = 0; b < n_bits; ++b) {
        f[b] = static_cast<double>((x >> (n_bits - 1 - b)) & 1U);
    }
    f[n_bits] = 1.0;
    return f;
}

}  // namespace

double LinearClassifier::score(Input x) const { return weights.dot(bit_features(x, n_bits)); }

double LinearClassifier::accuracy(const Dataset &data) const {
    require(!data.samples.empty(), ErrorKind::Validation, "dataset is empty");
    std::size_t hits = 0;
    for (const Sample &s : data.samples) {
        hits += predict(s.x) == s.y ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

LinearClassifier classical_baseline_fit(const Dataset &data, LinearClassifier::Kind kind) {
    data.validate();
    require(!data.samples.empty(), ErrorKind::Validation, "dataset is empty");
    const int d = data.n_bits + 1;
    const auto n = static_cast<Eigen::Index>(data.size());
    Eigen::MatrixXd x(n, d);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x.row(i) = bit_features(data.samples[i].x, data.n_bits).transpose();
        y[i] = data.samples[i].y;
    }
    LinearClassifier out{kind, data.n_bits, Eigen::VectorXd::Zero(d)};
    if (kind == LinearClassifier::Kind::LinearOnBits) {
        out.weights = x.completeOrthogonalDecomposition().solve(y);
        return out;
    }
    // Full-batch gradient descent on the mean logistic loss plus a small ridge term.
    constexpr int kIterations = 2000;
    constexpr double kRate = 0.5;
    constexpr double kRidge = 1e-4;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    for (int it = 0; it < kIterations; ++it) {
        Eigen::VectorXd margin = y.cwiseProduct(x * w);
        Eigen::VectorXd coef(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            coef[i] = -y[i] / (1.0 + std::exp(margin[i]));
        }
        Eigen::VectorXd grad = x.transpose() * coef / static_cast<double>(n) + kRidge * w;
        w -= kRate * grad;
    }
    out.weights = w;
    return out;
}

}  // namespace varivery
