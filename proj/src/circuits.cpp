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

#include "varivery/circuits.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

#include "varivery/error.hpp"
#include "varivery/rng.hpp"

namespace varivery {

Circuit prepare_real_amplitudes(std::span<const double> amplitudes, std::span<const int> qubits) {
    const std::size_t w = qubits.size();
    require(w >= 1 && w <= static_cast<std::size_t>(kMaxQubits), ErrorKind::Capacity,
            "state preparation register out of range");
    require(amplitudes.size() == (std::size_t{1} << w), ErrorKind::Shape,
            "amplitude count must equal 2^(number of qubits)");
    double norm2 = 0.0;
    for (double a : amplitudes) {
        require(a >= 0.0 && std::isfinite(a), ErrorKind::Validation, "amplitudes must be finite and non-negative");
        norm2 += a * a;
    }
    require(std::abs(norm2 - 1.0) <= kNormTolerance, ErrorKind::Validation, "amplitudes are not normalized");

    // weights[level][prefix] = total probability below that prefix.
    std::vector<std::vector<double>> weights(w + 1);
    weights[w].resize(amplitudes.size());
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        weights[w][i] = amplitudes[i] * amplitudes[i];
    }
    for (std::size_t level = w; level-- > 0;) {
        weights[level].resize(std::size_t{1} << level);
        for (std::size_t p = 0; p < weights[level].size(); ++p) {
            weights[level][p] = weights[level + 1][2 * p] + weights[level + 1][2 * p + 1];
        }
    }

    Circuit out;
    for (std::size_t level = 0; level < w; ++level) {
        std::vector<std::uint64_t> live;
        std::vector<double> angles;
        for (std::uint64_t p = 0; p < weights[level].size(); ++p) {
            if (weights[level][p] > 0.0) {
                live.push_back(p);
                angles.push_back(2.0 * std::atan2(std::sqrt(weights[level + 1][2 * p + 1]),
                                                  std::sqrt(weights[level + 1][2 * p])));
            }
        }
        bool uniform = true;
        for (double a : angles) {
            uniform = uniform && a == angles.front();
        }
        const int target = qubits[level];
        if (uniform) {
            if (angles.front() != 0.0) {
                out.push_back(GateOp::fixed({target}, ry_matrix(angles.front())));
            }
            continue;
        }
        for (std::size_t k = 0; k < live.size(); ++k) {
            if (angles[k] == 0.0) {
                continue;
            }
            const std::uint64_t prefix = live[k];
            std::vector<std::uint64_t> others;
            for (std::size_t j = 0; j < live.size(); ++j) {
                if (j != k) {
                    others.push_back(live[j]);
                }
            }
            // Greedy set cover over prefix bit positions.
            std::vector<bool> chosen(level, false);
            while (!others.empty()) {
                std::size_t best = 0, best_count = 0;
                for (std::size_t b = 0; b < level; ++b) {
                    if (chosen[b]) {
                        continue;
                    }
                    std::uint64_t bit = std::uint64_t{1} << (level - 1 - b);
                    std::size_t count = 0;
                    for (auto o : others) {
                        count += ((o ^ prefix) & bit) ? 1 : 0;
                    }
                    if (count > best_count) {
                        best = b;
                        best_count = count;
                    }
                }
                chosen[best] = true;
                std::uint64_t bit = std::uint64_t{1} << (level - 1 - best);
                std::erase_if(others, [&](std::uint64_t o) { return ((o ^ prefix) & bit) != 0; });
            }
            std::vector<int> controls;
            std::uint64_t pattern = 0;
            for (std::size_t b = 0; b < level; ++b) {
                if (chosen[b]) {
                    controls.push_back(qubits[b]);
                    pattern = (pattern << 1) | ((prefix >> (level - 1 - b)) & 1U);
                }
            }
            out.push_back(GateOp::controlled(controls, pattern, {GateOp::fixed({target}, ry_matrix(angles[k]))}));
        }
    }
    return out;
}

Circuit random_circuit(int n_qubits, int layers, std::uint64_t seed) {
    require(n_qubits >= 1 && n_qubits <= kMaxQubits, ErrorKind::Capacity, "random circuit width out of range");
    require(layers >= 0, ErrorKind::Validation, "layer count must be non-negative");
    Stream rng(seed);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    Circuit out;
    for (int l = 0; l < layers; ++l) {
        for (int q = 0; q < n_qubits; ++q) {
            out.push_back(GateOp::rz(q, rng.next_uniform(0.0, two_pi)));
            out.push_back(GateOp::rx(q, rng.next_uniform(0.0, two_pi)));
            out.push_back(GateOp::rz(q, rng.next_uniform(0.0, two_pi)));
        }
        for (int q = 0; q + 1 < n_qubits; ++q) {
            out.push_back(GateOp::cnot(q, q + 1));
        }
    }
    return out;
}

}  // namespace varivery
