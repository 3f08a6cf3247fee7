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
 * Planted Boolean functions Q(x) with classical evaluators and circuit
 * realizations, plus toy discrete-logarithm instances.
 *
 * Sign convention: circuit(x) prepares a data register with <Z_0> = y(x) =
 * 2 Q(x) - 1, i.e. it applies X to qubit 0 exactly when Q(x) = 0.
 */

#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "varivery/sampling.hpp"
#include "varivery/statevec.hpp"

namespace varivery {

inline constexpr std::uint64_t kMaxDlpPrime = std::uint64_t{1} << 14;

class DlpInstance {
   public:
    /// Validates that p is an odd prime <= 2^14 and g generates (Z/pZ)^*.
    DlpInstance(std::uint64_t p, std::uint64_t g);

    std::uint64_t p() const noexcept { return p_; }
    std::uint64_t g() const noexcept { return g_; }
    /// Order of the group, p - 1.
    std::uint64_t order() const noexcept { return p_ - 1; }
    /// log_g(x) from the precomputed table; domain error for x outside [1, p).
    std::uint64_t log(std::uint64_t x) const;
    /// g^k mod p.
    std::uint64_t power(std::uint64_t k) const { return powers_[k % order()]; }
    /// All group elements in order g^0, g^1, ..., g^{p-2}.
    const std::vector<std::uint64_t> &elements() const noexcept { return powers_; }
    /// Register width ceil(log2 p).
    int n_bits() const noexcept { return n_bits_; }

    /// `p g` on one line.
    std::string serialize() const;
    static DlpInstance parse(const std::string &line);

   private:
    std::uint64_t p_;
    std::uint64_t g_;
    int n_bits_;
    std::vector<std::uint64_t> powers_;
    std::vector<std::int64_t> log_table_;
};

bool is_prime(std::uint64_t n);

/// Smallest k >= 0 with g^k = x (mod p), by repeated multiplication.
std::uint64_t brute_force_dlog(std::uint64_t p, std::uint64_t g, std::uint64_t x);

struct PlantedFunction {
    std::string name;
    /// Width of the classical input.
    int n_bits = 0;
    /// Q(x) in {0, 1}.
    std::function<int(Input)> eval;
    /// Data-register circuit with <Z_0> = 2 Q(x) - 1; acts on qubit 0 only.
    std::function<Circuit(Input)> circuit;
    Distribution domain = Distribution::uniform_bitstrings(1);
    /// Reconstruction parameters, e.g. {"name":"parity","n":3}.
    nlohmann::json spec;

    /// y(x) = 2 Q(x) - 1.
    int label(Input x) const { return 2 * eval(x) - 1; }
};

/// Q(x) = XOR of the n bits of x.
PlantedFunction parity_fn(int n);

/// Q(x) = 1 iff log_g(x) >= (p - 1) / 2, inputs uniform over the group.
PlantedFunction dlp_msb(std::shared_ptr<const DlpInstance> instance);

/// Rebuilds a planted function from its `spec` object.
PlantedFunction planted_from_spec(const nlohmann::json &spec);

/// Coset window {x g^i mod p : i < 2^k_window}.
std::vector<std::uint64_t> dlp_coset(const DlpInstance &inst, int k_window, Input x);

/// Uniform superposition over the coset window on ceil(log2 p) qubits.
StateVector dlp_feature_state(const DlpInstance &inst, int k_window, Input x);

/// Gate-level preparation of dlp_feature_state on qubits 0..ceil(log2 p)-1.
Circuit dlp_feature_circuit(const DlpInstance &inst, int k_window, Input x);

/// CSV rows `x_bits,label` with label = y(x) in {-1, +1}, after a header line.
void write_planted_csv(std::ostream &out, const PlantedFunction &fn, const std::vector<Input> &inputs);

}  // namespace varivery
