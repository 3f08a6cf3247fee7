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

#include "varivery/hardfn.hpp"

#include <bit>
#include <cmath>
#include <ostream>
#include <sstream>

#include "varivery/circuits.hpp"
#include "varivery/error.hpp"

namespace varivery {

bool is_prime(std::uint64_t n) {
    if (n < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

DlpInstance::DlpInstance(std::uint64_t p, std::uint64_t g) : p_(p), g_(g) {
    require(p >= 3 && p <= kMaxDlpPrime && p % 2 == 1 && is_prime(p), ErrorKind::Validation,
            "p must be an odd prime <= 2^14, got " + std::to_string(p));
    require(g >= 1 && g < p, ErrorKind::Validation, "generator must lie in [1, p)");
    n_bits_ = std::bit_width(p - 1);
    log_table_.assign(p, -1);
    powers_.reserve(p - 1);
    std::uint64_t value = 1;
    for (std::uint64_t k = 0; k < p - 1; ++k) {
        require(log_table_[value] < 0, ErrorKind::Validation,
                std::to_string(g) + " does not generate the multiplicative group mod " + std::to_string(p));
        log_table_[value] = static_cast<std::int64_t>(k);
        powers_.push_back(value);
        value = value * g % p;
    }
}

std::uint64_t DlpInstance::log(std::uint64_t x) const {
    require(x >= 1 && x < p_, ErrorKind::Domain, "x = " + std::to_string(x) + " is not in the group mod " +
                                                     std::to_string(p_));
    return static_cast<std::uint64_t>(log_table_[x]);
}

std::string DlpInstance::serialize() const { return std::to_string(p_) + " " + std::to_string(g_); }

DlpInstance DlpInstance::parse(const std::string &line) {
    std::istringstream in(line);
    std::uint64_t p = 0, g = 0;
    std::string rest;
    require(static_cast<bool>(in >> p >> g) && !(in >> rest), ErrorKind::Validation,
            "expected `p g`, got '" + line + "'");
    return DlpInstance(p, g);
}

std::uint64_t brute_force_dlog(std::uint64_t p, std::uint64_t g, std::uint64_t x) {
    require(p >= 2 && p <= kMaxDlpPrime, ErrorKind::Validation, "modulus out of range");
    require(x % p != 0, ErrorKind::Domain, "x is congruent to 0 mod p");
    require(x < p, ErrorKind::Domain, "x must be reduced mod p");
    std::uint64_t value = 1;
    for (std::uint64_t k = 0; k < p; ++k) {
        if (value == x) {
            return k;
        }
        value = value * g % p;
    }
    fail(ErrorKind::Domain, std::to_string(x) + " is not a power of " + std::to_string(g) + " mod " +
                                std::to_string(p));
}

namespace {

Circuit flip_unless(bool q_is_one) {
    if (q_is_one) {
        return {};
    }
    return {GateOp::x(0)};
}

}  // namespace

PlantedFunction parity_fn(int n) {
    require(n >= 1 && n <= 62, ErrorKind::Validation, "parity width must be in [1, 62]");
    PlantedFunction fn;
    fn.name = "parity";
    fn.n_bits = n;
    const Input limit = Input{1} << n;
    fn.eval = [n, limit](Input x) {
        require(x < limit, ErrorKind::Domain, "input wider than " + std::to_string(n) + " bits");
        return std::popcount(x) & 1;
    };
    fn.circuit = [eval = fn.eval](Input x) { return flip_unless(eval(x) == 1); };
    fn.domain = Distribution::uniform_bitstrings(n);
    fn.spec = {{"name", "parity"}, {"n", n}};
    return fn;
}

PlantedFunction dlp_msb(std::shared_ptr<const DlpInstance> instance) {
    require(instance != nullptr, ErrorKind::Validation, "missing DLP instance");
    PlantedFunction fn;
    fn.name = "dlp_msb";
    fn.n_bits = instance->n_bits();
    fn.eval = [inst = instance](Input x) {
        return inst->log(x) >= inst->order() / 2 ? 1 : 0;
    };
    fn.circuit = [eval = fn.eval](Input x) { return flip_unless(eval(x) == 1); };
    fn.domain = Distribution::group_elements(instance->p(), instance->g(), instance->elements());
    fn.spec = {{"name", "dlp_msb"}, {"p", instance->p()}, {"g", instance->g()}};
    return fn;
}

PlantedFunction planted_from_spec(const nlohmann::json &spec) {
    require(spec.is_object() && spec.contains("name"), ErrorKind::Validation, "planted spec needs a name");
    std::string name = spec.at("name").get<std::string>();
    if (name == "parity") {
        return parity_fn(spec.at("n").get<int>());
    }
    if (name == "dlp_msb") {
        return dlp_msb(std::make_shared<const DlpInstance>(spec.at("p").get<std::uint64_t>(),
                                                           spec.at("g").get<std::uint64_t>()));
    }
    fail(ErrorKind::Validation, "unknown planted function '" + name + "'");
}

std::vector<std::uint64_t> dlp_coset(const DlpInstance &inst, int k_window, Input x) {
    require(k_window >= 0 && k_window < 62 && (std::uint64_t{1} << k_window) <= inst.order(), ErrorKind::Validation,
            "window 2^k must not exceed the group order");
    std::uint64_t start = inst.log(x);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << k_window); ++i) {
        out.push_back(inst.power(start + i));
    }
    return out;
}

StateVector dlp_feature_state(const DlpInstance &inst, int k_window, Input x) {
    auto coset = dlp_coset(inst, k_window, x);
    require(inst.n_bits() <= kMaxQubits, ErrorKind::Capacity, "feature register exceeds the qubit cap");
    std::vector<cplx> amps(std::size_t{1} << inst.n_bits(), cplx(0.0));
    const double a = 1.0 / std::sqrt(static_cast<double>(coset.size()));
    for (auto e : coset) {
        amps[e] = a;
    }
    return StateVector::from_amplitudes(std::move(amps));
}

Circuit dlp_feature_circuit(const DlpInstance &inst, int k_window, Input x) {
    auto coset = dlp_coset(inst, k_window, x);
    std::vector<double> amps(std::size_t{1} << inst.n_bits(), 0.0);
    const double a = 1.0 / std::sqrt(static_cast<double>(coset.size()));
    for (auto e : coset) {
        amps[e] = a;
    }
    std::vector<int> qubits(inst.n_bits());
    for (int q = 0; q < inst.n_bits(); ++q) {
        qubits[q] = q;
    }
    return prepare_real_amplitudes(amps, qubits);
}

void write_planted_csv(std::ostream &out, const PlantedFunction &fn, const std::vector<Input> &inputs) {
    out << "x_bits,label\n";
    for (Input x : inputs) {
        std::string bits(fn.n_bits, '0');
        for (int b = 0; b < fn.n_bits; ++b) {
            if ((x >> (fn.n_bits - 1 - b)) & 1U) {
                bits[b] = '1';
            }
        }
        out << bits << ',' << fn.label(x) << '\n';
    }
}

}  // namespace varivery
