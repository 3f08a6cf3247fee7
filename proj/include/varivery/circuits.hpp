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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "varivery/statevec.hpp"

namespace varivery {

/// Binary-tree RY cascade taking |0...0> on `qubits` to sum_i amplitudes[i] |i>.
///
/// Amplitudes must be real, non-negative and normalized; index bits follow
/// `qubits` (first listed qubit is most significant). Level l rotates qubit
/// l; a rotation is controlled only on as many earlier qubits as needed to
/// tell its prefix apart from the other prefixes still carrying weight, so
/// sparse targets give short, lightly-controlled circuits.
Circuit prepare_real_amplitudes(std::span<const double> amplitudes, std::span<const int> qubits);

/// `layers` rounds of RZ RX RZ on every qubit with uniform angles, each round
/// followed by a CNOT ladder 0->1->...->n-1. Deterministic in `seed`.
Circuit random_circuit(int n_qubits, int layers, std::uint64_t seed);

}  // namespace varivery
