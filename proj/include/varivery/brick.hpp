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
 * The 15-angle parametrization of an arbitrary two-qubit gate.
 *
 *   U(a) = (E(a9..a11) (x) E(a12..a14)) * N(a6, a7, a8) * (E(a0..a2) (x) E(a3..a5))
 *
 * with E(p, q, r) = RZ(p) RX(q) RZ(r) and N(c1, c2, c3) = exp(i(c1 XX + c2 YY + c3 ZZ)).
 * The first tensor factor acts on the more significant qubit. All-zero angles
 * give the identity. Every U(4) element is reachable up to a global phase.
 */

#pragma once

#include <array>
#include <span>
#include <vector>

#include "varivery/statevec.hpp"

namespace varivery {

inline constexpr int kBrickParams = 15;
using BrickAngles = std::array<double, kBrickParams>;

/// 4x4 row-major unitary for the given angles.
std::vector<cplx> brick_unitary(std::span<const double> angles);

/// 2x2 Euler factor RZ(p) RX(q) RZ(r).
std::vector<cplx> euler_zxz(double p, double q, double r);

/// Interaction block exp(i(c1 XX + c2 YY + c3 ZZ)).
std::vector<cplx> interaction_unitary(double c1, double c2, double c3);

/// Recovers angles reproducing `u4` up to global phase. Throws a
/// decomposition error when the reconstruction misses by more than 1e-10.
BrickAngles brick_angles(std::span<const cplx> u4);

/// Max elementwise distance between a and e^{i phi} b, minimized over phi
/// (phase taken from the trace overlap).
double phase_insensitive_distance(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace varivery
