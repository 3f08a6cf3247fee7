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

#include "varivery/brick.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "varivery/error.hpp"

namespace varivery {

namespace {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

Mat2 to_mat2(std::span<const cplx> m) {
    Mat2 out;
    out << m[0], m[1], m[2], m[3];
    return out;
}

Mat4 to_mat4(std::span<const cplx> m) {
    Mat4 out;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            out(r, c) = m[r * 4 + c];
        }
    }
    return out;
}

std::vector<cplx> from_mat4(const Mat4 &m) {
    std::vector<cplx> out(16);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            out[r * 4 + c] = m(r, c);
        }
    }
    return out;
}

Mat4 kron(const Mat2 &a, const Mat2 &b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    return out;
}

const Mat4 &magic_basis() {
    static const Mat4 b = [] {
        const cplx i(0, 1);
        Mat4 m;
        m << 1, 0, 0, i, 0, i, 1, 0, 0, i, -1, 0, 1, 0, 0, -i;
        return Mat4(m / std::numbers::sqrt2);
    }();
    return b;
}

// Diagonals of XX, YY, ZZ expressed in the magic basis (each entry is +-1).
const std::array<Eigen::Vector4d, 3> &interaction_signs() {
    static const std::array<Eigen::Vector4d, 3> signs = [] {
        Mat2 x, y, z;
        const cplx i(0, 1);
        x << 0, 1, 1, 0;
        y << 0, -i, i, 0;
        z << 1, 0, 0, -1;
        std::array<Eigen::Vector4d, 3> out;
        const Mat4 &b = magic_basis();
        Mat2 paulis[3] = {x, y, z};
        for (int k = 0; k < 3; ++k) {
            Mat4 d = b.adjoint() * kron(paulis[k], paulis[k]) * b;
            out[k] = d.diagonal().real();
        }
        return out;
    }();
    return signs;
}

struct Euler {
    double p, q, r;
};

// V = e^{i gamma} RZ(p) RX(q) RZ(r).
Euler euler_angles(const Mat2 &v) {
    cplx det = v.determinant();
    Mat2 s = v / std::sqrt(det);
    double c = std::abs(s(0, 0));
    double sn = std::abs(s(1, 0));
    double q = 2.0 * std::atan2(sn, c);
    const cplx i(0, 1);
    double sum = 0.0, diff = 0.0;
    if (c > 1e-12) {
        sum = std::arg(s(1, 1)) - std::arg(s(0, 0));
    }
    if (sn > 1e-12) {
        diff = std::arg(i * s(1, 0)) - std::arg(i * s(0, 1));
    }
    // sum and diff are only known mod 2pi, so halving them leaves a joint pi
    // shift of p and r that conjugates by Z; keep whichever branch reproduces s.
    Euler best{};
    double best_miss = INFINITY;
    for (double shift : {0.0, std::numbers::pi}) {
        Euler e{(sum + diff) / 2.0 + shift, q, (sum - diff) / 2.0 + shift};
        Mat2 r = to_mat2(euler_zxz(e.p, e.q, e.r));
        double miss = std::min((r - s).norm(), (r + s).norm());
        if (miss < best_miss) {
            best_miss = miss;
            best = e;
        }
    }
    return best;
}

// Splits a 4x4 product A (x) C into its factors.
std::pair<Mat2, Mat2> kron_factor(const Mat4 &l) {
    int r0 = 0, c0 = 0;
    double best = -1.0;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            if (std::abs(l(r, c)) > best) {
                best = std::abs(l(r, c));
                r0 = r;
                c0 = c;
            }
        }
    }
    int a1 = r0 / 2, k1 = r0 % 2, a2 = c0 / 2, k2 = c0 % 2;
    Mat2 a, c;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            a(i, j) = l(2 * i + k1, 2 * j + k2);
            c(i, j) = l(2 * a1 + i, 2 * a2 + j) / l(r0, c0);
        }
    }
    cplx det_a = a.determinant();
    cplx root = std::sqrt(det_a);
    return {a / root, c * root};
}

// Real orthogonal P (det +1) with P^T M P diagonal, for symmetric unitary M.
Eigen::Matrix4d diagonalizing_rotation(const Mat4 &m) {
    const Eigen::Matrix4d re = m.real();
    const Eigen::Matrix4d im = m.imag();
    const double mixes[] = {0.0, 0.4142135623730951, 1.7320508075688772, -0.7071067811865476, 2.718281828459045,
                            -3.141592653589793, 0.5772156649015329};
    for (double mix : mixes) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(re + mix * im);
        Eigen::Matrix4d p = solver.eigenvectors();
        Mat4 d = p.transpose().cast<cplx>() * m * p.cast<cplx>();
        double off = 0.0;
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                if (r != c) {
                    off = std::max(off, std::abs(d(r, c)));
                }
            }
        }
        if (off <= 1e-12) {
            if (p.determinant() < 0) {
                p.col(0) *= -1.0;
            }
            return p;
        }
    }
    fail(ErrorKind::Decomposition, "could not diagonalize the magic-basis product");
}

}  // namespace

std::vector<cplx> euler_zxz(double p, double q, double r) {
    Mat2 rzp = to_mat2(rz_matrix(p));
    Mat2 rxq = to_mat2(rx_matrix(q));
    Mat2 rzr = to_mat2(rz_matrix(r));
    Mat2 e = rzp * rxq * rzr;
    return {e(0, 0), e(0, 1), e(1, 0), e(1, 1)};
}

std::vector<cplx> interaction_unitary(double c1, double c2, double c3) {
    // XX, YY and ZZ are diagonal in the magic basis, so N is too.
    const auto &signs = interaction_signs();
    Eigen::Vector4cd diag;
    for (int k = 0; k < 4; ++k) {
        double phi = c1 * signs[0][k] + c2 * signs[1][k] + c3 * signs[2][k];
        diag[k] = std::polar(1.0, phi);
    }
    const Mat4 &b = magic_basis();
    return from_mat4(b * diag.asDiagonal() * b.adjoint());
}

std::vector<cplx> brick_unitary(std::span<const double> a) {
    require(a.size() == kBrickParams, ErrorKind::Shape, "a brick takes exactly 15 angles");
    Mat4 before = kron(to_mat2(euler_zxz(a[0], a[1], a[2])), to_mat2(euler_zxz(a[3], a[4], a[5])));
    Mat4 middle = to_mat4(interaction_unitary(a[6], a[7], a[8]));
    Mat4 after = kron(to_mat2(euler_zxz(a[9], a[10], a[11])), to_mat2(euler_zxz(a[12], a[13], a[14])));
    return from_mat4(after * middle * before);
}

double phase_insensitive_distance(std::span<const cplx> a, std::span<const cplx> b) {
    require(a.size() == b.size(), ErrorKind::Shape, "matrix size mismatch");
    cplx tr = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        tr += std::conj(b[i]) * a[i];
    }
    cplx phase = std::abs(tr) > 0 ? tr / std::abs(tr) : cplx(1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - phase * b[i]));
    }
    return worst;
}

BrickAngles brick_angles(std::span<const cplx> u4) {
    require(u4.size() == 16, ErrorKind::Shape, "brick inversion needs a 4x4 matrix");
    require(unitarity_defect(u4) <= kUnitarityTolerance, ErrorKind::Validation, "brick target is not unitary");
    Mat4 u = to_mat4(u4);
    u /= std::pow(u.determinant(), 0.25);

    const Mat4 &b = magic_basis();
    Mat4 um = b.adjoint() * u * b;
    Mat4 m2 = um.transpose() * um;
    Eigen::Matrix4d p = diagonalizing_rotation(m2);
    Mat4 d = p.transpose().cast<cplx>() * m2 * p.cast<cplx>();

    Eigen::Vector4d phi;
    for (int k = 0; k < 4; ++k) {
        phi[k] = std::arg(d(k, k)) / 2.0;
    }
    auto left_factor = [&](const Eigen::Vector4d &ph) {
        Eigen::Vector4cd inv;
        for (int k = 0; k < 4; ++k) {
            inv[k] = std::polar(1.0, -ph[k]);
        }
        return Mat4(um * p.cast<cplx>() * inv.asDiagonal());
    };
    Mat4 k1 = left_factor(phi);
    if (k1.real().determinant() < 0) {
        phi[0] += std::numbers::pi;
        k1 = left_factor(phi);
    }
    Mat4 after = b * Mat4(k1.real().cast<cplx>()) * b.adjoint();
    Mat4 before = b * Mat4(p.transpose().cast<cplx>()) * b.adjoint();

    const auto &signs = interaction_signs();
    BrickAngles out{};
    for (int j = 0; j < 3; ++j) {
        out[6 + j] = signs[j].dot(phi) / 4.0;
    }
    auto [b_hi, b_lo] = kron_factor(before);
    auto [a_hi, a_lo] = kron_factor(after);
    const Mat2 *factors[4] = {&b_hi, &b_lo, &a_hi, &a_lo};
    const int offsets[4] = {0, 3, 9, 12};
    for (int f = 0; f < 4; ++f) {
        Euler e = euler_angles(*factors[f]);
        out[offsets[f]] = e.p;
        out[offsets[f] + 1] = e.q;
        out[offsets[f] + 2] = e.r;
    }
    double miss = phase_insensitive_distance(brick_unitary(out), u4);
    require(miss <= 1e-10, ErrorKind::Decomposition,
            "brick inversion reconstruction error " + std::to_string(miss) + " exceeds 1e-10");
    return out;
}

}  // namespace varivery
