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
#include <numbers>
#include <string>
#include <vector>

namespace varivery {

/// Classical input to a data-dependent circuit: a bitstring read as an
/// unsigned integer (most significant bit first).
using Input = std::uint64_t;

/// Seedable sampling spec for parameters (angles) or inputs.
///
/// Draw `i` under seed `s` is a pure function of (kind, s, i).
class Distribution {
   public:
    enum class Kind { UniformAngles, UniformBitstrings, GroupElements, FixedList };

    static Distribution uniform_angles(double low = 0.0, double high = 2.0 * std::numbers::pi);
    static Distribution uniform_bitstrings(int n_bits);
    /// Uniform over the listed elements of a multiplicative group mod p.
    static Distribution group_elements(std::uint64_t p, std::uint64_t g, std::vector<Input> elements);
    static Distribution fixed_list(std::vector<Input> values);

    Kind kind() const noexcept { return kind_; }
    bool samples_angles() const noexcept { return kind_ == Kind::UniformAngles; }
    double low() const noexcept { return low_; }
    double high() const noexcept { return high_; }
    int n_bits() const noexcept { return n_bits_; }
    const std::vector<Input> &values() const noexcept { return values_; }
    std::uint64_t modulus() const noexcept { return modulus_; }
    std::uint64_t generator() const noexcept { return generator_; }

    /// `count` angles for draw `draw`.
    std::vector<double> sample_angles(std::uint64_t seed, std::uint64_t draw, std::size_t count) const;
    Input sample_input(std::uint64_t seed, std::uint64_t draw) const;

    std::string describe() const;

   private:
    Kind kind_ = Kind::UniformAngles;
    double low_ = 0.0;
    double high_ = 2.0 * std::numbers::pi;
    int n_bits_ = 0;
    std::uint64_t modulus_ = 0;
    std::uint64_t generator_ = 0;
    std::vector<Input> values_;
};

}  // namespace varivery
