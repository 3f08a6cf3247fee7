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

#include "varivery/sampling.hpp"

#include <cmath>
#include <sstream>

#include "varivery/error.hpp"
#include "varivery/rng.hpp"

namespace varivery {

Distribution Distribution::uniform_angles(double low, double high) {
    require(std::isfinite(low) && std::isfinite(high) && low < high, ErrorKind::Validation,
            "uniform angle range must satisfy low < high");
    Distribution d;
    d.kind_ = Kind::UniformAngles;
    d.low_ = low;
    d.high_ = high;
    return d;
}

Distribution Distribution::uniform_bitstrings(int n_bits) {
    require(n_bits >= 1 && n_bits <= 62, ErrorKind::Validation, "bitstring width must be in [1, 62]");
    Distribution d;
    d.kind_ = Kind::UniformBitstrings;
    d.n_bits_ = n_bits;
    return d;
}

Distribution Distribution::group_elements(std::uint64_t p, std::uint64_t g, std::vector<Input> elements) {
    require(!elements.empty(), ErrorKind::Validation, "group element list is empty");
    Distribution d;
    d.kind_ = Kind::GroupElements;
    d.modulus_ = p;
    d.generator_ = g;
    d.values_ = std::move(elements);
    return d;
}

Distribution Distribution::fixed_list(std::vector<Input> values) {
    require(!values.empty(), ErrorKind::Validation, "fixed input list is empty");
    Distribution d;
    d.kind_ = Kind::FixedList;
    d.values_ = std::move(values);
    return d;
}

std::vector<double> Distribution::sample_angles(std::uint64_t seed, std::uint64_t draw, std::size_t count) const {
    require(samples_angles(), ErrorKind::Validation, "distribution " + describe() + " does not produce angles");
    Stream s(derive_seed(seed, "angles", draw));
    std::vector<double> out(count);
    for (auto &v : out) {
        v = s.next_uniform(low_, high_);
    }
    return out;
}

Input Distribution::sample_input(std::uint64_t seed, std::uint64_t draw) const {
    Stream s(derive_seed(seed, "inputs", draw));
    switch (kind_) {
        case Kind::UniformBitstrings:
            return s.next_below(std::uint64_t{1} << n_bits_);
        case Kind::GroupElements:
        case Kind::FixedList:
            return values_[s.next_below(values_.size())];
        case Kind::UniformAngles:
            break;
    }
    fail(ErrorKind::Validation, "distribution " + describe() + " does not produce inputs");
}

std::string Distribution::describe() const {
    std::ostringstream out;
    out.precision(17);
    switch (kind_) {
        case Kind::UniformAngles:
            out << "UniformAngles(" << low_ << ", " << high_ << ")";
            break;
        case Kind::UniformBitstrings:
            out << "UniformBitstrings(" << n_bits_ << ")";
            break;
        case Kind::GroupElements:
            out << "GroupElements(p=" << modulus_ << ", g=" << generator_ << ")";
            break;
        case Kind::FixedList:
            out << "FixedList(" << values_.size() << ")";
            break;
    }
    return out.str();
}

}  // namespace varivery
