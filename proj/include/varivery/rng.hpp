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
#include <string_view>

namespace varivery {

/// Counter-addressable random streams. Every Monte-Carlo draw in the library is
/// keyed by (seed, tag, draw index) so results do not depend on evaluation
/// order or thread count.
std::uint64_t splitmix64(std::uint64_t x);

/// Mixes a seed with a string tag and an index into a fresh stream key.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

class Stream {
   public:
    explicit Stream(std::uint64_t key) : state_(key) {}

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double next_unit();
    double next_uniform(double low, double high) { return low + (high - low) * next_unit(); }
    /// Uniform on {0, ..., bound - 1}; bound must be positive.
    std::uint64_t next_below(std::uint64_t bound);
    /// Standard normal via Box-Muller.
    double next_normal();

   private:
    std::uint64_t state_;
};

}  // namespace varivery
