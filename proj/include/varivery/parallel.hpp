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

#include <cstddef>
#include <functional>
#include <span>

namespace varivery {

/// Process-wide worker cap. 0 means "all hardware threads".
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [0, count). Each index is processed exactly once by
/// one worker; callers write into index-addressed slots so results are
/// independent of scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

/// Summation tree whose shape depends only on the input length.
double pairwise_sum(std::span<const double> values);

inline double mean(std::span<const double> values) {
    return values.empty() ? 0.0 : pairwise_sum(values) / static_cast<double>(values.size());
}

/// Bessel-corrected sample variance; requires at least two values.
double sample_variance(std::span<const double> values);

}  // namespace varivery
