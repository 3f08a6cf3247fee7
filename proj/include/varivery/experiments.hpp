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
 * Named experiments behind the command-line runner.
 *
 * A config is a JSON object {"experiment": NAME, "seed": N, "params": {...}}.
 * Parameters not given take the experiment's defaults; unknown keys and type
 * mismatches are validation errors.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace varivery {

struct ExperimentInfo {
    std::string name;
    std::string description;
    std::string anchor;
};

/// Stable order.
const std::vector<ExperimentInfo> &experiment_registry();

nlohmann::json default_params(const std::string &experiment);

/// Applies `key=value`; the value is parsed as JSON, falling back to a plain string.
void apply_override(nlohmann::json &config, const std::string &assignment);

/// Fills defaults and checks keys and types; returns the resolved config.
nlohmann::json resolve_config(const nlohmann::json &config);

struct ExperimentResult {
    nlohmann::json metrics;
    /// File names relative to the output directory, summary.json included.
    std::vector<std::string> files;
};

/// Runs a resolved config, writing CSVs and summary.json into `out_dir`.
ExperimentResult run_experiment(const nlohmann::json &resolved, const std::filesystem::path &out_dir);

}  // namespace varivery
