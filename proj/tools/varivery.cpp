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

// Command-line runner:
//   varivery run --config FILE [--set k=v]... [--out-dir DIR] [--seed N] [--threads N]
//   varivery list

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "varivery/error.hpp"
#include "varivery/experiments.hpp"
#include "varivery/parallel.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

int report(const std::string &kind, const std::string &message, int code) {
    std::string flat = message;
    for (char &c : flat) {
        if (c == '\n') c = ' ';
    }
    std::cerr << "error kind=" << kind << " message=" << flat << '\n';
    return code;
}

int list_experiments() {
    for (const auto &e : varivery::experiment_registry()) {
        std::cout << e.name << " → " << e.anchor << "  " << e.description << '\n';
    }
    return 0;
}

int run(const std::string &config_path, const std::vector<std::string> &overrides, const std::string &out_dir,
        std::optional<std::uint64_t> seed, int threads) {
    std::ifstream in(config_path);
    varivery::require(static_cast<bool>(in), varivery::ErrorKind::Validation, "cannot read config " + config_path);
    nlohmann::json config = nlohmann::json::parse(in);
    for (const auto &o : overrides) {
        varivery::apply_override(config, o);
    }
    if (seed) {
        config["seed"] = *seed;
    }
    nlohmann::json resolved = varivery::resolve_config(config);
    varivery::set_thread_count(threads);
    std::string dir = out_dir.empty() ? "out/" + resolved["experiment"].get<std::string>() : out_dir;
    auto result = varivery::run_experiment(resolved, dir);
    std::cout << "wrote";
    for (const auto &f : result.files) {
        std::cout << ' ' << dir << '/' << f;
    }
    std::cout << '\n';
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"varivery experiment runner"};
    app.require_subcommand(1);

    auto *list = app.add_subcommand("list", "List the available experiments");

    auto *run_cmd = app.add_subcommand("run", "Run one experiment from a JSON config");
    std::string config_path, out_dir;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    run_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run_cmd->add_option("--set", overrides, "Override a parameter: key=value")->take_all();
    run_cmd->add_option("--out-dir", out_dir, "Output directory (default out/<experiment>)");
    run_cmd->add_option("--seed", seed, "Override the config seed");
    run_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (list->parsed()) {
            return list_experiments();
        }
        return run(config_path, overrides, out_dir, seed, threads);
    } catch (const varivery::Error &e) {
        int code = e.kind() == varivery::ErrorKind::Numerical ? kExitNumerical : kExitValidation;
        return report(std::string(varivery::error_kind_name(e.kind())), e.what(), code);
    } catch (const nlohmann::json::exception &e) {
        return report("Validation", e.what(), kExitValidation);
    } catch (const std::filesystem::filesystem_error &e) {
        return report("Validation", e.what(), kExitValidation);
    }
}
