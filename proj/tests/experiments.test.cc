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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "varivery/error.hpp"
#include "varivery/experiments.hpp"
#include "varivery/parallel.hpp"

using namespace varivery;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string &name) {
    fs::path p = fs::temp_directory_path() / ("varivery_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST(experiments, registry_is_stable) {
    const auto &r = experiment_registry();
    ASSERT_EQ(r.size(), 7u);
    std::vector<std::string> names;
    for (const auto &e : r) names.push_back(e.name);
    EXPECT_EQ(names, (std::vector<std::string>{"tilde_u_check", "cor2_train", "bp_sweep", "vanishing_similarity",
                                               "kernel_dlp", "prop1_lcu", "grad_check"}));
    EXPECT_EQ(r[1].anchor, "Corollary 2");
    EXPECT_EQ(r[5].anchor, "Proposition 1");
    for (const auto &e : r) EXPECT_NO_THROW(default_params(e.name));
}

TEST(experiments, strict_config) {
    EXPECT_THROW(resolve_config({{"experiment", "bp_sweep"}, {"extra", 1}}), Error);
    EXPECT_THROW(resolve_config({{"experiment", "nope"}}), Error);
    EXPECT_THROW(resolve_config({{"experiment", "bp_sweep"}, {"params", {{"n_qubits", 3}}}}), Error);
    EXPECT_THROW(resolve_config({{"experiment", "bp_sweep"}, {"params", {{"n_max", "eight"}}}}), Error);
    EXPECT_THROW(resolve_config({{"experiment", "bp_sweep"}, {"params", {{"n_max", 8.5}}}}), Error);
    EXPECT_THROW(resolve_config({{"experiment", "bp_sweep"}, {"seed", -1}}), Error);
    nlohmann::json ok = resolve_config({{"experiment", "kernel_dlp"}, {"params", {{"lambda", 1}}}});
    EXPECT_EQ(ok["params"]["lambda"], 1);
    EXPECT_EQ(ok["seed"], 0);
    EXPECT_EQ(ok["params"]["p"], 23);
}

TEST(experiments, overrides) {
    nlohmann::json c = {{"experiment", "bp_sweep"}};
    apply_override(c, "n_max=5");
    apply_override(c, "family=hea_shallow_local");
    apply_override(c, "seed=4");
    nlohmann::json r = resolve_config(c);
    EXPECT_EQ(r["params"]["n_max"], 5);
    EXPECT_EQ(r["params"]["family"], "hea_shallow_local");
    EXPECT_EQ(r["seed"], 4);
    EXPECT_THROW(apply_override(c, "novalue"), Error);
}

TEST(experiments, outputs_are_identical_across_thread_counts) {
    std::vector<nlohmann::json> configs = {
        {{"experiment", "tilde_u_check"}, {"seed", 3}, {"params", {{"trials", 4}}}},
        {{"experiment", "bp_sweep"}, {"seed", 3}, {"params", {{"n_max", 4}, {"n_x", 4}, {"n_theta", 16}}}},
        {{"experiment", "kernel_dlp"}, {"seed", 3}, {"params", {{"n_pairs", 64}}}},
        {{"experiment", "grad_check"}, {"seed", 3}, {"params", {{"configs", 3}}}},
    };
    for (const auto &config : configs) {
        nlohmann::json resolved = resolve_config(config);
        std::vector<std::vector<std::string>> contents;
        std::vector<std::string> files;
        for (int threads : {1, 2, 0}) {
            set_thread_count(threads);
            fs::path dir = scratch(config["experiment"].get<std::string>() + std::to_string(threads));
            ExperimentResult res = run_experiment(resolved, dir);
            files = res.files;
            std::vector<std::string> c;
            for (const auto &f : res.files) {
                if (f != "summary.json") c.push_back(slurp(dir / f));
            }
            contents.push_back(c);
            fs::remove_all(dir);
        }
        set_thread_count(0);
        EXPECT_EQ(contents[0], contents[1]) << config["experiment"];
        EXPECT_EQ(contents[0], contents[2]) << config["experiment"];
        EXPECT_NE(std::find(files.begin(), files.end(), "summary.json"), files.end());
    }
}

TEST(experiments, summary_records_config_and_metrics) {
    fs::path dir = scratch("summary");
    nlohmann::json resolved = resolve_config({{"experiment", "tilde_u_check"}, {"params", {{"trials", 2}}}});
    run_experiment(resolved, dir);
    nlohmann::json s = nlohmann::json::parse(slurp(dir / "summary.json"));
    EXPECT_EQ(s["experiment"], "tilde_u_check");
    EXPECT_EQ(s["config"], resolved);
    EXPECT_TRUE(s.contains("metrics"));
    EXPECT_TRUE(s.contains("wall_seconds"));
    fs::remove_all(dir);
}
