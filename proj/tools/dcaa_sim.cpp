// SPDX-License-Identifier: Apache-2.0
//
// dcaa-sim: link-level simulator for cylinder directly-connected antenna arrays
// Copyright (C) 2026 The dcaa-sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line front end: pattern | sweep | converge | cost

#include "dcaa/experiment.hpp"

#include "CLI11.hpp"
#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"Cylinder DCAA vs ULA+HBF link-level simulator"};
    app.set_version_flag("--version", std::string(dcaa::kVersion));
    app.require_subcommand(1);

    struct Common
    {
        std::string config;
        std::string out;
        std::uint64_t seed = 0;
        bool has_seed = false;
    };
    Common pattern_opts, sweep_opts, converge_opts, cost_opts;

    auto add = [&](const char *name, const char *help, Common &c) {
        CLI::App *sub = app.add_subcommand(name, help);
        sub->add_option("--config", c.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", c.out, "Output directory")->required();
        sub->add_option("--seed", c.seed, "Override the configured seed");
        return sub;
    };
    CLI::App *pattern = add("pattern", "Export sub-array and cylinder response patterns", pattern_opts);
    CLI::App *sweep = add("sweep", "Monte Carlo sum-rate sweep over the SNR grid", sweep_opts);
    CLI::App *converge = add("converge", "Downlink convergence traces for both architectures", converge_opts);
    CLI::App *cost = add("cost", "Hardware cost comparison", cost_opts);

    CLI11_PARSE(app, argc, argv);

    auto load = [](CLI::App *sub, const Common &c) {
        dcaa::ExperimentConfig cfg = dcaa::load_config(c.config);
        if (sub->count("--seed"))
            cfg.seed = c.seed;
        return cfg;
    };

    try
    {
        if (*pattern)
            dcaa::pattern_command(load(pattern, pattern_opts), pattern_opts.out);
        else if (*sweep)
            dcaa::sweep_command(load(sweep, sweep_opts), sweep_opts.out, std::cerr);
        else if (*converge)
            dcaa::converge_command(load(converge, converge_opts), converge_opts.out);
        else if (*cost)
            dcaa::cost_command(load(cost, cost_opts), cost_opts.out);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
