// SPDX-License-Identifier: Apache-2.0
//
// risrsma - robust beamforming for practical RIS-aided RSMA downlinks
// Copyright (C) 2026 The risrsma authors
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

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "risrsma/experiment.hpp"

using namespace risrsma;

namespace {

struct CommonFlags
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<std::string> out;
    std::optional<unsigned> workers;
};

void add_common(CLI::App *cmd, CommonFlags &f)
{
    cmd->add_option("--config", f.config, "JSON experiment config")->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--trials", f.trials, "channel draws per point (fig2: Monte Carlo trials)")->check(CLI::PositiveNumber);
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--workers", f.workers, "worker threads, 0 = hardware concurrency");
}

ExperimentConfig resolve(const CommonFlags &f, bool fig2)
{
    ExperimentConfig c = f.config.empty() ? parse_config("{}") : load_config(f.config);
    if (f.seed)
        c.master_seed = *f.seed;
    if (f.trials)
    {
        if (fig2)
            c.fig2.trials = *f.trials;
        else
            c.trials = *f.trials;
    }
    if (f.out)
        c.out_dir = *f.out;
    if (f.workers)
        c.workers = *f.workers;
    c.validate();
    return c;
}

int report(const std::vector<Check> &checks, const std::vector<std::filesystem::path> &files)
{
    bool all = true;
    for (const auto &c : checks)
    {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty())
            std::cout << " [" << c.detail << "]";
        std::cout << '\n';
        all = all && c.passed;
    }
    for (const auto &p : files)
        std::cout << "wrote " << p.string() << '\n';
    return all ? EXIT_SUCCESS : EXIT_FAILURE;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Robust beamforming experiments for RIS-aided RSMA with hardware impairments"};
    app.require_subcommand(1);

    CommonFlags fig2, power, sweep, conv, validate;
    std::optional<std::string> axis;
    add_common(app.add_subcommand("fig2", "asymptotic SNR ratio eta versus N and beta_min"), fig2);
    add_common(app.add_subcommand("power-sweep", "sum rate versus P_max for every arm"), power);
    auto *sweep_cmd = app.add_subcommand("param-sweep", "sum rate versus m, delta_sic or beta_min");
    add_common(sweep_cmd, sweep);
    sweep_cmd->add_option("--axis", axis, "m, delta_sic or beta_min");
    add_common(app.add_subcommand("convergence", "per-iteration AO traces, practical-aware vs ideal-RIS"), conv);
    add_common(app.add_subcommand("validate", "invariant suites; nonzero exit on failure"), validate);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (app.got_subcommand("fig2"))
        {
            const auto c = resolve(fig2, true);
            const auto r = run_fig2_campaign(c);
            std::cout << "fig2 done in " << r.wall_time_s << " s\n";
            return report(r.checks, write_result(r, c.out_dir));
        }
        if (app.got_subcommand("power-sweep"))
        {
            const auto c = resolve(power, false);
            const auto r = run_sumrate_vs_power(c);
            std::cout << r.campaign << " done in " << r.wall_time_s << " s, " << r.redraws << " redraws, "
                      << r.dropped_trials << " dropped\n";
            return report(r.checks, write_result(r, c.out_dir));
        }
        if (app.got_subcommand("param-sweep"))
        {
            auto c = resolve(sweep, false);
            if (axis && sweep_axis_from_string(*axis) != c.sweep_axis)
            {
                c.sweep_axis = sweep_axis_from_string(*axis);
                c.sweep_values = default_sweep_values(c.sweep_axis);
                c.validate();
            }
            const auto r = run_parameter_sweep(c);
            std::cout << r.campaign << " done in " << r.wall_time_s << " s, " << r.redraws << " redraws, "
                      << r.dropped_trials << " dropped\n";
            return report(r.checks, write_result(r, c.out_dir));
        }
        if (app.got_subcommand("convergence"))
        {
            const auto c = resolve(conv, false);
            const auto r = run_convergence_trace(c);
            std::cout << "convergence done in " << r.wall_time_s << " s\n";
            return report(r.checks, write_result(r, c.out_dir));
        }
        const auto c = resolve(validate, false);
        const auto checks = run_validation_suites(c);
        return report(checks, write_checks("validate", config_hash(c), checks, c.out_dir));
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
