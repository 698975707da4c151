// SPDX-License-Identifier: Apache-2.0
//
// relaycap - capacity bounds for Gaussian relay channels with ISI and colored noise
// Copyright (C) 2026 relaycap contributors
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

// Command-line scenario runner. Exit codes: 0 success, 2 validation failure
// (config grammar or invariants, including bad CLI arguments), 3 solver
// failure, 4 I/O failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "relaycap/config.hpp"
#include "relaycap/errors.hpp"
#include "relaycap/runner.hpp"

namespace fs = std::filesystem;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

int cmd_validate(const std::string &path)
{
    relaycap::ValidationReport report;
    const auto cfg = relaycap::load_scenario(path, report);
    if (report.ok())
    {
        const auto semantic = relaycap::validate_scenario(cfg);
        report.violations.insert(report.violations.end(), semantic.violations.begin(),
                                 semantic.violations.end());
    }
    if (report.ok())
    {
        std::cout << "OK: " << path << ": no violations (model "
                  << relaycap::model_name(cfg.model) << ", "
                  << (cfg.sweep ? cfg.sweep->steps : 1) << " point"
                  << ((cfg.sweep ? cfg.sweep->steps : 1) == 1 ? "" : "s") << ")\n";
        return kExitOk;
    }
    for (const auto &v : report.violations)
        std::cout << "violation: " << v << "\n";
    return kExitValidation;
}

struct RunFlags
{
    std::string config_path;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> draws;
    bool nats = false;
    int jobs = 1;
};

int cmd_run(const RunFlags &flags)
{
    relaycap::ValidationReport report;
    auto cfg = relaycap::load_scenario(flags.config_path, report);
    if (flags.seed)
        cfg.seed = *flags.seed;
    if (flags.draws)
        cfg.draws = *flags.draws;
    if (report.ok())
    {
        const auto semantic = relaycap::validate_scenario(cfg);
        report.violations.insert(report.violations.end(), semantic.violations.begin(),
                                 semantic.violations.end());
    }
    if (!report.ok())
    {
        std::cerr << "relaycap: " << report.violations.front();
        if (report.violations.size() > 1)
            std::cerr << " (+" << report.violations.size() - 1
                      << " more; run `relaycap validate`)";
        std::cerr << "\n";
        return kExitValidation;
    }

    relaycap::RunOutput out;
    try
    {
        out = relaycap::run_scenario(cfg, flags.jobs, !flags.nats);
    }
    catch (const relaycap::ConfigError &e)
    {
        std::cerr << "relaycap: " << e.what() << "\n";
        return kExitValidation;
    }
    catch (const relaycap::Error &e)
    {
        std::cerr << "relaycap: " << e.what() << "\n";
        return kExitSolver;
    }

    fs::path csv_path = cfg.output.empty()
                            ? fs::path(flags.config_path).stem().concat(".csv")
                            : fs::path(cfg.output);
    if (!flags.output_dir.empty())
        csv_path = fs::path(flags.output_dir) / csv_path.filename();
    try
    {
        if (!csv_path.parent_path().empty())
            fs::create_directories(csv_path.parent_path());
        std::ofstream file(csv_path, std::ios::binary | std::ios::trunc);
        if (!file)
            throw std::runtime_error("cannot open for writing");
        file << out.csv;
        file.flush();
        if (!file)
            throw std::runtime_error("write failed");
    }
    catch (const std::exception &e)
    {
        std::cerr << "relaycap: " << csv_path.string() << ": " << e.what() << "\n";
        return kExitIo;
    }

    std::cout << out.summary << "wrote: " << csv_path.string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"relaycap — capacity bounds for Gaussian relay channels with ISI and colored "
                 "noise"};
    app.require_subcommand(1);

    RunFlags flags;
    auto *run = app.add_subcommand("run", "execute a scenario config and write its CSV");
    run->add_option("config", flags.config_path, "scenario config file")->required();
    run->add_option("--output", flags.output_dir, "directory to place the CSV in");
    std::uint64_t seed_opt = 0;
    auto *seed_flag = run->add_option("--seed", seed_opt, "override the scenario seed");
    int draws_opt = 0;
    auto *draws_flag =
        run->add_option("--draws", draws_opt, "override the fading draw count (underwater)");
    auto *bits_flag = run->add_flag("--bits", "report rates in bits (default)");
    auto *nats_flag = run->add_flag("--nats", flags.nats, "report rates in nats");
    bits_flag->excludes(nats_flag);
    nats_flag->excludes(bits_flag);
    run->add_option("--jobs", flags.jobs, "parallel sweep-point workers")
        ->check(CLI::Range(1, 512));

    std::string validate_path;
    auto *validate = app.add_subcommand("validate", "check a config without executing it");
    validate->add_option("config", validate_path, "scenario config file")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    if (*seed_flag)
        flags.seed = seed_opt;
    if (*draws_flag)
        flags.draws = draws_opt;

    if (app.got_subcommand(validate))
        return cmd_validate(validate_path);
    return cmd_run(flags);
}
