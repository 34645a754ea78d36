// Copyright 2026 The strobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// strobe: command-line front end.
//
//   strobe modes   [--config FILE] [--out DIR]
//   strobe compile [--config FILE] [--out DIR]
//   strobe figure <dynamics|es2|parity|transverse> [--config FILE] [--seed S] [--threads T] [--out DIR]
//
// Exit codes: 0 success, 1 other failure, 2 configuration error,
// 3 target not realizable within target.max_residual, 4 equilibrium solver
// did not converge.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "strobe/config.hpp"
#include "strobe/experiments.hpp"
#include "strobe/ion_crystal.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitUnrealizable = 3;
constexpr int kExitConvergence = 4;

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

void add_common(CLI::App *cmd, CommonOptions &opts, bool with_run_options) {
    cmd->add_option("--config", opts.config_path, "key = value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out_dir, "output directory (overrides output_dir)");
    if (with_run_options) {
        cmd->add_option("--seed", opts.seed, "master seed (overrides sim.seed)");
        cmd->add_option("--threads", opts.threads, "worker threads (overrides sim.threads)")
            ->check(CLI::PositiveNumber);
    }
}

strobe::ExperimentConfig load(const CommonOptions &opts) {
    strobe::ExperimentConfig cfg = opts.config_path.empty() ? strobe::ExperimentConfig{}
                                                            : strobe::ExperimentConfig::from_file(opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.threads) cfg.threads = *opts.threads;
    if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"strobe: stroboscopic Ising simulator for trapped-ion crystals"};
    app.set_version_flag("--version", std::string(strobe::kVersion));
    app.require_subcommand(1);

    CommonOptions modes_opts, compile_opts, figure_opts;
    std::string figure_name;

    CLI::App *modes = app.add_subcommand("modes", "solve the crystal and write modes.txt");
    add_common(modes, modes_opts, false);

    CLI::App *compile = app.add_subcommand("compile", "compile the target couplings into a tone table");
    add_common(compile, compile_opts, false);

    CLI::App *figure = app.add_subcommand("figure", "run one experiment recipe and write its data");
    figure->add_option("name", figure_name, "dynamics, es2, parity or transverse")
        ->required()
        ->check(CLI::IsMember({"dynamics", "es2", "parity", "transverse"}));
    add_common(figure, figure_opts, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*modes) {
            const auto cfg = load(modes_opts);
            strobe::write_modes(cfg, cfg.output_dir);
            fmt::print("modes written to {}\n", cfg.output_dir);
        } else if (*compile) {
            const auto cfg = load(compile_opts);
            const auto drive = strobe::write_compile(cfg, cfg.output_dir);
            fmt::print("residual {:.6g}, F {:.6g}, {} tones written to {}\n", drive.report.residual,
                       drive.report.overlap_f, drive.tones.tones.size(), cfg.output_dir);
            if (!drive.realizable) {
                fmt::print(stderr, "target not realizable: residual {:.6g} exceeds target.max_residual {:.6g}\n",
                           drive.report.residual, cfg.max_residual);
                return kExitUnrealizable;
            }
        } else if (*figure) {
            const auto cfg = load(figure_opts);
            strobe::write_figure(cfg, figure_name, cfg.output_dir);
            fmt::print("figure {} written to {}\n", figure_name, cfg.output_dir);
        }
    } catch (const strobe::ConfigError &e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kExitConfig;
    } catch (const strobe::ConvergenceError &e) {
        fmt::print(stderr, "equilibrium solver failed: {}\n", e.what());
        return kExitConvergence;
    } catch (const std::exception &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitFailure;
    }
    return 0;
}
