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

#include "strobe/experiments.hpp"

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <fmt/format.h>

#include "strobe/text_io.hpp"

namespace strobe {

namespace {

// Seed streams, one per recipe.
constexpr std::uint64_t kDynamicsStream = 1;
constexpr std::uint64_t kParityStream = 3;
constexpr std::uint64_t kTransverseStream = 4;

std::ofstream open_output(const std::string &dir, const std::string &name) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    return out;
}

void write_manifest(const ExperimentConfig &cfg, const std::string &command, const std::string &dir) {
    auto out = open_output(dir, "manifest.txt");
    out << "# strobe run manifest; feed the config block back with --config to re-run\n";
    out << "version = " << kVersion << "\n";
    out << "command = " << command << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "# config\n" << cfg.echo();
}

double sample_sigma2(double p, std::uint64_t shots) {
    return shots == 0 ? 0.0 : 2.0 * std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(shots));
}

Eigen::MatrixXd normalized(const CouplingMatrix &j) {
    const double m = j.values().cwiseAbs().maxCoeff();
    return m > 0.0 ? Eigen::MatrixXd(j.values() / m) : j.values();
}

} // namespace

CompiledDrive compile_drive(const ExperimentConfig &cfg) {
    cfg.validate();
    CompiledDrive d;
    d.positions = equilibrium_positions(cfg.trap);
    d.modes = axial_modes(cfg.trap, d.positions);
    d.target = cfg.target_shape().scaled(cfg.target_scale);
    d.report = phases_from_target(d.target, d.modes, cfg.use_effective);
    d.realizable = d.report.residual <= cfg.max_residual;
    d.expected = forward_map(d.report.phases, d.modes, true);

    const double xi = kTwoPi * cfg.xi_hz;
    d.amps = amplitudes_from_phases(d.report.phases, d.modes, xi, xi, cfg.calib_const);
    d.tones = build_tone_table(d.amps, d.modes, cfg.xi_hz, cfg.carrier_hz, 0.0);
    d.closure = verify_loop_closure(d.tones, d.modes);
    return d;
}

TrotterSchedule ising_schedule(const CompiledDrive &drive, std::size_t blocks, bool half_steps) {
    TrotterSchedule s;
    const double fraction = half_steps ? 0.5 : 1.0;
    const std::size_t steps = half_steps ? 2 * blocks : blocks;
    const IsingBlock block = IsingBlock::from_phases(drive.report.phases, drive.modes, 0.0, fraction, true);
    for (std::size_t k = 0; k < steps; ++k) {
        s.steps.emplace_back(block);
    }
    for (std::size_t r = 0; r <= steps; ++r) {
        s.record_points.push_back(r);
    }
    return s;
}

NoiseModel noise_model(const ExperimentConfig &cfg, std::uint64_t stream) {
    NoiseModel noise;
    noise.t2 = cfg.t2_s;
    noise.drive_axis_t2 = cfg.drive_axis_t2_s;
    noise.block_duration = 1.0 / cfg.xi_hz;
    noise.seed = substream_seed(cfg.seed, stream);
    return noise;
}

std::vector<Snapshot> run_dynamics(const ExperimentConfig &cfg, const CompiledDrive &drive) {
    const TrotterSchedule sched = ising_schedule(drive, cfg.blocks, cfg.half_steps);
    return run_schedule(StateVector(cfg.trap.n_ions), sched, noise_model(cfg, kDynamicsStream), cfg.shots,
                        cfg.threads);
}

ParityRun run_parity(const ExperimentConfig &cfg, const CompiledDrive &drive) {
    ParityRun run;
    const TrotterSchedule evolution = ising_schedule(drive, cfg.parity_blocks, false);
    run.data = parity_experiment(StateVector(cfg.trap.n_ions), evolution, default_phi_grid(cfg.phi_points),
                                 cfg.shots, noise_model(cfg, kParityStream), cfg.threads);
    for (const PairFringe &f : run.data.pairs) {
        run.fits.push_back(fit_parity_fringe(f));
    }
    run.reconstructed = reconstruct_matrix(run.fits, cfg.trap.n_ions);
    run.f_ideal_expected = overlap_f(drive.target, drive.expected);
    run.f_expected_reconstructed = overlap_f(drive.expected, run.reconstructed);
    run.omega_eff = effective_coupling(run.reconstructed, static_cast<double>(cfg.parity_blocks));
    return run;
}

TransverseRun run_transverse(const ExperimentConfig &cfg, const CompiledDrive &drive, double omega_eff) {
    TransverseRun run;
    run.omega_eff = omega_eff;
    const IsingBlock block = IsingBlock::from_phases(drive.report.phases, drive.modes, 0.0, 1.0, true);
    const std::size_t n_blocks = std::max(cfg.blocks, cfg.transverse_blocks);
    // Boundary after the k-th Ising block (1-based) is 2k - 1.
    run.probe_index = 2 * cfg.transverse_blocks - 1;

    auto schedule_for = [&](double delta) {
        TrotterSchedule s;
        s.record_points.push_back(0);
        for (std::size_t k = 0; k < n_blocks; ++k) {
            s.steps.emplace_back(block);
            s.record_points.push_back(s.steps.size());
            s.steps.emplace_back(ZField{delta, 0.0});
        }
        return s;
    };

    // The estimate is pinned to the noise-free simulation at delta = 0.
    {
        StateVector psi(cfg.trap.n_ions);
        const TrotterSchedule s = schedule_for(0.0);
        for (std::size_t r = 0; r < run.probe_index; ++r) {
            apply_step(psi, s.steps[r]);
        }
        run.scale = excitation_scale(1.0 - std::norm(psi[0]), omega_eff);
    }

    for (std::size_t i = 0; i < cfg.delta_over_omega.size(); ++i) {
        TransversePoint p;
        p.ratio = cfg.delta_over_omega[i];
        p.delta = p.ratio * omega_eff;
        NoiseModel noise = noise_model(cfg, kTransverseStream);
        noise.seed = substream_seed(noise.seed, i);
        p.snapshots = run_schedule(StateVector(cfg.trap.n_ions), schedule_for(p.delta), noise, cfg.shots,
                                   cfg.threads);
        const Snapshot *probe = nullptr;
        for (const Snapshot &s : p.snapshots) {
            if (s.time_index == run.probe_index) {
                probe = &s;
            }
        }
        p.exact_excitation = 1.0 - std::norm(probe->exact[0]);
        const ShotCounts kept = postselect_even(probe->counts);
        const double ground = static_cast<double>(kept.counts[0]) / static_cast<double>(kept.total);
        p.sampled_excitation = 1.0 - ground;
        p.sampled_sigma2 = sample_sigma2(ground, kept.total);
        p.estimate = excitation_estimate(p.delta, omega_eff, run.scale);
        run.points.push_back(std::move(p));
    }
    return run;
}

void write_modes(const ExperimentConfig &cfg, const std::string &dir) {
    const Eigen::VectorXd u = equilibrium_positions(cfg.trap);
    const ModeDecomposition modes = axial_modes(cfg.trap, u);
    auto out = open_output(dir, "modes.txt");
    write_mode_report(out, cfg.trap, u, modes);
    write_manifest(cfg, "modes", dir);
}

CompiledDrive write_compile(const ExperimentConfig &cfg, const std::string &dir) {
    CompiledDrive d = compile_drive(cfg);
    {
        auto out = open_output(dir, "compile_report.txt");
        write_compile_report(out, d.report);
        out << "realizable = " << (d.realizable ? "true" : "false") << "\n";
        out << "max_residual = " << format_double(cfg.max_residual) << "\n";
        out << "rabi_hz = " << format_double(d.amps.rabi_freq / kTwoPi) << "\n";
        out << "rel_amps = ";
        for (std::size_t j = 0; j < d.amps.rel_amps.size(); ++j) {
            out << (j ? ", " : "") << format_double(d.amps.rel_amps[j]);
        }
        out << "\ndetuning_signs = ";
        for (std::size_t j = 0; j < d.amps.detuning_signs.size(); ++j) {
            out << (j ? ", " : "") << d.amps.detuning_signs[j];
        }
        out << "\n# loop closure at T = 2 pi / xi: mode, |alpha| (own pairs), Phi (own), |alpha| (all), Phi (all)\n";
        for (std::size_t j = 0; j < d.closure.size(); ++j) {
            const LoopClosure &c = d.closure[j];
            out << "closure_" << (j + 1) << " = " << format_double(c.displacement) << ", "
                << format_double(c.phase) << ", " << format_double(c.displacement_all) << ", "
                << format_double(c.phase_all) << "\n";
        }
    }
    {
        auto out = open_output(dir, "tones.txt");
        write_tone_table(out, d.tones);
    }
    {
        auto out = open_output(dir, "couplings.txt");
        write_matrix(out, "target (per block)", d.target.values());
        write_matrix(out, "expected (per block)", d.expected.values());
    }
    write_manifest(cfg, "compile", dir);
    return d;
}

void write_figure(const ExperimentConfig &cfg, const std::string &name, const std::string &dir) {
    if (name != "dynamics" && name != "es2" && name != "parity" && name != "transverse") {
        throw std::invalid_argument("unknown figure '" + name + "' (expected dynamics, es2, parity, transverse)");
    }
    const CompiledDrive drive = compile_drive(cfg);
    const std::size_t n = cfg.trap.n_ions;

    if (name == "dynamics") {
        const std::vector<Snapshot> snaps = run_dynamics(cfg, drive);
        auto out = open_output(dir, "dynamics.tsv");
        out << "# excitation-subspace populations; sampled columns from " << cfg.shots
            << " shots, sigma2 = 2 sigma binomial\n# time_index\ttime_blocks";
        for (std::size_t k = 0; k <= n; ++k) out << "\tes" << k;
        for (std::size_t k = 0; k <= n; ++k) out << "\tes" << k << "_sigma2";
        for (std::size_t k = 0; k <= n; ++k) out << "\texact_es" << k;
        out << "\n";
        for (const Snapshot &s : snaps) {
            const EsPopulations sampled = group_by_excitation(s.counts);
            const EsPopulations exact = group_by_excitation(s.exact);
            out << s.time_index << "\t" << format_double(s.time_blocks);
            for (double p : sampled.populations) out << "\t" << format_double(p);
            for (double p : sampled.populations) out << "\t" << format_double(sample_sigma2(p, s.counts.total));
            for (double p : exact.populations) out << "\t" << format_double(p);
            out << "\n";
        }
        auto snap_out = open_output(dir, "dynamics_snapshots.tsv");
        write_snapshots(snap_out, snaps);
    } else if (name == "es2") {
        const std::vector<Snapshot> snaps = run_dynamics(cfg, drive);
        std::vector<std::size_t> states;
        for (std::size_t k = 0; k < (std::size_t{1} << n); ++k) {
            if (std::popcount(k) == 2) states.push_back(k);
        }
        auto out = open_output(dir, "es2.tsv");
        out << "# post-selected (even parity) populations of the two-excitation states\n# time_index\ttime_blocks";
        for (std::size_t k : states) out << "\tp_" << bitstring(k, n);
        for (std::size_t k : states) out << "\tsigma2_" << bitstring(k, n);
        for (std::size_t k : states) out << "\texact_" << bitstring(k, n);
        out << "\n";
        for (const Snapshot &s : snaps) {
            const ShotCounts kept = postselect_even(s.counts);
            double even_mass = 0.0;
            for (std::size_t k = 0; k < s.exact.dim(); ++k) {
                if (std::popcount(k) % 2 == 0) even_mass += std::norm(s.exact[k]);
            }
            out << s.time_index << "\t" << format_double(s.time_blocks);
            std::vector<double> pops;
            for (std::size_t k : states) {
                pops.push_back(static_cast<double>(kept.counts[k]) / static_cast<double>(kept.total));
                out << "\t" << format_double(pops.back());
            }
            for (double p : pops) out << "\t" << format_double(sample_sigma2(p, kept.total));
            for (std::size_t k : states) out << "\t" << format_double(std::norm(s.exact[k]) / even_mass);
            out << "\n";
        }
    } else if (name == "parity") {
        const ParityRun run = run_parity(cfg, drive);
        {
            auto out = open_output(dir, "parity_fringes.tsv");
            write_fringes(out, run.data);
        }
        {
            auto out = open_output(dir, "parity_fits.tsv");
            out << "# C(phi) = A sin(2 phi) after " << cfg.parity_blocks << " blocks, " << cfg.shots
                << " shots per point\n";
            out << "# F(ideal, expected) = " << format_double(run.f_ideal_expected) << "\n";
            out << "# F(expected, reconstructed) = " << format_double(run.f_expected_reconstructed) << "\n";
            out << "# omega_eff_per_block = " << format_double(run.omega_eff) << "\n";
            write_fits(out, run.fits);
        }
        {
            auto out = open_output(dir, "parity_couplings.txt");
            write_matrix(out, "ideal (normalized to max |J| = 1)", normalized(drive.target));
            write_matrix(out, "expected (normalized to max |J| = 1)", normalized(drive.expected));
            write_matrix(out, "reconstructed (normalized to max |J| = 1)", normalized(run.reconstructed));
            write_matrix(out, "reconstructed (fit amplitudes)", run.reconstructed.values());
        }
    } else {
        const ParityRun parity = run_parity(cfg, drive);
        const TransverseRun run = run_transverse(cfg, drive, parity.omega_eff);
        {
            auto out = open_output(dir, "transverse.tsv");
            out << "# post-selected even-subspace populations under alternating Ising blocks and z-field steps\n";
            out << "# omega_eff_per_block = " << format_double(run.omega_eff) << "\n";
            out << "# ratio\tdelta\ttime_index\ttime_blocks";
            for (std::size_t k = 0; k <= n; k += 2) out << "\tes" << k;
            for (std::size_t k = 0; k <= n; k += 2) out << "\texact_es" << k;
            out << "\n";
            for (const TransversePoint &p : run.points) {
                for (const Snapshot &s : p.snapshots) {
                    const EsPopulations sampled = postselected_populations(s.counts);
                    const EsPopulations exact = group_by_excitation(s.exact);
                    out << format_double(p.ratio) << "\t" << format_double(p.delta) << "\t" << s.time_index
                        << "\t" << format_double(s.time_blocks);
                    for (std::size_t k = 0; k <= n; k += 2) out << "\t" << format_double(sampled.populations[k]);
                    for (std::size_t k = 0; k <= n; k += 2) out << "\t" << format_double(exact.populations[k]);
                    out << "\n";
                }
            }
        }
        {
            auto out = open_output(dir, "transverse_inset.tsv");
            out << "# 1 - Pr(0...0) after " << cfg.transverse_blocks
                << " Ising blocks with z-field steps between them\n";
            out << "# estimate_scale = " << format_double(run.scale) << "\n";
            out << "# ratio\tdelta\texact_excitation\tsampled_excitation\tsampled_sigma2\testimate\n";
            for (const TransversePoint &p : run.points) {
                out << format_double(p.ratio) << "\t" << format_double(p.delta) << "\t"
                    << format_double(p.exact_excitation) << "\t" << format_double(p.sampled_excitation) << "\t"
                    << format_double(p.sampled_sigma2) << "\t" << format_double(p.estimate) << "\n";
            }
        }
    }
    write_manifest(cfg, "figure " + name, dir);
}

} // namespace strobe
