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

#pragma once

/**
 * @file
 * End-to-end experiment recipes: compile a target, then run the stroboscopic
 * dynamics, the post-selected two-excitation view, the parity-fringe
 * reconstruction and the transverse-field sweep.
 *
 * Time is measured in blocks of duration 2 pi / xi; couplings and fields in
 * radians per block.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "strobe/analysis.hpp"
#include "strobe/config.hpp"
#include "strobe/coupling_compiler.hpp"
#include "strobe/drive_synth.hpp"
#include "strobe/ion_crystal.hpp"
#include "strobe/spin_sim.hpp"

namespace strobe {

inline constexpr const char *kVersion = "strobe 1.0.0";

struct CompiledDrive {
    Eigen::VectorXd positions;
    ModeDecomposition modes;
    CouplingMatrix target;    ///< scaled target, per block
    CompileReport report;
    CouplingMatrix expected;  ///< what the drive realizes (beam-weighted modes)
    DriveAmplitudes amps;
    ToneTable tones;
    std::vector<LoopClosure> closure;
    bool realizable = true;   ///< residual within max_residual
};

CompiledDrive compile_drive(const ExperimentConfig &cfg);

/// `blocks` Ising blocks with the compiled phases; half_steps splits each in two.
TrotterSchedule ising_schedule(const CompiledDrive &drive, std::size_t blocks, bool half_steps);

NoiseModel noise_model(const ExperimentConfig &cfg, std::uint64_t stream);

std::vector<Snapshot> run_dynamics(const ExperimentConfig &cfg, const CompiledDrive &drive);

struct ParityRun {
    ParityData data;
    std::vector<FringeFit> fits;
    CouplingMatrix reconstructed;
    double f_ideal_expected = 0.0;
    double f_expected_reconstructed = 0.0;
    double omega_eff = 0.0;  ///< per block
};

ParityRun run_parity(const ExperimentConfig &cfg, const CompiledDrive &drive);

struct TransversePoint {
    double ratio = 0.0;  ///< delta / omega_eff
    double delta = 0.0;  ///< radians per block
    std::vector<Snapshot> snapshots;
    double exact_excitation = 0.0;    ///< 1 - Pr(0...0) at the probe time
    double sampled_excitation = 0.0;  ///< same, from post-selected shots
    double sampled_sigma2 = 0.0;
    double estimate = 0.0;            ///< scaled off-resonant Rabi estimate
};

struct TransverseRun {
    double omega_eff = 0.0;
    double scale = 0.0;
    std::size_t probe_index = 0;  ///< step boundary of the probe time
    std::vector<TransversePoint> points;
};

/// Alternating Ising and z-field steps. Omega_eff comes from the parity run.
TransverseRun run_transverse(const ExperimentConfig &cfg, const CompiledDrive &drive, double omega_eff);

/// Writes modes.txt into `dir`.
void write_modes(const ExperimentConfig &cfg, const std::string &dir);
/// Writes compile_report.txt, tones.txt and couplings.txt. Returns the drive.
CompiledDrive write_compile(const ExperimentConfig &cfg, const std::string &dir);
/// name is one of dynamics, es2, parity, transverse.
void write_figure(const ExperimentConfig &cfg, const std::string &name, const std::string &dir);

} // namespace strobe
