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
 * Tone tables for one Ising block and the analytic phase-space check of
 * what they do to each motional mode.
 *
 * Every driven mode j gets two red/blue pairs at
 *     carrier -/+ (nu_j + s_j xi)   and   carrier -/+ (nu_j + 3 s_j xi)
 * with equal amplitude r_j. The 3xi pair carries an extra pi so the two
 * spin-dependent forces have opposite phase. Shifting the mean phase of
 * every pair by phi turns sigma_x into sigma_phi.
 */

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "strobe/coupling_compiler.hpp"
#include "strobe/ion_crystal.hpp"

namespace strobe {

struct Tone {
    double freq_hz = 0.0;  ///< absolute frequency in the synthesizer frame
    double amp = 0.0;      ///< relative amplitude in [0, 1]
    double phase = 0.0;    ///< radians
};

struct ToneTable {
    std::vector<Tone> tones;
    double carrier_hz = 0.0;
    double xi_hz = 0.0;
    double block_duration_s = 0.0;  ///< 1 / xi_hz
    double rabi_hz = 0.0;           ///< Omega_0 / 2 pi for amp = 1
    double calib_const = 1.0;       ///< kappa, see amplitudes_from_phases
};

/// Raised when two requested tones fall within xi/100 of each other.
class ToneCollision : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

ToneTable build_tone_table(const DriveAmplitudes &amps, const ModeDecomposition &modes,
                           double xi_hz, double carrier_hz, double block_phase);

/**
 * Axis phase of each consecutive block so that a sequence of Ising blocks
 * reproduces a transverse field delta (rad/s): phi_k = -2 delta T k.
 * Equivalent to interleaving apply_z_field(delta T) after every block and
 * undoing the accumulated frame rotation at the end.
 */
std::vector<double> phase_ramp_schedule(double delta, std::size_t n_blocks, double block_duration);

/// A single spin-dependent force component seen by one mode.
struct ModeForce {
    std::complex<double> amplitude;  ///< rad/s
    double detuning = 0.0;           ///< tone-pair offset minus mode frequency, rad/s
    std::size_t nearest_mode = 0;    ///< mode whose sideband this pair addresses
};

/// Forces on mode k from every red/blue pair in the table.
std::vector<ModeForce> mode_forces(const ToneTable &table, const ModeDecomposition &modes,
                                   std::size_t k);

struct LoopClosure {
    double displacement = 0.0;      ///< |alpha_k(T)| from the pairs addressing mode k
    double phase = 0.0;             ///< Phi_k from the pairs addressing mode k
    double displacement_all = 0.0;  ///< |alpha_k(T)| including off-resonant pairs
    double phase_all = 0.0;         ///< Phi_k including off-resonant pairs
};

/**
 * alpha_k(T) = int_0^T f_k(t) dt and
 * Phi_k = Im int_0^T dt int_0^t dt' f_k(t) conj(f_k(t')),
 * with f_k(t) = sum over pairs of c e^{i delta t}, evaluated in closed form.
 * T defaults to the table's block duration.
 */
std::vector<LoopClosure> verify_loop_closure(const ToneTable &table, const ModeDecomposition &modes,
                                             double duration_s = 0.0);

/// Closed-form alpha(T) and Phi(T) for an arbitrary force list.
std::complex<double> force_displacement(const std::vector<ModeForce> &forces, double t);
double force_phase(const std::vector<ModeForce> &forces, double t);

} // namespace strobe
