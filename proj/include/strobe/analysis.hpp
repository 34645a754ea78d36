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
 * Excitation-subspace grouping, parity-fringe experiments and fits, coupling
 * reconstruction, and the transverse-field excitation estimate.
 */

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "strobe/coupling_compiler.hpp"
#include "strobe/spin_sim.hpp"

namespace strobe {

/// Populations by excitation number 0..N.
struct EsPopulations {
    std::vector<double> populations;
    bool postselected = false;
};

EsPopulations group_by_excitation(const ShotCounts &counts);
EsPopulations group_by_excitation(const StateVector &state);

/// Drops odd-popcount outcomes. Throws if nothing is left.
ShotCounts postselect_even(const ShotCounts &counts);

/// Post-selected populations: odd entries exactly zero, even ones renormalized.
EsPopulations postselected_populations(const ShotCounts &counts);

struct Correlator {
    double value = 0.0;
    double sigma2 = 0.0;  ///< two standard deviations of the shot-noise estimate
};

/// <sigma_z^n sigma_z^m> estimated from shots, with a multinomial 2 sigma.
Correlator zz_correlator(const ShotCounts &counts, std::size_t n, std::size_t m);
/// Exact <sigma_z^n sigma_z^m>.
double zz_correlator(const StateVector &state, std::size_t n, std::size_t m);

/// 13 points spaced pi / 13 apart starting at 0.
std::vector<double> default_phi_grid(std::size_t points = 13);

struct PairFringe {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<double> phi;
    std::vector<double> value;   ///< C_{n,m}(phi) from shots
    std::vector<double> sigma2;  ///< 2 sigma per point
    std::vector<double> exact;   ///< infinite-shot C_{n,m}(phi)
};

struct ParityData {
    std::size_t n_qubits = 0;
    std::vector<PairFringe> pairs;  ///< (1,2), (1,3), ..., row-major upper triangle
};

/**
 * For every phi: evolve under `evolution`, apply a global pi/2 rotation
 * with axis phi, sample `shots` outcomes and form <sigma_z^n sigma_z^m> for
 * every pair. Each phi point draws from its own seed substream.
 */
ParityData parity_experiment(const StateVector &state0, const TrotterSchedule &evolution,
                             const std::vector<double> &phi_grid, std::uint64_t shots,
                             const NoiseModel &noise, unsigned threads = 1);

struct FringeFit {
    std::size_t n = 0;
    std::size_t m = 0;
    double amplitude = 0.0;         ///< A in C = A sin(2 phi)
    double residual = 0.0;          ///< rms of C - A sin(2 phi)
    double amplitude_sigma2 = 0.0;  ///< 2 sigma of A from the per-point 2 sigma
    std::vector<double> point_sigma2;
};

/// Closed-form single-parameter least squares for C = A sin(2 phi).
FringeFit fit_parity_fringe(const std::vector<double> &phi, const std::vector<double> &value,
                            const std::vector<double> &sigma2 = {});
FringeFit fit_parity_fringe(const PairFringe &fringe);

/// Symmetric, zero-diagonal matrix of fitted amplitudes. Needs every pair.
CouplingMatrix reconstruct_matrix(const std::vector<FringeFit> &fits, std::size_t n);

/// Mean |J_{n,n+1}| over the N cyclic bonds (N+1 -> 1), divided by t.
double effective_coupling(const CouplingMatrix &j, double t);

/**
 * scale / (1 + delta^2 / (4 w)^2) * sin^2(3 w sqrt(1 + delta^2 / (4 w)^2)),
 * the off-resonant Rabi estimate of 1 - Pr(0...0) with w the effective coupling.
 */
double excitation_estimate(double delta, double omega_eff, double scale = 1.0);

/// Scale that makes excitation_estimate(0, omega_eff, scale) equal `measured_at_zero`.
double excitation_scale(double measured_at_zero, double omega_eff);

} // namespace strobe
