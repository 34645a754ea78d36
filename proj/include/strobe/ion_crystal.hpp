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
 * Equilibrium geometry and axial normal modes of a linear ion chain in a
 * harmonic trap.
 *
 * Positions are in units of the characteristic length
 * l = (e^2 / (4 pi eps0 m nu^2))^(1/3). Mode rows are ordered by ascending
 * frequency, so row 0 is always the center-of-mass mode.
 */

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace strobe {

inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct TrapConfig {
    std::size_t n_ions = 2;
    double axial_freq = 0.0;  ///< rad/s
    double ion_mass = 0.0;    ///< kg
    double wavevector = 0.0;  ///< 1/m, projection on the trap axis
    /// Per-ion drive amplitude weights in (0, 1]. Empty means all ones.
    std::vector<double> beam_weights;

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;
    /// beam_weights with the empty default expanded to all ones.
    [[nodiscard]] std::vector<double> weights() const;
};

struct ModeDecomposition {
    Eigen::VectorXd freqs;             ///< nu_j in rad/s, ascending, COM first
    Eigen::MatrixXd mode_matrix;       ///< row j = participation of each ion in mode j
    Eigen::VectorXd lamb_dicke;        ///< eta_j
    Eigen::MatrixXd effective_matrix;  ///< mode_matrix with column n scaled by w_n

    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(freqs.size()); }
};

/// Raised when the equilibrium solver fails to reach the residual tolerance.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Left-hand side of the dimensionless force-balance equations at u.
Eigen::VectorXd force_residual(const Eigen::VectorXd &u);

/// Dimensionless axial Hessian of the trap plus Coulomb potential at u.
Eigen::MatrixXd axial_hessian(const Eigen::VectorXd &u);

/// Damped Newton solve of the force balance, seeded with uniform spacing.
Eigen::VectorXd equilibrium_positions(const TrapConfig &cfg);

ModeDecomposition axial_modes(const TrapConfig &cfg, const Eigen::VectorXd &positions);

/// eta_j = k sqrt(hbar / (2 m nu_j)).
Eigen::VectorXd lamb_dicke_params(const TrapConfig &cfg, const Eigen::VectorXd &freqs);

/// equilibrium_positions followed by axial_modes.
ModeDecomposition solve_chain(const TrapConfig &cfg);

}  // namespace strobe
