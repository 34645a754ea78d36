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
 * Maps between Ising coupling matrices and per-mode entanglement phases,
 * and between phases and the relative tone-pair amplitudes that drive them.
 *
 * A block with mode phases Phi generates the coupling
 *     J = M^T diag(Phi) M   (diagonal dropped),
 * where M is the (optionally beam-weighted) mode matrix.
 */

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "strobe/ion_crystal.hpp"

namespace strobe {

/// Symmetric coupling matrix with an identically zero diagonal.
class CouplingMatrix {
  public:
    CouplingMatrix() = default;
    explicit CouplingMatrix(std::size_t n) : values_(Eigen::MatrixXd::Zero(n, n)) {}
    /// Throws if `values` is not square and symmetric to 1e-12. The diagonal is zeroed.
    explicit CouplingMatrix(Eigen::MatrixXd values);

    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
    [[nodiscard]] const Eigen::MatrixXd &values() const { return values_; }
    [[nodiscard]] double operator()(std::size_t n, std::size_t m) const {
        return values_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    }
    /// Sets both (n, m) and (m, n). Diagonal writes are rejected.
    void set(std::size_t n, std::size_t m, double v);

    /// Strictly upper triangular entries, row-major.
    [[nodiscard]] Eigen::VectorXd upper() const;
    [[nodiscard]] CouplingMatrix scaled(double factor) const;

    /// Nearest-neighbour ring of `n` sites with unit bonds; the closing bond
    /// (n, 1) carries `closing_sign`.
    static CouplingMatrix ring(std::size_t n, double closing_sign);

  private:
    Eigen::MatrixXd values_;
};

struct PhaseVector {
    Eigen::VectorXd phases;

    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(phases.size()); }
};

struct CompileReport {
    PhaseVector phases;
    double residual = 0.0;   ///< ||unrealizable part||_F / ||target||_F
    double overlap_f = 0.0;  ///< F(target, forward_map(phases))
};

struct DriveAmplitudes {
    std::vector<double> rel_amps;    ///< r_j in [0, 1], strongest pair at 1
    std::vector<int> detuning_signs;  ///< +1 or -1 per mode
    double rabi_freq = 0.0;          ///< Omega_0, rad/s
    double calib_const = 1.0;        ///< kappa
};

/// Raised when a target coupling matrix is degenerate.
class CompileError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// J = M^T diag(Phi) M with M the mode matrix (or the beam-weighted one).
CouplingMatrix forward_map(const PhaseVector &phases, const ModeDecomposition &modes,
                           bool use_effective = false);

/// Same as forward_map but keeps the diagonal.
Eigen::MatrixXd full_coupling(const PhaseVector &phases, const Eigen::MatrixXd &mode_matrix);

/**
 * Least-squares inversion of forward_map over the N(N-1)/2 off-diagonal
 * entries, followed by the COM gauge shift. The uniform phase vector lies in
 * the null space for an orthonormal mode matrix, so the minimum-norm solution
 * is taken and then shifted so that Phi_1 = 0.
 */
CompileReport phases_from_target(const CouplingMatrix &target, const ModeDecomposition &modes,
                                 bool use_effective = false);

/// Phi - Phi_1; the first (COM) entry of the result is exactly zero.
PhaseVector gauge_shift_com(const PhaseVector &phases);

/// Cosine similarity of the strictly-upper-triangle vectorisations.
double overlap_f(const CouplingMatrix &a, const CouplingMatrix &b);

/**
 * Solves |Phi_j| = kappa eta_j^2 r_j^2 Omega_0^2 / xi^2 for r_j. `rabi` is
 * rescaled so that max r_j = 1.
 */
DriveAmplitudes amplitudes_from_phases(const PhaseVector &phases, const ModeDecomposition &modes,
                                       double xi, double rabi, double calib_const = 1.0);

/// Inverse of amplitudes_from_phases.
PhaseVector phases_from_amplitudes(const DriveAmplitudes &amps, const ModeDecomposition &modes,
                                   double xi);

} // namespace strobe
