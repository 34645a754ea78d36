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

#include "strobe/coupling_compiler.hpp"

#include <algorithm>
#include <cmath>

namespace strobe {

CouplingMatrix::CouplingMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() != values_.cols()) {
        throw std::invalid_argument("CouplingMatrix: matrix must be square");
    }
    if (values_.size() > 0 && (values_ - values_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("CouplingMatrix: matrix must be symmetric");
    }
    values_.diagonal().setZero();
}

void CouplingMatrix::set(std::size_t n, std::size_t m, double v) {
    if (n == m) {
        throw std::invalid_argument("CouplingMatrix: diagonal entries are fixed at zero");
    }
    values_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = v;
    values_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = v;
}

Eigen::VectorXd CouplingMatrix::upper() const {
    const Eigen::Index n = values_.rows();
    Eigen::VectorXd out(n * (n - 1) / 2);
    Eigen::Index k = 0;
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a + 1; b < n; ++b) {
            out(k++) = values_(a, b);
        }
    }
    return out;
}

CouplingMatrix CouplingMatrix::scaled(double factor) const {
    return CouplingMatrix(Eigen::MatrixXd(values_ * factor));
}

CouplingMatrix CouplingMatrix::ring(std::size_t n, double closing_sign) {
    if (n < 3) {
        throw std::invalid_argument("CouplingMatrix::ring: need at least 3 sites");
    }
    CouplingMatrix j(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        j.set(k, k + 1, 1.0);
    }
    j.set(n - 1, 0, closing_sign);
    return j;
}

namespace {

const Eigen::MatrixXd &select_matrix(const ModeDecomposition &modes, bool use_effective) {
    return use_effective ? modes.effective_matrix : modes.mode_matrix;
}

// Row (a, b) of the design matrix holds M_j(a) M_j(b) for every mode j.
Eigen::MatrixXd design_matrix(const Eigen::MatrixXd &m) {
    const Eigen::Index n = m.cols();
    Eigen::MatrixXd design(n * (n - 1) / 2, m.rows());
    Eigen::Index row = 0;
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a + 1; b < n; ++b) {
            design.row(row++) = m.col(a).cwiseProduct(m.col(b)).transpose();
        }
    }
    return design;
}

} // namespace

Eigen::MatrixXd full_coupling(const PhaseVector &phases, const Eigen::MatrixXd &mode_matrix) {
    if (phases.phases.size() != mode_matrix.rows()) {
        throw std::invalid_argument("full_coupling: phase vector and mode matrix dimensions differ");
    }
    return mode_matrix.transpose() * phases.phases.asDiagonal() * mode_matrix;
}

CouplingMatrix forward_map(const PhaseVector &phases, const ModeDecomposition &modes,
                           bool use_effective) {
    Eigen::MatrixXd j = full_coupling(phases, select_matrix(modes, use_effective));
    j = 0.5 * (j + j.transpose());
    return CouplingMatrix(std::move(j));
}

PhaseVector gauge_shift_com(const PhaseVector &phases) {
    PhaseVector out = phases;
    if (out.phases.size() > 0) {
        const double com = phases.phases(0);
        out.phases.array() -= com;
        out.phases(0) = 0.0;
    }
    return out;
}

double overlap_f(const CouplingMatrix &a, const CouplingMatrix &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("overlap_f: matrices differ in size");
    }
    const Eigen::VectorXd x = a.upper();
    const Eigen::VectorXd y = b.upper();
    const double nx = x.squaredNorm();
    const double ny = y.squaredNorm();
    if (nx == 0.0 || ny == 0.0) {
        throw std::invalid_argument("overlap_f: zero coupling matrix has no direction");
    }
    return std::clamp(x.dot(y) / std::sqrt(nx * ny), -1.0, 1.0);
}

CompileReport phases_from_target(const CouplingMatrix &target, const ModeDecomposition &modes,
                                 bool use_effective) {
    const Eigen::MatrixXd &m = select_matrix(modes, use_effective);
    if (static_cast<Eigen::Index>(target.size()) != m.cols()) {
        throw std::invalid_argument("phases_from_target: target and mode matrix dimensions differ");
    }
    const Eigen::VectorXd rhs = target.upper();
    const double norm = rhs.norm();
    if (norm == 0.0) {
        throw CompileError("phases_from_target: zero target coupling matrix");
    }

    const Eigen::MatrixXd design = design_matrix(m);
    // Rank-deficient by one for orthonormal rows; the orthogonal decomposition
    // returns the minimum-norm least-squares solution.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
    cod.setThreshold(1e-10);

    CompileReport report;
    report.phases = gauge_shift_com(PhaseVector{cod.solve(rhs)});
    // Both triangles carry the same error, so the upper-triangle ratio equals
    // the Frobenius ratio.
    report.residual = (design * report.phases.phases - rhs).norm() / norm;
    const CouplingMatrix realized = forward_map(report.phases, modes, use_effective);
    const bool realized_zero = realized.upper().squaredNorm() == 0.0;
    report.overlap_f = realized_zero ? 0.0 : overlap_f(target, realized);
    return report;
}

DriveAmplitudes amplitudes_from_phases(const PhaseVector &phases, const ModeDecomposition &modes,
                                       double xi, double rabi, double calib_const) {
    if (!(xi > 0.0)) {
        throw std::invalid_argument("amplitudes_from_phases: xi must be positive");
    }
    if (!(rabi > 0.0)) {
        throw std::invalid_argument("amplitudes_from_phases: rabi frequency must be positive");
    }
    if (!(calib_const > 0.0)) {
        throw std::invalid_argument("amplitudes_from_phases: calibration constant must be positive");
    }
    const std::size_t n = phases.size();
    if (n != modes.size()) {
        throw std::invalid_argument("amplitudes_from_phases: dimension mismatch");
    }

    DriveAmplitudes out;
    out.calib_const = calib_const;
    out.rel_amps.assign(n, 0.0);
    out.detuning_signs.assign(n, 1);
    double largest = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double phi = phases.phases(static_cast<Eigen::Index>(j));
        const double eta = modes.lamb_dicke(static_cast<Eigen::Index>(j));
        out.detuning_signs[j] = phi < 0.0 ? -1 : 1;
        if (phi != 0.0) {
            out.rel_amps[j] = xi * std::sqrt(std::abs(phi) / calib_const) / (eta * rabi);
        }
        largest = std::max(largest, out.rel_amps[j]);
    }
    out.rabi_freq = rabi;
    if (largest > 0.0) {
        for (double &r : out.rel_amps) {
            r /= largest;
        }
        out.rabi_freq = rabi * largest;
    }
    return out;
}

PhaseVector phases_from_amplitudes(const DriveAmplitudes &amps, const ModeDecomposition &modes,
                                   double xi) {
    const std::size_t n = amps.rel_amps.size();
    if (n != modes.size() || amps.detuning_signs.size() != n) {
        throw std::invalid_argument("phases_from_amplitudes: dimension mismatch");
    }
    PhaseVector out{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))};
    for (std::size_t j = 0; j < n; ++j) {
        const double eta = modes.lamb_dicke(static_cast<Eigen::Index>(j));
        const double g = eta * amps.rel_amps[j] * amps.rabi_freq / xi;
        out.phases(static_cast<Eigen::Index>(j)) = amps.detuning_signs[j] * amps.calib_const * g * g;
    }
    return out;
}

} // namespace strobe
