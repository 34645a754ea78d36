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

#include "strobe/ion_crystal.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace strobe {

namespace {

constexpr int kNewtonIterations = 200;
constexpr double kNewtonTolerance = 1e-12;

} // namespace

void TrapConfig::validate() const {
    if (n_ions < 2) {
        throw std::invalid_argument("TrapConfig: n_ions must be at least 2");
    }
    if (!(axial_freq > 0.0)) {
        throw std::invalid_argument("TrapConfig: axial_freq must be positive");
    }
    if (!(ion_mass > 0.0)) {
        throw std::invalid_argument("TrapConfig: ion_mass must be positive");
    }
    if (!(wavevector > 0.0)) {
        throw std::invalid_argument("TrapConfig: wavevector must be positive");
    }
    if (!beam_weights.empty()) {
        if (beam_weights.size() != n_ions) {
            throw std::invalid_argument("TrapConfig: beam_weights length must equal n_ions");
        }
        for (double w : beam_weights) {
            if (!(w > 0.0 && w <= 1.0)) {
                throw std::invalid_argument("TrapConfig: beam weights must lie in (0, 1]");
            }
        }
    }
}

std::vector<double> TrapConfig::weights() const {
    if (beam_weights.empty()) {
        return std::vector<double>(n_ions, 1.0);
    }
    return beam_weights;
}

Eigen::VectorXd force_residual(const Eigen::VectorXd &u) {
    const Eigen::Index n = u.size();
    Eigen::VectorXd r(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        double s = u(m);
        for (Eigen::Index k = 0; k < m; ++k) {
            const double d = u(m) - u(k);
            s -= 1.0 / (d * d);
        }
        for (Eigen::Index k = m + 1; k < n; ++k) {
            const double d = u(k) - u(m);
            s += 1.0 / (d * d);
        }
        r(m) = s;
    }
    return r;
}

Eigen::MatrixXd axial_hessian(const Eigen::VectorXd &u) {
    const Eigen::Index n = u.size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        double diag = 1.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            if (k == m) {
                continue;
            }
            const double inv3 = 1.0 / std::pow(std::abs(u(m) - u(k)), 3);
            a(m, k) = -2.0 * inv3;
            diag += 2.0 * inv3;
        }
        a(m, m) = diag;
    }
    return a;
}

Eigen::VectorXd equilibrium_positions(const TrapConfig &cfg) {
    cfg.validate();
    const auto n = static_cast<Eigen::Index>(cfg.n_ions);

    // Uniform seed spanning roughly the true chain length (which grows ~ N^0.56).
    const double half_width = 0.5 * 2.0 * std::pow(static_cast<double>(n), 0.56);
    Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(n, -half_width, half_width);

    double res = force_residual(u).cwiseAbs().maxCoeff();
    for (int it = 0; it < kNewtonIterations && res > kNewtonTolerance; ++it) {
        const Eigen::VectorXd f = force_residual(u);
        // The Jacobian of the force balance is the axial Hessian.
        const Eigen::VectorXd step = axial_hessian(u).ldlt().solve(-f);
        double damping = 1.0;
        Eigen::VectorXd trial = u + step;
        // Backtrack until the ordering is preserved and the residual drops.
        while (damping > 1e-6) {
            trial = u + damping * step;
            bool ordered = true;
            for (Eigen::Index k = 1; k < n; ++k) {
                ordered = ordered && trial(k) > trial(k - 1);
            }
            if (ordered && force_residual(trial).cwiseAbs().maxCoeff() < res) {
                break;
            }
            damping *= 0.5;
        }
        u = trial;
        res = force_residual(u).cwiseAbs().maxCoeff();
    }
    if (!(res <= kNewtonTolerance)) {
        std::ostringstream msg;
        msg << "equilibrium_positions: Newton iteration did not converge for N=" << n
            << ", residual " << res;
        throw ConvergenceError(msg.str());
    }

    // Exact mirror symmetry; the solver only reaches it to ~1e-13.
    Eigen::VectorXd sym(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        sym(k) = 0.5 * (u(k) - u(n - 1 - k));
    }
    return sym;
}

Eigen::VectorXd lamb_dicke_params(const TrapConfig &cfg, const Eigen::VectorXd &freqs) {
    Eigen::VectorXd eta(freqs.size());
    for (Eigen::Index j = 0; j < freqs.size(); ++j) {
        if (!(freqs(j) > 0.0)) {
            throw std::invalid_argument("lamb_dicke_params: mode frequencies must be positive");
        }
        eta(j) = cfg.wavevector * std::sqrt(kHbar / (2.0 * cfg.ion_mass * freqs(j)));
    }
    return eta;
}

ModeDecomposition axial_modes(const TrapConfig &cfg, const Eigen::VectorXd &positions) {
    cfg.validate();
    const auto n = static_cast<Eigen::Index>(cfg.n_ions);
    if (positions.size() != n) {
        throw std::invalid_argument("axial_modes: positions length must equal n_ions");
    }
    const Eigen::MatrixXd hess = axial_hessian(positions);
    if ((hess - hess.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::logic_error("axial_modes: Hessian is not symmetric");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
    if (eig.info() != Eigen::Success) {
        throw ConvergenceError("axial_modes: eigen-decomposition failed");
    }
    const Eigen::VectorXd &evals = eig.eigenvalues();  // ascending
    if (evals.minCoeff() < 0.0) {
        throw std::runtime_error("axial_modes: negative Hessian eigenvalue, configuration unstable");
    }

    ModeDecomposition modes;
    modes.freqs = cfg.axial_freq * evals.cwiseSqrt();
    modes.mode_matrix = eig.eigenvectors().transpose();

    // Gauge: the first non-negligible entry of each row is positive.
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double v = modes.mode_matrix(j, k);
            if (std::abs(v) > 1e-9) {
                if (v < 0.0) {
                    modes.mode_matrix.row(j) *= -1.0;
                }
                break;
            }
        }
    }
    // The COM eigenvalue is exactly 1; pin row 0 and nu_0 to their closed forms.
    modes.freqs(0) = cfg.axial_freq;
    modes.mode_matrix.row(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));

    modes.lamb_dicke = lamb_dicke_params(cfg, modes.freqs);

    const std::vector<double> w = cfg.weights();
    modes.effective_matrix = modes.mode_matrix;
    for (Eigen::Index k = 0; k < n; ++k) {
        modes.effective_matrix.col(k) *= w[static_cast<std::size_t>(k)];
    }
    return modes;
}

ModeDecomposition solve_chain(const TrapConfig &cfg) {
    return axial_modes(cfg, equilibrium_positions(cfg));
}

} // namespace strobe
