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

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "strobe/config.hpp"
#include "strobe/ion_crystal.hpp"

namespace strobe {
namespace {

TrapConfig trap(std::size_t n) { return default_trap(n); }

TEST(Equilibrium, TwoIonsClosedForm) {
    const Eigen::VectorXd u = equilibrium_positions(trap(2));
    const double expected = std::pow(0.5, 2.0 / 3.0);
    EXPECT_NEAR(u(0), -expected, 1e-12);
    EXPECT_NEAR(u(1), expected, 1e-12);
}

TEST(Equilibrium, ThreeIonsClosedForm) {
    // Outer ions balance u = 1/u^2 + 1/(2u)^2, i.e. u^3 = 5/4.
    const Eigen::VectorXd u = equilibrium_positions(trap(3));
    const double outer = std::cbrt(1.25);
    EXPECT_NEAR(u(0), -outer, 1e-12);
    EXPECT_NEAR(u(1), 0.0, 1e-12);
    EXPECT_NEAR(u(2), outer, 1e-12);
}

TEST(Equilibrium, MinimizesPotentialForManySizes) {
    for (std::size_t n = 2; n <= 12; ++n) {
        const Eigen::VectorXd u = equilibrium_positions(trap(n));
        ASSERT_EQ(u.size(), static_cast<Eigen::Index>(n));
        for (Eigen::Index k = 1; k < u.size(); ++k) {
            EXPECT_GT(u(k), u(k - 1));
        }
        for (Eigen::Index k = 0; k < u.size(); ++k) {
            EXPECT_NEAR(u(k), -u(u.size() - 1 - k), 1e-9);
        }
        EXPECT_LT(force_residual(u).cwiseAbs().maxCoeff(), 1e-10) << "n = " << n;
        // Independent check: numerical gradient of the potential vanishes.
        for (Eigen::Index k = 0; k < u.size(); ++k) {
            const double h = 1e-6;
            Eigen::VectorXd up = u, dn = u;
            up(k) += h;
            dn(k) -= h;
            const double grad = (oracle::chain_potential(up) - oracle::chain_potential(dn)) / (2 * h);
            EXPECT_NEAR(grad, 0.0, 1e-6) << "n = " << n << " ion " << k;
        }
    }
}

TEST(Equilibrium, FourIonReferencePositions) {
    const Eigen::VectorXd u = equilibrium_positions(trap(4));
    EXPECT_NEAR(u(2), 0.4544, 1e-4);
    EXPECT_NEAR(u(3), 1.4368, 1e-4);
}

TEST(Modes, ThreeIonEigenvaluesFromCharacteristicPolynomial) {
    // At u = (-c, 0, c), c^3 = 5/4, the Hessian has eigenvalues {1, 3, 29/5}.
    const ModeDecomposition m = solve_chain(trap(3));
    const double nu = m.freqs(0);
    EXPECT_NEAR(std::pow(m.freqs(1) / nu, 2), 3.0, 1e-10);
    EXPECT_NEAR(std::pow(m.freqs(2) / nu, 2), 29.0 / 5.0, 1e-10);
}

TEST(Modes, HessianMatchesFiniteDifferenceOfPotential) {
    for (std::size_t n : {2, 3, 4, 6, 9}) {
        const Eigen::VectorXd u = equilibrium_positions(trap(n));
        const Eigen::MatrixXd fd = oracle::potential_hessian(u);
        EXPECT_LT((axial_hessian(u) - fd).cwiseAbs().maxCoeff(), 1e-5) << "n = " << n;
        const ModeDecomposition m = axial_modes(trap(n), u);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fd);
        for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
            const double ratio = m.freqs(j) / m.freqs(0);
            EXPECT_NEAR(ratio * ratio, es.eigenvalues()(j), 1e-5);
        }
    }
}

TEST(Modes, Invariants) {
    for (std::size_t n = 2; n <= 10; ++n) {
        const TrapConfig cfg = trap(n);
        const ModeDecomposition m = solve_chain(cfg);
        const Eigen::MatrixXd o = m.mode_matrix;
        EXPECT_LT((o * o.transpose() - Eigen::MatrixXd::Identity(o.rows(), o.cols())).cwiseAbs().maxCoeff(), 1e-10);
        for (Eigen::Index k = 0; k < o.cols(); ++k) {
            EXPECT_NEAR(o(0, k), 1.0 / std::sqrt(static_cast<double>(n)), 1e-10);
        }
        EXPECT_NEAR(m.freqs(0), cfg.axial_freq, 1e-10 * cfg.axial_freq);
        for (Eigen::Index j = 1; j < m.freqs.size(); ++j) {
            EXPECT_GT(m.freqs(j), m.freqs(j - 1));
            EXPECT_LT(m.lamb_dicke(j), m.lamb_dicke(j - 1));
        }
    }
}

TEST(Modes, FourIonFrequenciesAndVectors) {
    const ModeDecomposition m = solve_chain(trap(4));
    const double nu = m.freqs(0);
    EXPECT_NEAR(m.freqs(1) / nu, std::sqrt(3.0), 1e-10);
    EXPECT_NEAR(m.freqs(2) / nu, 2.41038, 1e-5);
    EXPECT_NEAR(m.freqs(3) / nu, 3.05096, 1e-5);
    // Stretch mode: outer ions move more than inner ones, antisymmetric.
    EXPECT_NEAR(m.mode_matrix(1, 0), 0.6742, 1e-4);
    EXPECT_NEAR(m.mode_matrix(1, 1), 0.2132, 1e-4);
    EXPECT_NEAR(m.mode_matrix(1, 3), -m.mode_matrix(1, 0), 1e-10);
    for (Eigen::Index k = 0; k < 4; ++k) {
        EXPECT_NEAR(std::abs(m.mode_matrix(2, k)), 0.5, 1e-10);
    }
}

TEST(Modes, LambDickeFormula) {
    const TrapConfig cfg = trap(4);
    const ModeDecomposition m = solve_chain(cfg);
    for (Eigen::Index j = 0; j < m.freqs.size(); ++j) {
        const double eta = cfg.wavevector * std::sqrt(kHbar / (2.0 * cfg.ion_mass * m.freqs(j)));
        EXPECT_NEAR(m.lamb_dicke(j), eta, 1e-15);
    }
    // 88Sr+ at 1 MHz with 674 nm at 45 degrees.
    EXPECT_NEAR(m.lamb_dicke(0), 0.05, 5e-4);
}

TEST(Modes, EffectiveMatrixScalesColumns) {
    TrapConfig cfg = trap(4);
    cfg.beam_weights = {0.9, 1.0, 1.0, 0.8};
    const ModeDecomposition m = solve_chain(cfg);
    for (Eigen::Index j = 0; j < 4; ++j) {
        for (Eigen::Index n = 0; n < 4; ++n) {
            EXPECT_DOUBLE_EQ(m.effective_matrix(j, n), cfg.beam_weights[static_cast<std::size_t>(n)] * m.mode_matrix(j, n));
        }
    }
    // Weighting does not change the modes themselves.
    EXPECT_LT((m.mode_matrix - solve_chain(trap(4)).mode_matrix).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(TrapConfigValidation, RejectsBadInput) {
    TrapConfig cfg = trap(4);
    cfg.n_ions = 1;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = trap(4);
    cfg.axial_freq = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = trap(4);
    cfg.ion_mass = -1.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = trap(4);
    cfg.wavevector = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = trap(4);
    cfg.beam_weights = {1.0, 1.0};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg.beam_weights = {1.0, 1.0, 0.0, 1.0};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg.beam_weights = {1.0, 1.2, 1.0, 1.0};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

} // namespace
} // namespace strobe
