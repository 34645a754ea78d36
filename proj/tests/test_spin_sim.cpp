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

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "strobe/config.hpp"
#include "strobe/spin_sim.hpp"

namespace strobe {
namespace {

oracle::CVec to_vec(const StateVector &s) {
    oracle::CVec v(static_cast<Eigen::Index>(s.dim()));
    for (std::size_t k = 0; k < s.dim(); ++k) v(static_cast<Eigen::Index>(k)) = s[k];
    return v;
}

StateVector random_state(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    std::vector<Complex> a(std::size_t{1} << n);
    double norm = 0.0;
    for (Complex &c : a) {
        c = {g(rng), g(rng)};
        norm += std::norm(c);
    }
    for (Complex &c : a) c /= std::sqrt(norm);
    return StateVector(n, a);
}

Eigen::MatrixXd random_symmetric(std::size_t n, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd j(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index a = 0; a < j.rows(); ++a)
        for (Eigen::Index b = a; b < j.cols(); ++b) j(a, b) = j(b, a) = u(rng);
    return j;
}

double overlap(const oracle::CVec &a, const StateVector &b) { return std::norm(a.dot(to_vec(b))); }

TEST(StateVector, BasicsAndValidation) {
    const StateVector s(3);
    EXPECT_EQ(s.dim(), 8U);
    EXPECT_EQ(s[0], Complex(1.0, 0.0));
    EXPECT_NEAR(s.norm(), 1.0, 1e-15);
    EXPECT_THROW(StateVector(0), std::invalid_argument);
    EXPECT_THROW(StateVector(kMaxQubits + 1), std::invalid_argument);
    EXPECT_THROW(StateVector(2, std::vector<Complex>(3)), std::invalid_argument);
    EXPECT_THROW(StateVector(1, std::vector<Complex>{1.0, 1.0}), std::invalid_argument);
}

TEST(Bitstrings, QubitZeroIsMostSignificant) {
    EXPECT_EQ(bitstring(0b0110, 4), "0110");
    EXPECT_EQ(parse_bitstring("1001"), 9U);
    EXPECT_EQ(qubit_bit(0b1000, 0, 4), 1U);
    EXPECT_EQ(qubit_bit(0b1000, 3, 4), 0U);
    EXPECT_THROW(parse_bitstring("01x"), std::invalid_argument);
}

TEST(IsingBlock, MatchesDenseExponential) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    for (std::size_t n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            const Eigen::MatrixXd j = random_symmetric(n, rng);
            const double phi = angle(rng);
            StateVector s = random_state(n, rng);
            const oracle::CVec expected = oracle::propagator(oracle::ising_hamiltonian(j, phi)) * to_vec(s);
            apply_ising_block(s, j, phi);
            EXPECT_GE(overlap(expected, s), 1.0 - 1e-12);
            EXPECT_NEAR(s.norm(), 1.0, 1e-12);
        }
    }
}

TEST(IsingBlock, FromPhasesUsesModeSum) {
    const ModeDecomposition modes = solve_chain(default_trap(3));
    const PhaseVector phi{Eigen::Vector3d(0.0, 0.2, -0.5)};
    const IsingBlock half = IsingBlock::from_phases(phi, modes, 0.4, 0.5);
    EXPECT_EQ(half.duration_blocks, 0.5);
    EXPECT_EQ(half.axis_phase, 0.4);
    const Eigen::MatrixXd full = modes.mode_matrix.transpose() * phi.phases.asDiagonal() * modes.mode_matrix;
    EXPECT_LT((half.coupling - 0.5 * full).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(GlobalRotation, MatchesDenseExponential) {
    std::mt19937_64 rng(5);
    for (std::size_t n = 1; n <= 4; ++n) {
        StateVector s = random_state(n, rng);
        const double angle = 1.1, phi = -0.6;
        // exp(i (angle / 2) sum sigma_phi)
        const oracle::CVec expected = oracle::propagator(-0.5 * angle * oracle::total_sigma(n, phi)) * to_vec(s);
        apply_global_rotation(s, angle, phi);
        EXPECT_GE(overlap(expected, s), 1.0 - 1e-12);
    }
}

TEST(GlobalRotation, PiOverTwoMapsZZOntoRotatedAxis) {
    // After exp(i pi/4 sum sigma_phi), <z z> equals <sigma_{phi - pi/2} sigma_{phi - pi/2}> before it.
    std::mt19937_64 rng(9);
    const std::size_t n = 2;
    StateVector s = random_state(n, rng);
    const double phi = 0.7;
    const oracle::CMat op = oracle::embed(oracle::sigma_phi(phi - std::numbers::pi / 2), 0, n) *
                            oracle::embed(oracle::sigma_phi(phi - std::numbers::pi / 2), 1, n);
    const double before = to_vec(s).dot(op * to_vec(s)).real();
    apply_global_rotation(s, std::numbers::pi / 2, phi);
    const oracle::CMat zz = oracle::embed(oracle::pauli_z(), 0, n) * oracle::embed(oracle::pauli_z(), 1, n);
    EXPECT_NEAR(to_vec(s).dot(zz * to_vec(s)).real(), before, 1e-12);
}

TEST(ZField, MatchesDenseExponential) {
    std::mt19937_64 rng(3);
    for (std::size_t n = 1; n <= 4; ++n) {
        StateVector s = random_state(n, rng);
        const oracle::CVec expected = oracle::propagator(0.8 * oracle::total_z(n)) * to_vec(s);
        apply_z_field(s, 0.8);
        EXPECT_GE(overlap(expected, s), 1.0 - 1e-12);
    }
}

TEST(Trotter, FirstOrderErrorScalesWithStepSquared) {
    const ModeDecomposition modes = solve_chain(default_trap(4));
    const Eigen::MatrixXd j = 0.1 * CouplingMatrix::ring(4, -1.0).values();
    const double delta = 0.3, t_total = 2.0;
    const oracle::CMat h = oracle::ising_hamiltonian(j, 0.0) + delta * oracle::total_z(4);
    const oracle::CVec exact = oracle::propagator(t_total * h) * oracle::ground(4);
    std::vector<double> err;
    for (std::size_t steps : {16, 32, 64}) {
        const double dt = t_total / static_cast<double>(steps);
        StateVector s(4);
        for (std::size_t k = 0; k < steps; ++k) {
            apply_ising_block(s, dt * j, 0.0);
            apply_z_field(s, delta * dt);
        }
        err.push_back(1.0 - overlap(exact, s));
    }
    EXPECT_GT(err[0] / err[1], 3.5);
    EXPECT_LT(err[0] / err[1], 4.5);
    EXPECT_GT(err[1] / err[2], 3.5);
    EXPECT_LT(err[1] / err[2], 4.5);
}

TrotterSchedule ising_steps(const Eigen::MatrixXd &j, std::size_t count) {
    TrotterSchedule s;
    for (std::size_t k = 0; k < count; ++k) s.steps.emplace_back(IsingBlock{j, 0.0, 1.0});
    for (std::size_t k = 0; k <= count; ++k) s.record_points.push_back(k);
    return s;
}

TEST(RunSchedule, SnapshotsAndTimes) {
    const Eigen::MatrixXd j = 0.2 * CouplingMatrix::ring(3, -1.0).values();
    TrotterSchedule s = ising_steps(j, 3);
    s.steps.insert(s.steps.begin() + 1, ZField{0.1, 0.5});
    const std::vector<Snapshot> out = run_schedule(StateVector(3), s, NoiseModel{}, 100);
    ASSERT_EQ(out.size(), 4U);
    EXPECT_EQ(out[2].time_index, 2U);
    EXPECT_DOUBLE_EQ(out[2].time_blocks, 1.5);
    EXPECT_DOUBLE_EQ(out[3].time_blocks, 2.5);
    for (const Snapshot &snap : out) {
        std::uint64_t sum = 0;
        for (auto c : snap.counts.counts) sum += c;
        EXPECT_EQ(sum, 100U);
    }
}

TEST(RunSchedule, RejectsBadSchedules) {
    TrotterSchedule s = ising_steps(Eigen::MatrixXd::Zero(3, 3), 2);
    EXPECT_THROW(run_schedule(StateVector(4), s, NoiseModel{}, 10), std::invalid_argument);
    s.record_points.push_back(7);
    EXPECT_THROW(run_schedule(StateVector(3), s, NoiseModel{}, 10), std::out_of_range);
    NoiseModel bad;
    bad.t2 = 1e-3;
    EXPECT_THROW(run_schedule(StateVector(3), ising_steps(Eigen::MatrixXd::Zero(3, 3), 1), bad, 10),
                 std::invalid_argument);
}

TEST(RunSchedule, SamplesFollowExactDistribution) {
    const Eigen::MatrixXd j = 0.3 * CouplingMatrix::ring(4, -1.0).values();
    const std::uint64_t shots = 20000;
    NoiseModel noise;
    noise.seed = 99;
    const Snapshot snap = run_schedule(StateVector(4), ising_steps(j, 2), noise, shots).back();
    for (std::size_t k = 0; k < snap.exact.dim(); ++k) {
        const double p = std::norm(snap.exact[k]);
        const double f = static_cast<double>(snap.counts.counts[k]) / static_cast<double>(shots);
        EXPECT_NEAR(f, p, 5.0 * std::sqrt(p * (1 - p) / static_cast<double>(shots)) + 1e-12) << bitstring(k, 4);
    }
}

TEST(RunSchedule, ThreadCountDoesNotChangeCounts) {
    const Eigen::MatrixXd j = 0.3 * CouplingMatrix::ring(4, -1.0).values();
    for (double t2 : {std::numeric_limits<double>::infinity(), 1e-3}) {
        NoiseModel noise;
        noise.seed = 1234;
        noise.t2 = t2;
        noise.block_duration = 1.0 / 7500.0;
        const auto one = run_schedule(StateVector(4), ising_steps(j, 3), noise, 301, 1);
        const auto four = run_schedule(StateVector(4), ising_steps(j, 3), noise, 301, 4);
        for (std::size_t i = 0; i < one.size(); ++i) {
            EXPECT_EQ(one[i].counts.counts, four[i].counts.counts);
        }
        noise.seed = 1235;
        const auto other = run_schedule(StateVector(4), ising_steps(j, 3), noise, 301, 1);
        EXPECT_NE(one.back().counts.counts, other.back().counts.counts);
    }
}

TEST(RunSchedule, DephasingKeepsParityDriveAxisNoiseBreaksIt) {
    const Eigen::MatrixXd j = 0.3 * CouplingMatrix::ring(4, -1.0).values();
    NoiseModel z_only;
    z_only.t2 = 2e-4;
    z_only.drive_axis_t2 = std::numeric_limits<double>::infinity();
    z_only.block_duration = 1.0 / 7500.0;
    z_only.seed = 8;
    auto odd_count = [](const Snapshot &s) {
        std::uint64_t odd = 0;
        for (std::size_t k = 0; k < s.counts.counts.size(); ++k)
            if (std::popcount(k) % 2) odd += s.counts.counts[k];
        return odd;
    };
    EXPECT_EQ(odd_count(run_schedule(StateVector(4), ising_steps(j, 5), z_only, 400).back()), 0U);
    NoiseModel axis = z_only;
    axis.drive_axis_t2 = 2e-4;
    EXPECT_GT(odd_count(run_schedule(StateVector(4), ising_steps(j, 5), axis, 400).back()), 0U);
}

TEST(Substreams, DistinctAndStable) {
    EXPECT_EQ(substream_seed(1, 2, 3), substream_seed(1, 2, 3));
    EXPECT_NE(substream_seed(1, 2, 3), substream_seed(1, 3, 2));
    EXPECT_NE(substream_seed(1, 2), substream_seed(2, 2));
}

TEST(Parity, ExpectationOfBasisStates) {
    EXPECT_DOUBLE_EQ(parity_expectation(StateVector(3)), 1.0);
    StateVector s(2);
    apply_global_rotation(s, std::numbers::pi, 0.0);  // |00> -> |11> up to phase
    EXPECT_NEAR(parity_expectation(s), 1.0, 1e-12);
    StateVector one(1);
    apply_global_rotation(one, std::numbers::pi, 0.0);
    EXPECT_NEAR(parity_expectation(one), -1.0, 1e-12);
}

} // namespace
} // namespace strobe
