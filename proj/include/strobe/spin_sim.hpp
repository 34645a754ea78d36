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
 * Dense state-vector simulation of stroboscopic global-drive evolution.
 *
 * Basis index k encodes qubit 1 in the most significant bit; |0...0> is
 * index 0. Qubit n has sigma_z eigenvalue z_n = +1 when its bit is 0.
 *
 * Conventions:
 *   Ising block       exp(-i sum_{n,m} J_nm sigma_phi^n sigma_phi^m)
 *   global rotation   prod_n exp(i (angle / 2) sigma_phi^n)
 *   z field           exp(-i angle sum_n sigma_z^n)
 * with sigma_phi = cos(phi) sigma_x + sin(phi) sigma_y.
 */

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "strobe/coupling_compiler.hpp"
#include "strobe/ion_crystal.hpp"

namespace strobe {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 16;

class StateVector {
  public:
    StateVector() = default;
    /// |0...0> on n qubits.
    explicit StateVector(std::size_t n_qubits);
    StateVector(std::size_t n_qubits, std::vector<Complex> amps);

    [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }
    [[nodiscard]] const std::vector<Complex> &amps() const { return amps_; }
    [[nodiscard]] std::vector<Complex> &amps() { return amps_; }
    [[nodiscard]] Complex operator[](std::size_t k) const { return amps_[k]; }

    [[nodiscard]] double norm() const;
    [[nodiscard]] std::vector<double> probabilities() const;
    /// <this|other>
    [[nodiscard]] Complex inner(const StateVector &other) const;

  private:
    std::size_t n_qubits_ = 0;
    std::vector<Complex> amps_;
};

/// |<a|b>|^2
double fidelity(const StateVector &a, const StateVector &b);

/// Bit of qubit q (0-based, qubit 0 = most significant) in basis index k.
inline unsigned qubit_bit(std::size_t k, std::size_t q, std::size_t n_qubits) {
    return static_cast<unsigned>((k >> (n_qubits - 1 - q)) & 1U);
}

/// "0110"-style label of basis index k.
std::string bitstring(std::size_t k, std::size_t n_qubits);
std::size_t parse_bitstring(const std::string &bits);

struct IsingBlock {
    Eigen::MatrixXd coupling;  ///< full symmetric matrix, diagonal included
    double axis_phase = 0.0;
    double duration_blocks = 1.0;  ///< elapsed drive time, in units of 2 pi / xi

    /// Coupling M^T diag(fraction * Phi) M for a (possibly partial) block.
    static IsingBlock from_phases(const PhaseVector &phases, const ModeDecomposition &modes,
                                  double axis_phase = 0.0, double fraction = 1.0,
                                  bool use_effective = false);
};

struct GlobalRotation {
    double angle = 0.0;
    double axis_phase = 0.0;
};

struct ZField {
    double angle = 0.0;  ///< delta * t
    double duration_blocks = 0.0;
};

using ScheduleStep = std::variant<IsingBlock, GlobalRotation, ZField>;

struct TrotterSchedule {
    std::vector<ScheduleStep> steps;
    /// Step boundaries to snapshot: r means "after the first r steps".
    std::vector<std::size_t> record_points;

    /// Throws if a step's dimension differs from n_qubits or a record point
    /// lies beyond the last step.
    void validate(std::size_t n_qubits) const;
};

struct NoiseModel {
    static constexpr double kInfinite = std::numeric_limits<double>::infinity();

    double t2 = kInfinite;  ///< seconds; z-phase kicks
    /// Seconds; kicks about the drive axis from residual spin-motion
    /// entanglement. NaN means "same as t2".
    double drive_axis_t2 = std::numeric_limits<double>::quiet_NaN();
    double block_duration = 0.0;  ///< seconds per full block
    std::uint64_t seed = 0;

    [[nodiscard]] double axis_time() const;
    [[nodiscard]] bool enabled() const;
    void validate() const;
};

struct ShotCounts {
    std::size_t n_qubits = 0;
    std::vector<std::uint64_t> counts;  ///< indexed by basis state
    std::uint64_t total = 0;
    std::uint64_t seed = 0;
};

struct Snapshot {
    std::size_t time_index = 0;  ///< step boundary
    double time_blocks = 0.0;    ///< elapsed drive time in blocks
    ShotCounts counts;
    StateVector exact;
};

void apply_ising_block(StateVector &state, const Eigen::MatrixXd &coupling, double axis_phase);
void apply_ising_block(StateVector &state, const PhaseVector &phases, const ModeDecomposition &modes,
                       double axis_phase);
void apply_global_rotation(StateVector &state, double angle, double axis_phase);
void apply_z_field(StateVector &state, double angle);
/// Noise-free application of one schedule step.
void apply_step(StateVector &state, const ScheduleStep &step);

/// Deterministic 64-bit stream seed derived from (seed, stream indices).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/**
 * Runs a schedule from state0 and returns one snapshot per record point.
 * With noise enabled, every shot is an independent noisy trajectory drawn
 * from its own substream; otherwise all shots are drawn from the exact
 * distribution. Results do not depend on `threads`.
 */
std::vector<Snapshot> run_schedule(const StateVector &state0, const TrotterSchedule &schedule,
                                   const NoiseModel &noise, std::uint64_t shots,
                                   unsigned threads = 1);

/// <prod_n sigma_z^n>
double parity_expectation(const StateVector &state);

} // namespace strobe
