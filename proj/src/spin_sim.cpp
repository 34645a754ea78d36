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

#include "strobe/spin_sim.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace strobe {

namespace {

using Gate = std::array<Complex, 4>;  // row-major 2x2

void apply_single(std::vector<Complex> &amps, std::size_t n_qubits, std::size_t q, const Gate &g) {
    const std::size_t stride = std::size_t{1} << (n_qubits - 1 - q);
    const std::size_t dim = amps.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t k = base; k < base + stride; ++k) {
            const Complex a0 = amps[k];
            const Complex a1 = amps[k + stride];
            amps[k] = g[0] * a0 + g[1] * a1;
            amps[k + stride] = g[2] * a0 + g[3] * a1;
        }
    }
}

void apply_all(std::vector<Complex> &amps, std::size_t n_qubits, const Gate &g) {
    for (std::size_t q = 0; q < n_qubits; ++q) {
        apply_single(amps, n_qubits, q, g);
    }
}

// exp(-i (theta / 2) sigma_phi)
Gate axis_kick(double theta, double phi) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    return {Complex(c, 0.0), Complex(0.0, -s) * std::polar(1.0, -phi),
            Complex(0.0, -s) * std::polar(1.0, phi), Complex(c, 0.0)};
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double uniform01(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t sample_index(const std::vector<double> &cdf, double u) {
    const double target = u * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::vector<double> cumulative(const StateVector &state) {
    std::vector<double> cdf(state.dim());
    double acc = 0.0;
    for (std::size_t k = 0; k < state.dim(); ++k) {
        acc += std::norm(state[k]);
        cdf[k] = acc;
    }
    return cdf;
}

double step_duration(const ScheduleStep &step) {
    if (const auto *b = std::get_if<IsingBlock>(&step)) {
        return b->duration_blocks;
    }
    if (const auto *z = std::get_if<ZField>(&step)) {
        return z->duration_blocks;
    }
    return 0.0;
}

double step_axis(const ScheduleStep &step) {
    if (const auto *b = std::get_if<IsingBlock>(&step)) {
        return b->axis_phase;
    }
    return 0.0;
}

template <typename Fn>
void parallel_for(std::uint64_t count, unsigned threads, Fn &&fn) {
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(count, 1))));
    if (threads == 1) {
        fn(0U, std::uint64_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t begin = std::min<std::uint64_t>(count, t * chunk);
        const std::uint64_t end = std::min<std::uint64_t>(count, begin + chunk);
        pool.emplace_back([&fn, t, begin, end] { fn(t, begin, end); });
    }
    for (auto &th : pool) {
        th.join();
    }
}

} // namespace

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits == 0 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("StateVector: qubit count must be in [1, 16]");
    }
    amps_.assign(std::size_t{1} << n_qubits, Complex(0.0, 0.0));
    amps_[0] = 1.0;
}

StateVector::StateVector(std::size_t n_qubits, std::vector<Complex> amps)
    : n_qubits_(n_qubits), amps_(std::move(amps)) {
    if (n_qubits == 0 || n_qubits > kMaxQubits || amps_.size() != (std::size_t{1} << n_qubits)) {
        throw std::invalid_argument("StateVector: amplitude count must be 2^n_qubits");
    }
    if (std::abs(norm() - 1.0) > 1e-10) {
        throw std::invalid_argument("StateVector: amplitudes must be normalized");
    }
}

double StateVector::norm() const {
    double s = 0.0;
    for (const Complex &a : amps_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(amps_.size());
    std::transform(amps_.begin(), amps_.end(), p.begin(), [](const Complex &a) { return std::norm(a); });
    return p;
}

Complex StateVector::inner(const StateVector &other) const {
    if (other.dim() != dim()) {
        throw std::invalid_argument("StateVector::inner: dimension mismatch");
    }
    Complex s = 0.0;
    for (std::size_t k = 0; k < amps_.size(); ++k) {
        s += std::conj(amps_[k]) * other.amps_[k];
    }
    return s;
}

double fidelity(const StateVector &a, const StateVector &b) { return std::norm(a.inner(b)); }

std::string bitstring(std::size_t k, std::size_t n_qubits) {
    std::string s(n_qubits, '0');
    for (std::size_t q = 0; q < n_qubits; ++q) {
        if (qubit_bit(k, q, n_qubits) != 0U) {
            s[q] = '1';
        }
    }
    return s;
}

std::size_t parse_bitstring(const std::string &bits) {
    std::size_t k = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("parse_bitstring: invalid character in '" + bits + "'");
        }
        k = (k << 1) | static_cast<std::size_t>(c == '1');
    }
    return k;
}

IsingBlock IsingBlock::from_phases(const PhaseVector &phases, const ModeDecomposition &modes,
                                   double axis_phase, double fraction, bool use_effective) {
    PhaseVector scaled{phases.phases * fraction};
    IsingBlock block;
    block.coupling =
        full_coupling(scaled, use_effective ? modes.effective_matrix : modes.mode_matrix);
    block.coupling = 0.5 * (block.coupling + block.coupling.transpose());
    block.axis_phase = axis_phase;
    block.duration_blocks = fraction;
    return block;
}

void TrotterSchedule::validate(std::size_t n_qubits) const {
    for (const ScheduleStep &step : steps) {
        if (const auto *b = std::get_if<IsingBlock>(&step)) {
            if (static_cast<std::size_t>(b->coupling.rows()) != n_qubits ||
                static_cast<std::size_t>(b->coupling.cols()) != n_qubits) {
                throw std::invalid_argument("TrotterSchedule: Ising block dimension differs from state");
            }
        }
        if (step_duration(step) < 0.0) {
            throw std::invalid_argument("TrotterSchedule: negative step duration");
        }
    }
    for (std::size_t r : record_points) {
        if (r > steps.size()) {
            throw std::out_of_range("TrotterSchedule: record point " + std::to_string(r) +
                                    " beyond " + std::to_string(steps.size()) + " steps");
        }
    }
}

double NoiseModel::axis_time() const { return std::isnan(drive_axis_t2) ? t2 : drive_axis_t2; }

bool NoiseModel::enabled() const { return std::isfinite(t2) || std::isfinite(axis_time()); }

void NoiseModel::validate() const {
    if (!(t2 > 0.0) || !(axis_time() > 0.0)) {
        throw std::invalid_argument("NoiseModel: coherence times must be positive");
    }
    if (enabled() && !(block_duration > 0.0)) {
        throw std::invalid_argument("NoiseModel: block_duration must be positive when noise is on");
    }
}

void apply_ising_block(StateVector &state, const Eigen::MatrixXd &coupling, double axis_phase) {
    const std::size_t n = state.n_qubits();
    if (static_cast<std::size_t>(coupling.rows()) != n || static_cast<std::size_t>(coupling.cols()) != n) {
        throw std::invalid_argument("apply_ising_block: coupling dimension differs from state");
    }
    // W maps the sigma_phi eigenbasis onto the computational basis (+1 -> |0>).
    const double r = 1.0 / std::sqrt(2.0);
    const Complex e = std::polar(1.0, -axis_phase);
    const Gate to_axis{Complex(r, 0.0), r * e, Complex(r, 0.0), -r * e};
    const Gate from_axis{Complex(r, 0.0), Complex(r, 0.0), r * std::conj(e), -r * std::conj(e)};

    auto &amps = state.amps();
    apply_all(amps, n, to_axis);
    std::vector<double> x(n);
    for (std::size_t k = 0; k < amps.size(); ++k) {
        for (std::size_t q = 0; q < n; ++q) {
            x[q] = qubit_bit(k, q, n) != 0U ? -1.0 : 1.0;
        }
        double energy = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            double row = 0.0;
            for (std::size_t b = 0; b < n; ++b) {
                row += coupling(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) * x[b];
            }
            energy += x[a] * row;
        }
        amps[k] *= std::polar(1.0, -energy);
    }
    apply_all(amps, n, from_axis);
}

void apply_ising_block(StateVector &state, const PhaseVector &phases, const ModeDecomposition &modes,
                       double axis_phase) {
    apply_ising_block(state, IsingBlock::from_phases(phases, modes, axis_phase).coupling, axis_phase);
}

void apply_global_rotation(StateVector &state, double angle, double axis_phase) {
    // exp(i (angle / 2) sigma_phi) = exp(-i (-angle / 2) sigma_phi)
    apply_all(state.amps(), state.n_qubits(), axis_kick(-angle, axis_phase));
}

void apply_z_field(StateVector &state, double angle) {
    const std::size_t n = state.n_qubits();
    auto &amps = state.amps();
    for (std::size_t k = 0; k < amps.size(); ++k) {
        const double z_sum = static_cast<double>(n) - 2.0 * std::popcount(k);
        amps[k] *= std::polar(1.0, -angle * z_sum);
    }
}

void apply_step(StateVector &state, const ScheduleStep &step) {
    std::visit(
        [&state](const auto &s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IsingBlock>) {
                apply_ising_block(state, s.coupling, s.axis_phase);
            } else if constexpr (std::is_same_v<T, GlobalRotation>) {
                apply_global_rotation(state, s.angle, s.axis_phase);
            } else {
                apply_z_field(state, s.angle);
            }
        },
        step);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0xD1B54A32D192ED03ULL));
}

double parity_expectation(const StateVector &state) {
    double p = 0.0;
    for (std::size_t k = 0; k < state.dim(); ++k) {
        p += (std::popcount(k) % 2 == 0 ? 1.0 : -1.0) * std::norm(state[k]);
    }
    return p;
}

std::vector<Snapshot> run_schedule(const StateVector &state0, const TrotterSchedule &schedule,
                                   const NoiseModel &noise, std::uint64_t shots, unsigned threads) {
    const std::size_t n = state0.n_qubits();
    schedule.validate(n);
    noise.validate();
    if (shots == 0 && noise.enabled()) {
        throw std::invalid_argument("run_schedule: noisy runs need at least one shot");
    }

    const std::size_t n_records = schedule.record_points.size();
    std::vector<Snapshot> out(n_records);

    // Boundary r -> list of record slots.
    std::vector<std::vector<std::size_t>> slots(schedule.steps.size() + 1);
    for (std::size_t i = 0; i < n_records; ++i) {
        slots[schedule.record_points[i]].push_back(i);
    }

    StateVector exact = state0;
    double elapsed = 0.0;
    for (std::size_t r = 0; r <= schedule.steps.size(); ++r) {
        for (std::size_t i : slots[r]) {
            out[i].time_index = r;
            out[i].time_blocks = elapsed;
            out[i].exact = exact;
            out[i].counts.n_qubits = n;
            out[i].counts.counts.assign(exact.dim(), 0);
            out[i].counts.total = shots;
            out[i].counts.seed = noise.seed;
        }
        if (r < schedule.steps.size()) {
            apply_step(exact, schedule.steps[r]);
            elapsed += step_duration(schedule.steps[r]);
        }
    }
    if (shots == 0) {
        return out;
    }

    const unsigned workers = std::max(1U, threads);
    // Per-worker tallies, summed after the loop.
    std::vector<std::vector<std::vector<std::uint64_t>>> tallies(
        workers, std::vector<std::vector<std::uint64_t>>(n_records, std::vector<std::uint64_t>(exact.dim(), 0)));

    if (!noise.enabled()) {
        std::vector<std::vector<double>> cdfs;
        cdfs.reserve(n_records);
        for (const Snapshot &s : out) {
            cdfs.push_back(cumulative(s.exact));
        }
        parallel_for(shots, workers, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
            for (std::uint64_t shot = begin; shot < end; ++shot) {
                std::mt19937_64 rng(substream_seed(noise.seed, shot));
                for (std::size_t i = 0; i < n_records; ++i) {
                    ++tallies[w][i][sample_index(cdfs[i], uniform01(rng))];
                }
            }
        });
    } else {
        const double z_var_per_block = 2.0 * noise.block_duration / noise.t2;
        const double axis_var_per_block = 2.0 * noise.block_duration / noise.axis_time();
        parallel_for(shots, workers, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
            for (std::uint64_t shot = begin; shot < end; ++shot) {
                std::mt19937_64 rng(substream_seed(noise.seed, shot));
                std::normal_distribution<double> gauss(0.0, 1.0);
                StateVector state = state0;
                for (std::size_t r = 0; r <= schedule.steps.size(); ++r) {
                    for (std::size_t i : slots[r]) {
                        ++tallies[w][i][sample_index(cumulative(state), uniform01(rng))];
                    }
                    if (r == schedule.steps.size()) {
                        break;
                    }
                    const ScheduleStep &step = schedule.steps[r];
                    apply_step(state, step);
                    const double dur = step_duration(step);
                    if (dur <= 0.0) {
                        continue;
                    }
                    const double z_sd = std::sqrt(z_var_per_block * dur);
                    const double axis_sd = std::sqrt(axis_var_per_block * dur);
                    for (std::size_t q = 0; q < n; ++q) {
                        const double z_kick = z_sd * gauss(rng);
                        const double axis_kick_angle = axis_sd * gauss(rng);
                        if (z_kick != 0.0) {
                            apply_single(state.amps(), n, q,
                                         {std::polar(1.0, -0.5 * z_kick), 0.0, 0.0, std::polar(1.0, 0.5 * z_kick)});
                        }
                        if (axis_kick_angle != 0.0) {
                            apply_single(state.amps(), n, q, axis_kick(axis_kick_angle, step_axis(step)));
                        }
                    }
                }
            }
        });
    }

    for (std::size_t i = 0; i < n_records; ++i) {
        for (unsigned w = 0; w < workers; ++w) {
            for (std::size_t k = 0; k < exact.dim(); ++k) {
                out[i].counts.counts[k] += tallies[w][i][k];
            }
        }
    }
    return out;
}

} // namespace strobe
