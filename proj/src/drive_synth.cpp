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

#include "strobe/drive_synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace strobe {

namespace {

using cplx = std::complex<double>;

// Force per unit (eta Omega_0 amp) such that the pair structure yields
// exactly |Phi| = kappa eta^2 r^2 Omega_0^2 / xi^2 at T = 2 pi / xi.
double force_scale(double calib_const) {
    return std::sqrt(3.0 * calib_const / (8.0 * std::numbers::pi));
}

double wrap_phase(double phi) { return std::remainder(phi, 2.0 * std::numbers::pi); }

// int_0^T e^{i w t} dt
cplx exp_integral(double w, double t) {
    if (std::abs(w) * t < 1e-12) {
        return {t, 0.0};
    }
    return (std::exp(cplx(0.0, w * t)) - 1.0) / cplx(0.0, w);
}

struct Pair {
    double offset_hz;
    double amp;
    double red_phase;
    double blue_phase;
};

std::vector<Pair> collect_pairs(const ToneTable &table) {
    // Keyed by the rounded offset; red and blue of one pair share it.
    std::map<long long, Pair> by_offset;
    std::map<long long, int> seen;
    const double quantum = std::max(table.xi_hz * 1e-6, 1e-9);
    for (const Tone &tone : table.tones) {
        const double off = tone.freq_hz - table.carrier_hz;
        const auto key = std::llround(std::abs(off) / quantum);
        auto [it, inserted] = by_offset.try_emplace(key, Pair{std::abs(off), tone.amp, 0.0, 0.0});
        if (!inserted && std::abs(it->second.amp - tone.amp) > 1e-12) {
            throw std::invalid_argument("tone table: red and blue tones of a pair differ in amplitude");
        }
        (off > 0.0 ? it->second.blue_phase : it->second.red_phase) = tone.phase;
        seen[key] |= off > 0.0 ? 2 : 1;
    }
    std::vector<Pair> out;
    for (const auto &[key, pair] : by_offset) {
        if (seen[key] != 3) {
            throw std::invalid_argument("tone table: unpaired tone at carrier offset " +
                                        std::to_string(pair.offset_hz) + " Hz");
        }
        out.push_back(pair);
    }
    return out;
}

} // namespace

ToneTable build_tone_table(const DriveAmplitudes &amps, const ModeDecomposition &modes,
                           double xi_hz, double carrier_hz, double block_phase) {
    if (!(xi_hz > 0.0)) {
        throw std::invalid_argument("build_tone_table: xi must be positive");
    }
    const std::size_t n = modes.size();
    if (amps.rel_amps.size() != n || amps.detuning_signs.size() != n) {
        throw std::invalid_argument("build_tone_table: amplitude vector does not match mode count");
    }

    ToneTable table;
    table.carrier_hz = carrier_hz;
    table.xi_hz = xi_hz;
    table.block_duration_s = 1.0 / xi_hz;
    table.rabi_hz = amps.rabi_freq / kTwoPi;
    table.calib_const = amps.calib_const;

    const double pi = std::numbers::pi;
    for (std::size_t j = 0; j < n; ++j) {
        const double r = amps.rel_amps[j];
        if (r < 0.0 || r > 1.0) {
            throw std::invalid_argument("build_tone_table: relative amplitudes must lie in [0, 1]");
        }
        if (r == 0.0) {
            continue;
        }
        const double nu_hz = modes.freqs(static_cast<Eigen::Index>(j)) / kTwoPi;
        const double s = amps.detuning_signs[j];
        for (const auto &[multiple, extra] : {std::pair{1.0, 0.0}, std::pair{3.0, pi}}) {
            const double offset = nu_hz + s * multiple * xi_hz;
            if (!(offset > 0.0)) {
                throw std::invalid_argument("build_tone_table: sideband tone crosses the carrier");
            }
            const double phase = wrap_phase(block_phase + extra);
            table.tones.push_back({carrier_hz - offset, r, phase});
            table.tones.push_back({carrier_hz + offset, r, phase});
        }
    }

    std::vector<double> freqs;
    for (const Tone &t : table.tones) {
        freqs.push_back(t.freq_hz);
    }
    std::sort(freqs.begin(), freqs.end());
    for (std::size_t k = 1; k < freqs.size(); ++k) {
        if (freqs[k] - freqs[k - 1] < xi_hz / 100.0) {
            std::ostringstream msg;
            msg << "build_tone_table: tones at " << freqs[k - 1] << " Hz and " << freqs[k]
                << " Hz collide; mode spacing too dense for xi = " << xi_hz << " Hz";
            throw ToneCollision(msg.str());
        }
    }
    return table;
}

std::vector<double> phase_ramp_schedule(double delta, std::size_t n_blocks, double block_duration) {
    if (n_blocks == 0) {
        throw std::invalid_argument("phase_ramp_schedule: need at least one block");
    }
    std::vector<double> out(n_blocks);
    for (std::size_t k = 0; k < n_blocks; ++k) {
        out[k] = -2.0 * delta * block_duration * static_cast<double>(k);
    }
    return out;
}

std::vector<ModeForce> mode_forces(const ToneTable &table, const ModeDecomposition &modes,
                                   std::size_t k) {
    if (k >= modes.size()) {
        throw std::out_of_range("mode_forces: mode index out of range");
    }
    const std::vector<Pair> pairs = collect_pairs(table);
    if (pairs.empty()) {
        return {};
    }
    const double rabi = table.rabi_hz * kTwoPi;
    const double eta = modes.lamb_dicke(static_cast<Eigen::Index>(k));
    const double nu = modes.freqs(static_cast<Eigen::Index>(k));
    const double scale = force_scale(table.calib_const) * eta * rabi;

    const double reference = 0.5 * (pairs.front().blue_phase + pairs.front().red_phase);
    std::vector<ModeForce> forces;
    forces.reserve(pairs.size());
    for (const Pair &p : pairs) {
        const double spin = 0.5 * (p.blue_phase + p.red_phase);
        const double motion = 0.5 * (p.blue_phase - p.red_phase);
        const double axis = std::cos(spin - reference);
        if (std::abs(std::abs(axis) - 1.0) > 1e-9) {
            throw std::invalid_argument("tone table: pairs in one block drive different spin axes");
        }
        const double offset = kTwoPi * p.offset_hz;
        std::size_t nearest = 0;
        for (std::size_t j = 1; j < modes.size(); ++j) {
            if (std::abs(offset - modes.freqs(static_cast<Eigen::Index>(j))) <
                std::abs(offset - modes.freqs(static_cast<Eigen::Index>(nearest)))) {
                nearest = j;
            }
        }
        forces.push_back({scale * p.amp * axis * std::polar(1.0, motion), offset - nu, nearest});
    }
    return forces;
}

std::complex<double> force_displacement(const std::vector<ModeForce> &forces, double t) {
    cplx alpha = 0.0;
    for (const ModeForce &f : forces) {
        alpha += f.amplitude * exp_integral(f.detuning, t);
    }
    return alpha;
}

double force_phase(const std::vector<ModeForce> &forces, double t) {
    // int_0^T dt int_0^t dt' c_a conj(c_b) e^{i d_a t} e^{-i d_b t'}
    cplx total = 0.0;
    for (const ModeForce &a : forces) {
        for (const ModeForce &b : forces) {
            const cplx cc = a.amplitude * std::conj(b.amplitude);
            cplx inner;
            if (std::abs(b.detuning) * t < 1e-12) {
                // int_0^T t e^{i d_a t} dt
                const double w = a.detuning;
                if (std::abs(w) * t < 1e-12) {
                    inner = 0.5 * t * t;
                } else {
                    const cplx e = std::exp(cplx(0.0, w * t));
                    inner = t * e / cplx(0.0, w) + (e - 1.0) / (w * w);
                }
            } else {
                inner = (exp_integral(a.detuning - b.detuning, t) - exp_integral(a.detuning, t)) /
                        cplx(0.0, -b.detuning);
            }
            total += cc * inner;
        }
    }
    return total.imag();
}

std::vector<LoopClosure> verify_loop_closure(const ToneTable &table, const ModeDecomposition &modes,
                                             double duration_s) {
    const double t = duration_s > 0.0 ? duration_s : table.block_duration_s;
    std::vector<LoopClosure> out(modes.size());
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const std::vector<ModeForce> all = mode_forces(table, modes, k);
        std::vector<ModeForce> own;
        std::copy_if(all.begin(), all.end(), std::back_inserter(own),
                     [k](const ModeForce &f) { return f.nearest_mode == k; });
        out[k].displacement = std::abs(force_displacement(own, t));
        out[k].phase = force_phase(own, t);
        out[k].displacement_all = std::abs(force_displacement(all, t));
        out[k].phase_all = force_phase(all, t);
    }
    return out;
}

} // namespace strobe
