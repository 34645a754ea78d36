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

#include "strobe/analysis.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace strobe {

namespace {

double zz_sign(std::size_t k, std::size_t n, std::size_t m, std::size_t n_qubits) {
    return qubit_bit(k, n, n_qubits) == qubit_bit(k, m, n_qubits) ? 1.0 : -1.0;
}

void check_pair(std::size_t n, std::size_t m, std::size_t n_qubits) {
    if (n >= n_qubits || m >= n_qubits || n == m) {
        throw std::out_of_range("zz_correlator: invalid qubit pair");
    }
}

} // namespace

EsPopulations group_by_excitation(const ShotCounts &counts) {
    if (counts.total == 0) {
        throw std::invalid_argument("group_by_excitation: no shots");
    }
    EsPopulations out;
    out.populations.assign(counts.n_qubits + 1, 0.0);
    for (std::size_t k = 0; k < counts.counts.size(); ++k) {
        out.populations[static_cast<std::size_t>(std::popcount(k))] += static_cast<double>(counts.counts[k]);
    }
    for (double &p : out.populations) {
        p /= static_cast<double>(counts.total);
    }
    return out;
}

EsPopulations group_by_excitation(const StateVector &state) {
    EsPopulations out;
    out.populations.assign(state.n_qubits() + 1, 0.0);
    for (std::size_t k = 0; k < state.dim(); ++k) {
        out.populations[static_cast<std::size_t>(std::popcount(k))] += std::norm(state[k]);
    }
    return out;
}

ShotCounts postselect_even(const ShotCounts &counts) {
    ShotCounts out = counts;
    out.total = 0;
    for (std::size_t k = 0; k < out.counts.size(); ++k) {
        if (std::popcount(k) % 2 != 0) {
            out.counts[k] = 0;
        }
        out.total += out.counts[k];
    }
    if (out.total == 0) {
        throw std::runtime_error("postselect_even: every shot landed in an odd excitation subspace");
    }
    return out;
}

EsPopulations postselected_populations(const ShotCounts &counts) {
    EsPopulations out = group_by_excitation(postselect_even(counts));
    out.postselected = true;
    return out;
}

Correlator zz_correlator(const ShotCounts &counts, std::size_t n, std::size_t m) {
    check_pair(n, m, counts.n_qubits);
    if (counts.total == 0) {
        throw std::invalid_argument("zz_correlator: no shots");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < counts.counts.size(); ++k) {
        sum += zz_sign(k, n, m, counts.n_qubits) * static_cast<double>(counts.counts[k]);
    }
    const double shots = static_cast<double>(counts.total);
    Correlator c;
    c.value = sum / shots;
    // Each shot contributes +-1, so the single-shot variance is 1 - C^2.
    c.sigma2 = 2.0 * std::sqrt(std::max(0.0, 1.0 - c.value * c.value) / shots);
    return c;
}

double zz_correlator(const StateVector &state, std::size_t n, std::size_t m) {
    check_pair(n, m, state.n_qubits());
    double sum = 0.0;
    for (std::size_t k = 0; k < state.dim(); ++k) {
        sum += zz_sign(k, n, m, state.n_qubits()) * std::norm(state[k]);
    }
    return sum;
}

std::vector<double> default_phi_grid(std::size_t points) {
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = std::numbers::pi * static_cast<double>(i) / static_cast<double>(points);
    }
    return grid;
}

ParityData parity_experiment(const StateVector &state0, const TrotterSchedule &evolution,
                             const std::vector<double> &phi_grid, std::uint64_t shots,
                             const NoiseModel &noise, unsigned threads) {
    if (phi_grid.empty()) {
        throw std::invalid_argument("parity_experiment: empty phi grid");
    }
    const std::size_t n = state0.n_qubits();
    ParityData data;
    data.n_qubits = n;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            PairFringe f;
            f.n = a;
            f.m = b;
            data.pairs.push_back(f);
        }
    }

    for (std::size_t i = 0; i < phi_grid.size(); ++i) {
        TrotterSchedule sched;
        sched.steps = evolution.steps;
        sched.steps.emplace_back(GlobalRotation{std::numbers::pi / 2.0, phi_grid[i]});
        sched.record_points = {sched.steps.size()};

        NoiseModel point_noise = noise;
        point_noise.seed = substream_seed(noise.seed, 0x70617269747900ULL, i);
        const Snapshot snap = run_schedule(state0, sched, point_noise, shots, threads).front();

        for (PairFringe &f : data.pairs) {
            f.phi.push_back(phi_grid[i]);
            f.exact.push_back(zz_correlator(snap.exact, f.n, f.m));
            if (shots > 0) {
                const Correlator c = zz_correlator(snap.counts, f.n, f.m);
                f.value.push_back(c.value);
                f.sigma2.push_back(c.sigma2);
            } else {
                f.value.push_back(f.exact.back());
                f.sigma2.push_back(0.0);
            }
        }
    }
    return data;
}

FringeFit fit_parity_fringe(const std::vector<double> &phi, const std::vector<double> &value,
                            const std::vector<double> &sigma2) {
    if (phi.size() != value.size() || (!sigma2.empty() && sigma2.size() != phi.size())) {
        throw std::invalid_argument("fit_parity_fringe: input lengths differ");
    }
    if (phi.size() < 3) {
        throw std::invalid_argument("fit_parity_fringe: need at least 3 points");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double s = std::sin(2.0 * phi[i]);
        num += value[i] * s;
        den += s * s;
    }
    if (den < 1e-24) {
        throw std::invalid_argument("fit_parity_fringe: sin(2 phi) vanishes on every grid point");
    }

    FringeFit fit;
    fit.amplitude = num / den;
    double sq = 0.0;
    double var = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double s = std::sin(2.0 * phi[i]);
        const double d = value[i] - fit.amplitude * s;
        sq += d * d;
        if (!sigma2.empty()) {
            var += s * s * sigma2[i] * sigma2[i];
        }
    }
    fit.residual = std::sqrt(sq / static_cast<double>(phi.size()));
    fit.amplitude_sigma2 = std::sqrt(var) / den;
    fit.point_sigma2 = sigma2.empty() ? std::vector<double>(phi.size(), 0.0) : sigma2;
    return fit;
}

FringeFit fit_parity_fringe(const PairFringe &fringe) {
    FringeFit fit = fit_parity_fringe(fringe.phi, fringe.value, fringe.sigma2);
    fit.n = fringe.n;
    fit.m = fringe.m;
    return fit;
}

CouplingMatrix reconstruct_matrix(const std::vector<FringeFit> &fits, std::size_t n) {
    CouplingMatrix j(n);
    std::vector<bool> seen(n * n, false);
    for (const FringeFit &f : fits) {
        if (f.n >= n || f.m >= n || f.n == f.m) {
            throw std::out_of_range("reconstruct_matrix: fit refers to an invalid pair");
        }
        j.set(f.n, f.m, f.amplitude);
        seen[f.n * n + f.m] = seen[f.m * n + f.n] = true;
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (!seen[a * n + b]) {
                throw std::invalid_argument("reconstruct_matrix: missing fit for pair (" +
                                            std::to_string(a + 1) + "," + std::to_string(b + 1) + ")");
            }
        }
    }
    return j;
}

double effective_coupling(const CouplingMatrix &j, double t) {
    if (!(t > 0.0)) {
        throw std::invalid_argument("effective_coupling: evolution time must be positive");
    }
    const std::size_t n = j.size();
    if (n < 2) {
        throw std::invalid_argument("effective_coupling: need at least two sites");
    }
    double sum = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        sum += std::abs(j(a, (a + 1) % n));
    }
    return sum / static_cast<double>(n) / t;
}

double excitation_estimate(double delta, double omega_eff, double scale) {
    if (!(omega_eff > 0.0)) {
        throw std::invalid_argument("excitation_estimate: effective coupling must be positive");
    }
    const double ratio = delta / (4.0 * omega_eff);
    const double g = 1.0 + ratio * ratio;
    const double s = std::sin(3.0 * omega_eff * std::sqrt(g));
    return scale * s * s / g;
}

double excitation_scale(double measured_at_zero, double omega_eff) {
    const double base = excitation_estimate(0.0, omega_eff);
    if (base == 0.0) {
        throw std::invalid_argument("excitation_scale: estimate vanishes at delta = 0");
    }
    return measured_at_zero / base;
}

} // namespace strobe
