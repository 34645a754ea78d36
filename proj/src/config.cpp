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

#include "strobe/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "strobe/spin_sim.hpp"

namespace strobe {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(trim(item));
    }
    return out;
}

bool parse_double(const std::string &text, double &out) {
    const std::string t = trim(text);
    if (t == "inf" || t == "+inf") {
        out = std::numeric_limits<double>::infinity();
        return true;
    }
    const char *end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, out);
    return ec == std::errc() && ptr == end && !t.empty();
}

std::string fmt_double(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (std::isnan(v)) {
        return "nan";
    }
    return fmt::format("{:.17g}", v);
}

std::string fmt_list(const std::vector<double> &v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + fmt_double(v[i]);
    }
    return out;
}

const std::vector<std::string> &known_keys() {
    static const std::vector<std::string> keys{
        "trap.n_ions",          "trap.axial_freq_hz",    "trap.ion_mass_amu",
        "trap.wavevector_per_m", "trap.beam_weights",    "target.model",
        "target.matrix",        "target.scale",          "target.use_effective",
        "target.max_residual",  "drive.xi_hz",           "drive.carrier_hz",
        "drive.calib_const",    "sim.blocks",            "sim.half_steps",
        "sim.shots",            "sim.seed",              "sim.t2_s",
        "sim.drive_axis_t2_s",  "sim.threads",           "parity.blocks",
        "parity.phi_points",    "transverse.delta_over_omega", "transverse.blocks",
        "output_dir"};
    return keys;
}

} // namespace

KeyValueFile KeyValueFile::parse(std::istream &in, const std::string &source) {
    KeyValueFile kv;
    kv.source_ = source;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(fmt::format("{}:{}: expected 'key = value'", source, lineno));
        }
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) {
            throw ConfigError(fmt::format("{}:{}: empty key", source, lineno));
        }
        if (kv.entries_.count(key) != 0) {
            throw ConfigError(fmt::format("{}:{}: duplicate key '{}' (first on line {})", source, lineno,
                                          key, kv.entries_[key].line));
        }
        kv.entries_[key] = {trim(t.substr(eq + 1)), lineno};
    }
    return kv;
}

KeyValueFile KeyValueFile::parse_string(const std::string &text, const std::string &source) {
    std::istringstream in(text);
    return parse(in, source);
}

const std::string &KeyValueFile::raw(const std::string &key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw ConfigError(fmt::format("{}: missing key '{}'", source_, key));
    }
    return it->second.value;
}

int KeyValueFile::line(const std::string &key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
}

std::vector<std::string> KeyValueFile::keys() const {
    std::vector<std::string> out;
    for (const auto &[k, v] : entries_) {
        out.push_back(k);
    }
    return out;
}

void KeyValueFile::fail(const std::string &key, const std::string &what) const {
    throw ConfigError(fmt::format("{}:{}: key '{}': {}", source_, line(key), key, what));
}

double KeyValueFile::get_double(const std::string &key) const {
    double v = 0.0;
    if (!parse_double(raw(key), v)) {
        fail(key, "expected a number, got '" + raw(key) + "'");
    }
    return v;
}

std::uint64_t KeyValueFile::get_uint(const std::string &key) const {
    const std::string &t = raw(key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        fail(key, "expected a non-negative integer, got '" + t + "'");
    }
    return v;
}

bool KeyValueFile::get_bool(const std::string &key) const {
    const std::string &t = raw(key);
    if (t == "true" || t == "1" || t == "yes") {
        return true;
    }
    if (t == "false" || t == "0" || t == "no") {
        return false;
    }
    fail(key, "expected true or false, got '" + t + "'");
}

std::vector<double> KeyValueFile::get_doubles(const std::string &key) const {
    std::vector<double> out;
    for (const std::string &item : split_list(raw(key))) {
        double v = 0.0;
        if (!parse_double(item, v)) {
            fail(key, "expected a comma-separated list of numbers, bad entry '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

TrapConfig default_trap(std::size_t n_ions) {
    TrapConfig t;
    t.n_ions = n_ions;
    t.axial_freq = kTwoPi * 1.0e6;
    t.ion_mass = 87.9056 * kAtomicMassUnit;
    t.wavevector = kTwoPi / 674.0e-9 * std::cos(kTwoPi / 8.0);
    return t;
}

ExperimentConfig ExperimentConfig::from_keys(const KeyValueFile &kv) {
    for (const std::string &key : kv.keys()) {
        const auto &known = known_keys();
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(fmt::format("{}:{}: unknown key '{}'", kv.source(), kv.line(key), key));
        }
    }

    ExperimentConfig c;
    const std::size_t n = kv.has("trap.n_ions") ? kv.get_uint("trap.n_ions") : 4;
    c.trap = default_trap(n);
    if (kv.has("trap.axial_freq_hz")) {
        c.trap.axial_freq = kTwoPi * kv.get_double("trap.axial_freq_hz");
    }
    if (kv.has("trap.ion_mass_amu")) {
        c.trap.ion_mass = kv.get_double("trap.ion_mass_amu") * kAtomicMassUnit;
    }
    if (kv.has("trap.wavevector_per_m")) {
        c.trap.wavevector = kv.get_double("trap.wavevector_per_m");
    }
    if (kv.has("trap.beam_weights")) {
        c.trap.beam_weights = kv.get_doubles("trap.beam_weights");
    }

    if (kv.has("target.model")) {
        c.target_model = kv.raw("target.model");
    }
    if (kv.has("target.matrix")) {
        const std::vector<double> vals = kv.get_doubles("target.matrix");
        if (vals.size() != n * n) {
            throw ConfigError(fmt::format("{}:{}: key 'target.matrix': expected {} entries (row-major {}x{}), got {}",
                                          kv.source(), kv.line("target.matrix"), n * n, n, n, vals.size()));
        }
        c.target_matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t k = 0; k < vals.size(); ++k) {
            c.target_matrix(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) = vals[k];
        }
    }
    if (kv.has("target.scale")) c.target_scale = kv.get_double("target.scale");
    if (kv.has("target.use_effective")) c.use_effective = kv.get_bool("target.use_effective");
    if (kv.has("target.max_residual")) c.max_residual = kv.get_double("target.max_residual");
    if (kv.has("drive.xi_hz")) c.xi_hz = kv.get_double("drive.xi_hz");
    if (kv.has("drive.carrier_hz")) c.carrier_hz = kv.get_double("drive.carrier_hz");
    if (kv.has("drive.calib_const")) c.calib_const = kv.get_double("drive.calib_const");
    if (kv.has("sim.blocks")) c.blocks = kv.get_uint("sim.blocks");
    if (kv.has("sim.half_steps")) c.half_steps = kv.get_bool("sim.half_steps");
    if (kv.has("sim.shots")) c.shots = kv.get_uint("sim.shots");
    if (kv.has("sim.seed")) c.seed = kv.get_uint("sim.seed");
    if (kv.has("sim.t2_s")) c.t2_s = kv.get_double("sim.t2_s");
    if (kv.has("sim.drive_axis_t2_s")) c.drive_axis_t2_s = kv.get_double("sim.drive_axis_t2_s");
    if (kv.has("sim.threads")) c.threads = static_cast<unsigned>(kv.get_uint("sim.threads"));
    if (kv.has("parity.blocks")) c.parity_blocks = kv.get_uint("parity.blocks");
    if (kv.has("parity.phi_points")) c.phi_points = kv.get_uint("parity.phi_points");
    if (kv.has("transverse.delta_over_omega")) c.delta_over_omega = kv.get_doubles("transverse.delta_over_omega");
    if (kv.has("transverse.blocks")) c.transverse_blocks = kv.get_uint("transverse.blocks");
    if (kv.has("output_dir")) c.output_dir = kv.raw("output_dir");

    try {
        c.validate();
    } catch (const ConfigError &e) {
        throw ConfigError(kv.source() + ": " + e.what());
    }
    return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return from_keys(KeyValueFile::parse(in, path));
}

ExperimentConfig ExperimentConfig::from_string(const std::string &text) {
    return from_keys(KeyValueFile::parse_string(text));
}

void ExperimentConfig::validate() const {
    try {
        trap.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    if (trap.n_ions > kMaxQubits) {
        throw ConfigError(fmt::format("trap.n_ions must be at most {}", kMaxQubits));
    }
    if (target_model != "ring_antiperiodic" && target_model != "matrix") {
        throw ConfigError("target.model must be 'ring_antiperiodic' or 'matrix', got '" + target_model + "'");
    }
    if (target_model == "ring_antiperiodic" && trap.n_ions < 3) {
        throw ConfigError("target.model ring_antiperiodic needs at least 3 ions");
    }
    if (target_model == "matrix") {
        if (target_matrix.rows() != static_cast<Eigen::Index>(trap.n_ions)) {
            throw ConfigError("target.model = matrix requires target.matrix");
        }
        if ((target_matrix - target_matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
            throw ConfigError("target.matrix must be symmetric");
        }
    }
    if (!(target_scale > 0.0)) throw ConfigError("target.scale must be positive");
    if (!(max_residual >= 0.0)) throw ConfigError("target.max_residual must be non-negative");
    if (!(xi_hz > 0.0)) throw ConfigError("drive.xi_hz must be positive");
    if (!(calib_const > 0.0)) throw ConfigError("drive.calib_const must be positive");
    if (blocks == 0) throw ConfigError("sim.blocks must be positive");
    if (shots == 0) throw ConfigError("sim.shots must be positive");
    if (!(t2_s > 0.0)) throw ConfigError("sim.t2_s must be positive or inf");
    if (!std::isnan(drive_axis_t2_s) && !(drive_axis_t2_s > 0.0)) {
        throw ConfigError("sim.drive_axis_t2_s must be positive or inf");
    }
    if (threads == 0) throw ConfigError("sim.threads must be positive");
    if (parity_blocks == 0) throw ConfigError("parity.blocks must be positive");
    if (phi_points < 3) throw ConfigError("parity.phi_points must be at least 3");
    if (delta_over_omega.empty()) throw ConfigError("transverse.delta_over_omega must not be empty");
    if (transverse_blocks == 0) throw ConfigError("transverse.blocks must be positive");
}

CouplingMatrix ExperimentConfig::target_shape() const {
    if (target_model == "ring_antiperiodic") {
        return CouplingMatrix::ring(trap.n_ions, -1.0);
    }
    return CouplingMatrix(target_matrix);
}

std::string ExperimentConfig::echo() const {
    std::string out;
    auto line = [&out](const std::string &k, const std::string &v) { out += k + " = " + v + "\n"; };
    line("trap.n_ions", std::to_string(trap.n_ions));
    line("trap.axial_freq_hz", fmt_double(trap.axial_freq / kTwoPi));
    line("trap.ion_mass_amu", fmt_double(trap.ion_mass / kAtomicMassUnit));
    line("trap.wavevector_per_m", fmt_double(trap.wavevector));
    line("trap.beam_weights", fmt_list(trap.weights()));
    line("target.model", target_model);
    if (target_model == "matrix") {
        std::vector<double> flat;
        for (Eigen::Index a = 0; a < target_matrix.rows(); ++a) {
            for (Eigen::Index b = 0; b < target_matrix.cols(); ++b) {
                flat.push_back(target_matrix(a, b));
            }
        }
        line("target.matrix", fmt_list(flat));
    }
    line("target.scale", fmt_double(target_scale));
    line("target.use_effective", use_effective ? "true" : "false");
    line("target.max_residual", fmt_double(max_residual));
    line("drive.xi_hz", fmt_double(xi_hz));
    line("drive.carrier_hz", fmt_double(carrier_hz));
    line("drive.calib_const", fmt_double(calib_const));
    line("sim.blocks", std::to_string(blocks));
    line("sim.half_steps", half_steps ? "true" : "false");
    line("sim.shots", std::to_string(shots));
    line("sim.seed", std::to_string(seed));
    line("sim.t2_s", fmt_double(t2_s));
    if (!std::isnan(drive_axis_t2_s)) {
        line("sim.drive_axis_t2_s", fmt_double(drive_axis_t2_s));
    }
    line("parity.blocks", std::to_string(parity_blocks));
    line("parity.phi_points", std::to_string(phi_points));
    line("transverse.delta_over_omega", fmt_list(delta_over_omega));
    line("transverse.blocks", std::to_string(transverse_blocks));
    return out;
}

} // namespace strobe
