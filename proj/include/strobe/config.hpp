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
 * Experiment configuration: a flat `key = value` text file with dotted
 * section prefixes, e.g.
 *
 *     # four-ion ring
 *     trap.n_ions = 4
 *     trap.axial_freq_hz = 1.0e6
 *     target.model = ring_antiperiodic
 *     sim.t2_s = inf
 *
 * Lists are comma separated. Lines starting with '#' are comments. Unknown
 * keys are errors.
 */

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "strobe/coupling_compiler.hpp"
#include "strobe/ion_crystal.hpp"

namespace strobe {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raw key/value pairs together with the line each came from.
class KeyValueFile {
  public:
    static KeyValueFile parse(std::istream &in, const std::string &source);
    static KeyValueFile parse_string(const std::string &text, const std::string &source = "<string>");

    [[nodiscard]] bool has(const std::string &key) const { return entries_.count(key) != 0; }
    [[nodiscard]] const std::string &raw(const std::string &key) const;
    [[nodiscard]] int line(const std::string &key) const;
    [[nodiscard]] std::vector<std::string> keys() const;
    [[nodiscard]] const std::string &source() const { return source_; }

    [[nodiscard]] double get_double(const std::string &key) const;
    [[nodiscard]] std::uint64_t get_uint(const std::string &key) const;
    [[nodiscard]] bool get_bool(const std::string &key) const;
    [[nodiscard]] std::vector<double> get_doubles(const std::string &key) const;

    void set(const std::string &key, const std::string &value) { entries_[key] = {value, 0}; }

  private:
    [[noreturn]] void fail(const std::string &key, const std::string &what) const;

    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, Entry> entries_;
    std::string source_;
};

/// Physical defaults: 88Sr+ at 1 MHz axial, 674 nm drive at 45 degrees to the axis.
TrapConfig default_trap(std::size_t n_ions);

struct ExperimentConfig {
    TrapConfig trap = default_trap(4);

    std::string target_model = "ring_antiperiodic";  ///< or "matrix"
    Eigen::MatrixXd target_matrix;                    ///< used when target_model == "matrix"
    /// Multiplies the target shape; sets the coupling per block in radians.
    double target_scale = 0.035;
    bool use_effective = false;
    /// Compile fails (exit 3) above this relative residual.
    double max_residual = 0.2;

    double xi_hz = 7500.0;
    double carrier_hz = 80.0e6;
    double calib_const = 1.0;

    std::size_t blocks = 10;
    bool half_steps = true;
    std::size_t parity_blocks = 3;
    std::size_t phi_points = 13;
    std::vector<double> delta_over_omega{0.0, 1.0, 2.0, 4.0, 8.0};
    std::size_t transverse_blocks = 2;

    std::uint64_t shots = 500;
    std::uint64_t seed = 20231;
    double t2_s = std::numeric_limits<double>::infinity();
    double drive_axis_t2_s = std::numeric_limits<double>::quiet_NaN();
    unsigned threads = 1;

    std::string output_dir = "out";

    static ExperimentConfig from_keys(const KeyValueFile &kv);
    static ExperimentConfig from_file(const std::string &path);
    static ExperimentConfig from_string(const std::string &text);

    /// Throws ConfigError on the first violated constraint.
    void validate() const;

    /// The target coupling shape before scaling.
    [[nodiscard]] CouplingMatrix target_shape() const;

    /// Every setting as `key = value`, in a fixed order, doubles at 17 digits.
    [[nodiscard]] std::string echo() const;
};


} // namespace strobe
