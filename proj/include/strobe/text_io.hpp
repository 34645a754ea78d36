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
 * Plain-text record formats shared by the CLI and the tests. All floating
 * point values are written with 17 significant digits, so reading a file
 * back reproduces every value exactly.
 */

#include <iosfwd>
#include <string>
#include <vector>

#include "strobe/analysis.hpp"
#include "strobe/coupling_compiler.hpp"
#include "strobe/drive_synth.hpp"
#include "strobe/ion_crystal.hpp"
#include "strobe/spin_sim.hpp"

namespace strobe {

/// Raised when a record file cannot be parsed.
class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// `%.17g`, with inf/nan spelled out.
std::string format_double(double v);

/**
 * One `header` record followed by one `tone` record per tone:
 *
 *     header carrier_hz=... xi_hz=... block_duration_s=... rabi_hz=... calib_const=...
 *     tone freq_hz=... rel_amp=... phase_rad=...
 */
void write_tone_table(std::ostream &out, const ToneTable &table);
ToneTable read_tone_table(std::istream &in);

/// `phases`, `residual`, `overlap_f` as `key = value` lines.
void write_compile_report(std::ostream &out, const CompileReport &report);
CompileReport read_compile_report(std::istream &in);

/// `n = N` followed by N rows of N values.
void write_matrix(std::ostream &out, const std::string &name, const Eigen::MatrixXd &m);
Eigen::MatrixXd read_matrix(std::istream &in);

void write_mode_report(std::ostream &out, const TrapConfig &cfg, const Eigen::VectorXd &positions,
                       const ModeDecomposition &modes);

/// Tab-separated: time_index, time_blocks, bitstring, count, exact_probability.
void write_snapshots(std::ostream &out, const std::vector<Snapshot> &snapshots);

/// Tab-separated: pair, phi, C, sigma2, exact.
void write_fringes(std::ostream &out, const ParityData &data);

/// Tab-separated: pair, amplitude, amplitude_sigma2, residual.
void write_fits(std::ostream &out, const std::vector<FringeFit> &fits);

} // namespace strobe
