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

#include "strobe/text_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace strobe {

namespace {

double parse_value(const std::string &text, const std::string &context) {
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const char *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw FormatError(context + ": bad number '" + text + "'");
    }
    return v;
}

// "key=value" tokens after the record tag.
std::map<std::string, double> parse_fields(std::istringstream &tokens, int lineno) {
    std::map<std::string, double> fields;
    std::string tok;
    while (tokens >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) {
            throw FormatError(fmt::format("line {}: expected key=value, got '{}'", lineno, tok));
        }
        fields[tok.substr(0, eq)] = parse_value(tok.substr(eq + 1), fmt::format("line {}", lineno));
    }
    return fields;
}

double need(const std::map<std::string, double> &fields, const std::string &key, int lineno) {
    const auto it = fields.find(key);
    if (it == fields.end()) {
        throw FormatError(fmt::format("line {}: missing field '{}'", lineno, key));
    }
    return it->second;
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::string pair_label(std::size_t n, std::size_t m) { return fmt::format("{},{}", n + 1, m + 1); }

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", v);
}

void write_tone_table(std::ostream &out, const ToneTable &table) {
    out << "# strobe tone table: one header record, then one record per tone\n";
    out << "header carrier_hz=" << format_double(table.carrier_hz)
        << " xi_hz=" << format_double(table.xi_hz)
        << " block_duration_s=" << format_double(table.block_duration_s)
        << " rabi_hz=" << format_double(table.rabi_hz)
        << " calib_const=" << format_double(table.calib_const) << "\n";
    for (const Tone &t : table.tones) {
        out << "tone freq_hz=" << format_double(t.freq_hz) << " rel_amp=" << format_double(t.amp)
            << " phase_rad=" << format_double(t.phase) << "\n";
    }
}

ToneTable read_tone_table(std::istream &in) {
    ToneTable table;
    bool have_header = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        std::istringstream tokens(t);
        std::string tag;
        tokens >> tag;
        const auto fields = parse_fields(tokens, lineno);
        if (tag == "header") {
            table.carrier_hz = need(fields, "carrier_hz", lineno);
            table.xi_hz = need(fields, "xi_hz", lineno);
            table.block_duration_s = need(fields, "block_duration_s", lineno);
            table.rabi_hz = need(fields, "rabi_hz", lineno);
            table.calib_const = need(fields, "calib_const", lineno);
            have_header = true;
        } else if (tag == "tone") {
            table.tones.push_back({need(fields, "freq_hz", lineno), need(fields, "rel_amp", lineno),
                                   need(fields, "phase_rad", lineno)});
        } else {
            throw FormatError(fmt::format("line {}: unknown record '{}'", lineno, tag));
        }
    }
    if (!have_header) {
        throw FormatError("tone table has no header record");
    }
    return table;
}

void write_compile_report(std::ostream &out, const CompileReport &report) {
    out << "# strobe compile report\n";
    out << "phases = ";
    for (Eigen::Index j = 0; j < report.phases.phases.size(); ++j) {
        out << (j ? ", " : "") << format_double(report.phases.phases(j));
    }
    out << "\nresidual = " << format_double(report.residual) << "\n";
    out << "overlap_f = " << format_double(report.overlap_f) << "\n";
}

CompileReport read_compile_report(std::istream &in) {
    CompileReport report;
    std::string line;
    int lineno = 0;
    int found = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw FormatError(fmt::format("line {}: expected 'key = value'", lineno));
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        const std::string ctx = fmt::format("line {}", lineno);
        if (key == "phases") {
            std::vector<double> vals;
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                vals.push_back(parse_value(trim(item), ctx));
            }
            report.phases.phases = Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
            found |= 1;
        } else if (key == "residual") {
            report.residual = parse_value(value, ctx);
            found |= 2;
        } else if (key == "overlap_f") {
            report.overlap_f = parse_value(value, ctx);
            found |= 4;
        }
    }
    if (found != 7) {
        throw FormatError("compile report needs phases, residual and overlap_f");
    }
    return report;
}

void write_matrix(std::ostream &out, const std::string &name, const Eigen::MatrixXd &m) {
    out << "# " << name << "\n";
    out << "n = " << m.rows() << "\n";
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        for (Eigen::Index b = 0; b < m.cols(); ++b) {
            out << (b ? "\t" : "") << format_double(m(a, b));
        }
        out << "\n";
    }
}

Eigen::MatrixXd read_matrix(std::istream &in) {
    std::string line;
    Eigen::Index n = -1;
    Eigen::MatrixXd m;
    Eigen::Index row = 0;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        if (n < 0) {
            if (t.rfind("n =", 0) != 0) {
                throw FormatError(fmt::format("line {}: expected 'n = N'", lineno));
            }
            n = static_cast<Eigen::Index>(parse_value(trim(t.substr(3)), "matrix size"));
            m.resize(n, n);
            continue;
        }
        if (row >= n) {
            break;
        }
        std::istringstream tokens(t);
        std::string tok;
        Eigen::Index col = 0;
        while (tokens >> tok) {
            if (col >= n) {
                throw FormatError(fmt::format("line {}: too many columns", lineno));
            }
            m(row, col++) = parse_value(tok, fmt::format("line {}", lineno));
        }
        if (col != n) {
            throw FormatError(fmt::format("line {}: expected {} columns", lineno, n));
        }
        if (++row == n) {
            break;
        }
    }
    if (n < 0 || row != n) {
        throw FormatError("matrix dump is truncated");
    }
    return m;
}

void write_mode_report(std::ostream &out, const TrapConfig &cfg, const Eigen::VectorXd &positions,
                       const ModeDecomposition &modes) {
    out << "# strobe axial mode report\n";
    out << "n_ions = " << cfg.n_ions << "\n";
    out << "axial_freq_hz = " << format_double(cfg.axial_freq / kTwoPi) << "\n";
    out << "positions = ";
    for (Eigen::Index k = 0; k < positions.size(); ++k) {
        out << (k ? ", " : "") << format_double(positions(k));
    }
    const Eigen::Index n = modes.mode_matrix.rows();
    const double orth = (modes.mode_matrix * modes.mode_matrix.transpose() -
                         Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    out << "\northonormality_error = " << format_double(orth) << "\n";
    out << "# mode\tfreq_hz\tfreq_over_axial\tlamb_dicke";
    for (Eigen::Index k = 0; k < n; ++k) {
        out << "\to_" << (k + 1);
    }
    out << "\n";
    for (Eigen::Index j = 0; j < n; ++j) {
        out << (j + 1) << "\t" << format_double(modes.freqs(j) / kTwoPi) << "\t"
            << format_double(modes.freqs(j) / cfg.axial_freq) << "\t" << format_double(modes.lamb_dicke(j));
        for (Eigen::Index k = 0; k < n; ++k) {
            out << "\t" << format_double(modes.mode_matrix(j, k));
        }
        out << "\n";
    }
    out << "# effective (beam-weighted) mode matrix\n";
    write_matrix(out, "effective_matrix", modes.effective_matrix);
}

void write_snapshots(std::ostream &out, const std::vector<Snapshot> &snapshots) {
    if (!snapshots.empty()) {
        out << "# seed = " << snapshots.front().counts.seed << "\n";
    }
    out << "# time_index\ttime_blocks\tbitstring\tcount\texact_probability\n";
    for (const Snapshot &s : snapshots) {
        for (std::size_t k = 0; k < s.exact.dim(); ++k) {
            out << s.time_index << "\t" << format_double(s.time_blocks) << "\t"
                << bitstring(k, s.exact.n_qubits()) << "\t"
                << (s.counts.counts.empty() ? 0 : s.counts.counts[k]) << "\t"
                << format_double(std::norm(s.exact[k])) << "\n";
        }
    }
}

void write_fringes(std::ostream &out, const ParityData &data) {
    out << "# pair\tphi\tC\tsigma2\texact\n";
    for (const PairFringe &f : data.pairs) {
        for (std::size_t i = 0; i < f.phi.size(); ++i) {
            out << pair_label(f.n, f.m) << "\t" << format_double(f.phi[i]) << "\t"
                << format_double(f.value[i]) << "\t" << format_double(f.sigma2[i]) << "\t"
                << format_double(f.exact[i]) << "\n";
        }
    }
}

void write_fits(std::ostream &out, const std::vector<FringeFit> &fits) {
    out << "# pair\tamplitude\tamplitude_sigma2\tresidual\n";
    for (const FringeFit &f : fits) {
        out << pair_label(f.n, f.m) << "\t" << format_double(f.amplitude) << "\t"
            << format_double(f.amplitude_sigma2) << "\t" << format_double(f.residual) << "\n";
    }
}

} // namespace strobe
