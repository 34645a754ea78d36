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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "strobe/config.hpp"
#include "strobe/experiments.hpp"
#include "strobe/text_io.hpp"

namespace strobe {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / ("strobe_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string &args) {
    const std::string cmd = std::string(STROBE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

template <typename Fn>
std::string config_error_message(Fn &&fn) {
    try {
        fn();
    } catch (const ConfigError &e) {
        return e.what();
    }
    return "<no error>";
}

TEST(KeyValueFile, ParsesCommentsAndWhitespace) {
    const KeyValueFile kv = KeyValueFile::parse_string("# comment\n\n  a.b = 1.5 \nlist = 1, 2,3\nflag = true\n");
    EXPECT_DOUBLE_EQ(kv.get_double("a.b"), 1.5);
    EXPECT_EQ(kv.get_doubles("list"), (std::vector<double>{1, 2, 3}));
    EXPECT_TRUE(kv.get_bool("flag"));
    EXPECT_EQ(kv.line("list"), 4);
}

TEST(KeyValueFile, DiagnosticsNameLineAndKey) {
    EXPECT_NE(config_error_message([] { KeyValueFile::parse_string("a = 1\na = 2\n", "cfg"); }).find("cfg:2"),
              std::string::npos);
    EXPECT_NE(config_error_message([] { KeyValueFile::parse_string("x\n", "cfg"); }).find("cfg:1"),
              std::string::npos);
    const std::string bad_number =
        config_error_message([] { ExperimentConfig::from_string("\nsim.shots = lots\n"); });
    EXPECT_NE(bad_number.find(":2"), std::string::npos);
    EXPECT_NE(bad_number.find("sim.shots"), std::string::npos);
    const std::string unknown = config_error_message([] { ExperimentConfig::from_string("sim.shoots = 4\n"); });
    EXPECT_NE(unknown.find("sim.shoots"), std::string::npos);
}

TEST(ExperimentConfig, DefaultsAndOverrides) {
    const ExperimentConfig d = ExperimentConfig::from_string("");
    EXPECT_EQ(d.trap.n_ions, 4U);
    EXPECT_DOUBLE_EQ(d.xi_hz, 7500.0);
    EXPECT_EQ(d.shots, 500U);
    EXPECT_TRUE(std::isinf(d.t2_s));
    const ExperimentConfig c = ExperimentConfig::from_string(
        "trap.n_ions = 3\ntarget.model = matrix\ntarget.matrix = 0,1,0, 1,0,2, 0,2,0\nsim.t2_s = 0.01\n");
    EXPECT_EQ(c.trap.n_ions, 3U);
    EXPECT_DOUBLE_EQ(c.target_shape()(1, 2), 2.0);
    EXPECT_DOUBLE_EQ(c.t2_s, 0.01);
}

TEST(ExperimentConfig, ValidationErrors) {
    EXPECT_THROW(ExperimentConfig::from_string("drive.xi_hz = 0\n"), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_string("sim.shots = 0\n"), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_string("trap.n_ions = 1\n"), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_string("trap.n_ions = 2\n"), ConfigError);  // ring needs 3
    EXPECT_THROW(ExperimentConfig::from_string("target.model = star\n"), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_string("target.model = matrix\n"), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_string("trap.beam_weights = 1, 1\n"), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_string("trap.n_ions = 3\ntarget.matrix = 0,1,0,2,0,0,0,0,0\n"
                                               "target.model = matrix\n"),
                 ConfigError);
}

TEST(ExperimentConfig, EchoRoundTrips) {
    const ExperimentConfig c = ExperimentConfig::from_string(
        "trap.beam_weights = 0.9, 1, 1, 0.95\nsim.seed = 77\ntransverse.delta_over_omega = 0, 0.5, 3\n"
        "sim.drive_axis_t2_s = 0.02\n");
    const std::string echo = c.echo();
    EXPECT_EQ(ExperimentConfig::from_string(echo).echo(), echo);
    EXPECT_EQ(ExperimentConfig::from_string(ExperimentConfig{}.echo()).echo(), ExperimentConfig{}.echo());
}

TEST(TextIo, ToneTableRoundTripIsBitExact) {
    const CompiledDrive d = compile_drive(ExperimentConfig{});
    std::stringstream ss;
    write_tone_table(ss, d.tones);
    const ToneTable back = read_tone_table(ss);
    EXPECT_EQ(back.carrier_hz, d.tones.carrier_hz);
    EXPECT_EQ(back.xi_hz, d.tones.xi_hz);
    EXPECT_EQ(back.block_duration_s, d.tones.block_duration_s);
    EXPECT_EQ(back.rabi_hz, d.tones.rabi_hz);
    ASSERT_EQ(back.tones.size(), d.tones.tones.size());
    for (std::size_t k = 0; k < back.tones.size(); ++k) {
        EXPECT_EQ(back.tones[k].freq_hz, d.tones.tones[k].freq_hz);
        EXPECT_EQ(back.tones[k].amp, d.tones.tones[k].amp);
        EXPECT_EQ(back.tones[k].phase, d.tones.tones[k].phase);
    }
    std::stringstream bad("tone freq_hz=1 rel_amp=1 phase_rad=0\n");
    EXPECT_THROW(read_tone_table(bad), FormatError);
}

TEST(TextIo, CompileReportAndMatrixRoundTrip) {
    const CompiledDrive d = compile_drive(ExperimentConfig{});
    std::stringstream ss;
    write_compile_report(ss, d.report);
    const CompileReport r = read_compile_report(ss);
    EXPECT_EQ(r.phases.phases, d.report.phases.phases);
    EXPECT_EQ(r.residual, d.report.residual);
    EXPECT_EQ(r.overlap_f, d.report.overlap_f);

    std::stringstream ms;
    write_matrix(ms, "expected", d.expected.values());
    EXPECT_EQ(read_matrix(ms), d.expected.values());
}

TEST(Cli, ModesGoldenForTwoIons) {
    const fs::path dir = scratch("modes2");
    {
        std::ofstream cfg(dir / "cfg.txt");
        cfg << "trap.n_ions = 2\ntarget.model = matrix\ntarget.matrix = 0, 1, 1, 0\n";
    }
    ASSERT_EQ(run_cli("modes --config " + (dir / "cfg.txt").string() + " --out " + (dir / "out").string()), 0);
    std::ifstream in(dir / "out" / "modes.txt");
    std::string line;
    std::vector<std::vector<double>> rows;
    std::vector<double> positions;
    while (std::getline(in, line)) {
        if (line.rfind("positions = ", 0) == 0) {
            std::stringstream ss(line.substr(12));
            std::string item;
            while (std::getline(ss, item, ',')) positions.push_back(std::stod(item));
        } else if (!line.empty() && (line[0] == '1' || line[0] == '2') && line.find('\t') != std::string::npos &&
                   rows.size() < 2) {
            std::stringstream ss(line);
            std::vector<double> row;
            double v;
            while (ss >> v) row.push_back(v);
            rows.push_back(row);
        }
    }
    ASSERT_EQ(positions.size(), 2U);
    EXPECT_NEAR(positions[0], -std::pow(0.5, 2.0 / 3.0), 1e-12);
    EXPECT_NEAR(positions[1], std::pow(0.5, 2.0 / 3.0), 1e-12);
    // Columns: mode, freq_hz, freq_over_axial, lamb_dicke, o_1, o_2.
    ASSERT_EQ(rows.size(), 2U);
    ASSERT_EQ(rows[1].size(), 6U);
    EXPECT_NEAR(rows[0][2], 1.0, 1e-12);
    EXPECT_NEAR(rows[1][2], std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(rows[1][3] / rows[0][3], std::pow(3.0, -0.25), 1e-12);
    EXPECT_NEAR(rows[1][4], std::sqrt(0.5), 1e-12);
    EXPECT_NEAR(rows[1][5], -std::sqrt(0.5), 1e-12);
}

TEST(Cli, ExitCodes) {
    const fs::path dir = scratch("exit");
    EXPECT_EQ(run_cli("compile --out " + (dir / "ok").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "ok" / "tones.txt"));
    {
        std::ofstream cfg(dir / "bad.txt");
        cfg << "sim.shots = -3\n";
    }
    EXPECT_EQ(run_cli("compile --config " + (dir / "bad.txt").string()), 2);
    EXPECT_EQ(run_cli("figure nonsense"), 2);
    {
        std::ofstream cfg(dir / "strict.txt");
        cfg << "target.max_residual = 0.01\n";
    }
    EXPECT_EQ(run_cli("compile --config " + (dir / "strict.txt").string() + " --out " + (dir / "strict").string()),
              3);
    // The report is still written for an unrealizable target.
    EXPECT_TRUE(fs::exists(dir / "strict" / "compile_report.txt"));
    {
        std::ofstream cfg(dir / "zero.txt");
        cfg << "target.model = matrix\ntarget.matrix = 0,0,0,0, 0,0,0,0, 0,0,0,0, 0,0,0,0\n";
    }
    EXPECT_EQ(run_cli("compile --config " + (dir / "zero.txt").string() + " --out " + (dir / "zero").string()), 1);
}

TEST(Cli, ManifestReproducesRun) {
    const fs::path dir = scratch("manifest");
    {
        std::ofstream cfg(dir / "cfg.txt");
        cfg << "sim.shots = 50\nsim.blocks = 2\n";
    }
    ASSERT_EQ(run_cli("figure dynamics --seed 5 --config " + (dir / "cfg.txt").string() + " --out " +
                      (dir / "a").string()),
              0);
    // Re-run from the config block of the manifest alone.
    const std::string manifest = read_file(dir / "a" / "manifest.txt");
    const std::string config_block = manifest.substr(manifest.find("# config\n") + 9);
    {
        std::ofstream cfg(dir / "replay.txt");
        cfg << config_block;
    }
    ASSERT_EQ(run_cli("figure dynamics --config " + (dir / "replay.txt").string() + " --out " + (dir / "b").string()),
              0);
    EXPECT_EQ(read_file(dir / "a" / "dynamics.tsv"), read_file(dir / "b" / "dynamics.tsv"));
    EXPECT_EQ(read_file(dir / "a" / "dynamics_snapshots.tsv"), read_file(dir / "b" / "dynamics_snapshots.tsv"));
}

TEST(Figures, DynamicsKeepsOddSubspacesEmpty) {
    ExperimentConfig cfg;
    cfg.shots = 200;
    const CompiledDrive d = compile_drive(cfg);
    for (const Snapshot &s : run_dynamics(cfg, d)) {
        const EsPopulations p = group_by_excitation(s.counts);
        EXPECT_EQ(p.populations[1], 0.0);
        EXPECT_EQ(p.populations[3], 0.0);
    }
}

TEST(Figures, UnknownNameThrows) {
    EXPECT_THROW(write_figure(ExperimentConfig{}, "fig9", scratch("unknown").string()), std::invalid_argument);
}

} // namespace
} // namespace strobe
