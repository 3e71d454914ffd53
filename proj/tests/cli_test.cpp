// Copyright 2026 The gatesynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gatesynth/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace gatesynth;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "gatesynth");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / "gatesynth_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string write_file(const std::string &name, const std::string &text) {
    auto path = scratch(name);
    std::ofstream(path) << text;
    return path.string();
}

/// Value after `key=` in a report document.
std::string field(const std::string &doc, const std::string &key) {
    size_t pos = doc.find("\n" + key + "=");
    if (pos == std::string::npos) {
        return {};
    }
    pos += key.size() + 2;
    return doc.substr(pos, doc.find('\n', pos) - pos);
}

double line_value(const std::string &text, const std::string &key) {
    size_t pos = text.find(key + " ");
    if (pos == std::string::npos) {
        return NAN;
    }
    return std::stod(text.substr(pos + key.size() + 1));
}

}  // namespace

TEST(cli_check, controllable_single_qubit) {
    auto r = run_cli({"check", "--device", "nmr1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("dim 3\n"), std::string::npos);
    EXPECT_NE(r.out.find("full su(2): yes"), std::string::npos);
    EXPECT_NE(r.out.find("steps: 3\n"), std::string::npos);
}

TEST(cli_check, josephson_step_count) {
    auto r = run_cli({"check", "--device", "jj1", "--params", "E_c=10,E_J=3"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("steps: 4\n"), std::string::npos) << r.out;
    EXPECT_NEAR(line_value(r.out, "psi"), 3 / std::sqrt(109.0), 1e-12);
}

TEST(cli_check, two_qubit_device) {
    auto r = run_cli({"check", "--device", "heis2", "--params", "B1=1,B2=1,J12=0.1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("dim 15\n"), std::string::npos);
    EXPECT_NE(r.out.find("full su(4): yes"), std::string::npos);
}

TEST(cli_check, uncontrollable_config) {
    auto path = write_file("single.dev", "name lonely\nqubits 1\nhamiltonian H1\nterm 1 Z\n");
    auto r = run_cli({"check", "--device", path});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("dim 1\n"), std::string::npos);
    EXPECT_NE(r.out.find("full su(2): no"), std::string::npos);
}

TEST(cli_check, config_errors_report_position) {
    auto path = write_file("bad.dev", "name bad\nqubits 2\nhamiltonian H1\nterm 1 XYZ\n");
    auto r = run_cli({"check", "--device", path});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("line 4"), std::string::npos) << r.err;
    EXPECT_EQ(run_cli({"check", "--device", "nosuchdevice"}).code, 1);
    EXPECT_EQ(run_cli({"check", "--device", "heis2", "--params", "B1=1"}).code, 1);
}

TEST(cli_synth, euler_route) {
    auto r = run_cli({"synth", "--device", "nmr1", "--target", "h"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("# route euler\n"), std::string::npos);
    EXPECT_EQ(field(r.out, "steps"), "3");
    EXPECT_EQ(field(r.out, "converged"), "true");
}

TEST(cli_synth, josephson_route_and_regime) {
    auto r = run_cli({"synth", "--device", "jj1", "--params", "E_c=10,E_J=1", "--target", "h"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("# route josephson\n"), std::string::npos);
    EXPECT_EQ(field(r.out, "steps"), "4");

    auto bad = run_cli({"synth", "--device", "jj1", "--params", "E_c=1,E_J=1", "--target", "h"});
    EXPECT_EQ(bad.code, 3);
    EXPECT_NE(bad.err.find("--numeric-fallback"), std::string::npos);

    auto fallback = run_cli(
        {"synth", "--device", "jj1", "--params", "E_c=1,E_J=1", "--target", "h", "--numeric-fallback", "--steps",
         "6"});
    EXPECT_EQ(fallback.code, 0) << fallback.err;
    EXPECT_NE(fallback.out.find("# route numeric\n"), std::string::npos);
}

TEST(cli_synth, numeric_cnot_and_verify) {
    auto report_path = scratch("cnot.report").string();
    auto r = run_cli(
        {"synth", "--device", "heis2", "--params", "B1=1,B2=1,J12=0.1", "--target", "cnot", "--steps", "15",
         "--out", report_path});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(field(r.out, "converged"), "true");
    double reported = std::stod(field(r.out, "objective_value"));
    EXPECT_LE(reported, 1e-8);

    auto v = run_cli({"verify", "--device", "heis2", "--params", "B1=1,B2=1,J12=0.1", "--report", report_path});
    EXPECT_EQ(v.code, 0) << v.err;
    EXPECT_NEAR(line_value(v.out, "f_phase_invariant"), reported, 1e-12);
    EXPECT_LE(line_value(v.out, "unitarity_defect"), 1e-11);

    auto times = field(r.out, "durations");
    auto v2 = run_cli(
        {"verify", "--device", "heis2", "--params", "B1=1,B2=1,J12=0.1", "--target", "cnot", "--times", times,
         "--steps", "15"});
    EXPECT_EQ(v2.code, 0);
    EXPECT_NEAR(line_value(v2.out, "f_phase_invariant"), reported, 1e-12);
}

TEST(cli_synth, same_seed_gives_identical_reports) {
    std::vector<std::string> args{"synth",  "--device", "heis2", "--params", "B1=1,B2=1,J12=0.1",
                                  "--target", "swap",   "--steps", "15",   "--seed",
                                  "5",      "--restarts", "8"};
    auto a = run_cli(args);
    args.push_back("--threads");
    args.push_back("1");
    auto b = run_cli(args);
    EXPECT_EQ(a.out, b.out);
}

TEST(cli_synth, rejects_bad_arguments) {
    EXPECT_EQ(run_cli({"synth", "--device", "nmr1", "--target", "cnot"}).code, 1);
    EXPECT_EQ(run_cli({"synth", "--device", "nmr1", "--target", "h", "--objective", "fuzzy"}).code, 1);
    EXPECT_EQ(run_cli({"synth", "--device", "nmr1"}).code, 1);
    EXPECT_EQ(run_cli({"synth", "--device", "nmr1", "--target", "h", "--restarts", "0"}).code, 1);
}

TEST(cli_verify, zero_durations_against_cnot) {
    auto r = run_cli(
        {"verify", "--device", "heis2", "--params", "B1=1,B2=1,J12=0.1", "--target", "cnot", "--times", "0,0,0"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NEAR(line_value(r.out, "f_test"), 4, 1e-12);
    EXPECT_NEAR(line_value(r.out, "f_phase_invariant"), 4, 1e-12);
}

TEST(cli_verify, count_mismatch) {
    auto r = run_cli(
        {"verify", "--device", "heis2", "--params", "B1=1,B2=1,J12=0.1", "--target", "cnot", "--times", "0,0,0",
         "--steps", "15"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("expected 15 durations"), std::string::npos);
    EXPECT_EQ(run_cli({"verify", "--device", "nmr1", "--target", "h"}).code, 1);
    EXPECT_EQ(run_cli({"verify", "--device", "nmr1", "--times", "1"}).code, 1);
}

TEST(cli_listings, gates_and_devices) {
    auto g = run_cli({"gates"});
    EXPECT_EQ(g.code, 0);
    for (const char *name : {"cnot", "swap", "qft2", "cphase(alpha)", "cu(theta,phi)"}) {
        EXPECT_NE(g.out.find(name), std::string::npos) << name;
    }
    auto d = run_cli({"devices"});
    EXPECT_EQ(d.code, 0);
    for (const char *name : {"nmr1", "jj1", "heis2", "heis2perm", "jj2"}) {
        EXPECT_NE(d.out.find(name), std::string::npos) << name;
    }
}

TEST(cli_listings, usage) {
    auto r = run_cli({});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("synth"), std::string::npos);
    EXPECT_EQ(run_cli({"--help"}).code, 0);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
}

#ifdef GATESYNTH_CLI_PATH
TEST(cli_binary, exit_codes) {
    auto status = [](const std::string &args) {
        std::string cmd = std::string(GATESYNTH_CLI_PATH) + " " + args + " >/dev/null 2>&1";
        int raw = std::system(cmd.c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    EXPECT_EQ(status("check --device nmr1"), 0);
    EXPECT_EQ(status("synth --device jj1 --params E_c=1,E_J=1 --target h"), 3);
    EXPECT_EQ(status("check --device nosuchdevice"), 1);
}

TEST(cli_binary, reports_are_byte_identical) {
    auto run = [](const std::string &out) {
        std::string cmd = std::string(GATESYNTH_CLI_PATH) +
                          " synth --device heis2perm --params B1=1,B2=1,J12=0.1 --target qft2 --steps 15 --seed 11"
                          " --restarts 8 --out " +
                          out + " >/dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    auto a = scratch("a.report").string();
    auto b = scratch("b.report").string();
    run(a);
    run(b);
    std::ifstream fa(a), fb(b);
    std::string ta((std::istreambuf_iterator<char>(fa)), {});
    std::string tb((std::istreambuf_iterator<char>(fb)), {});
    EXPECT_FALSE(ta.empty());
    EXPECT_EQ(ta, tb);
}
#endif
