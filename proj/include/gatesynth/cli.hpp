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

#pragma once

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gatesynth/analytic_su2.hpp"
#include "gatesynth/controllability.hpp"
#include "gatesynth/device.hpp"
#include "gatesynth/gates.hpp"
#include "gatesynth/synthesis.hpp"

namespace gatesynth::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kNotControllable = 2,
    kOutOfRegime = 3,
};

inline DeviceParams parse_params(std::string_view text) {
    DeviceParams out;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t comma = text.find(',', pos);
        std::string_view item = text.substr(pos, comma == text.npos ? text.npos : comma - pos);
        size_t eq = item.find('=');
        if (eq == item.npos || eq == 0) {
            throw ParseError("parameter '" + std::string(item) + "' is not of the form name=value", 0, pos + 1);
        }
        out[std::string(item.substr(0, eq))] = detail::parse_real({item.substr(eq + 1), pos + eq + 2}, 0);
        if (comma == text.npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// A builtin device name (with `--params`) or the path of a device config file.
inline DeviceModel resolve_device(const std::string &device, const std::string &params) {
    if (is_builtin_device(device)) {
        return builtin_device(device, parse_params(params));
    }
    if (!params.empty()) {
        throw InputError("--params applies only to builtin devices; config files carry their own coefficients");
    }
    return load_device(read_file(device));
}

inline std::string fmt(double v) {
    return format_real(v);
}

/// Default step count: the step-count criterion for single-qubit pairs, 4^N - 1 otherwise.
inline size_t default_steps(const DeviceModel &device) {
    if (device.num_qubits() == 1 && device.hamiltonians().size() == 2) {
        try {
            return static_cast<size_t>(lowenthal_steps(device.op(0), device.op(1)).steps);
        } catch (const ControllabilityError &) {
        }
    }
    return (size_t{1} << (2 * device.num_qubits())) - 1;
}

inline bool alternates_pair(const DeviceModel &device) {
    return device.hamiltonians().size() == 2 && device.cycle_order() == std::vector<size_t>{0, 1};
}

struct Streams {
    std::ostream &out;
    std::ostream &err;
};

inline int cmd_check(const DeviceModel &device, Streams io) {
    auto ops = device.operators();
    ClosureResult closure = lie_closure(ops);
    size_t n = device.num_qubits();
    io.out << "device " << device.name() << "\n";
    io.out << "qubits " << n << "\n";
    io.out << "hamiltonians " << ops.size() << "\n";
    io.out << "dim " << closure.dimension << "\n";
    io.out << "full su(" << (size_t{1} << n) << "): " << (closure.is_full_su ? "yes" : "no") << "\n";
    io.out << "depth " << closure.depth_reached << "\n";
    io.out << "gram\n";
    for (const auto &row : gram_matrix(ops)) {
        io.out << " ";
        for (double v : row) {
            io.out << " " << fmt(v);
        }
        io.out << "\n";
    }
    if (n == 1 && ops.size() == 2 && closure.is_full_su) {
        LowenthalResult lw = lowenthal_steps(ops[0], ops[1]);
        io.out << "psi " << fmt(lw.psi) << "\n";
        if (lw.k) {
            io.out << "k " << *lw.k << "\n";
        }
        io.out << "steps: " << lw.steps << "\n";
    }
    return closure.is_full_su ? kOk : kNotControllable;
}

struct SynthArgs {
    std::string target = "";
    std::optional<size_t> steps;
    std::string objective = "phase";
    size_t restarts = 64;
    uint64_t seed = 42;
    double tol = 1e-8;
    size_t max_iters = 2000;
    std::string out_path;
    bool numeric_fallback = false;
    size_t threads = 0;
};

inline SynthesisReport analytic_report(
    const std::string &target_name, const AnalyticSolution &sol, double tol, const DeviceModel &device,
    const UnitaryGate &target) {
    SynthesisReport r;
    r.target_name = target_name;
    r.steps = sol.sequence.steps.size();
    r.durations = sol.sequence.durations();
    r.objective = ObjectiveKind::phase_invariant;
    r.objective_value = f_phase_invariant(target, propagate(device, cyclic_sequence(device, r.durations)));
    r.converged = r.objective_value <= tol;
    return r;
}

inline int cmd_synth(const DeviceModel &device, const SynthArgs &args, Streams io) {
    GateSpec spec = parse_gate_spec(args.target);
    UnitaryGate target = build_gate(spec);
    if (target.dim() != device.dim()) {
        throw InputError("target '" + args.target + "' acts on a different number of qubits than the device");
    }
    ObjectiveKind kind = parse_objective_kind(args.objective);
    std::optional<SynthesisReport> report;
    std::string route = "numeric";
    size_t steps = args.steps.value_or(default_steps(device));

    if (kind == ObjectiveKind::phase_invariant && device.num_qubits() == 1 && alternates_pair(device)) {
        const auto &h1 = device.op(0);
        const auto &h2 = device.op(1);
        double orth = std::abs(hs_inner(h1, h2)) / std::sqrt(hs_inner(h1, h1) * hs_inner(h2, h2));
        if (orth <= 1e-10) {
            try {
                report = analytic_report(args.target, euler_three_step(h1, h2, target), args.tol, device, target);
                route = "euler";
            } catch (const PreconditionError &) {
            } catch (const AnalyticDomainError &) {
            }
        } else if (device.name() == "jj1" && device.parameter("E_c") && device.parameter("E_J")) {
            try {
                report = analytic_report(
                    args.target, jj_four_step(*device.parameter("E_c"), *device.parameter("E_J"), target), args.tol,
                    device, target);
                route = "josephson";
            } catch (const RegimeError &e) {
                if (!args.numeric_fallback) {
                    io.err << "error: " << e.what() << "\n(pass --numeric-fallback to optimize numerically)\n";
                    return kOutOfRegime;
                }
                io.err << "note: " << e.what() << "; falling back to numeric synthesis\n";
            } catch (const AnalyticDomainError &e) {
                if (!args.numeric_fallback) {
                    io.err << "error: " << e.what() << "\n(pass --numeric-fallback to optimize numerically)\n";
                    return kOutOfRegime;
                }
                io.err << "note: " << e.what() << "; falling back to numeric synthesis\n";
            }
        }
    }
    if (!report) {
        SynthesisOptions opt;
        opt.objective = kind;
        opt.restarts = args.restarts;
        opt.seed = args.seed;
        opt.tol = args.tol;
        opt.max_iters = args.max_iters;
        opt.threads = args.threads;
        report = synthesize(device, target, steps, opt, args.target);
    }

    std::string doc = format_report(*report);
    io.out << "# route " << route << "\n" << doc;
    if (!args.out_path.empty()) {
        std::ofstream f(args.out_path, std::ios::binary);
        if (!f) {
            throw InputError("cannot write '" + args.out_path + "'");
        }
        f << doc;
    }
    return report->converged ? kOk : kFailure;
}

struct VerifyArgs {
    std::string target;
    std::string times;
    std::string report_path;
    std::optional<size_t> steps;
    double tol = 1e-8;
};

inline int cmd_verify(const DeviceModel &device, const VerifyArgs &args, Streams io) {
    std::string target_text = args.target;
    std::vector<double> durations;
    if (!args.report_path.empty()) {
        SynthesisReport r = parse_report(read_file(args.report_path));
        durations = r.durations;
        if (target_text.empty()) {
            target_text = r.target_name;
        }
        if (r.steps != durations.size()) {
            io.err << "error: report lists " << r.steps << " steps but " << durations.size() << " durations\n";
            return kFailure;
        }
    } else {
        durations = parse_durations(args.times);
    }
    if (target_text.empty()) {
        io.err << "error: --target (or --report) is required\n";
        return kFailure;
    }
    if (durations.empty()) {
        io.err << "error: no durations given (use --times or --report)\n";
        return kFailure;
    }
    if (args.steps && *args.steps != durations.size()) {
        io.err << "error: expected " << *args.steps << " durations, got " << durations.size() << "\n";
        return kFailure;
    }
    UnitaryGate target = build_gate(target_text);
    if (target.dim() != device.dim()) {
        throw InputError("target '" + target_text + "' acts on a different number of qubits than the device");
    }
    UnitaryGate u = propagate(device, cyclic_sequence(device, durations));
    double plain = f_test(target, u);
    double phase = f_phase_invariant(target, u);
    io.out << "steps " << durations.size() << "\n";
    io.out << "f_test " << fmt(plain) << "\n";
    io.out << "f_phase_invariant " << fmt(phase) << "\n";
    io.out << "unitarity_defect " << fmt(unitarity_defect(u.matrix())) << "\n";
    return phase <= args.tol ? kOk : kFailure;
}

inline int cmd_gates(Streams io) {
    for (const auto &e : gate_catalog()) {
        io.out << std::left << std::setw(16) << e.signature << " " << e.num_qubits << "q  " << e.description << "\n";
    }
    return kOk;
}

inline int cmd_devices(Streams io) {
    for (const auto &e : builtin_device_catalog()) {
        std::string sig = e.signature.empty() ? e.name : e.name + "(" + e.signature + ")";
        io.out << std::left << std::setw(24) << sig << " " << e.description << "\n";
    }
    return kOk;
}

/// Runs the command line; never exits the process. Exit codes are 0, 1, 2 or 3.
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    Streams io{out, err};
    CLI::App app{"gatesynth: gate synthesis from device-intrinsic Hamiltonians", "gatesynth"};
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    std::string device_name;
    std::string params;

    auto add_device_flags = [&](CLI::App *sub) {
        sub->add_option("--device", device_name, "Builtin device name or device config path")->required();
        sub->add_option("--params", params, "Builtin device parameters, e.g. B1=1,B2=1,J12=0.1");
    };

    CLI::App *check = app.add_subcommand("check", "Lie-algebra closure, Gram matrix and step count of a device");
    add_device_flags(check);

    SynthArgs synth_args;
    CLI::App *synth = app.add_subcommand("synth", "Compute step durations that realize a target gate");
    add_device_flags(synth);
    synth->add_option("--target", synth_args.target, "Target gate, e.g. cnot or cphase(1.5)")->required();
    synth->add_option("--steps", synth_args.steps, "Number of steps of the cyclic sequence");
    synth->add_option("--objective", synth_args.objective, "plain or phase")
        ->check(CLI::IsMember({"plain", "phase", "phase_invariant"}));
    synth->add_option("--restarts", synth_args.restarts, "Independent optimizer starts")->check(CLI::PositiveNumber);
    synth->add_option("--seed", synth_args.seed, "Random seed");
    synth->add_option("--tol", synth_args.tol, "Objective threshold for convergence");
    synth->add_option("--max-iters", synth_args.max_iters, "Iterations per start")->check(CLI::PositiveNumber);
    synth->add_option("--threads", synth_args.threads, "Worker threads (0 = all cores)");
    synth->add_option("--out", synth_args.out_path, "Also write the report document to this path");
    synth->add_flag("--numeric-fallback", synth_args.numeric_fallback, "Optimize numerically when a closed form fails");

    VerifyArgs verify_args;
    CLI::App *verify = app.add_subcommand("verify", "Evaluate the objective for given durations");
    add_device_flags(verify);
    verify->add_option("--target", verify_args.target, "Target gate");
    verify->add_option("--times", verify_args.times, "Comma-separated durations, first step first");
    verify->add_option("--report", verify_args.report_path, "Read durations (and target) from a synth report");
    verify->add_option("--steps", verify_args.steps, "Expected number of durations");
    verify->add_option("--tol", verify_args.tol, "Pass threshold on the phase-invariant value");

    CLI::App *gates = app.add_subcommand("gates", "List target gates");
    CLI::App *devices = app.add_subcommand("devices", "List builtin devices");
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }

    try {
        if (*check) {
            return cmd_check(resolve_device(device_name, params), io);
        }
        if (*synth) {
            return cmd_synth(resolve_device(device_name, params), synth_args, io);
        }
        if (*verify) {
            return cmd_verify(resolve_device(device_name, params), verify_args, io);
        }
        if (*gates) {
            return cmd_gates(io);
        }
        if (*devices) {
            return cmd_devices(io);
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    out << app.help();
    return kOk;
}

}  // namespace gatesynth::cli
