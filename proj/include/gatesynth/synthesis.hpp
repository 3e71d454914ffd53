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

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <deque>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gatesynth/device.hpp"
#include "gatesynth/error.hpp"
#include "gatesynth/matrix.hpp"
#include "gatesynth/pulse.hpp"

namespace gatesynth {

/// The cyclic sequence on `device` with the given durations.
inline PulseSequence cyclic_sequence(const DeviceModel &device, std::span<const double> durations) {
    PulseSequence seq;
    for (size_t j = 0; j < durations.size(); j++) {
        seq.steps.push_back({device.hamiltonian_at_step(j), durations[j]});
    }
    return seq;
}

inline UnitaryGate propagate(const DeviceModel &device, const PulseSequence &seq) {
    auto ops = device.operators();
    return propagate(std::span<const HermitianOperator>(ops), seq);
}

/// Objective over the durations of a fixed-length cyclic pulse sequence.
///
/// Each device Hamiltonian is diagonalized once; step factors are then rebuilt from
/// the eigensystems. The gradient uses dU/dt_j = Q_j (-i H_j) P_j, with P_j the
/// product of the first j factors and Q_j the product of the remaining ones.
class SequenceObjective {
   public:
    SequenceObjective(const DeviceModel &device, const UnitaryGate &target, size_t num_steps, ObjectiveKind kind)
        : target_(target.matrix()), target_adj_(target.matrix().adjoint()), kind_(kind) {
        if (target.dim() != device.dim()) {
            throw ContractError(
                "target dimension " + std::to_string(target.dim()) + " does not match device dimension " +
                std::to_string(device.dim()));
        }
        for (const auto &h : device.hamiltonians()) {
            eigensystems_.push_back(eigh(h.op));
            ComplexMatrix g = h.op.matrix();
            g *= -kI;
            generators_.push_back(std::move(g));
        }
        for (size_t j = 0; j < num_steps; j++) {
            step_ham_.push_back(device.hamiltonian_at_step(j));
        }
    }

    size_t num_steps() const {
        return step_ham_.size();
    }
    size_t hamiltonian_at(size_t step) const {
        return step_ham_[step];
    }
    const Eigensystem &eigensystem(size_t ham) const {
        return eigensystems_[ham];
    }

    ComplexMatrix unitary(std::span<const double> t) const {
        check_length(t);
        ComplexMatrix u = ComplexMatrix::identity(target_.dim());
        for (size_t j = 0; j < t.size(); j++) {
            u = propagator_from_eigensystem(eigensystems_[step_ham_[j]], t[j]) * u;
        }
        return u;
    }

    double value(std::span<const double> t) const {
        return objective_value(kind_, target_, unitary(t));
    }

    double value_and_gradient(std::span<const double> t, std::vector<double> &grad) const {
        check_length(t);
        size_t n = t.size();
        size_t d = target_.dim();
        std::vector<ComplexMatrix> factors;
        factors.reserve(n);
        for (size_t j = 0; j < n; j++) {
            factors.push_back(propagator_from_eigensystem(eigensystems_[step_ham_[j]], t[j]));
        }
        // prefix[j] = E_j ... E_1 (1-based), prefix[0] = I.
        std::vector<ComplexMatrix> prefix;
        prefix.reserve(n + 1);
        prefix.push_back(ComplexMatrix::identity(d));
        for (size_t j = 0; j < n; j++) {
            prefix.push_back(factors[j] * prefix.back());
        }
        const ComplexMatrix &u = prefix.back();
        Complex z = overlap(target_, u);
        double value = objective_value(kind_, target_, u);

        grad.assign(n, 0.0);
        Complex weight;
        if (kind_ == ObjectiveKind::plain) {
            weight = 1.0;
        } else {
            double mag = std::abs(z);
            weight = mag == 0 ? Complex(0.0) : std::conj(z) / mag;
        }
        // suffix = G^dagger E_n ... E_{j+1}
        ComplexMatrix suffix = target_adj_;
        for (size_t j = n; j-- > 0;) {
            ComplexMatrix pb = prefix[j + 1] * suffix;
            const ComplexMatrix &gen = generators_[step_ham_[j]];
            Complex dz = 0.0;
            for (size_t a = 0; a < d; a++) {
                for (size_t b = 0; b < d; b++) {
                    dz += pb(a, b) * gen(b, a);
                }
            }
            grad[j] = -2.0 * (weight * dz).real();
            suffix = suffix * factors[j];
        }
        return value;
    }

    ObjectiveKind kind() const {
        return kind_;
    }

   private:
    void check_length(std::span<const double> t) const {
        if (t.size() != step_ham_.size()) {
            throw ContractError(
                "expected " + std::to_string(step_ham_.size()) + " durations, got " + std::to_string(t.size()));
        }
    }

    ComplexMatrix target_;
    ComplexMatrix target_adj_;
    ObjectiveKind kind_;
    std::vector<Eigensystem> eigensystems_;
    std::vector<ComplexMatrix> generators_;
    std::vector<size_t> step_ham_;
};

/// Exact gradient of the chosen objective with respect to the step durations.
inline std::vector<double> objective_gradient(
    const DeviceModel &device, const UnitaryGate &target, ObjectiveKind kind, std::span<const double> durations) {
    SequenceObjective obj(device, target, durations.size(), kind);
    std::vector<double> grad;
    obj.value_and_gradient(durations, grad);
    return grad;
}

struct SynthesisOptions {
    ObjectiveKind objective = ObjectiveKind::phase_invariant;
    size_t restarts = 64;
    uint64_t seed = 42;
    size_t max_iters = 2000;
    double tol = 1e-8;
    /// Stop launching new batches once some start has converged.
    bool stop_at_first_success = true;
    /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
    size_t threads = 0;
};

struct SynthesisReport {
    std::string target_name;
    size_t steps = 0;
    std::vector<double> durations;
    double objective_value = std::numeric_limits<double>::infinity();
    ObjectiveKind objective = ObjectiveKind::phase_invariant;
    size_t restarts_used = 0;
    /// Total local-descent iterations over all restarts used.
    size_t iterations = 0;
    uint64_t seed = 0;
    bool converged = false;
};

struct LocalResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    size_t iterations = 0;
};

/// L-BFGS with Armijo backtracking. Stops once the value drops below `stop_value`,
/// the gradient vanishes, progress stalls, or `max_iters` is reached.
inline LocalResult lbfgs_descent(
    const SequenceObjective &obj, std::vector<double> x, size_t max_iters, double stop_value) {
    constexpr size_t kMemory = 12;
    constexpr double kArmijo = 1e-4;
    constexpr int kMaxHalvings = 60;
    constexpr int kStallLimit = 30;

    size_t n = x.size();
    std::vector<double> g(n);
    double f = obj.value_and_gradient(x, g);
    LocalResult out;
    if (!std::isfinite(f)) {
        return out;
    }
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    std::vector<double> dir(n), x_new(n), g_new(n);
    int stalled = 0;

    auto dot = [](const std::vector<double> &a, const std::vector<double> &b) {
        double s = 0;
        for (size_t k = 0; k < a.size(); k++) {
            s += a[k] * b[k];
        }
        return s;
    };

    size_t iter = 0;
    for (; iter < max_iters; iter++) {
        if (f <= stop_value) {
            break;
        }
        double gnorm = std::sqrt(dot(g, g));
        if (gnorm <= 1e-15) {
            break;
        }

        // Two-loop recursion.
        dir = g;
        std::vector<double> alpha(s_hist.size());
        for (size_t k = s_hist.size(); k-- > 0;) {
            alpha[k] = rho_hist[k] * dot(s_hist[k], dir);
            for (size_t i = 0; i < n; i++) {
                dir[i] -= alpha[k] * y_hist[k][i];
            }
        }
        double scale = s_hist.empty() ? std::min(1.0, 1.0 / gnorm)
                                      : dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
        for (auto &v : dir) {
            v *= scale;
        }
        for (size_t k = 0; k < s_hist.size(); k++) {
            double beta = rho_hist[k] * dot(y_hist[k], dir);
            for (size_t i = 0; i < n; i++) {
                dir[i] += (alpha[k] - beta) * s_hist[k][i];
            }
        }
        for (auto &v : dir) {
            v = -v;
        }
        double slope = dot(g, dir);
        if (!(slope < 0)) {
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            for (size_t i = 0; i < n; i++) {
                dir[i] = -g[i] * std::min(1.0, 1.0 / gnorm);
            }
            slope = dot(g, dir);
        }

        double step = 1.0;
        double f_new = 0;
        bool accepted = false;
        for (int h = 0; h < kMaxHalvings; h++) {
            for (size_t i = 0; i < n; i++) {
                x_new[i] = x[i] + step * dir[i];
            }
            f_new = obj.value_and_gradient(x_new, g_new);
            if (std::isfinite(f_new) && f_new <= f + kArmijo * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (s_hist.empty()) {
                break;
            }
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            continue;
        }

        std::vector<double> s(n), y(n);
        for (size_t i = 0; i < n; i++) {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        double sy = dot(s, y);
        if (sy > 1e-16 * std::sqrt(dot(s, s) * dot(y, y)) && sy > 0) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (s_hist.size() > kMemory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }

        stalled = (f - f_new <= 1e-13 * std::max(f, 1e-300)) ? stalled + 1 : 0;
        x.swap(x_new);
        g.swap(g_new);
        f = f_new;
        if (stalled >= kStallLimit) {
            iter++;
            break;
        }
    }
    out.x = std::move(x);
    out.value = f;
    out.iterations = iter;
    return out;
}

namespace detail {

inline double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::mt19937_64 start_rng(uint64_t seed, uint64_t start) {
    std::seed_seq seq{
        static_cast<uint32_t>(seed),
        static_cast<uint32_t>(seed >> 32),
        static_cast<uint32_t>(start),
        static_cast<uint32_t>(start >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace detail

/// Number of starts evaluated together; batches are the unit of early stopping, so
/// results are independent of the thread count.
inline constexpr size_t kRestartBatch = 8;

/// Multi-start synthesis of `target` as a `num_steps`-step cyclic sequence on `device`.
///
/// Start s samples t_j uniformly from [0, 2 pi / ||H_{c(j)}||) using a generator seeded
/// by (seed, s), then runs L-BFGS. The lowest objective wins; ties go to the lower start
/// index. The report is returned whether or not the tolerance was met.
inline SynthesisReport synthesize(
    const DeviceModel &device,
    const UnitaryGate &target,
    size_t num_steps,
    const SynthesisOptions &options = {},
    const std::string &target_name = "custom") {
    if (num_steps == 0) {
        throw InputError("number of steps must be at least 1");
    }
    if (options.restarts == 0) {
        throw InputError("restarts must be at least 1");
    }
    SequenceObjective obj(device, target, num_steps, options.objective);

    std::vector<double> windows(num_steps);
    for (size_t j = 0; j < num_steps; j++) {
        double norm = 0;
        for (double v : obj.eigensystem(obj.hamiltonian_at(j)).values) {
            norm = std::max(norm, std::abs(v));
        }
        windows[j] = 2.0 * std::numbers::pi / norm;
    }
    double stop_value = options.tol * 1e-4;

    auto run_start = [&](size_t start) {
        auto rng = detail::start_rng(options.seed, start);
        std::vector<double> x(num_steps);
        for (size_t j = 0; j < num_steps; j++) {
            x[j] = windows[j] * detail::uniform01(rng);
        }
        return lbfgs_descent(obj, std::move(x), options.max_iters, stop_value);
    };

    size_t threads = options.threads == 0 ? std::max<size_t>(1, std::thread::hardware_concurrency()) : options.threads;
    threads = std::min(threads, kRestartBatch);

    SynthesisReport report;
    report.target_name = target_name;
    report.steps = num_steps;
    report.objective = options.objective;
    report.seed = options.seed;
    LocalResult best;
    size_t done = 0;
    while (done < options.restarts) {
        size_t batch_end = std::min(options.restarts, done + kRestartBatch);
        std::vector<LocalResult> results(batch_end - done);
        if (threads <= 1) {
            for (size_t s = done; s < batch_end; s++) {
                results[s - done] = run_start(s);
            }
        } else {
            std::vector<std::future<void>> pending;
            std::atomic<size_t> next{done};
            for (size_t w = 0; w < threads; w++) {
                pending.push_back(std::async(std::launch::async, [&]() {
                    for (size_t s = next++; s < batch_end; s = next++) {
                        results[s - done] = run_start(s);
                    }
                }));
            }
            for (auto &p : pending) {
                p.get();
            }
        }
        for (auto &r : results) {
            report.iterations += r.iterations;
            if (std::isfinite(r.value) && r.value < best.value - 1e-15) {
                best = std::move(r);
            }
        }
        done = batch_end;
        if (options.stop_at_first_success && best.value <= options.tol) {
            break;
        }
    }
    report.restarts_used = done;
    if (!best.x.empty()) {
        report.durations = best.x;
        report.objective_value = obj.value(best.x);
    }
    report.converged = report.objective_value <= options.tol;
    return report;
}

inline std::string format_durations(std::span<const double> durations) {
    std::string out;
    for (size_t k = 0; k < durations.size(); k++) {
        if (k) {
            out += ",";
        }
        out += format_real(durations[k]);
    }
    return out;
}

inline std::vector<double> parse_durations(std::string_view text) {
    std::vector<double> out;
    if (text.empty()) {
        return out;
    }
    size_t pos = 0;
    size_t index = 1;
    while (true) {
        size_t comma = text.find(',', pos);
        std::string_view piece = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.front()))) {
            piece.remove_prefix(1);
        }
        while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.back()))) {
            piece.remove_suffix(1);
        }
        out.push_back(detail::parse_real({piece, index}, 0));
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
        index++;
    }
    return out;
}

/// One `key=value` line per field.
inline std::string format_report(const SynthesisReport &r) {
    std::ostringstream out;
    out << "target=" << r.target_name << "\n";
    out << "steps=" << r.steps << "\n";
    out << "objective=" << to_string(r.objective) << "\n";
    out << "objective_value=" << format_real(r.objective_value) << "\n";
    out << "durations=" << format_durations(r.durations) << "\n";
    out << "restarts_used=" << r.restarts_used << "\n";
    out << "iterations=" << r.iterations << "\n";
    out << "seed=" << r.seed << "\n";
    out << "converged=" << (r.converged ? "true" : "false") << "\n";
    return out.str();
}

inline SynthesisReport parse_report(std::string_view text) {
    SynthesisReport r;
    size_t line_no = 0;
    size_t pos = 0;
    auto to_size = [&](std::string_view v) {
        uint64_t n = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
        if (ec != std::errc() || ptr != v.data() + v.size()) {
            throw ParseError("expected a nonnegative integer, got '" + std::string(v) + "'", line_no, 0);
        }
        return n;
    };
    while (pos < text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        line_no++;
        if (line.empty()) {
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("expected key=value", line_no, 1);
        }
        std::string_view key = line.substr(0, eq);
        std::string_view value = line.substr(eq + 1);
        if (key == "target") {
            r.target_name = value;
        } else if (key == "steps") {
            r.steps = to_size(value);
        } else if (key == "objective") {
            r.objective = parse_objective_kind(value);
        } else if (key == "objective_value") {
            r.objective_value = detail::parse_real({value, eq + 2}, line_no);
        } else if (key == "durations") {
            r.durations = parse_durations(value);
        } else if (key == "restarts_used") {
            r.restarts_used = to_size(value);
        } else if (key == "iterations") {
            r.iterations = to_size(value);
        } else if (key == "seed") {
            r.seed = to_size(value);
        } else if (key == "converged") {
            if (value != "true" && value != "false") {
                throw ParseError("converged must be true or false", line_no, eq + 2);
            }
            r.converged = value == "true";
        } else {
            throw ParseError("unknown report field '" + std::string(key) + "'", line_no, 1);
        }
    }
    return r;
}

}  // namespace gatesynth
