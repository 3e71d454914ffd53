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

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "gatesynth/controllability.hpp"
#include "gatesynth/error.hpp"
#include "gatesynth/matrix.hpp"
#include "gatesynth/pulse.hpp"

namespace gatesynth {

/// U = e^{i phase} (w0 I - i (w1 X + w2 Y + w3 Z)).
struct Su2Params {
    double w0 = 1;
    double w1 = 0;
    double w2 = 0;
    double w3 = 0;
    double phase = 0;
};

inline Su2Params su2_from_unitary(const UnitaryGate &u) {
    if (u.dim() != 2) {
        throw ContractError("su2_from_unitary needs a 2x2 unitary");
    }
    const ComplexMatrix &m = u.matrix();
    Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    Su2Params p;
    p.phase = 0.5 * std::arg(det);
    Complex unphase = std::polar(1.0, -p.phase);
    Complex v00 = unphase * m(0, 0);
    Complex v01 = unphase * m(0, 1);
    Complex v10 = unphase * m(1, 0);
    Complex v11 = unphase * m(1, 1);
    p.w0 = 0.5 * (v00 + v11).real();
    p.w3 = 0.5 * (v11 - v00).imag();
    p.w2 = 0.5 * (v10 - v01).real();
    p.w1 = -0.5 * (v01 + v10).imag();
    return p;
}

inline UnitaryGate su2_reconstruct(const Su2Params &p) {
    ComplexMatrix m{{Complex(p.w0, -p.w3), Complex(-p.w2, -p.w1)}, {Complex(p.w2, -p.w1), Complex(p.w0, p.w3)}};
    m *= std::polar(1.0, p.phase);
    return UnitaryGate(std::move(m), 1e-10);
}

/// Durations of a closed-form solution, the branch integers used to make each duration
/// nonnegative, and the phase-invariant reconstruction error that was verified.
struct AnalyticSolution {
    PulseSequence sequence;
    std::vector<long> branches;
    double error = 0;
};

namespace detail {

/// Coefficients a with H = c I + a . sigma for a 2x2 Hermitian H.
inline std::array<double, 3> bloch_vector(const HermitianOperator &h) {
    const ComplexMatrix &m = h.matrix();
    return {m(0, 1).real(), -m(0, 1).imag(), 0.5 * (m(0, 0).real() - m(1, 1).real())};
}

inline double dot3(const std::array<double, 3> &a, const std::array<double, 3> &b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline std::array<double, 3> cross3(const std::array<double, 3> &a, const std::array<double, 3> &b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Smallest k >= 0 with raw + k * period >= 0; returns the shifted value and k.
inline std::pair<double, long> lift_nonnegative(double raw, double period) {
    if (raw >= 0) {
        return {raw, 0};
    }
    long k = static_cast<long>(std::ceil(-raw / period));
    double t = raw + static_cast<double>(k) * period;
    if (t < 0) {
        k++;
        t += period;
    }
    return {t, k};
}

/// Reduces t into [0, period).
inline double reduce_period(double t, double period) {
    double r = std::fmod(t, period);
    if (r < 0) {
        r += period;
    }
    if (r >= period) {
        r = 0;
    }
    return r;
}

}  // namespace detail

inline constexpr double kEulerTolerance = 1e-10;
inline constexpr double kJosephsonTolerance = 1e-9;

/// Durations (t1, t2, t3) with target = e^{-i t3 H1} e^{-i t2 H2} e^{-i t1 H1} up to a global phase.
///
/// Requires Tr(H1 H2) = 0 with perpendicular Bloch axes. Each duration is reduced
/// into [0, 4 pi / omega_k), where omega_k is the rotation rate of H_k.
inline AnalyticSolution euler_three_step(
    const HermitianOperator &h1, const HermitianOperator &h2, const UnitaryGate &target) {
    if (h1.dim() != 2 || h2.dim() != 2 || target.dim() != 2) {
        throw ContractError("euler_three_step works on single-qubit operators");
    }
    double n1 = hs_inner(h1, h1);
    double n2 = hs_inner(h2, h2);
    if (std::abs(hs_inner(h1, h2)) > 1e-10 * std::sqrt(n1 * n2)) {
        throw PreconditionError(
            "Hamiltonians are not orthogonal (Tr(H1 H2) != 0); use the Josephson four-step solver or numeric synthesis");
    }
    if (lie_closure({h1, h2}).dimension < 3) {
        throw ControllabilityError("Hamiltonian pair does not generate su(2)");
    }
    auto a1 = detail::bloch_vector(h1);
    auto a2 = detail::bloch_vector(h2);
    double r1 = std::sqrt(detail::dot3(a1, a1));
    double r2 = std::sqrt(detail::dot3(a2, a2));
    std::array<double, 3> z_axis{a1[0] / r1, a1[1] / r1, a1[2] / r1};
    std::array<double, 3> x_axis{a2[0] / r2, a2[1] / r2, a2[2] / r2};
    if (std::abs(detail::dot3(z_axis, x_axis)) > 1e-10) {
        throw PreconditionError("rotation axes of H1 and H2 are not perpendicular (identity components present)");
    }
    std::array<double, 3> y_axis = detail::cross3(z_axis, x_axis);

    Su2Params w = su2_from_unitary(target);
    std::array<double, 3> v{w.w1, w.w2, w.w3};
    double q1 = detail::dot3(v, x_axis);
    double q2 = detail::dot3(v, y_axis);
    double q3 = detail::dot3(v, z_axis);

    // R_z(gamma) R_x(beta) R_z(alpha) has quaternion
    // (cb cos S, sb cos D, sb sin D, cb sin S) with S = (alpha+gamma)/2, D = (gamma-alpha)/2.
    double transverse = std::hypot(q1, q2);
    double sum_half = std::atan2(q3, w.w0);
    double diff_half = transverse <= 1e-15 ? -sum_half : std::atan2(q2, q1);
    double beta = 2.0 * std::atan2(transverse, std::hypot(w.w0, q3));
    double alpha = sum_half - diff_half;
    double gamma = sum_half + diff_half;

    double omega1 = 2.0 * r1;
    double omega2 = 2.0 * r2;
    double period1 = 4.0 * std::numbers::pi / omega1;
    double period2 = 4.0 * std::numbers::pi / omega2;

    AnalyticSolution out;
    out.sequence.steps = {
        {0, detail::reduce_period(alpha / omega1, period1)},
        {1, detail::reduce_period(beta / omega2, period2)},
        {0, detail::reduce_period(gamma / omega1, period1)},
    };
    std::vector<HermitianOperator> hams{h1, h2};
    out.error = f_phase_invariant(target, propagate(hams, out.sequence));
    if (!(out.error <= kEulerTolerance)) {
        throw AnalyticDomainError("Euler reconstruction error " + std::to_string(out.error) + " exceeds tolerance");
    }
    return out;
}

/// The charge-qubit pair H1 = -E_J/2 X, H2 = E_c/2 Z - E_J/2 X.
inline std::array<HermitianOperator, 2> josephson_pair(double e_c, double e_j) {
    return {pauli_string(-0.5 * e_j, "X"), pauli_string(0.5 * e_c, "Z") + pauli_string(-0.5 * e_j, "X")};
}

/// Closed-form durations for the charge-qubit pair, in the alternating order
/// e^{-i t4 H2} e^{-i t3 H1} e^{-i t2 H2} e^{-i t1 H1}.
///
/// Valid when psi = x / sqrt(1 + x^2) < 1/2 (x = E_J / E_c) and
/// E_c^2 (w0^2 + w1^2) >= E_J^2 (w2^2 + w3^2). On that domain the H1-H2-H1 block
/// already reproduces the target, so the fourth duration is 0. Every duration is
/// lifted by the smallest multiple of its period (4 pi / E_J for H1 slots,
/// 4 pi / sqrt(E_c^2 + E_J^2) for H2 slots) that makes it nonnegative; the
/// multiples are returned in `branches`. The result is re-propagated and rejected if
/// the reconstruction error exceeds 1e-9.
inline AnalyticSolution jj_four_step(double e_c, double e_j, const UnitaryGate &target) {
    if (!(e_c > 0) || !(e_j > 0) || !std::isfinite(e_c) || !std::isfinite(e_j)) {
        throw InputError("E_c and E_J must be positive and finite");
    }
    if (target.dim() != 2) {
        throw ContractError("jj_four_step needs a single-qubit target");
    }
    double x = e_j / e_c;
    double psi = x / std::sqrt(1 + x * x);
    if (psi >= 0.5) {
        throw RegimeError(
            "E_J/E_c = " + std::to_string(x) + " gives psi = " + std::to_string(psi) +
            " >= cos(pi/3); the four-step formulas do not apply");
    }

    Su2Params w = su2_from_unitary(target);
    double w0 = w.w0, w1 = w.w1, w2 = w.w2, w3 = w.w3;
    double omega = std::hypot(e_c, e_j);
    double r23_sq = w2 * w2 + w3 * w3;
    double r23 = std::sqrt(r23_sq);
    double disc = e_c * e_c * (w0 * w0 + w1 * w1) - e_j * e_j * r23_sq;
    if (disc < -1e-12 * e_c * e_c) {
        throw AnalyticDomainError(
            "E_c^2 (w0^2 + w1^2) - E_J^2 (w2^2 + w3^2) = " + std::to_string(disc) +
            " < 0; the closed form has no real solution for this target (use numeric synthesis)");
    }
    double root = std::sqrt(std::max(disc, 0.0));

    double t1_raw, t2_raw, t3_raw;
    if (r23 <= 1e-14) {
        // Target in the span of I and X: every angle argument is 0/0 and the limit is a
        // single H1 rotation, e^{+i t E_J/2 X} = w0 - i w1 X.
        t1_raw = -2.0 / e_j * std::atan2(w1, w0);
        t2_raw = 0;
        t3_raw = 0;
    } else {
        t1_raw = -2.0 / e_j *
                 std::atan2(e_c * (w0 * w3 - w1 * w2) + r23 * root, -e_c * (w0 * w2 + w1 * w3) + e_j * r23_sq);
        t2_raw = -2.0 / omega * std::atan2(omega * r23, root);
        t3_raw = -2.0 / e_j *
                 std::atan2(e_c * (w0 * w3 + w1 * w2) + r23 * root, e_c * (w0 * w2 - w1 * w3) + e_j * r23_sq);
    }
    double t4_raw = 0;

    double period1 = 4.0 * std::numbers::pi / e_j;
    double period2 = 4.0 * std::numbers::pi / omega;
    auto [t1, k1] = detail::lift_nonnegative(t1_raw, period1);
    auto [t2, k2] = detail::lift_nonnegative(t2_raw, period2);
    auto [t3, k3] = detail::lift_nonnegative(t3_raw, period1);
    auto [t4, k4] = detail::lift_nonnegative(t4_raw, period2);

    AnalyticSolution out;
    out.sequence.steps = {{0, t1}, {1, t2}, {0, t3}, {1, t4}};
    out.branches = {k1, k2, k3, k4};
    auto pair = josephson_pair(e_c, e_j);
    out.error = f_phase_invariant(target, propagate(pair, out.sequence));
    if (!(out.error <= kJosephsonTolerance)) {
        throw AnalyticDomainError(
            "closed-form reconstruction error " + std::to_string(out.error) + " exceeds 1e-9 for this target");
    }
    return out;
}

}  // namespace gatesynth
