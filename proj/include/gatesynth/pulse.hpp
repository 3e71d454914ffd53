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

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gatesynth/error.hpp"
#include "gatesynth/matrix.hpp"

namespace gatesynth {

struct PulseStep {
    size_t hamiltonian;
    double duration;

    bool operator==(const PulseStep &) const = default;
};

/// Steps in time order: steps[0] acts first, so it is the rightmost factor of the product.
struct PulseSequence {
    std::vector<PulseStep> steps;

    std::vector<double> durations() const {
        std::vector<double> out;
        for (const auto &s : steps) {
            out.push_back(s.duration);
        }
        return out;
    }

    bool operator==(const PulseSequence &) const = default;
};

/// Product e^{-i t_n H_{c(n)}} ... e^{-i t_1 H_{c(1)}}.
inline UnitaryGate propagate(std::span<const HermitianOperator> hamiltonians, const PulseSequence &seq) {
    if (hamiltonians.empty()) {
        throw ContractError("propagate needs at least one Hamiltonian");
    }
    size_t d = hamiltonians.front().dim();
    ComplexMatrix u = ComplexMatrix::identity(d);
    for (size_t k = 0; k < seq.steps.size(); k++) {
        const auto &step = seq.steps[k];
        if (step.hamiltonian >= hamiltonians.size()) {
            throw ContractError(
                "step " + std::to_string(k + 1) + " refers to Hamiltonian index " + std::to_string(step.hamiltonian) +
                " but only " + std::to_string(hamiltonians.size()) + " exist");
        }
        if (!std::isfinite(step.duration)) {
            throw InputError("step " + std::to_string(k + 1) + " has a non-finite duration");
        }
        u = expm_hermitian(hamiltonians[step.hamiltonian], step.duration).matrix() * u;
    }
    return UnitaryGate(std::move(u), 1e-11);
}

enum class ObjectiveKind { plain, phase_invariant };

inline std::string to_string(ObjectiveKind kind) {
    return kind == ObjectiveKind::plain ? "plain" : "phase_invariant";
}

inline ObjectiveKind parse_objective_kind(std::string_view text) {
    if (text == "plain") {
        return ObjectiveKind::plain;
    }
    if (text == "phase" || text == "phase_invariant") {
        return ObjectiveKind::phase_invariant;
    }
    throw InputError("unknown objective '" + std::string(text) + "' (expected plain or phase)");
}

/// Squared Frobenius distance ||G - U||^2.
inline double f_test(const ComplexMatrix &target, const ComplexMatrix &u) {
    target.require_same_dim(u, "f_test");
    double s = 0;
    for (size_t k = 0; k < target.entries().size(); k++) {
        s += std::norm(target.entries()[k] - u.entries()[k]);
    }
    return s;
}

inline double f_test(const UnitaryGate &target, const UnitaryGate &u) {
    return f_test(target.matrix(), u.matrix());
}

/// Tr(G^dagger U).
inline Complex overlap(const ComplexMatrix &target, const ComplexMatrix &u) {
    target.require_same_dim(u, "overlap");
    Complex z = 0.0;
    for (size_t k = 0; k < target.entries().size(); k++) {
        z += std::conj(target.entries()[k]) * u.entries()[k];
    }
    return z;
}

/// min over phi of ||G - e^{i phi} U||^2, evaluated at the optimal phase so the result
/// stays accurate near zero (equals 2d - 2|Tr(G^dagger U)| for unitaries).
inline double f_phase_invariant(const ComplexMatrix &target, const ComplexMatrix &u) {
    Complex z = overlap(target, u);
    double mag = std::abs(z);
    Complex phase = mag == 0 ? Complex(1.0) : std::conj(z) / mag;
    double s = 0;
    for (size_t k = 0; k < target.entries().size(); k++) {
        s += std::norm(target.entries()[k] - phase * u.entries()[k]);
    }
    return s;
}

inline double f_phase_invariant(const UnitaryGate &target, const UnitaryGate &u) {
    return f_phase_invariant(target.matrix(), u.matrix());
}

inline double objective_value(ObjectiveKind kind, const ComplexMatrix &target, const ComplexMatrix &u) {
    return kind == ObjectiveKind::plain ? f_test(target, u) : f_phase_invariant(target, u);
}

}  // namespace gatesynth
