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
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gatesynth/device.hpp"
#include "gatesynth/error.hpp"
#include "gatesynth/matrix.hpp"

namespace gatesynth {

struct GateSpec {
    std::string name;
    std::vector<double> params;

    /// Canonical text form, e.g. `cphase(3.1415926535897931)`.
    std::string str() const {
        if (params.empty()) {
            return name;
        }
        std::string out = name + "(";
        for (size_t k = 0; k < params.size(); k++) {
            out += (k ? "," : "") + format_real(params[k]);
        }
        return out + ")";
    }
};

struct GateCatalogEntry {
    std::string name;
    size_t num_params;
    size_t num_qubits;
    std::string signature;
    std::string description;
};

inline const std::vector<GateCatalogEntry> &gate_catalog() {
    static const std::vector<GateCatalogEntry> catalog{
        {"i", 0, 1, "i", "identity"},
        {"x", 0, 1, "x", "Pauli X"},
        {"y", 0, 1, "y", "Pauli Y"},
        {"z", 0, 1, "z", "Pauli Z"},
        {"h", 0, 1, "h", "Hadamard"},
        {"phase", 1, 1, "phase(alpha)", "diag(1, e^{i alpha})"},
        {"cnot", 0, 2, "cnot", "controlled NOT, qubit 1 controls"},
        {"swap", 0, 2, "swap", "exchange of the two qubits"},
        {"qft2", 0, 2, "qft2", "two-qubit quantum Fourier transform, entries i^{jk}/2"},
        {"cphase", 1, 2, "cphase(alpha)", "diag(1, 1, 1, e^{i alpha})"},
        {"cu", 2, 2, "cu(theta,phi)", "controlled standard one-qubit gate P(pi/2+phi) H P(2 theta) H"},
    };
    return catalog;
}

inline const GateCatalogEntry &gate_entry(std::string_view name) {
    for (const auto &e : gate_catalog()) {
        if (e.name == name) {
            return e;
        }
    }
    throw InputError("unknown gate '" + std::string(name) + "'");
}

/// Parses `name` or `name(p1,p2,...)`.
inline GateSpec parse_gate_spec(std::string_view text) {
    GateSpec spec;
    size_t open = text.find('(');
    if (open == std::string_view::npos) {
        spec.name = text;
    } else {
        if (text.back() != ')') {
            throw ParseError("gate parameters must end with ')'", 0, text.size());
        }
        spec.name = text.substr(0, open);
        std::string_view inner = text.substr(open + 1, text.size() - open - 2);
        size_t pos = 0;
        while (true) {
            size_t comma = inner.find(',', pos);
            std::string_view piece = inner.substr(pos, comma == inner.npos ? inner.npos : comma - pos);
            while (!piece.empty() && piece.front() == ' ') {
                piece.remove_prefix(1);
            }
            while (!piece.empty() && piece.back() == ' ') {
                piece.remove_suffix(1);
            }
            spec.params.push_back(detail::parse_real({piece, open + 2 + pos}, 0));
            if (comma == inner.npos) {
                break;
            }
            pos = comma + 1;
        }
    }
    if (spec.name.empty()) {
        throw ParseError("empty gate name", 0, 1);
    }
    return spec;
}

inline UnitaryGate phase_gate(double alpha) {
    return UnitaryGate(ComplexMatrix{{1, 0}, {0, std::polar(1.0, alpha)}});
}

inline UnitaryGate hadamard() {
    double r = 1.0 / std::numbers::sqrt2;
    return UnitaryGate(ComplexMatrix{{r, r}, {r, -r}});
}

/// |0><0| (x) I + |1><1| (x) u, qubit 1 controlling.
inline UnitaryGate controlled(const UnitaryGate &u) {
    if (u.dim() != 2) {
        throw ContractError("controlled() expects a single-qubit gate");
    }
    ComplexMatrix m = ComplexMatrix::identity(4);
    for (size_t r = 0; r < 2; r++) {
        for (size_t c = 0; c < 2; c++) {
            m(2 + r, 2 + c) = u.matrix()(r, c);
        }
    }
    return UnitaryGate(std::move(m), 1e-10);
}

/// P(pi/2 + phi) H P(2 theta) H: two Hadamards and two phase gates, the rightmost acting first.
inline UnitaryGate standard_one_qubit(double theta, double phi) {
    UnitaryGate h = hadamard();
    return phase_gate(std::numbers::pi / 2 + phi) * h * phase_gate(2 * theta) * h;
}

inline UnitaryGate build_gate(const GateSpec &spec) {
    const GateCatalogEntry &entry = gate_entry(spec.name);
    if (spec.params.size() != entry.num_params) {
        throw InputError(
            "gate '" + spec.name + "' takes " + std::to_string(entry.num_params) + " parameter(s), got " +
            std::to_string(spec.params.size()));
    }
    const auto &n = spec.name;
    const auto &p = spec.params;
    if (n == "i") {
        return UnitaryGate(pauli::i2());
    }
    if (n == "x") {
        return UnitaryGate(pauli::x());
    }
    if (n == "y") {
        return UnitaryGate(pauli::y());
    }
    if (n == "z") {
        return UnitaryGate(pauli::z());
    }
    if (n == "h") {
        return hadamard();
    }
    if (n == "phase") {
        return phase_gate(p[0]);
    }
    if (n == "cnot") {
        return UnitaryGate(ComplexMatrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
    }
    if (n == "swap") {
        return UnitaryGate(ComplexMatrix{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}});
    }
    if (n == "qft2") {
        ComplexMatrix m(4);
        const Complex powers[4] = {1.0, kI, -1.0, -kI};
        for (size_t j = 0; j < 4; j++) {
            for (size_t k = 0; k < 4; k++) {
                m(j, k) = 0.5 * powers[(j * k) % 4];
            }
        }
        return UnitaryGate(std::move(m));
    }
    if (n == "cphase") {
        ComplexMatrix m = ComplexMatrix::identity(4);
        m(3, 3) = std::polar(1.0, p[0]);
        return UnitaryGate(std::move(m));
    }
    if (n == "cu") {
        return controlled(standard_one_qubit(p[0], p[1]));
    }
    throw InputError("unknown gate '" + n + "'");
}

inline UnitaryGate build_gate(std::string_view text) {
    return build_gate(parse_gate_spec(text));
}

/// Step counts for the standard circuit model next to the intrinsic-Hamiltonian scheme.
inline std::vector<std::pair<std::string, int>> baseline_step_counts(std::string_view target_class) {
    if (target_class == "one_qubit") {
        return {{"standard", 4}, {"standard_typical", 8}, {"intrinsic_orthogonal", 3}, {"intrinsic_josephson", 4}};
    }
    if (target_class == "two_qubit") {
        return {{"standard_cartan", 27}, {"intrinsic", 15}};
    }
    if (target_class == "two_qubit_controlled") {
        return {{"standard_cartan", 19}, {"intrinsic", 15}};
    }
    throw InputError("unknown target class '" + std::string(target_class) + "'");
}

}  // namespace gatesynth
