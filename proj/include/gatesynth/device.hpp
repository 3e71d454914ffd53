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
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gatesynth/error.hpp"
#include "gatesynth/matrix.hpp"

namespace gatesynth {

struct PauliTerm {
    double coeff;
    std::string letters;

    bool operator==(const PauliTerm &) const = default;
};

/// One intrinsic Hamiltonian of a device, kept both as its Pauli expansion and as a matrix.
struct DeviceHamiltonian {
    std::string label;
    std::vector<PauliTerm> terms;
    HermitianOperator op;
};

/// Binary switch positions; bit k is switch k+1.
struct SwitchSetting {
    std::vector<bool> bits;

    static SwitchSetting parse(std::string_view pattern) {
        SwitchSetting s;
        for (size_t k = 0; k < pattern.size(); k++) {
            if (pattern[k] != '0' && pattern[k] != '1') {
                throw ParseError("switch pattern must consist of 0 and 1", 0, k + 1);
            }
            s.bits.push_back(pattern[k] == '1');
        }
        return s;
    }

    std::string str() const {
        std::string out;
        for (bool b : bits) {
            out += b ? '1' : '0';
        }
        return out;
    }

    bool operator==(const SwitchSetting &) const = default;
};

struct SwitchRule {
    SwitchSetting setting;
    size_t hamiltonian;
};

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline HermitianOperator operator_from_terms(size_t num_qubits, const std::vector<PauliTerm> &terms) {
    HermitianOperator acc(ComplexMatrix(size_t{1} << num_qubits));
    for (const auto &t : terms) {
        if (t.letters.size() != num_qubits) {
            throw InputError(
                "Pauli string '" + t.letters + "' has length " + std::to_string(t.letters.size()) + ", expected " +
                std::to_string(num_qubits));
        }
        acc += pauli_string(t.coeff, t.letters);
    }
    return acc;
}

/// A device: intrinsic Hamiltonians, the cyclic order in which synthesis applies
/// them, physical parameters, and an optional binary switch table.
class DeviceModel {
   public:
    DeviceModel(
        std::string name,
        size_t num_qubits,
        std::vector<DeviceHamiltonian> hamiltonians,
        std::vector<size_t> cycle_order = {},
        std::vector<std::pair<std::string, double>> parameters = {},
        std::vector<SwitchRule> switches = {})
        : name_(std::move(name)),
          num_qubits_(num_qubits),
          hamiltonians_(std::move(hamiltonians)),
          cycle_order_(std::move(cycle_order)),
          parameters_(std::move(parameters)),
          switches_(std::move(switches)) {
        if (num_qubits_ == 0) {
            throw InputError("device must have at least one qubit");
        }
        if (hamiltonians_.empty()) {
            throw InputError("device declares no Hamiltonians");
        }
        std::set<std::string> labels;
        size_t d = size_t{1} << num_qubits_;
        for (const auto &h : hamiltonians_) {
            if (!labels.insert(h.label).second) {
                throw InputError("duplicate Hamiltonian label '" + h.label + "'");
            }
            if (h.op.dim() != d) {
                throw InputError("Hamiltonian '" + h.label + "' has dimension " + std::to_string(h.op.dim()) +
                                 ", expected " + std::to_string(d));
            }
            if (h.op.matrix().frobenius_norm() == 0) {
                throw InputError("Hamiltonian '" + h.label + "' is zero");
            }
        }
        if (cycle_order_.empty()) {
            for (size_t k = 0; k < hamiltonians_.size(); k++) {
                cycle_order_.push_back(k);
            }
        }
        for (size_t k : cycle_order_) {
            if (k >= hamiltonians_.size()) {
                throw InputError("cycle order index " + std::to_string(k) + " out of range");
            }
        }
        if (!switches_.empty()) {
            size_t width = switches_.front().setting.bits.size();
            if (width == 0 || width > num_qubits_ + 1) {
                throw InputError("switch table must use between 1 and N+1 switches");
            }
            std::set<std::vector<bool>> seen;
            for (const auto &rule : switches_) {
                if (rule.setting.bits.size() != width) {
                    throw InputError("switch patterns have inconsistent widths");
                }
                if (rule.hamiltonian >= hamiltonians_.size()) {
                    throw InputError("switch rule refers to a missing Hamiltonian");
                }
                if (!seen.insert(rule.setting.bits).second) {
                    throw InputError("switch pattern " + rule.setting.str() + " is mapped twice");
                }
            }
        }
    }

    const std::string &name() const {
        return name_;
    }
    size_t num_qubits() const {
        return num_qubits_;
    }
    size_t dim() const {
        return size_t{1} << num_qubits_;
    }
    const std::vector<DeviceHamiltonian> &hamiltonians() const {
        return hamiltonians_;
    }
    const HermitianOperator &op(size_t k) const {
        return hamiltonians_.at(k).op;
    }
    std::vector<HermitianOperator> operators() const {
        std::vector<HermitianOperator> out;
        for (const auto &h : hamiltonians_) {
            out.push_back(h.op);
        }
        return out;
    }
    const std::vector<size_t> &cycle_order() const {
        return cycle_order_;
    }
    const std::vector<std::pair<std::string, double>> &parameters() const {
        return parameters_;
    }
    std::optional<double> parameter(std::string_view key) const {
        for (const auto &[k, v] : parameters_) {
            if (k == key) {
                return v;
            }
        }
        return std::nullopt;
    }
    const std::vector<SwitchRule> &switches() const {
        return switches_;
    }
    size_t switch_count() const {
        return switches_.empty() ? 0 : switches_.front().setting.bits.size();
    }

    std::optional<size_t> index_of(std::string_view label) const {
        for (size_t k = 0; k < hamiltonians_.size(); k++) {
            if (hamiltonians_[k].label == label) {
                return k;
            }
        }
        return std::nullopt;
    }

    /// Hamiltonian applied at 0-based step j of a cyclic sequence.
    size_t hamiltonian_at_step(size_t step) const {
        return cycle_order_[step % cycle_order_.size()];
    }

   private:
    std::string name_;
    size_t num_qubits_;
    std::vector<DeviceHamiltonian> hamiltonians_;
    std::vector<size_t> cycle_order_;
    std::vector<std::pair<std::string, double>> parameters_;
    std::vector<SwitchRule> switches_;
};

using DeviceParams = std::map<std::string, double>;

namespace detail {

inline DeviceHamiltonian make_hamiltonian(std::string label, size_t n, std::vector<PauliTerm> terms) {
    HermitianOperator op = operator_from_terms(n, terms);
    return {std::move(label), std::move(terms), std::move(op)};
}

inline double require_param(const DeviceParams &params, const std::string &device, const std::string &key) {
    auto it = params.find(key);
    if (it == params.end()) {
        throw InputError("device '" + device + "' requires parameter " + key);
    }
    if (!(it->second > 0) || !std::isfinite(it->second)) {
        throw InputError("parameter " + key + " must be positive and finite, got " + format_real(it->second));
    }
    return it->second;
}

inline void reject_unknown_params(
    const DeviceParams &params, const std::string &device, std::initializer_list<std::string_view> allowed) {
    for (const auto &[k, v] : params) {
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
            throw InputError("device '" + device + "' does not take parameter " + k);
        }
    }
}

inline std::vector<PauliTerm> heisenberg(double j) {
    return {{j, "XX"}, {j, "YY"}, {j, "ZZ"}};
}

inline std::vector<PauliTerm> concat(std::vector<PauliTerm> a, const std::vector<PauliTerm> &b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace detail

struct BuiltinDeviceInfo {
    std::string name;
    std::string signature;
    std::string description;
};

inline const std::vector<BuiltinDeviceInfo> &builtin_device_catalog() {
    static const std::vector<BuiltinDeviceInfo> catalog{
        {"nmr1", "", "1 qubit, orthogonal pair {Z, X}"},
        {"jj1", "E_c,E_J", "1 qubit charge Josephson junction, H1 = -E_J/2 X, H2 = E_c/2 Z - E_J/2 X, 1 switch"},
        {"heis2", "B1,B2,J12", "2 qubits, B1 Z(1), B2 X(2), J12 (XX+YY+ZZ)"},
        {"heis2perm", "B1,B2,J12", "2 qubits, Heisenberg coupling that cannot be switched off"},
        {"jj2", "E_c,E_J,E_L", "2 coupled Josephson junctions, 4 Hamiltonians, 3 switches"},
    };
    return catalog;
}

inline bool is_builtin_device(std::string_view name) {
    for (const auto &info : builtin_device_catalog()) {
        if (info.name == name) {
            return true;
        }
    }
    return false;
}

/// Constructs one of the built-in device models. Parameters must all be positive.
inline DeviceModel builtin_device(const std::string &name, const DeviceParams &params = {}) {
    using detail::concat;
    using detail::make_hamiltonian;
    using detail::require_param;
    if (name == "nmr1") {
        detail::reject_unknown_params(params, name, {});
        return DeviceModel(name, 1, {make_hamiltonian("H1", 1, {{1.0, "Z"}}), make_hamiltonian("H2", 1, {{1.0, "X"}})});
    }
    if (name == "jj1") {
        detail::reject_unknown_params(params, name, {"E_c", "E_J"});
        double ec = require_param(params, name, "E_c");
        double ej = require_param(params, name, "E_J");
        return DeviceModel(
            name,
            1,
            {make_hamiltonian("H1", 1, {{-0.5 * ej, "X"}}),
             make_hamiltonian("H2", 1, {{0.5 * ec, "Z"}, {-0.5 * ej, "X"}})},
            {},
            {{"E_c", ec}, {"E_J", ej}},
            {{SwitchSetting::parse("0"), 0}, {SwitchSetting::parse("1"), 1}});
    }
    if (name == "heis2" || name == "heis2perm") {
        detail::reject_unknown_params(params, name, {"B1", "B2", "J12"});
        double b1 = require_param(params, name, "B1");
        double b2 = require_param(params, name, "B2");
        double j = require_param(params, name, "J12");
        std::vector<PauliTerm> coupling = detail::heisenberg(j);
        std::vector<PauliTerm> always = name == "heis2perm" ? coupling : std::vector<PauliTerm>{};
        return DeviceModel(
            name,
            2,
            {make_hamiltonian("H1", 2, concat({{b1, "ZI"}}, always)),
             make_hamiltonian("H2", 2, concat({{b2, "IX"}}, always)),
             make_hamiltonian("H3", 2, coupling)},
            {},
            {{"B1", b1}, {"B2", b2}, {"J12", j}});
    }
    if (name == "jj2") {
        detail::reject_unknown_params(params, name, {"E_c", "E_J", "E_L"});
        double ec = require_param(params, name, "E_c");
        double ej = require_param(params, name, "E_J");
        double el = require_param(params, name, "E_L");
        std::vector<PauliTerm> tunnel{{-0.5 * ej, "XI"}, {-0.5 * ej, "IX"}};
        return DeviceModel(
            name,
            2,
            {make_hamiltonian("H1", 2, concat({{0.5 * ec, "ZI"}, {0.5 * ec, "IZ"}}, tunnel)),
             make_hamiltonian("H2", 2, concat(tunnel, {{-0.5 * el, "YY"}})),
             make_hamiltonian("H3", 2, concat({{0.5 * ec, "IZ"}}, tunnel)),
             make_hamiltonian("H4", 2, concat({{0.5 * ec, "ZI"}}, tunnel))},
            {},
            {{"E_c", ec}, {"E_J", ej}, {"E_L", el}},
            // Switch order: E_c on qubit 1, E_c on qubit 2, E_L coupling.
            {{SwitchSetting::parse("110"), 0},
             {SwitchSetting::parse("001"), 1},
             {SwitchSetting::parse("010"), 2},
             {SwitchSetting::parse("100"), 3}});
    }
    throw InputError("unknown device '" + name + "'");
}

/// The Hamiltonian selected by a switch setting.
inline const HermitianOperator &hamiltonian_for(const DeviceModel &device, const SwitchSetting &setting) {
    if (device.switches().empty()) {
        throw InputError("device '" + device.name() + "' declares no switch table");
    }
    if (setting.bits.size() != device.switch_count()) {
        throw InputError(
            "device '" + device.name() + "' has " + std::to_string(device.switch_count()) + " switches, setting has " +
            std::to_string(setting.bits.size()));
    }
    for (const auto &rule : device.switches()) {
        if (rule.setting == setting) {
            return device.op(rule.hamiltonian);
        }
    }
    throw InputError("switch setting " + setting.str() + " selects no Hamiltonian on device '" + device.name() + "'");
}

/// Writes the device in the line-oriented config format accepted by load_device.
inline std::string serialize_device(const DeviceModel &device) {
    std::ostringstream out;
    out << "name " << device.name() << "\n";
    out << "qubits " << device.num_qubits() << "\n";
    for (const auto &[k, v] : device.parameters()) {
        out << "param " << k << " " << format_real(v) << "\n";
    }
    out << "cycle";
    for (size_t k : device.cycle_order()) {
        out << " " << device.hamiltonians()[k].label;
    }
    out << "\n";
    for (const auto &h : device.hamiltonians()) {
        out << "hamiltonian " << h.label << "\n";
        for (const auto &t : h.terms) {
            out << "term " << format_real(t.coeff) << " " << t.letters << "\n";
        }
    }
    for (const auto &rule : device.switches()) {
        out << "switch " << rule.setting.str() << " -> " << device.hamiltonians()[rule.hamiltonian].label << "\n";
    }
    return out.str();
}

namespace detail {

struct Token {
    std::string_view text;
    size_t column;
};

inline std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    size_t k = 0;
    while (k < line.size()) {
        while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) {
            k++;
        }
        if (k >= line.size()) {
            break;
        }
        size_t start = k;
        while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) {
            k++;
        }
        out.push_back({line.substr(start, k - start), start + 1});
    }
    return out;
}

inline double parse_real(const Token &tok, size_t line) {
    double v = 0;
    const char *first = tok.text.data();
    const char *last = first + tok.text.size();
    if (!tok.text.empty() && *first == '+') {
        first++;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw ParseError("expected a decimal real, got '" + std::string(tok.text) + "'", line, tok.column);
    }
    return v;
}

}  // namespace detail

/// Parses the device config format:
///
///     # comment
///     name <text>
///     qubits <N>
///     param <name> <real>            (optional, repeatable)
///     cycle <label> <label> ...      (optional; defaults to declaration order)
///     hamiltonian <label>
///     term <real> <pauli string of length N>
///     switch <bits> -> <label>       (optional)
inline DeviceModel load_device(std::string_view text) {
    using detail::Token;
    std::string name = "custom";
    std::optional<size_t> qubits;
    std::vector<std::pair<std::string, double>> params;
    std::optional<std::pair<std::vector<Token>, size_t>> cycle_line;
    struct PendingHamiltonian {
        std::string label;
        std::vector<PauliTerm> terms;
        size_t line;
    };
    std::vector<PendingHamiltonian> hams;
    struct PendingSwitch {
        SwitchSetting setting;
        Token label;
        size_t line;
    };
    std::vector<PendingSwitch> switches;

    size_t line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        line_no++;
        if (size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        auto toks = detail::tokenize(line);
        if (toks.empty()) {
            continue;
        }
        std::string_view key = toks[0].text;
        auto expect_count = [&](size_t n) {
            if (toks.size() != n) {
                throw ParseError(
                    "'" + std::string(key) + "' expects " + std::to_string(n - 1) + " argument(s)",
                    line_no,
                    toks.size() > n ? toks[n].column : toks[0].column);
            }
        };
        if (key == "name") {
            if (toks.size() < 2) {
                throw ParseError("'name' expects a value", line_no, toks[0].column);
            }
            size_t from = toks[1].column - 1;
            name = std::string(line.substr(from, toks.back().column - 1 + toks.back().text.size() - from));
        } else if (key == "qubits") {
            expect_count(2);
            size_t n = 0;
            auto [ptr, ec] = std::from_chars(toks[1].text.data(), toks[1].text.data() + toks[1].text.size(), n);
            if (ec != std::errc() || ptr != toks[1].text.data() + toks[1].text.size() || n == 0 || n > 8) {
                throw ParseError("qubit count must be an integer between 1 and 8", line_no, toks[1].column);
            }
            if (!hams.empty()) {
                throw ParseError("'qubits' must precede the first hamiltonian block", line_no, toks[0].column);
            }
            qubits = n;
        } else if (key == "param") {
            expect_count(3);
            params.emplace_back(std::string(toks[1].text), detail::parse_real(toks[2], line_no));
        } else if (key == "cycle") {
            if (toks.size() < 2) {
                throw ParseError("'cycle' expects at least one label", line_no, toks[0].column);
            }
            cycle_line.emplace(std::vector<Token>(toks.begin() + 1, toks.end()), line_no);
        } else if (key == "hamiltonian") {
            expect_count(2);
            for (const auto &h : hams) {
                if (h.label == toks[1].text) {
                    throw ParseError("duplicate Hamiltonian label '" + h.label + "'", line_no, toks[1].column);
                }
            }
            hams.push_back({std::string(toks[1].text), {}, line_no});
        } else if (key == "term") {
            expect_count(3);
            if (hams.empty()) {
                throw ParseError("'term' outside a hamiltonian block", line_no, toks[0].column);
            }
            if (!qubits) {
                throw ParseError("'qubits' must be declared before any term", line_no, toks[0].column);
            }
            double coeff = detail::parse_real(toks[1], line_no);
            std::string letters(toks[2].text);
            for (size_t k = 0; k < letters.size(); k++) {
                if (letters[k] != 'I' && letters[k] != 'X' && letters[k] != 'Y' && letters[k] != 'Z') {
                    throw ParseError("invalid Pauli letter '" + std::string(1, letters[k]) + "'", line_no,
                                     toks[2].column + k);
                }
            }
            if (letters.size() != *qubits) {
                throw ParseError(
                    "Pauli string '" + letters + "' has length " + std::to_string(letters.size()) + " but the device has " +
                        std::to_string(*qubits) + " qubit(s)",
                    line_no,
                    toks[2].column);
            }
            hams.back().terms.push_back({coeff, std::move(letters)});
        } else if (key == "switch") {
            expect_count(4);
            if (toks[2].text != "->") {
                throw ParseError("expected '->'", line_no, toks[2].column);
            }
            SwitchSetting setting;
            try {
                setting = SwitchSetting::parse(toks[1].text);
            } catch (const ParseError &e) {
                throw ParseError("switch pattern must consist of 0 and 1", line_no, toks[1].column + e.column - 1);
            }
            if (setting.bits.empty()) {
                throw ParseError("empty switch pattern", line_no, toks[1].column);
            }
            switches.push_back({std::move(setting), toks[3], line_no});
        } else {
            throw ParseError("unknown directive '" + std::string(key) + "'", line_no, toks[0].column);
        }
    }

    if (!qubits) {
        throw ParseError("missing 'qubits' declaration", 0, 0);
    }
    if (hams.empty()) {
        throw ParseError("device declares no hamiltonian blocks", 0, 0);
    }
    std::vector<DeviceHamiltonian> built;
    for (auto &h : hams) {
        if (h.terms.empty()) {
            throw ParseError("hamiltonian '" + h.label + "' has no terms", h.line, 0);
        }
        HermitianOperator op = operator_from_terms(*qubits, h.terms);
        if (op.matrix().frobenius_norm() == 0) {
            throw ParseError("hamiltonian '" + h.label + "' sums to zero", h.line, 0);
        }
        built.push_back({h.label, std::move(h.terms), std::move(op)});
    }
    auto resolve = [&](const Token &tok, size_t line) -> size_t {
        for (size_t k = 0; k < built.size(); k++) {
            if (built[k].label == tok.text) {
                return k;
            }
        }
        throw ParseError("unknown Hamiltonian label '" + std::string(tok.text) + "'", line, tok.column);
    };
    std::vector<size_t> cycle;
    if (cycle_line) {
        for (const auto &tok : cycle_line->first) {
            cycle.push_back(resolve(tok, cycle_line->second));
        }
    }
    std::vector<SwitchRule> rules;
    for (const auto &s : switches) {
        if (!rules.empty() && rules.front().setting.bits.size() != s.setting.bits.size()) {
            throw ParseError("switch pattern width differs from earlier switch lines", s.line, 0);
        }
        if (s.setting.bits.size() > *qubits + 1) {
            throw ParseError("at most N+1 switches may be declared", s.line, 0);
        }
        rules.push_back({s.setting, resolve(s.label, s.line)});
    }
    try {
        return DeviceModel(name, *qubits, std::move(built), std::move(cycle), std::move(params), std::move(rules));
    } catch (const InputError &e) {
        throw ParseError(e.what(), 0, 0);
    }
}

}  // namespace gatesynth
