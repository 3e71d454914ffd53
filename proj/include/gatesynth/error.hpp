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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gatesynth {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Mismatched dimensions or other violated call contracts.
struct ContractError : Error {
    using Error::Error;
};

/// Invalid numeric input (non-Hermitian operator, non-unitary gate, bad parameter).
struct InputError : Error {
    using Error::Error;
};

/// Malformed text input. Line and column are 1-based; 0 means "not applicable".
struct ParseError : Error {
    ParseError(const std::string &message, size_t line, size_t column)
        : Error(format(message, line, column)), line(line), column(column) {
    }

    size_t line;
    size_t column;

   private:
    static std::string format(const std::string &message, size_t line, size_t column) {
        std::string where;
        if (line > 0) {
            where += "line " + std::to_string(line);
        }
        if (column > 0) {
            if (!where.empty()) {
                where += ", ";
            }
            where += "position " + std::to_string(column);
        }
        return where.empty() ? message : where + ": " + message;
    }
};

/// The Hamiltonian set does not generate the required Lie algebra.
struct ControllabilityError : Error {
    using Error::Error;
};

/// An analytic solver was asked for a case outside its stated preconditions.
struct PreconditionError : Error {
    using Error::Error;
};

/// Device parameters are outside the regime an analytic formula covers.
struct RegimeError : Error {
    using Error::Error;
};

/// The target lies outside the domain where the closed-form durations are real and valid.
struct AnalyticDomainError : Error {
    using Error::Error;
};

}  // namespace gatesynth
