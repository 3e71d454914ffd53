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
#include <numbers>
#include <optional>
#include <vector>

#include "gatesynth/error.hpp"
#include "gatesynth/matrix.hpp"

namespace gatesynth {

struct ClosureResult {
    size_t dimension = 0;
    /// Orthonormal (trace inner product), traceless Hermitian basis H_k; the algebra element is -i H_k.
    std::vector<HermitianOperator> basis;
    bool is_full_su = false;
    /// Number of commutator rounds that enlarged the basis (0 when the generators alone close).
    size_t depth_reached = 0;
};

namespace detail {

inline double real_inner(const ComplexMatrix &a, const ComplexMatrix &b) {
    double s = 0;
    const auto &x = a.entries();
    const auto &y = b.entries();
    for (size_t k = 0; k < x.size(); k++) {
        s += x[k].real() * y[k].real() + x[k].imag() * y[k].imag();
    }
    return s;
}

/// Orthogonalizes `candidate` against `basis` (two Gram-Schmidt passes) and appends it
/// normalized if the residual norm exceeds `tolerance`.
inline bool admit(std::vector<ComplexMatrix> &basis, ComplexMatrix candidate, double tolerance) {
    double norm = candidate.frobenius_norm();
    if (norm == 0) {
        return false;
    }
    candidate *= 1.0 / norm;
    for (int pass = 0; pass < 2; pass++) {
        for (const auto &b : basis) {
            double overlap = real_inner(b, candidate);
            if (overlap != 0) {
                candidate -= overlap * b;
            }
        }
    }
    double residual = candidate.frobenius_norm();
    if (residual <= tolerance) {
        return false;
    }
    candidate *= 1.0 / residual;
    basis.push_back(std::move(candidate));
    return true;
}

inline size_t log2_exact(size_t d) {
    size_t n = 0;
    while ((size_t{1} << n) < d) {
        n++;
    }
    if ((size_t{1} << n) != d) {
        throw InputError("operator dimension " + std::to_string(d) + " is not a power of two");
    }
    return n;
}

inline void require_same_dims(const std::vector<HermitianOperator> &hams) {
    if (hams.empty()) {
        throw InputError("empty Hamiltonian list");
    }
    for (const auto &h : hams) {
        hams.front().matrix().require_same_dim(h.matrix(), "Hamiltonian list");
    }
}

}  // namespace detail

inline constexpr double kClosureRankTolerance = 1e-10;

/// Dimension of the real Lie algebra generated by {-i H_k}, modulo the identity.
///
/// Generators are projected onto their traceless parts and normalized, then closed
/// under i[A, B] until no commutator leaves the current span or the span reaches
/// su(2^N).
inline ClosureResult lie_closure(const std::vector<HermitianOperator> &hams) {
    detail::require_same_dims(hams);
    size_t d = hams.front().dim();
    size_t n = detail::log2_exact(d);
    size_t full = (size_t{1} << (2 * n)) - 1;

    std::vector<ComplexMatrix> basis;
    for (const auto &h : hams) {
        detail::admit(basis, h.traceless_part().matrix(), kClosureRankTolerance);
    }

    ClosureResult out;
    size_t frontier_begin = 0;
    while (basis.size() < full && frontier_begin < basis.size()) {
        size_t frontier_end = basis.size();
        bool grew = false;
        for (size_t a = frontier_begin; a < frontier_end && basis.size() < full; a++) {
            for (size_t b = 0; b < frontier_end && basis.size() < full; b++) {
                if (b >= frontier_begin && b <= a) {
                    continue;
                }
                ComplexMatrix comm = basis[a] * basis[b] - basis[b] * basis[a];
                comm *= kI;
                grew |= detail::admit(basis, std::move(comm), kClosureRankTolerance);
            }
        }
        if (!grew) {
            break;
        }
        out.depth_reached++;
        frontier_begin = frontier_end;
    }

    out.dimension = basis.size();
    out.is_full_su = out.dimension == full;
    for (auto &b : basis) {
        out.basis.emplace_back(b, 1e-9);
    }
    return out;
}

/// G[i][j] = Tr(H_i H_j).
inline std::vector<std::vector<double>> gram_matrix(const std::vector<HermitianOperator> &hams) {
    detail::require_same_dims(hams);
    size_t m = hams.size();
    std::vector<std::vector<double>> g(m, std::vector<double>(m));
    for (size_t i = 0; i < m; i++) {
        for (size_t j = i; j < m; j++) {
            g[i][j] = g[j][i] = hs_inner(hams[i], hams[j]);
        }
    }
    return g;
}

struct LowenthalResult {
    double psi = 0;
    std::optional<int> k;
    int steps = 0;
};

inline constexpr double kOrthogonalityTolerance = 1e-12;

/// Normalized overlap |(H1,H2)| / sqrt((H1,H1)(H2,H2)).
inline double lowenthal_parameter(const HermitianOperator &h1, const HermitianOperator &h2) {
    double n1 = hs_inner(h1, h1);
    double n2 = hs_inner(h2, h2);
    if (!(n1 > 0) || !(n2 > 0)) {
        throw ControllabilityError("zero Hamiltonian");
    }
    return std::abs(hs_inner(h1, h2)) / std::sqrt(n1 * n2);
}

/// Minimal number of alternating steps that covers SU(2) with the pair {H1, H2}.
///
/// Orthogonal pairs need 3 steps. Otherwise n = k + 2 with
/// cos(pi/k) < psi <= cos(pi/(k+1)), k >= 2.
inline LowenthalResult lowenthal_steps(const HermitianOperator &h1, const HermitianOperator &h2) {
    if (h1.dim() != 2 || h2.dim() != 2) {
        throw ContractError("step-count criterion applies to single-qubit (2x2) Hamiltonians");
    }
    if (lie_closure({h1, h2}).dimension < 3) {
        throw ControllabilityError("Hamiltonian pair does not generate su(2)");
    }
    LowenthalResult out;
    out.psi = lowenthal_parameter(h1, h2);
    if (out.psi <= kOrthogonalityTolerance) {
        out.steps = 3;
        return out;
    }
    if (out.psi >= 1 - kOrthogonalityTolerance) {
        throw ControllabilityError("Hamiltonian pair is (anti)parallel; psi = 1");
    }
    for (int k = 2; k <= 1000000; k++) {
        if (std::cos(std::numbers::pi / k) < out.psi && out.psi <= std::cos(std::numbers::pi / (k + 1))) {
            out.k = k;
            out.steps = k + 2;
            return out;
        }
    }
    throw ControllabilityError("step count exceeds 10^6 (psi too close to 1)");
}

}  // namespace gatesynth
