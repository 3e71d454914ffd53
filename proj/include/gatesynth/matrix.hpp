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
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gatesynth/error.hpp"

namespace gatesynth {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Dense square complex matrix, row-major.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;

    explicit ComplexMatrix(size_t dim) : dim_(dim), data_(dim * dim) {
        if (dim == 0) {
            throw ContractError("matrix dimension must be at least 1");
        }
    }

    ComplexMatrix(size_t dim, std::vector<Complex> entries) : dim_(dim), data_(std::move(entries)) {
        if (dim == 0) {
            throw ContractError("matrix dimension must be at least 1");
        }
        if (data_.size() != dim * dim) {
            throw ContractError(
                "matrix of dimension " + std::to_string(dim) + " needs " + std::to_string(dim * dim) +
                " entries, got " + std::to_string(data_.size()));
        }
    }

    /// Row-by-row initializer; the number of rows fixes the dimension.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) : dim_(rows.size()) {
        if (dim_ == 0) {
            throw ContractError("matrix dimension must be at least 1");
        }
        data_.reserve(dim_ * dim_);
        for (const auto &row : rows) {
            if (row.size() != dim_) {
                throw ContractError("ragged matrix initializer");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static ComplexMatrix identity(size_t dim) {
        ComplexMatrix m(dim);
        for (size_t k = 0; k < dim; k++) {
            m(k, k) = 1.0;
        }
        return m;
    }

    size_t dim() const {
        return dim_;
    }
    Complex &operator()(size_t row, size_t col) {
        return data_[row * dim_ + col];
    }
    const Complex &operator()(size_t row, size_t col) const {
        return data_[row * dim_ + col];
    }
    const std::vector<Complex> &entries() const {
        return data_;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(dim_);
        for (size_t r = 0; r < dim_; r++) {
            for (size_t c = 0; c < dim_; c++) {
                out(c, r) = std::conj((*this)(r, c));
            }
        }
        return out;
    }

    Complex trace() const {
        Complex t = 0.0;
        for (size_t k = 0; k < dim_; k++) {
            t += (*this)(k, k);
        }
        return t;
    }

    double frobenius_norm_squared() const {
        double s = 0;
        for (const auto &z : data_) {
            s += std::norm(z);
        }
        return s;
    }

    double frobenius_norm() const {
        return std::sqrt(frobenius_norm_squared());
    }

    ComplexMatrix &operator+=(const ComplexMatrix &other) {
        require_same_dim(other, "addition");
        for (size_t k = 0; k < data_.size(); k++) {
            data_[k] += other.data_[k];
        }
        return *this;
    }
    ComplexMatrix &operator-=(const ComplexMatrix &other) {
        require_same_dim(other, "subtraction");
        for (size_t k = 0; k < data_.size(); k++) {
            data_[k] -= other.data_[k];
        }
        return *this;
    }
    ComplexMatrix &operator*=(Complex scale) {
        for (auto &z : data_) {
            z *= scale;
        }
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) {
        return a += b;
    }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) {
        return a -= b;
    }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) {
        return a *= s;
    }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) {
        return a *= s;
    }
    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);

    bool operator==(const ComplexMatrix &other) const = default;

    void require_same_dim(const ComplexMatrix &other, std::string_view what) const {
        if (dim_ != other.dim_) {
            throw ContractError(
                "dimension mismatch in " + std::string(what) + ": " + std::to_string(dim_) + " vs " +
                std::to_string(other.dim_));
        }
    }

   private:
    size_t dim_ = 0;
    std::vector<Complex> data_;
};

inline ComplexMatrix mat_mul(const ComplexMatrix &a, const ComplexMatrix &b) {
    a.require_same_dim(b, "mat_mul");
    size_t d = a.dim();
    ComplexMatrix out(d);
    for (size_t r = 0; r < d; r++) {
        for (size_t k = 0; k < d; k++) {
            Complex ark = a(r, k);
            if (ark == 0.0) {
                continue;
            }
            for (size_t c = 0; c < d; c++) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

inline ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    return mat_mul(a, b);
}

/// Kronecker product; block (i, j) of the result is a(i, j) * b.
inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    size_t da = a.dim();
    size_t db = b.dim();
    ComplexMatrix out(da * db);
    for (size_t i = 0; i < da; i++) {
        for (size_t j = 0; j < da; j++) {
            for (size_t k = 0; k < db; k++) {
                for (size_t l = 0; l < db; l++) {
                    out(i * db + k, j * db + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return out;
}

/// Returns ||U^dagger U - I||_F.
inline double unitarity_defect(const ComplexMatrix &u) {
    ComplexMatrix g = u.adjoint() * u;
    for (size_t k = 0; k < g.dim(); k++) {
        g(k, k) -= 1.0;
    }
    return g.frobenius_norm();
}

inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kUnitarityTolerance = 1e-12;

/// A Hamiltonian in angular-frequency units (hbar = 1).
///
/// Construction checks |H(r,c) - conj(H(c,r))| <= 1e-12 for every entry and then
/// stores the symmetrized matrix (H + H^dagger) / 2, so downstream code can rely on
/// exact Hermiticity.
class HermitianOperator {
   public:
    HermitianOperator() = default;

    explicit HermitianOperator(const ComplexMatrix &m, double tolerance = kHermiticityTolerance) : m_(m.dim()) {
        size_t d = m.dim();
        for (size_t r = 0; r < d; r++) {
            for (size_t c = r; c < d; c++) {
                Complex upper = m(r, c);
                Complex lower = std::conj(m(c, r));
                if (std::abs(upper - lower) > tolerance) {
                    throw InputError(
                        "matrix is not Hermitian: entry (" + std::to_string(r) + "," + std::to_string(c) +
                        ") differs from the conjugate of its transpose by " + std::to_string(std::abs(upper - lower)));
                }
                Complex avg = 0.5 * (upper + lower);
                m_(r, c) = avg;
                m_(c, r) = std::conj(avg);
            }
        }
    }

    size_t dim() const {
        return m_.dim();
    }
    const ComplexMatrix &matrix() const {
        return m_;
    }

    HermitianOperator &operator+=(const HermitianOperator &other) {
        m_ += other.m_;
        return *this;
    }
    friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator &b) {
        return a += b;
    }
    friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator &b) {
        a.m_ -= b.m_;
        return a;
    }
    friend HermitianOperator operator*(double s, HermitianOperator a) {
        a.m_ *= s;
        return a;
    }

    /// Removes the identity component: H - Tr(H)/d * I.
    HermitianOperator traceless_part() const {
        HermitianOperator out = *this;
        double shift = m_.trace().real() / static_cast<double>(dim());
        for (size_t k = 0; k < dim(); k++) {
            out.m_(k, k) -= shift;
        }
        return out;
    }

   private:
    ComplexMatrix m_;
};

/// A matrix known to be unitary within tolerance.
class UnitaryGate {
   public:
    UnitaryGate() = default;

    explicit UnitaryGate(ComplexMatrix m, double tolerance = kUnitarityTolerance) : m_(std::move(m)) {
        double defect = unitarity_defect(m_);
        if (!(defect <= tolerance)) {
            throw InputError("matrix is not unitary: ||U^dagger U - I||_F = " + std::to_string(defect));
        }
    }

    static UnitaryGate identity(size_t dim) {
        return UnitaryGate(ComplexMatrix::identity(dim));
    }

    size_t dim() const {
        return m_.dim();
    }
    const ComplexMatrix &matrix() const {
        return m_;
    }

    friend UnitaryGate operator*(const UnitaryGate &a, const UnitaryGate &b) {
        UnitaryGate out;
        out.m_ = a.m_ * b.m_;
        return out;
    }

    UnitaryGate adjoint() const {
        UnitaryGate out;
        out.m_ = m_.adjoint();
        return out;
    }

   private:
    ComplexMatrix m_;
};

/// Hilbert-Schmidt inner product Tr(A B) of two Hermitian operators.
inline double hs_inner(const HermitianOperator &a, const HermitianOperator &b) {
    a.matrix().require_same_dim(b.matrix(), "hs_inner");
    const ComplexMatrix &x = a.matrix();
    const ComplexMatrix &y = b.matrix();
    size_t d = x.dim();
    Complex t = 0.0;
    for (size_t r = 0; r < d; r++) {
        for (size_t c = 0; c < d; c++) {
            t += x(r, c) * y(c, r);
        }
    }
    double scale = std::max(1.0, x.frobenius_norm() * y.frobenius_norm());
    if (std::abs(t.imag()) > 1e-12 * scale) {
        throw ContractError("trace inner product of Hermitian operators has imaginary part " + std::to_string(t.imag()));
    }
    return t.real();
}

namespace pauli {

inline ComplexMatrix i2() {
    return {{1, 0}, {0, 1}};
}
inline ComplexMatrix x() {
    return {{0, 1}, {1, 0}};
}
inline ComplexMatrix y() {
    return {{0, -kI}, {kI, 0}};
}
inline ComplexMatrix z() {
    return {{1, 0}, {0, -1}};
}

}  // namespace pauli

/// coeff times the tensor product of single-qubit Paulis named by `letters`.
/// The leftmost letter acts on qubit 1, the most significant tensor factor.
inline HermitianOperator pauli_string(double coeff, std::string_view letters) {
    if (letters.empty()) {
        throw ParseError("empty Pauli string", 0, 0);
    }
    ComplexMatrix acc;
    for (size_t k = 0; k < letters.size(); k++) {
        ComplexMatrix factor;
        switch (letters[k]) {
            case 'I':
                factor = pauli::i2();
                break;
            case 'X':
                factor = pauli::x();
                break;
            case 'Y':
                factor = pauli::y();
                break;
            case 'Z':
                factor = pauli::z();
                break;
            default:
                throw ParseError(
                    "invalid Pauli letter '" + std::string(1, letters[k]) + "' (expected one of I, X, Y, Z)", 0, k + 1);
        }
        acc = k == 0 ? factor : kron(acc, factor);
    }
    acc *= coeff;
    return HermitianOperator(acc);
}

/// Spectral decomposition H = V diag(values) V^dagger of a Hermitian operator.
struct Eigensystem {
    std::vector<double> values;
    ComplexMatrix vectors;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation first multiplies row/column q by a phase so that the pivot A(p,q)
/// becomes real and nonnegative, then applies the classical real symmetric Jacobi
/// rotation to the (p,q) plane. The accumulated transform stays unitary to roundoff.
inline Eigensystem eigh(const HermitianOperator &h) {
    size_t d = h.dim();
    ComplexMatrix a = h.matrix();
    ComplexMatrix v = ComplexMatrix::identity(d);

    auto off_diagonal = [&]() {
        double s = 0;
        for (size_t r = 0; r < d; r++) {
            for (size_t c = 0; c < d; c++) {
                if (r != c) {
                    s += std::norm(a(r, c));
                }
            }
        }
        return s;
    };
    double total = a.frobenius_norm_squared();

    for (int sweep = 0; sweep < 64; sweep++) {
        double off = off_diagonal();
        if (off == 0 || off <= 1e-34 * total) {
            break;
        }
        for (size_t p = 0; p + 1 < d; p++) {
            for (size_t q = p + 1; q < d; q++) {
                double mag = std::abs(a(p, q));
                if (mag == 0) {
                    continue;
                }
                Complex phase = a(p, q) / mag;
                Complex phase_conj = std::conj(phase);
                for (size_t k = 0; k < d; k++) {
                    a(k, q) *= phase_conj;
                    v(k, q) *= phase_conj;
                }
                for (size_t k = 0; k < d; k++) {
                    a(q, k) *= phase;
                }

                double app = a(p, p).real();
                double aqq = a(q, q).real();
                double theta = (aqq - app) / (2.0 * mag);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (size_t k = 0; k < d; k++) {
                    Complex akp = a(k, p);
                    Complex akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (size_t k = 0; k < d; k++) {
                    Complex apk = a(p, k);
                    Complex aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (size_t k = 0; k < d; k++) {
                    Complex vkp = v(k, p);
                    Complex vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
                a(p, q) = 0;
                a(q, p) = 0;
            }
        }
    }

    Eigensystem out{std::vector<double>(d), std::move(v)};
    for (size_t k = 0; k < d; k++) {
        out.values[k] = a(k, k).real();
    }
    return out;
}

/// e^{-i t H} from a precomputed eigensystem.
inline ComplexMatrix propagator_from_eigensystem(const Eigensystem &es, double t) {
    size_t d = es.vectors.dim();
    std::vector<Complex> phases(d);
    for (size_t k = 0; k < d; k++) {
        phases[k] = std::polar(1.0, -t * es.values[k]);
    }
    ComplexMatrix out(d);
    const ComplexMatrix &v = es.vectors;
    for (size_t r = 0; r < d; r++) {
        for (size_t c = 0; c < d; c++) {
            Complex s = 0.0;
            for (size_t k = 0; k < d; k++) {
                s += v(r, k) * phases[k] * std::conj(v(c, k));
            }
            out(r, c) = s;
        }
    }
    return out;
}

/// e^{-i t H} via spectral decomposition.
inline UnitaryGate expm_hermitian(const HermitianOperator &h, double t) {
    return UnitaryGate(propagator_from_eigensystem(eigh(h), t));
}

/// Largest absolute eigenvalue.
inline double spectral_norm(const HermitianOperator &h) {
    auto es = eigh(h);
    double m = 0;
    for (double v : es.values) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

}  // namespace gatesynth
