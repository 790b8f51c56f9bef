// Copyright 2026 The weakval Authors

// Licensed under the Apache License, Version 2.0 (the License);
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

// http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an AS IS BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace weakval {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Numerical thresholds shared by every module. The defaults are the values the
/// test suites and the command line tool assume.
struct Tolerances {
    double herm = 1e-10; // conjugate symmetry, basis orthonormality
    double psd = 1e-10;  // smallest admissible negative eigenvalue magnitude
    double eig = 1e-10;  // eigendecomposition reconstruction
    double norm = 1e-10; // state normalization and unit trace
    double ps = 1e-12;   // postselection probability cutoff
    double id = 1e-9;    // algebraic identities over traces
};

/// Dense square complex matrix stored row-major.
class ComplexMatrix {
  public:
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
        if (dim == 0) {
            throw Error(ErrorCode::InvalidInput, "matrix dimension must be positive");
        }
    }

    ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
        : dim_(dim), data_(std::move(entries)) {
        if (dim == 0) {
            throw Error(ErrorCode::InvalidInput, "matrix dimension must be positive");
        }
        if (data_.size() != dim * dim) {
            throw Error(ErrorCode::InvalidInput,
                        "expected " + std::to_string(dim * dim) + " entries, got " +
                            std::to_string(data_.size()));
        }
        for (const auto &z : data_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw Error(ErrorCode::InvalidInput, "matrix entries must be finite");
            }
        }
    }

    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
        : ComplexMatrix(rows.size()) {
        std::size_t i = 0;
        for (const auto &row : rows) {
            if (row.size() != dim_) {
                throw Error(ErrorCode::InvalidInput, "matrix rows must all have length dim");
            }
            std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * dim_));
            ++i;
        }
    }

    static ComplexMatrix zeros(std::size_t dim) { return ComplexMatrix(dim); }

    static ComplexMatrix identity(std::size_t dim) {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    static ComplexMatrix diagonal(std::span<const double> values) {
        ComplexMatrix m(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            m(i, i) = values[i];
        }
        return m;
    }

    static ComplexMatrix diagonal(std::initializer_list<double> values) {
        return diagonal(std::span<const double>(values.begin(), values.size()));
    }

    /// |a><b|
    static ComplexMatrix outer(std::span<const Complex> a, std::span<const Complex> b) {
        if (a.size() != b.size()) {
            throw Error(ErrorCode::InvalidInput, "outer product of vectors with different lengths");
        }
        ComplexMatrix m(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t j = 0; j < b.size(); ++j) {
                m(i, j) = a[i] * std::conj(b[j]);
            }
        }
        return m;
    }

    /// Matrix whose columns are the given vectors.
    static ComplexMatrix from_columns(const std::vector<CVector> &columns) {
        ComplexMatrix m(columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].size() != columns.size()) {
                throw Error(ErrorCode::InvalidInput, "column length does not match column count");
            }
            for (std::size_t i = 0; i < columns.size(); ++i) {
                m(i, j) = columns[j][i];
            }
        }
        return m;
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    Complex &operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const Complex &operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    [[nodiscard]] std::span<const Complex> entries() const noexcept { return data_; }

    [[nodiscard]] CVector column(std::size_t j) const {
        CVector v(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            v[i] = (*this)(i, j);
        }
        return v;
    }

    [[nodiscard]] ComplexMatrix adjoint() const {
        ComplexMatrix m(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) {
                m(j, i) = std::conj((*this)(i, j));
            }
        }
        return m;
    }

    [[nodiscard]] Complex trace() const {
        Complex t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    /// Largest entry magnitude.
    [[nodiscard]] double max_abs() const {
        double r = 0.0;
        for (const auto &z : data_) {
            r = std::max(r, std::abs(z));
        }
        return r;
    }

    ComplexMatrix &operator+=(const ComplexMatrix &o) {
        check_same_dim(o);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] += o.data_[k];
        }
        return *this;
    }

    ComplexMatrix &operator-=(const ComplexMatrix &o) {
        check_same_dim(o);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] -= o.data_[k];
        }
        return *this;
    }

    ComplexMatrix &operator*=(Complex s) {
        for (auto &z : data_) {
            z *= s;
        }
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
        a.check_same_dim(b);
        const std::size_t n = a.dim_;
        ComplexMatrix c(n);
        for (std::size_t i = 0; i < n; ++i) {
            Complex *crow = &c.data_[i * n];
            for (std::size_t k = 0; k < n; ++k) {
                const Complex aik = a.data_[i * n + k];
                if (aik == Complex{}) {
                    continue;
                }
                const Complex *brow = &b.data_[k * n];
                for (std::size_t j = 0; j < n; ++j) {
                    crow[j] += aik * brow[j];
                }
            }
        }
        return c;
    }

    friend CVector operator*(const ComplexMatrix &a, std::span<const Complex> v) {
        if (v.size() != a.dim_) {
            throw Error(ErrorCode::InvalidInput, "matrix-vector dimension mismatch");
        }
        CVector r(a.dim_);
        for (std::size_t i = 0; i < a.dim_; ++i) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < a.dim_; ++j) {
                acc += a.data_[i * a.dim_ + j] * v[j];
            }
            r[i] = acc;
        }
        return r;
    }

    friend bool operator==(const ComplexMatrix &, const ComplexMatrix &) = default;

  private:
    void check_same_dim(const ComplexMatrix &o) const {
        if (o.dim_ != dim_) {
            throw Error(ErrorCode::InvalidInput, "matrix dimension mismatch");
        }
    }

    std::size_t dim_;
    std::vector<Complex> data_;
};

/// <a|b>, antilinear in the first argument.
inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::InvalidInput, "inner product of vectors with different lengths");
    }
    Complex acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

inline double norm(std::span<const Complex> v) { return std::sqrt(std::real(inner(v, v))); }

inline double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::InvalidInput, "matrix dimension mismatch");
    }
    double r = 0.0;
    auto ea = a.entries();
    auto eb = b.entries();
    for (std::size_t k = 0; k < ea.size(); ++k) {
        r = std::max(r, std::abs(ea[k] - eb[k]));
    }
    return r;
}

/// max |m_ij - conj(m_ji)|.
inline double hermiticity_defect(const ComplexMatrix &m) {
    double r = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = i; j < m.dim(); ++j) {
            r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
        }
    }
    return r;
}

inline bool is_hermitian(const ComplexMatrix &m, double tol) { return hermiticity_defect(m) <= tol; }

/// (m + m^dagger) / 2
inline ComplexMatrix hermitian_part(const ComplexMatrix &m) { return (m + m.adjoint()) * Complex{0.5}; }

inline ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) { return a * b - b * a; }

struct EigenDecomposition {
    std::vector<double> eigenvalues; // ascending
    ComplexMatrix eigenvectors;      // columns

    [[nodiscard]] CVector vector(std::size_t k) const { return eigenvectors.column(k); }

    /// sum_k f(lambda_k) |v_k><v_k|
    template <typename F>
    [[nodiscard]] ComplexMatrix apply(F &&f) const {
        const std::size_t n = eigenvalues.size();
        ComplexMatrix r(n);
        for (std::size_t k = 0; k < n; ++k) {
            const Complex w = f(eigenvalues[k]);
            if (w == Complex{}) {
                continue;
            }
            for (std::size_t i = 0; i < n; ++i) {
                const Complex vi = w * eigenvectors(i, k);
                for (std::size_t j = 0; j < n; ++j) {
                    r(i, j) += vi * std::conj(eigenvectors(j, k));
                }
            }
        }
        return r;
    }

    [[nodiscard]] ComplexMatrix reconstruct() const {
        return apply([](double lambda) { return Complex{lambda}; });
    }
};

namespace detail {

inline double off_diagonal_norm2(const ComplexMatrix &a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            if (i != j) {
                s += std::norm(a(i, j));
            }
        }
    }
    return s;
}

inline std::size_t dominant_index(const ComplexMatrix &v, std::size_t col) {
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        const double mag = std::abs(v(i, col));
        // strict comparison keeps the lowest index among equal magnitudes
        if (mag > best_mag * (1.0 + 1e-12)) {
            best_mag = mag;
            best = i;
        }
    }
    return best;
}

// Modified Gram-Schmidt over the columns [first, last).
inline void orthonormalize_columns(ComplexMatrix &v, std::size_t first, std::size_t last) {
    const std::size_t n = v.dim();
    for (std::size_t k = first; k < last; ++k) {
        for (std::size_t j = first; j < k; ++j) {
            Complex proj = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                proj += std::conj(v(i, j)) * v(i, k);
            }
            for (std::size_t i = 0; i < n; ++i) {
                v(i, k) -= proj * v(i, j);
            }
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            nrm += std::norm(v(i, k));
        }
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < n; ++i) {
            v(i, k) /= nrm;
        }
    }
}

} // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Eigenvalues are returned ascending. Eigenvectors belonging to eigenvalues
/// that agree within `tol.eig` (relative to the spectral scale) are
/// re-orthonormalized and ordered by the row index of their largest
/// component; every eigenvector is phased so that this component is real and
/// positive. The result is a deterministic function of the input.
inline EigenDecomposition eig_hermitian(const ComplexMatrix &m, const Tolerances &tol = {},
                                        int max_sweeps = 100) {
    if (!is_hermitian(m, tol.herm)) {
        throw Error(ErrorCode::NotHermitian,
                    "hermiticity defect " + std::to_string(hermiticity_defect(m)));
    }
    const std::size_t n = m.dim();
    ComplexMatrix a = hermitian_part(m);
    ComplexMatrix v = ComplexMatrix::identity(n);

    double frob2 = 0.0;
    for (const auto &z : a.entries()) {
        frob2 += std::norm(z);
    }
    const double stop2 = frob2 * 1e-32;

    int sweep = 0;
    while (detail::off_diagonal_norm2(a) > stop2) {
        if (sweep++ >= max_sweeps) {
            throw Error(ErrorCode::NoConvergence,
                        "Jacobi iteration exceeded " + std::to_string(max_sweeps) + " sweeps");
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double r = std::abs(apq);
                if (r == 0.0) {
                    continue;
                }
                // Phase the q row/column so the pivot is real, then apply a
                // real rotation: G = diag(1, e^{-i phi}) R(theta).
                const Complex phase = apq / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = 0.5 * std::atan2(2.0 * r, aqq - app);
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                const Complex gpp = c;
                const Complex gpq = s;
                const Complex gqp = -s * std::conj(phase);
                const Complex gqq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * gpp + akq * gqp;
                    a(k, q) = akp * gpq + akq * gqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
                    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * gpp + vkq * gqp;
                    v(k, q) = vkp * gpq + vkq * gqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() < a(j, j).real();
    });

    EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors(i, k) = v(i, order[k]);
        }
    }

    double scale = 1.0;
    for (double lambda : out.eigenvalues) {
        scale = std::max(scale, std::abs(lambda));
    }
    const double tie = tol.eig * scale;

    std::size_t first = 0;
    while (first < n) {
        std::size_t last = first + 1;
        while (last < n && out.eigenvalues[last] - out.eigenvalues[last - 1] <= tie) {
            ++last;
        }
        if (last - first > 1) {
            detail::orthonormalize_columns(out.eigenvectors, first, last);
            std::vector<std::size_t> cols(last - first);
            std::iota(cols.begin(), cols.end(), first);
            std::stable_sort(cols.begin(), cols.end(), [&](std::size_t x, std::size_t y) {
                return detail::dominant_index(out.eigenvectors, x) <
                       detail::dominant_index(out.eigenvectors, y);
            });
            ComplexMatrix vs = out.eigenvectors;
            std::vector<double> ls = out.eigenvalues;
            for (std::size_t k = 0; k < cols.size(); ++k) {
                out.eigenvalues[first + k] = ls[cols[k]];
                for (std::size_t i = 0; i < n; ++i) {
                    out.eigenvectors(i, first + k) = vs(i, cols[k]);
                }
            }
        }
        first = last;
    }

    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t d = detail::dominant_index(out.eigenvectors, k);
        const Complex z = out.eigenvectors(d, k);
        const Complex unphase = std::conj(z) / std::abs(z);
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors(i, k) *= unphase;
        }
        out.eigenvectors(d, k) = std::abs(out.eigenvectors(d, k));
    }
    return out;
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues in [-tol.psd, 0) are clipped to zero.
inline ComplexMatrix sqrt_psd(const ComplexMatrix &m, const Tolerances &tol = {}) {
    const auto eig = eig_hermitian(m, tol);
    if (eig.eigenvalues.front() < -tol.psd) {
        throw Error(ErrorCode::NotPSD,
                    "smallest eigenvalue " + std::to_string(eig.eigenvalues.front()));
    }
    auto root = eig.apply([](double lambda) { return Complex{std::sqrt(std::max(lambda, 0.0))}; });
    return hermitian_part(root);
}

/// Largest eigenvalue magnitude of a Hermitian matrix.
inline double spectral_norm_hermitian(const ComplexMatrix &m, const Tolerances &tol = {}) {
    const auto eig = eig_hermitian(m, tol);
    return std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
}

} // namespace weakval
