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

// Test-only helpers. The matrix routines here deliberately use raw nested
// loops over std::vector so they stay independent of ComplexMatrix arithmetic.

#include <complex>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "weakval/weakval.hpp"

namespace weakval::oracle {

using Dense = std::vector<std::vector<std::complex<double>>>;

inline Dense to_dense(const ComplexMatrix &m) {
    Dense d(m.dim(), std::vector<std::complex<double>>(m.dim()));
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            d[i][j] = m(i, j);
        }
    }
    return d;
}

inline Dense naive_mul(const Dense &a, const Dense &b) {
    const std::size_t n = a.size();
    Dense c(n, std::vector<std::complex<double>>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::complex<double> s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                s += a[i][k] * b[k][j];
            }
            c[i][j] = s;
        }
    }
    return c;
}

inline Dense naive_sub(const Dense &a, const Dense &b) {
    Dense c = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            c[i][j] -= b[i][j];
        }
    }
    return c;
}

inline std::complex<double> naive_trace(const Dense &a) {
    std::complex<double> t = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        t += a[i][i];
    }
    return t;
}

/// Tr(rho X^2) by two explicit products.
inline double naive_expect_square(const Dense &rho, const Dense &x) {
    return naive_trace(naive_mul(rho, naive_mul(x, x))).real();
}

/// sum_b w_b |b><b| from basis columns.
inline Dense naive_diag_in_basis(const ComplexMatrix &basis, const std::vector<double> &w) {
    const std::size_t n = basis.dim();
    Dense d(n, std::vector<std::complex<double>>(n));
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                d[i][j] += w[b] * basis(i, b) * std::conj(basis(j, b));
            }
        }
    }
    return d;
}

inline double max_abs_diff(const Dense &a, const Dense &b) {
    double r = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            r = std::max(r, std::abs(a[i][j] - b[i][j]));
        }
    }
    return r;
}

inline ComplexMatrix random_hermitian(std::size_t n, Rng &rng) {
    return random_observable(n, rng).matrix();
}

/// Asserts that `f` throws weakval::Error with the given code.
inline void expect_error(ErrorCode code, const std::function<void()> &f) {
    try {
        f();
        ADD_FAILURE() << "expected " << to_string(code) << ", nothing thrown";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

} // namespace weakval::oracle
