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

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace weakval::fourier {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Unitary discrete Fourier transform, X_m = n^{-1/2} sum_j x_j e^{-2 pi i j m / n}
/// (sign = -1) or its inverse (sign = +1). Iterative radix-2; n must be a power of two.
inline std::vector<std::complex<double>> transform(std::span<const std::complex<double>> x,
                                                   int sign) {
    const std::size_t n = x.size();
    if (!is_power_of_two(n)) {
        throw Error(ErrorCode::InvalidInput, "FFT length must be a power of two");
    }
    std::vector<std::complex<double>> a(x.begin(), x.end());
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(a[i], a[j]);
        }
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                // direct twiddles avoid the drift of a running product
                const std::complex<double> w = std::polar(1.0, ang * static_cast<double>(k));
                const auto u = a[start + k];
                const auto t = w * a[start + k + len / 2];
                a[start + k] = u + t;
                a[start + k + len / 2] = u - t;
            }
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto &z : a) {
        z *= scale;
    }
    return a;
}

inline std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x) {
    return transform(x, -1);
}

inline std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> x) {
    return transform(x, +1);
}

/// Signed index of FFT bin m: 0, 1, ..., n/2 - 1, -n/2, ..., -1.
inline long signed_index(std::size_t m, std::size_t n) {
    const auto sm = static_cast<long>(m);
    const auto sn = static_cast<long>(n);
    return sm < sn / 2 ? sm : sm - sn;
}

/// Angular wavenumbers 2 pi j / length in FFT bin order.
inline std::vector<double> wavenumbers(std::size_t n, double length) {
    std::vector<double> k(n);
    for (std::size_t m = 0; m < n; ++m) {
        k[m] = 2.0 * std::numbers::pi * static_cast<double>(signed_index(m, n)) / length;
    }
    return k;
}

} // namespace weakval::fourier
