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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace weakval;

namespace {

CVector naive_dft(const CVector &x, int sign) {
    const std::size_t n = x.size();
    CVector out(n);
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(j * m % n) /
                               static_cast<double>(n);
            out[m] += x[j] * std::polar(1.0, ang);
        }
        out[m] /= std::sqrt(static_cast<double>(n));
    }
    return out;
}

} // namespace

TEST(Fourier, MatchesNaiveDft) {
    Rng rng(5);
    for (std::size_t n : {1u, 2u, 8u, 64u, 256u}) {
        CVector x(n);
        for (auto &z : x) {
            z = rng.complex_gaussian();
        }
        const auto fast = fourier::forward(x);
        const auto slow = naive_dft(x, -1);
        const auto back = fourier::inverse(fast);
        for (std::size_t m = 0; m < n; ++m) {
            EXPECT_NEAR(std::abs(fast[m] - slow[m]), 0.0, 1e-12) << n;
            EXPECT_NEAR(std::abs(back[m] - x[m]), 0.0, 1e-12) << n;
        }
    }
}

TEST(Fourier, RejectsNonPowerOfTwo) {
    oracle::expect_error(ErrorCode::InvalidInput, [] { fourier::forward(CVector(12)); });
}

TEST(Fourier, SignedWavenumbers) {
    const auto k = fourier::wavenumbers(4, 2.0 * std::numbers::pi);
    EXPECT_DOUBLE_EQ(k[0], 0.0);
    EXPECT_DOUBLE_EQ(k[1], 1.0);
    EXPECT_DOUBLE_EQ(k[2], -2.0);
    EXPECT_DOUBLE_EQ(k[3], -1.0);
}
