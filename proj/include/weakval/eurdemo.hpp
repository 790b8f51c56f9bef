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
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "estimation.hpp"
#include "fourier.hpp"

namespace weakval::eur {

/// Identities on the grid are checked at 1e-8 rather than the default 1e-9.
inline Tolerances grid_tolerances() {
    Tolerances t;
    t.id = 1e-8;
    return t;
}

/// Wavefunction sampled at q_j = -L/2 + j dx on a periodic grid, dx = L/n.
struct GridWavefunction {
    std::size_t n = 0;
    double length = 0.0;
    CVector samples;

    [[nodiscard]] double dx() const { return length / static_cast<double>(n); }
    [[nodiscard]] double q(std::size_t j) const { return -0.5 * length + static_cast<double>(j) * dx(); }

    /// sum |psi|^2 dx - 1
    [[nodiscard]] double norm_defect() const {
        double s = 0.0;
        for (const auto &z : samples) {
            s += std::norm(z);
        }
        return s * dx() - 1.0;
    }

    /// Samples f on the grid and rescales to unit norm.
    static GridWavefunction sample(std::size_t n, double length,
                                   const std::function<Complex(double)> &f) {
        if (!fourier::is_power_of_two(n)) {
            throw Error(ErrorCode::InvalidInput, "grid size must be a power of two");
        }
        if (!(length > 0.0)) {
            throw Error(ErrorCode::InvalidInput, "grid length must be positive");
        }
        GridWavefunction psi{n, length, CVector(n)};
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            psi.samples[j] = f(psi.q(j));
            s += std::norm(psi.samples[j]);
        }
        s *= psi.dx();
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw Error(ErrorCode::InvalidInput, "wavefunction vanishes on the grid");
        }
        const double scale = 1.0 / std::sqrt(s);
        for (auto &z : psi.samples) {
            z *= scale;
        }
        return psi;
    }
};

/// exp(-(q - q0)^2 / 4 s^2 + i k0 q)
inline GridWavefunction gaussian(std::size_t n, double length, double width, double k0 = 0.0,
                                 double center = 0.0) {
    if (!(width > 0.0)) {
        throw Error(ErrorCode::InvalidInput, "gaussian width must be positive");
    }
    return GridWavefunction::sample(n, length, [=](double q) {
        const double d = q - center;
        return std::exp(Complex{-d * d / (4.0 * width * width), k0 * q});
    });
}

/// True when k0 = 2 pi m / L for an integer m in [-n/2, n/2).
inline bool is_allowed_mode(std::size_t n, double length, double k0) {
    const double m = k0 * length / (2.0 * std::numbers::pi);
    const double rounded = std::round(m);
    const double half = 0.5 * static_cast<double>(n);
    return std::abs(m - rounded) <= 1e-9 * std::max(1.0, std::abs(m)) && rounded >= -half &&
           rounded < half;
}

inline GridWavefunction plane_wave(std::size_t n, double length, double k0) {
    if (!is_allowed_mode(n, length, k0)) {
        throw Error(ErrorCode::InvalidInput, "k0 is not a momentum mode of the grid");
    }
    return GridWavefunction::sample(n, length, [=](double q) { return std::polar(1.0, k0 * q); });
}

/// Equal-weight superposition of gaussians centred at -d/2 and +d/2; the
/// second carries momentum k0.
inline GridWavefunction double_gaussian(std::size_t n, double length, double width,
                                        double separation, double k0 = 0.0) {
    if (!(width > 0.0)) {
        throw Error(ErrorCode::InvalidInput, "gaussian width must be positive");
    }
    return GridWavefunction::sample(n, length, [=](double q) {
        const double a = q + 0.5 * separation;
        const double b = q - 0.5 * separation;
        const double v = 4.0 * width * width;
        return std::exp(Complex{-a * a / v, 0.0}) + std::exp(Complex{-b * b / v, k0 * q});
    });
}

/// Gaussian packets (given centres and width) are resolved when there are at
/// least eight grid points per standard deviation and the periodic box holds
/// all but 1e-12 of their probability. Returns the reason when not.
inline std::optional<std::string> resolution_problem(std::size_t n, double length, double width,
                                                     std::span<const double> centers) {
    if (width * static_cast<double>(n) / length < 8.0) {
        return "fewer than 8 grid points per standard deviation (s*n/L = " +
               std::to_string(width * static_cast<double>(n) / length) + ")";
    }
    for (double c : centers) {
        const double scale = std::numbers::sqrt2 * width;
        const double outside = 0.5 * std::erfc((0.5 * length - c) / scale) +
                               0.5 * std::erfc((c + 0.5 * length) / scale);
        if (outside > 1e-12) {
            return "packet mass " + std::to_string(outside) + " outside the periodic box";
        }
    }
    return std::nullopt;
}

/// p = F^dagger diag(k) F on the grid, k_j = 2 pi j / L for signed j in [-n/2, n/2).
inline Observable momentum_observable(std::size_t n, double length) {
    if (!fourier::is_power_of_two(n) || !(length > 0.0)) {
        throw Error(ErrorCode::InvalidInput, "need a power-of-two grid and positive length");
    }
    const auto k = fourier::wavenumbers(n, length);
    const CVector kc(k.begin(), k.end());
    // p_{jl} depends on (j - l) mod n only
    const auto column = fourier::inverse(kc);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    ComplexMatrix p(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l <= j; ++l) {
            const Complex c = column[j - l] * scale;
            p(j, l) = c;
            p(l, j) = std::conj(c);
        }
        p(j, j) = p(j, j).real();
    }
    return Observable(std::move(p));
}

/// (p psi)(q) through the Fourier-diagonal representation.
inline CVector apply_momentum(const GridWavefunction &psi) {
    const auto k = fourier::wavenumbers(psi.n, psi.length);
    auto spec = fourier::forward(psi.samples);
    for (std::size_t m = 0; m < psi.n; ++m) {
        spec[m] *= k[m];
    }
    return fourier::inverse(spec);
}

/// Grid amplitudes psi(q_j) sqrt(dx) as a unit vector.
inline PureState as_state(const GridWavefunction &psi) {
    const double root = std::sqrt(psi.dx());
    CVector v(psi.samples);
    for (auto &z : v) {
        z *= root;
    }
    return PureState(std::move(v), 1e-9);
}

/// Weak values of momentum postselected on position:
/// p(q) = |psi(q)|^2 dx, alpha(q) = (p psi)(q) / psi(q).
inline WeakValueProfile position_profile(const GridWavefunction &psi, const Tolerances &tol = {}) {
    const CVector ppsi = apply_momentum(psi);
    WeakValueProfile out;
    out.outcomes.reserve(psi.n);
    std::size_t kept = 0;
    for (std::size_t j = 0; j < psi.n; ++j) {
        OutcomeWeakValue o{std::to_string(j), std::norm(psi.samples[j]) * psi.dx(), std::nullopt};
        if (o.prob >= tol.ps) {
            o.alpha = ppsi[j] / psi.samples[j];
            ++kept;
        }
        out.outcomes.push_back(std::move(o));
    }
    const double excluded = out.excluded_mass();
    if (kept == 0 || excluded > tol.ps * static_cast<double>(psi.n)) {
        throw Error(ErrorCode::DegenerateEnsemble,
                    "excluded postselection mass " + std::to_string(excluded));
    }
    return out;
}

/// Bayes-estimator loss report for estimating p from a q measurement, built from
/// dense n x n operators through the generic verify_bounds.
inline LossReport exact_uncertainty_check(const GridWavefunction &psi,
                                          const Tolerances &tol = grid_tolerances()) {
    const DensityMatrix rho = density_from_pure(as_state(psi));
    const Observable p = momentum_observable(psi.n, psi.length);
    return verify_bounds(rho, p, PostselectionBasis::standard(psi.n), std::nullopt, tol);
}

/// Same report without dense operators: every expectation is a grid sum using
/// (p psi) from the FFT. Valid for any n, and an independent route to the dense check.
inline LossReport exact_uncertainty_fast(const GridWavefunction &psi,
                                         const Tolerances &tol = grid_tolerances()) {
    const auto prof = position_profile(psi, tol);
    const double root = std::sqrt(psi.dx());
    const CVector ppsi = apply_momentum(psi);

    LossReport r;
    r.bayes = true;
    double mean_p = 0.0;
    double mean_mu = 0.0;
    for (std::size_t j = 0; j < psi.n; ++j) {
        const Complex v = psi.samples[j] * root;
        const Complex pv = ppsi[j] * root;
        const auto &o = prof.outcomes[j];
        r.a2 += std::norm(pv);
        r.loss += std::norm(o.mu() * v - pv);
        r.mu2 += o.prob * o.mu() * o.mu();
        r.sigma2 += o.prob * o.sigma() * o.sigma();
        mean_p += std::real(std::conj(v) * pv);
        mean_mu += o.prob * o.mu();
        if (o.excluded()) {
            ++r.excluded_outcomes;
        }
    }
    r.theta2 = r.mu2;
    r.gap = 0.0;
    r.schwarz_slack = r.a2 - r.mu2 - r.sigma2;
    r.decomposition_residual = r.loss - (r.a2 - r.mu2 + r.gap);
    r.unbiased_gap = std::abs(mean_mu - mean_p);
    r.purity = 1.0;
    r.decomposition_ok = std::abs(r.decomposition_residual) <= tol.id;
    r.schwarz_ok = r.schwarz_slack >= -tol.id && r.sigma2 >= -tol.id;
    r.mean_bound_ok = r.loss >= r.a2 - r.mu2 - tol.id;
    r.sigma_bound_ok = r.loss >= r.sigma2 - tol.id;
    r.pure_saturation_ok =
        std::abs(r.loss - r.sigma2) <= tol.id && std::abs(r.schwarz_slack) <= tol.id;
    return r;
}

struct MomentumMoments {
    double mean = 0.0;
    double variance = 0.0;
    double second = 0.0; // <p^2>
};

/// <p> and <p^2> from the Fourier coefficients.
inline MomentumMoments momentum_moments(const GridWavefunction &psi) {
    const auto k = fourier::wavenumbers(psi.n, psi.length);
    const auto spec = fourier::forward(psi.samples);
    double mass = 0.0;
    MomentumMoments m;
    for (std::size_t i = 0; i < psi.n; ++i) {
        const double w = std::norm(spec[i]);
        mass += w;
        m.mean += w * k[i];
        m.second += w * k[i] * k[i];
    }
    m.mean /= mass;
    m.second /= mass;
    m.variance = m.second - m.mean * m.mean;
    return m;
}

} // namespace weakval::eur
