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
#include <numbers>
#include <span>
#include <vector>

#include "fourier.hpp"
#include "weakvalue.hpp"

namespace weakval {

/// Uniform pointer-position grid x_j = x_min + j dx, j = 0..n-1.
struct PointerGrid {
    std::size_t n = 1024;
    double x_min = -64.0;
    double x_max = 64.0;

    /// Grid on [-half_width, half_width).
    static PointerGrid centered(std::size_t n, double half_width) { return {n, -half_width, half_width}; }

    /// n points at spacing width/8: eight points per position standard deviation.
    static PointerGrid for_width(std::size_t n, double width) {
        return centered(n, 0.5 * static_cast<double>(n) * width / 8.0);
    }

    [[nodiscard]] double dx() const { return (x_max - x_min) / static_cast<double>(n); }
    [[nodiscard]] double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx(); }
    [[nodiscard]] double dk() const { return 2.0 * std::numbers::pi / (static_cast<double>(n) * dx()); }
};

struct PointerStats {
    double g = 0.0;
    double p_post = 0.0;
    double mean_x = 0.0;
    double mean_k = 0.0;
    double var_x = 0.0;
    double var_k = 0.0;
    double joint_norm = 0.0; // before postselection
};

/// System (computational basis) times pointer grid amplitudes, row-major by system index.
struct JointState {
    std::size_t dim = 0;
    std::size_t n = 0;
    std::vector<Complex> amplitudes;
    double norm = 0.0; // sum |amplitude|^2 dx

    [[nodiscard]] Complex at(std::size_t i, std::size_t j) const { return amplitudes[i * n + j]; }
};

namespace pointer {

/// Normalized Gaussian amplitude with position standard deviation `width`.
inline double gaussian(double x, double width) {
    const double norm = std::pow(2.0 * std::numbers::pi * width * width, -0.25);
    return norm * std::exp(-x * x / (4.0 * width * width));
}

/// Probability mass of |gaussian(x - shift)|^2 outside [lo, hi].
inline double mass_outside(double shift, double width, double lo, double hi) {
    const double scale = std::numbers::sqrt2 * width;
    return 0.5 * std::erfc((hi - shift) / scale) + 0.5 * std::erfc((shift - lo) / scale);
}

inline void check_grid(const PointerGrid &grid, double width) {
    if (!fourier::is_power_of_two(grid.n) || grid.n < 64) {
        throw Error(ErrorCode::InvalidInput, "pointer grid size must be a power of two >= 64");
    }
    if (!(width > 0.0) || !(grid.x_max > grid.x_min)) {
        throw Error(ErrorCode::InvalidInput, "pointer width and grid extent must be positive");
    }
    const double width_k = 1.0 / (2.0 * width);
    if (grid.dx() > width / 8.0 || grid.dk() > width_k / 8.0) {
        throw Error(ErrorCode::UnderResolved,
                    "pointer grid must resolve position and momentum widths by 8 points");
    }
    if (mass_outside(0.0, width, grid.x_min, grid.x_max) > 1e-12) {
        throw Error(ErrorCode::UnderResolved, "initial pointer extends beyond the grid");
    }
}

} // namespace pointer

/// |psi> (x) pointer after the impulsive coupling exp(-i g a (x) k). In the
/// eigenbasis of a the coupling translates the pointer of each branch by g a_j.
inline JointState couple(const PureState &psi, const Observable &a, double g, double width,
                         const PointerGrid &grid, const Tolerances &tol = {}) {
    pointer::check_grid(grid, width);
    if (a.dim() != psi.dim()) {
        throw Error(ErrorCode::InvalidInput, "state and observable dimensions differ");
    }
    const std::size_t dim = psi.dim();
    const auto eig = eig_hermitian(a.matrix(), tol);

    std::vector<Complex> coeff(dim);
    double leaked = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        coeff[j] = inner(eig.vector(j), psi.amplitudes());
        leaked += std::norm(coeff[j]) *
                  pointer::mass_outside(g * eig.eigenvalues[j], width, grid.x_min, grid.x_max);
    }
    if (leaked > 1e-9) {
        throw Error(ErrorCode::GridOverflow,
                    "translated pointer leaks " + std::to_string(leaked) + " off the grid");
    }

    JointState joint{dim, grid.n, std::vector<Complex>(dim * grid.n), 0.0};
    std::vector<double> branch(grid.n);
    for (std::size_t j = 0; j < dim; ++j) {
        if (coeff[j] == Complex{}) {
            continue;
        }
        const double shift = g * eig.eigenvalues[j];
        for (std::size_t x = 0; x < grid.n; ++x) {
            branch[x] = pointer::gaussian(grid.x(x) - shift, width);
        }
        for (std::size_t i = 0; i < dim; ++i) {
            const Complex w = eig.eigenvectors(i, j) * coeff[j];
            for (std::size_t x = 0; x < grid.n; ++x) {
                joint.amplitudes[i * grid.n + x] += w * branch[x];
            }
        }
    }
    for (const auto &z : joint.amplitudes) {
        joint.norm += std::norm(z);
    }
    joint.norm *= grid.dx();
    return joint;
}

/// Pointer amplitude <b|Psi> conditioned on the system outcome b (unnormalized).
inline CVector postselect(const JointState &joint, std::span<const Complex> b) {
    if (b.size() != joint.dim) {
        throw Error(ErrorCode::InvalidInput, "postselection vector has wrong dimension");
    }
    CVector chi(joint.n);
    for (std::size_t i = 0; i < joint.dim; ++i) {
        const Complex bi = std::conj(b[i]);
        for (std::size_t x = 0; x < joint.n; ++x) {
            chi[x] += bi * joint.amplitudes[i * joint.n + x];
        }
    }
    return chi;
}

/// Position and momentum moments of a pointer amplitude on `grid`.
inline PointerStats pointer_statistics(std::span<const Complex> chi, const PointerGrid &grid) {
    PointerStats st;
    const double dx = grid.dx();
    double mass = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t x = 0; x < grid.n; ++x) {
        const double w = std::norm(chi[x]);
        const double pos = grid.x(x);
        mass += w;
        m1 += w * pos;
        m2 += w * pos * pos;
    }
    st.p_post = mass * dx;
    if (mass > 0.0) {
        st.mean_x = m1 / mass;
        st.var_x = m2 / mass - st.mean_x * st.mean_x;
    }

    const auto spectrum = fourier::forward(chi);
    const auto k = fourier::wavenumbers(grid.n, static_cast<double>(grid.n) * dx);
    double kmass = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
    for (std::size_t m = 0; m < grid.n; ++m) {
        const double w = std::norm(spectrum[m]);
        kmass += w;
        k1 += w * k[m];
        k2 += w * k[m] * k[m];
    }
    if (kmass > 0.0) {
        st.mean_k = k1 / kmass;
        st.var_k = k2 / kmass - st.mean_k * st.mean_k;
    }
    return st;
}

/// Weak measurement of `a` with coupling g and pointer width s, postselected on |b>.
inline PointerStats simulate(const PureState &psi, const Observable &a, std::span<const Complex> b,
                             double g, double width, const PointerGrid &grid,
                             const Tolerances &tol = {}) {
    if (!std::isfinite(g)) {
        throw Error(ErrorCode::InvalidInput, "coupling must be finite");
    }
    const JointState joint = couple(psi, a, g, width, grid, tol);
    const CVector chi = postselect(joint, b);
    PointerStats st = pointer_statistics(chi, grid);
    st.g = g;
    st.joint_norm = joint.norm;
    if (st.p_post < tol.ps) {
        throw Error(ErrorCode::ZeroPostselection,
                    "postselection probability " + std::to_string(st.p_post) + " below cutoff");
    }
    return st;
}

/// Pointer readouts implied at a single coupling: Re from the position shift,
/// Im from the momentum shift 2 g s_k^2 Im a_w with s_k^2 = 1 / (4 s^2).
inline Complex implied_weak_value(const PointerStats &st, double width) {
    const double var_k0 = 1.0 / (4.0 * width * width);
    return {st.mean_x / st.g, st.mean_k / (2.0 * st.g * var_k0)};
}

/// Polynomial extrapolation in g^2 to g = 0 (Neville). For ratio-2 sequences this
/// is the Richardson table eliminating the g^2, g^4, ... error terms.
inline Complex extrapolate_to_zero(std::span<const double> g, std::span<const Complex> values) {
    std::vector<Complex> p(values.begin(), values.end());
    const std::size_t m = p.size();
    for (std::size_t level = 1; level < m; ++level) {
        for (std::size_t i = 0; i + level < m; ++i) {
            const double xi = g[i] * g[i];
            const double xj = g[i + level] * g[i + level];
            p[i] = (xi * p[i + 1] - xj * p[i]) / (xi - xj);
        }
    }
    return p[0];
}

struct WeakValueReadout {
    Complex value;
    double error_re = 0.0; // |last extrapolant - previous level|
    double error_im = 0.0;
    std::vector<PointerStats> sweep;
    std::vector<Complex> implied;
};

/// Extrapolates the pointer readout over a decreasing coupling sequence.
/// Throws NoConvergence when the full extrapolant and the one that omits the
/// largest coupling differ by more than `tol` in either component.
inline WeakValueReadout extract_weak_value(const PureState &psi, const Observable &a,
                                           std::span<const Complex> b, double width,
                                           std::span<const double> g_sequence,
                                           const PointerGrid &grid, double tol = 1e-4,
                                           const Tolerances &tols = {}) {
    if (g_sequence.size() < 3) {
        throw Error(ErrorCode::InvalidInput, "need at least three couplings");
    }
    for (std::size_t i = 0; i < g_sequence.size(); ++i) {
        if (!(g_sequence[i] > 0.0) || (i > 0 && !(g_sequence[i] < g_sequence[i - 1]))) {
            throw Error(ErrorCode::InvalidInput, "couplings must be positive and strictly decreasing");
        }
    }
    WeakValueReadout out;
    for (double g : g_sequence) {
        out.sweep.push_back(simulate(psi, a, b, g, width, grid, tols));
        out.implied.push_back(implied_weak_value(out.sweep.back(), width));
    }
    out.value = extrapolate_to_zero(g_sequence, out.implied);
    const Complex previous = extrapolate_to_zero(g_sequence.subspan(1),
                                                 std::span<const Complex>(out.implied).subspan(1));
    out.error_re = std::abs(out.value.real() - previous.real());
    out.error_im = std::abs(out.value.imag() - previous.imag());
    if (out.error_re > tol || out.error_im > tol) {
        throw Error(ErrorCode::NoConvergence,
                    "successive extrapolants differ by " +
                        std::to_string(std::max(out.error_re, out.error_im)));
    }
    return out;
}

} // namespace weakval
