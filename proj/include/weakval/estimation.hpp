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
#include <optional>
#include <span>
#include <vector>

#include "weakvalue.hpp"

namespace weakval {

/// Tr(rho O)
inline Complex expectation(const DensityMatrix &rho, const ComplexMatrix &o) {
    const auto &r = rho.matrix();
    if (o.dim() != r.dim()) {
        throw Error(ErrorCode::InvalidInput, "operator and state dimensions differ");
    }
    Complex acc = 0.0;
    for (std::size_t i = 0; i < r.dim(); ++i) {
        for (std::size_t j = 0; j < r.dim(); ++j) {
            acc += r(i, j) * o(j, i);
        }
    }
    return acc;
}

/// Tr(rho X^2), evaluated as Tr((X rho) X). Cheap when X is sparse.
inline Complex expectation_of_square(const DensityMatrix &rho, const ComplexMatrix &x) {
    const ComplexMatrix xr = x * rho.matrix();
    Complex acc = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) {
        for (std::size_t j = 0; j < x.dim(); ++j) {
            acc += xr(i, j) * x(j, i);
        }
    }
    return acc;
}

inline double real_checked(Complex z, const char *what) {
    if (std::abs(z.imag()) > 1e-9) {
        throw Error(ErrorCode::NonRealLoss, std::string(what) + " has imaginary part " +
                                                std::to_string(z.imag()));
    }
    return z.real();
}

/// Quadratic loss Tr[rho (theta-hat - a)^2].
inline double loss(const DensityMatrix &rho, const Observable &a, const Estimator &theta) {
    const ComplexMatrix d = theta.operator_matrix() - a.matrix();
    return real_checked(expectation_of_square(rho, d), "loss");
}

/// theta(b) = mu(b) = Re alpha(b); excluded outcomes get 0.
inline Estimator bayes_estimator(const DensityMatrix &rho, const Observable &a,
                                 const PostselectionBasis &basis, const Tolerances &tol = {}) {
    return Estimator(basis, profile(rho, a, basis, tol).mus());
}

struct GridSpec {
    double step = 1e-3;
    double half_width = 0.0; // 0 selects the spectral norm of the observable
};

/// Minimizes the loss by direct search, independently of the weak-value formula.
///
/// Because theta-hat is diagonal in the postselection basis the loss is a sum of
/// one quadratic per outcome plus a constant:
///
///   L(theta) = Tr(rho a^2) + sum_b [ theta_b^2 <b|rho|b> - 2 theta_b Re<b|a rho|b> ].
///
/// Each coordinate restriction f_b(t) = L(theta with theta_b = t, others 0) is
/// therefore an exact degree-2 polynomial, recovered from three evaluations of
/// loss() at t = -1, 0, 1. It is scanned on the grid [-w, w] (widened while
/// the best point sits on the edge) and the minimum refined by the vertex of the
/// parabola through the best grid point and its two neighbours.
inline Estimator bruteforce_bayes(const DensityMatrix &rho, const Observable &a,
                                  const PostselectionBasis &basis, const GridSpec &grid = {},
                                  const Tolerances &tol = {}) {
    if (!(grid.step > 0.0)) {
        throw Error(ErrorCode::InvalidInput, "grid step must be positive");
    }
    const std::size_t n = basis.size();
    double width = grid.half_width > 0.0 ? grid.half_width : spectral_norm_hermitian(a.matrix(), tol);
    width = std::max(width, 4.0 * grid.step);

    std::vector<double> zero(n, 0.0);
    const double l0 = loss(rho, a, Estimator(basis, zero));

    std::vector<double> result(n, 0.0);
    for (std::size_t b = 0; b < n; ++b) {
        std::vector<double> probe = zero;
        probe[b] = 1.0;
        const double lp = loss(rho, a, Estimator(basis, probe));
        probe[b] = -1.0;
        const double lm = loss(rho, a, Estimator(basis, probe));
        const double curv = 0.5 * (lp + lm) - l0;
        const double slope = 0.5 * (lp - lm);
        if (curv < tol.ps) {
            continue; // outcome never occurs; estimator value irrelevant
        }
        const auto f = [&](double t) { return l0 + t * (slope + t * curv); };

        double w = width;
        for (int widen = 0; widen < 64; ++widen) {
            const auto steps = static_cast<long>(std::ceil(w / grid.step));
            long best = -steps;
            double best_val = f(-static_cast<double>(steps) * grid.step);
            for (long k = -steps + 1; k <= steps; ++k) {
                const double v = f(static_cast<double>(k) * grid.step);
                if (v < best_val) {
                    best_val = v;
                    best = k;
                }
            }
            if (best == -steps || best == steps) {
                w *= 2.0;
                continue;
            }
            const double t1 = static_cast<double>(best) * grid.step;
            const double f0 = f(t1 - grid.step);
            const double f1 = best_val;
            const double f2 = f(t1 + grid.step);
            const double denom = f2 - 2.0 * f1 + f0;
            result[b] = denom > 0.0 ? t1 - 0.5 * grid.step * (f2 - f0) / denom : t1;
            break;
        }
    }
    return Estimator(basis, std::move(result));
}

/// Expectations entering the quadratic-loss decomposition for one estimator.
struct LossReport {
    double loss = 0.0;
    double a2 = 0.0;     // <a^2>
    double theta2 = 0.0; // <theta^2>
    double gap = 0.0;    // <(theta - mu)^2>
    double sigma2 = 0.0; // <sigma^2>
    double mu2 = 0.0;    // <mu^2>
    double schwarz_slack = 0.0; // <a^2> - <mu^2> - <sigma^2>
    double decomposition_residual = 0.0; // loss - (<a^2> - <mu^2> + gap)
    double unbiased_gap = 0.0;           // |<mu> - <a>|
    double purity = 0.0;
    std::size_t excluded_outcomes = 0;
    bool bayes = false;

    bool decomposition_ok = false; // loss = <a^2> - <mu^2> + <(theta - mu)^2>
    bool schwarz_ok = false;       // <mu^2> + <sigma^2> <= <a^2>
    bool mean_bound_ok = false;    // loss >= <a^2> - <mu^2>
    bool sigma_bound_ok = false;   // loss >= <sigma^2>
    std::optional<bool> pure_saturation_ok; // only for pure states with the Bayes estimator

    [[nodiscard]] bool all_ok() const {
        return decomposition_ok && schwarz_ok && mean_bound_ok && sigma_bound_ok && pure_saturation_ok.value_or(true);
    }
};

/// Evaluates the loss of `theta` (the Bayes estimator when empty) together with
/// every term of its decomposition and checks the loss bounds at tol.id.
inline LossReport verify_bounds(const DensityMatrix &rho, const Observable &a,
                                const PostselectionBasis &basis,
                                const std::optional<Estimator> &theta = std::nullopt,
                                const Tolerances &tol = {}) {
    const auto prof = profile(rho, a, basis, tol);
    const auto ops = estimator_operators(prof, basis);
    const Estimator est = theta ? *theta : Estimator(basis, prof.mus());
    if (est.size() != basis.size()) {
        throw Error(ErrorCode::InvalidInput, "estimator and basis sizes differ");
    }
    const ComplexMatrix theta_hat = est.operator_matrix();

    LossReport r;
    r.bayes = !theta.has_value();
    r.loss = loss(rho, a, est);
    r.a2 = real_checked(expectation_of_square(rho, a.matrix()), "<a^2>");
    r.theta2 = real_checked(expectation_of_square(rho, theta_hat), "<theta^2>");
    r.gap = real_checked(expectation_of_square(rho, theta_hat - ops.mu_hat), "<(theta-mu)^2>");
    r.sigma2 = real_checked(expectation_of_square(rho, ops.sigma_hat), "<sigma^2>");
    r.mu2 = real_checked(expectation_of_square(rho, ops.mu_hat), "<mu^2>");
    r.schwarz_slack = r.a2 - r.mu2 - r.sigma2;
    r.decomposition_residual = r.loss - (r.a2 - r.mu2 + r.gap);
    r.unbiased_gap = std::abs(expectation(rho, ops.mu_hat) - expectation(rho, a.matrix()));
    r.purity = rho.purity();
    r.excluded_outcomes = ops.zeroed.size();

    r.decomposition_ok = std::abs(r.decomposition_residual) <= tol.id && r.gap >= -tol.id;
    r.schwarz_ok = r.schwarz_slack >= -tol.id && r.sigma2 >= -tol.id;
    r.mean_bound_ok = r.loss >= r.a2 - r.mu2 - tol.id;
    r.sigma_bound_ok = r.loss >= r.sigma2 - tol.id;
    if (r.bayes && std::abs(r.purity - 1.0) <= 1e-10) {
        r.pure_saturation_ok =
            std::abs(r.loss - r.sigma2) <= tol.id && std::abs(r.schwarz_slack) <= tol.id;
    }
    return r;
}

/// True when every retained outcome has |sigma(b)| <= tol, i.e. the Bayes
/// estimator reproduces the observable without loss.
inline bool exactness_certificate(const WeakValueProfile &prof, double tol) {
    for (const auto &o : prof.outcomes) {
        if (!o.excluded() && std::abs(o.sigma()) > tol) {
            return false;
        }
    }
    return true;
}

/// The vectors |mu> = rho^{1/2} a |b> and |nu> = rho^{1/2} |b> whose Cauchy-Schwarz
/// inequality bounds <mu-hat^2> + <sigma-hat^2> by <a^2>.
struct SchwarzTerms {
    Complex overlap; // <mu|nu>
    double mu_norm2 = 0.0;
    double nu_norm2 = 0.0;

    [[nodiscard]] double slack() const { return mu_norm2 * nu_norm2 - std::norm(overlap); }
};

inline SchwarzTerms schwarz_terms(const ComplexMatrix &rho_sqrt, const Observable &a,
                                  std::span<const Complex> b) {
    const CVector ab = a.matrix() * b;
    const CVector mu = rho_sqrt * std::span<const Complex>(ab);
    const CVector nu = rho_sqrt * b;
    return {inner(mu, nu), std::real(inner(mu, mu)), std::real(inner(nu, nu))};
}

} // namespace weakval
