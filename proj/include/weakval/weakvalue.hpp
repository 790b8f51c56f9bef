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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qstate.hpp"

namespace weakval {

/// Pure-state weak value <b|a|psi> / <b|psi>.
inline Complex weak_value_pure(const PureState &psi, const Observable &a,
                               std::span<const Complex> b, double eps_ps = Tolerances{}.ps) {
    const Complex overlap = inner(b, psi.amplitudes());
    if (std::norm(overlap) < eps_ps) {
        throw Error(ErrorCode::ZeroOverlap,
                    "|<b|psi>|^2 = " + std::to_string(std::norm(overlap)) + " below cutoff");
    }
    return inner(b, a.matrix() * psi.amplitudes()) / overlap;
}

/// Mixed-state weak value <b|a rho|b> / <b|rho|b>.
inline Complex alpha_mixed(const DensityMatrix &rho, const Observable &a,
                           std::span<const Complex> b, double eps_ps = Tolerances{}.ps) {
    const CVector rho_b = rho.matrix() * b;
    const double p = std::real(inner(b, rho_b));
    if (p < eps_ps) {
        throw Error(ErrorCode::ZeroProbability,
                    "<b|rho|b> = " + std::to_string(p) + " below cutoff");
    }
    return inner(b, a.matrix() * rho_b) / p;
}

/// One postselection outcome. Outcomes whose probability falls below the
/// cutoff carry no weak value; mu() and sigma() then read as 0, which is the
/// value the estimator operators assign there.
struct OutcomeWeakValue {
    std::string label;
    double prob = 0.0;
    std::optional<Complex> alpha;

    [[nodiscard]] bool excluded() const noexcept { return !alpha.has_value(); }
    [[nodiscard]] double mu() const noexcept { return alpha ? alpha->real() : 0.0; }
    [[nodiscard]] double sigma() const noexcept { return alpha ? alpha->imag() : 0.0; }
};

struct WeakValueProfile {
    std::vector<OutcomeWeakValue> outcomes;

    [[nodiscard]] std::size_t size() const noexcept { return outcomes.size(); }

    [[nodiscard]] bool has_exclusions() const noexcept {
        for (const auto &o : outcomes) {
            if (o.excluded()) {
                return true;
            }
        }
        return false;
    }

    [[nodiscard]] double excluded_mass() const noexcept {
        double m = 0.0;
        for (const auto &o : outcomes) {
            if (o.excluded()) {
                m += std::max(o.prob, 0.0);
            }
        }
        return m;
    }

    [[nodiscard]] std::vector<double> mus() const {
        std::vector<double> r;
        r.reserve(outcomes.size());
        for (const auto &o : outcomes) {
            r.push_back(o.mu());
        }
        return r;
    }

    [[nodiscard]] std::vector<double> sigmas() const {
        std::vector<double> r;
        r.reserve(outcomes.size());
        for (const auto &o : outcomes) {
            r.push_back(o.sigma());
        }
        return r;
    }

    [[nodiscard]] std::vector<double> probs() const {
        std::vector<double> r;
        r.reserve(outcomes.size());
        for (const auto &o : outcomes) {
            r.push_back(o.prob);
        }
        return r;
    }
};

/// Weak values alpha(b) for every outcome of `basis`, with their
/// postselection probabilities. Throws DegenerateEnsemble when the excluded
/// probability mass exceeds eps_ps * dim or no outcome survives the cutoff.
inline WeakValueProfile profile(const DensityMatrix &rho, const Observable &a,
                                const PostselectionBasis &basis, const Tolerances &tol = {}) {
    const std::size_t n = basis.size();
    if (rho.dim() != n || a.dim() != n) {
        throw Error(ErrorCode::InvalidInput, "state, observable and basis dimensions differ");
    }
    WeakValueProfile out;
    out.outcomes.reserve(n);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const CVector b = basis.vector(i);
        const CVector rho_b = rho.matrix() * b;
        OutcomeWeakValue o{basis.label(i), std::real(inner(b, rho_b)), std::nullopt};
        if (o.prob >= tol.ps) {
            o.alpha = inner(b, a.matrix() * rho_b) / o.prob;
            ++kept;
        }
        out.outcomes.push_back(std::move(o));
    }
    const double excluded = out.excluded_mass();
    if (kept == 0 || excluded > tol.ps * static_cast<double>(n)) {
        throw Error(ErrorCode::DegenerateEnsemble,
                    "excluded postselection mass " + std::to_string(excluded));
    }
    return out;
}

/// A function of the measured outcome: theta-hat = sum_b theta(b) |b><b|.
class Estimator {
  public:
    Estimator(PostselectionBasis basis, std::vector<double> values)
        : basis_(std::move(basis)), values_(std::move(values)) {
        if (values_.size() != basis_.size()) {
            throw Error(ErrorCode::InvalidInput, "estimator needs one value per outcome");
        }
        for (double v : values_) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::InvalidInput, "estimator values must be finite");
            }
        }
    }

    [[nodiscard]] const PostselectionBasis &basis() const noexcept { return basis_; }
    [[nodiscard]] const std::vector<double> &values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

    [[nodiscard]] ComplexMatrix operator_matrix() const { return basis_.diagonal_operator(values_); }

    /// max |[theta-hat, b-hat]|
    [[nodiscard]] double commutator_defect() const {
        return commutator(operator_matrix(), basis_.outcome_operator()).max_abs();
    }

  private:
    PostselectionBasis basis_;
    std::vector<double> values_;
};

struct EstimatorOperators {
    ComplexMatrix mu_hat;
    ComplexMatrix sigma_hat;
    std::vector<std::size_t> zeroed; // excluded outcomes set to 0

    /// mu-hat + i sigma-hat
    [[nodiscard]] ComplexMatrix alpha_hat() const { return mu_hat + Complex{0.0, 1.0} * sigma_hat; }
};

/// mu-hat = sum_b mu(b)|b><b| and sigma-hat = sum_b sigma(b)|b><b|.
/// Excluded outcomes contribute 0 and are listed in `zeroed`.
inline EstimatorOperators estimator_operators(const WeakValueProfile &prof,
                                              const PostselectionBasis &basis) {
    if (prof.size() != basis.size()) {
        throw Error(ErrorCode::InvalidInput, "profile and basis sizes differ");
    }
    std::vector<std::size_t> zeroed;
    for (std::size_t i = 0; i < prof.size(); ++i) {
        if (prof.outcomes[i].excluded()) {
            zeroed.push_back(i);
        }
    }
    const auto mus = prof.mus();
    const auto sigmas = prof.sigmas();
    return {basis.diagonal_operator(mus), basis.diagonal_operator(sigmas), std::move(zeroed)};
}

} // namespace weakval
