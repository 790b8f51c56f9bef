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
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"

namespace weakval {

/// SplitMix64 output function (Steele, Lea, Flood 2014). Used to decorrelate
/// user seeds before they reach the engine and to split per-trial streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of the independent stream number `index` derived from `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ index);
}

/// Seeded random source: MT19937-64 (whose output sequence is fixed by the
/// C++ standard) seeded with splitmix64(seed). Normal deviates use the
/// Box-Muller transform so sequences are identical on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    /// Uniform on the open interval (0, 1) with 53-bit resolution.
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    double gaussian() {
        if (spare_) {
            const double z = *spare_;
            spare_.reset();
            return z;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        return r * std::cos(phi);
    }

    /// Real and imaginary parts independent standard normals.
    Complex complex_gaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re, im};
    }

  private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

class PureState {
  public:
    explicit PureState(CVector amplitudes, double tol_norm = Tolerances{}.norm)
        : amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.empty()) {
            throw Error(ErrorCode::InvalidInput, "state dimension must be positive");
        }
        for (const auto &z : amplitudes_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw Error(ErrorCode::InvalidInput, "state amplitudes must be finite");
            }
        }
        const double n2 = std::real(inner(amplitudes_, amplitudes_));
        if (std::abs(n2 - 1.0) > tol_norm) {
            throw Error(ErrorCode::NotNormalized,
                        "squared norm " + std::to_string(n2) + " differs from 1");
        }
    }

    /// Rescales a nonzero vector to unit norm.
    static PureState normalized(CVector v) {
        const double n = norm(v);
        if (!(n > 0.0) || !std::isfinite(n)) {
            throw Error(ErrorCode::InvalidInput, "cannot normalize a zero vector");
        }
        for (auto &z : v) {
            z /= n;
        }
        return PureState(std::move(v));
    }

    [[nodiscard]] std::size_t dim() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] const CVector &amplitudes() const noexcept { return amplitudes_; }

  private:
    CVector amplitudes_;
};

struct Violation {
    std::string invariant;
    double magnitude;
};

struct ValidationReport {
    std::vector<Violation> violations;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }

    [[nodiscard]] std::string describe() const {
        std::string s;
        for (const auto &v : violations) {
            if (!s.empty()) {
                s += "; ";
            }
            s += v.invariant + " violation " + std::to_string(v.magnitude);
        }
        return s;
    }
};

/// Prior state. Construction does not validate; use `checked` or `validate`.
class DensityMatrix {
  public:
    explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}

    static DensityMatrix checked(ComplexMatrix m, const Tolerances &tol = {});

    [[nodiscard]] std::size_t dim() const noexcept { return matrix_.dim(); }
    [[nodiscard]] const ComplexMatrix &matrix() const noexcept { return matrix_; }

    /// Tr(rho^2)
    [[nodiscard]] double purity() const {
        double s = 0.0;
        for (const auto &z : matrix_.entries()) {
            s += std::norm(z);
        }
        return s;
    }

  private:
    ComplexMatrix matrix_;
};

/// Lists every violated density-matrix invariant with its magnitude. Never throws.
inline ValidationReport validate(const DensityMatrix &rho, const Tolerances &tol = {}) {
    ValidationReport report;
    const auto &m = rho.matrix();
    const double herm = hermiticity_defect(m);
    if (herm > tol.herm) {
        report.violations.push_back({"hermitian", herm});
    }
    try {
        const auto eig = eig_hermitian(hermitian_part(m), tol);
        if (eig.eigenvalues.front() < -tol.psd) {
            report.violations.push_back({"psd", -eig.eigenvalues.front()});
        }
    } catch (const Error &) {
        report.violations.push_back({"psd", std::numeric_limits<double>::infinity()});
    }
    const double trace_err = std::abs(m.trace() - Complex{1.0});
    if (trace_err > tol.norm) {
        report.violations.push_back({"trace", trace_err});
    }
    return report;
}

inline DensityMatrix DensityMatrix::checked(ComplexMatrix m, const Tolerances &tol) {
    DensityMatrix rho(std::move(m));
    const auto report = validate(rho, tol);
    if (!report.ok()) {
        throw Error(ErrorCode::InvalidInput, "invalid density matrix: " + report.describe());
    }
    return rho;
}

/// |psi><psi|
inline DensityMatrix density_from_pure(const PureState &psi) {
    return DensityMatrix(ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()));
}

class Observable {
  public:
    explicit Observable(ComplexMatrix m, double tol_herm = Tolerances{}.herm)
        : matrix_(std::move(m)) {
        const double defect = hermiticity_defect(matrix_);
        if (defect > tol_herm) {
            throw Error(ErrorCode::NotHermitian,
                        "observable hermiticity defect " + std::to_string(defect));
        }
    }

    [[nodiscard]] std::size_t dim() const noexcept { return matrix_.dim(); }
    [[nodiscard]] const ComplexMatrix &matrix() const noexcept { return matrix_; }

  private:
    ComplexMatrix matrix_;
};

/// Nondegenerate projective postselection: an orthonormal basis {|b>} with one
/// label per outcome. The basis vectors are the columns of `vectors`.
class PostselectionBasis {
  public:
    PostselectionBasis(ComplexMatrix vectors, std::vector<std::string> labels,
                       double tol_herm = Tolerances{}.herm)
        : vectors_(std::move(vectors)), labels_(std::move(labels)) {
        const std::size_t n = vectors_.dim();
        if (labels_.size() != n) {
            throw Error(ErrorCode::InvalidInput, "basis needs exactly one label per vector");
        }
        if (std::set<std::string>(labels_.begin(), labels_.end()).size() != n) {
            throw Error(ErrorCode::InvalidInput, "basis labels must be distinct");
        }
        const auto id = ComplexMatrix::identity(n);
        const double ortho = max_abs_diff(vectors_.adjoint() * vectors_, id);
        if (ortho > tol_herm) {
            throw Error(ErrorCode::InvalidInput,
                        "basis vectors not orthonormal (defect " + std::to_string(ortho) + ")");
        }
        const double complete = max_abs_diff(vectors_ * vectors_.adjoint(), id);
        if (complete > tol_herm) {
            throw Error(ErrorCode::InvalidInput,
                        "basis not complete (defect " + std::to_string(complete) + ")");
        }
        is_standard_ = vectors_ == id;
    }

    static std::vector<std::string> default_labels(std::size_t n) {
        std::vector<std::string> labels;
        labels.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            labels.push_back(std::to_string(i));
        }
        return labels;
    }

    /// Computational basis labelled "0", "1", ...
    static PostselectionBasis standard(std::size_t n) {
        return {ComplexMatrix::identity(n), default_labels(n)};
    }

    [[nodiscard]] std::size_t size() const noexcept { return vectors_.dim(); }
    [[nodiscard]] const ComplexMatrix &matrix() const noexcept { return vectors_; }
    [[nodiscard]] CVector vector(std::size_t i) const { return vectors_.column(i); }
    [[nodiscard]] const std::string &label(std::size_t i) const { return labels_.at(i); }
    [[nodiscard]] const std::vector<std::string> &labels() const noexcept { return labels_; }
    [[nodiscard]] bool is_standard() const noexcept { return is_standard_; }

    [[nodiscard]] std::optional<std::size_t> index_of(const std::string &label) const {
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i] == label) {
                return i;
            }
        }
        return std::nullopt;
    }

    [[nodiscard]] ComplexMatrix projector(std::size_t i) const {
        const auto b = vector(i);
        return ComplexMatrix::outer(b, b);
    }

    /// sum_b w(b) |b><b|
    [[nodiscard]] ComplexMatrix diagonal_operator(std::span<const double> weights) const {
        if (weights.size() != size()) {
            throw Error(ErrorCode::InvalidInput, "one weight per outcome required");
        }
        if (is_standard_) {
            return ComplexMatrix::diagonal(weights);
        }
        const std::size_t n = size();
        ComplexMatrix r(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                Complex acc = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    acc += weights[k] * vectors_(i, k) * std::conj(vectors_(j, k));
                }
                r(i, j) = acc;
            }
        }
        return r;
    }

    /// The measured observable b-hat, taken with eigenvalue i on outcome i.
    [[nodiscard]] ComplexMatrix outcome_operator() const {
        std::vector<double> w(size());
        std::iota(w.begin(), w.end(), 0.0);
        return diagonal_operator(w);
    }

  private:
    ComplexMatrix vectors_;
    std::vector<std::string> labels_;
    bool is_standard_ = false;
};

namespace qubit {

inline ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix pauli_y() { return {{0.0, Complex{0.0, -1.0}}, {Complex{0.0, 1.0}, 0.0}}; }
inline ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

inline PureState ket0() { return PureState({1.0, 0.0}); }
inline PureState ket1() { return PureState({0.0, 1.0}); }
inline PureState plus() { return PureState::normalized({1.0, 1.0}); }
inline PureState minus() { return PureState::normalized({1.0, -1.0}); }

/// {|+>, |->} labelled "+", "-".
inline PostselectionBasis hadamard_basis() {
    return {ComplexMatrix::from_columns({plus().amplitudes(), minus().amplitudes()}), {"+", "-"}};
}

} // namespace qubit

enum class Purity { Pure, Mixed };

inline PureState random_pure_state(std::size_t dim, Rng &rng) {
    CVector v(dim);
    for (auto &z : v) {
        z = rng.complex_gaussian();
    }
    return PureState::normalized(std::move(v));
}

/// g^dagger g / Tr(g^dagger g) with standard complex Gaussian g.
inline DensityMatrix random_mixed_density(std::size_t dim, Rng &rng) {
    std::vector<Complex> entries(dim * dim);
    for (auto &z : entries) {
        z = rng.complex_gaussian();
    }
    const ComplexMatrix g(dim, std::move(entries));
    ComplexMatrix rho = hermitian_part(g.adjoint() * g);
    rho *= Complex{1.0 / rho.trace().real()};
    return DensityMatrix(std::move(rho));
}

/// (h + h^dagger) / 2 with standard complex Gaussian h.
inline Observable random_observable(std::size_t dim, Rng &rng) {
    std::vector<Complex> entries(dim * dim);
    for (auto &z : entries) {
        z = rng.complex_gaussian();
    }
    return Observable(hermitian_part(ComplexMatrix(dim, std::move(entries))));
}

/// Gram-Schmidt orthonormalization of the columns of a complex Gaussian matrix.
inline ComplexMatrix random_unitary(std::size_t dim, Rng &rng) {
    std::vector<Complex> entries(dim * dim);
    for (auto &z : entries) {
        z = rng.complex_gaussian();
    }
    ComplexMatrix u(dim, std::move(entries));
    detail::orthonormalize_columns(u, 0, dim);
    // a second pass restores orthogonality lost to cancellation
    detail::orthonormalize_columns(u, 0, dim);
    return u;
}

inline PostselectionBasis random_basis(std::size_t dim, Rng &rng) {
    return {random_unitary(dim, rng), PostselectionBasis::default_labels(dim)};
}

struct Instance {
    DensityMatrix rho;
    Observable observable;
    PostselectionBasis basis;
};

/// Deterministic random problem. Draw order: state, observable, basis.
inline Instance random_instance(std::size_t dim, Purity purity, std::uint64_t seed) {
    if (dim < 2) {
        throw Error(ErrorCode::InvalidInput, "random instances need dim >= 2");
    }
    Rng rng(seed);
    DensityMatrix rho = purity == Purity::Pure ? density_from_pure(random_pure_state(dim, rng))
                                               : random_mixed_density(dim, rng);
    Observable a = random_observable(dim, rng);
    PostselectionBasis basis = random_basis(dim, rng);
    return {std::move(rho), std::move(a), std::move(basis)};
}

} // namespace weakval
