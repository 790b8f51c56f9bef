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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eurdemo.hpp"
#include "io.hpp"
#include "weakmeas.hpp"

namespace weakval::cli {

using io::json;

/// Process exit statuses. These values are a stable interface.
enum ExitCode : int {
    kOk = 0,
    kInvariantViolation = 1,
    kUsage = 2,
    kDegenerate = 3,
    kNoConvergence = 4,
    kResolutionGuard = 5,
};

inline int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::DegenerateEnsemble:
    case ErrorCode::ZeroOverlap:
    case ErrorCode::ZeroProbability:
    case ErrorCode::ZeroPostselection:
        return kDegenerate;
    case ErrorCode::NoConvergence:
        return kNoConvergence;
    case ErrorCode::UnderResolved:
    case ErrorCode::GridOverflow:
        return kResolutionGuard;
    case ErrorCode::NonRealLoss:
        return kInvariantViolation;
    default:
        return kUsage;
    }
}

/// Writes {"error", "message", ["field", "violations"]} as one JSON line and
/// returns the matching exit status.
inline int report_error(const Error &e, std::ostream &err) {
    json j{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (const auto *fe = dynamic_cast<const io::FieldError *>(&e)) {
        j["field"] = fe->field();
        if (fe->report()) {
            j["violations"] = io::to_json(*fe->report());
        }
    }
    err << j.dump() << '\n';
    return exit_code_for(e.code());
}

inline int usage_error(const std::string &message, std::ostream &err) {
    err << json{{"error", "Usage"}, {"message", message}}.dump() << '\n';
    return kUsage;
}

/// Runs `write` against the file at `path`, or `fallback` when the path is empty.
template <typename F>
void with_output(const std::string &path, std::ostream &fallback, F &&write) {
    if (path.empty()) {
        write(fallback);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw io::FieldError("output", "cannot open " + path + " for writing");
    }
    write(f);
}

struct ComputeOptions {
    std::string input;
    std::string output;
};

/// Weak-value profile, Bayes estimator and loss report for one problem file.
inline int cmd_compute(const ComputeOptions &opt, std::ostream &out, std::ostream &err) {
    try {
        const io::Problem prob = io::load_problem(opt.input);
        const auto prof = profile(prob.rho, prob.observable, prob.basis, prob.tol);
        const Estimator bayes(prob.basis, prof.mus());
        const LossReport report =
            verify_bounds(prob.rho, prob.observable, prob.basis, std::nullopt, prob.tol);
        const json doc{{"dim", prob.basis.size()},
                       {"profile", io::to_json(prof)},
                       {"bayes_estimator", io::to_json(bayes)},
                       {"exact_estimate", exactness_certificate(prof, prob.tol.id)},
                       {"loss_report", io::to_json(report)},
                       {"tolerances", io::to_json(prob.tol)}};
        with_output(opt.output, out, [&](std::ostream &s) { s << doc.dump(2) << '\n'; });
        return kOk;
    } catch (const Error &e) {
        return report_error(e, err);
    }
}

struct VerifyOptions {
    long dim = 4;
    long trials = 100;
    std::uint64_t seed = 1;
    Purity purity = Purity::Mixed;
    double tol = 1e-9;
    std::string output;
};

struct TrialResult {
    std::uint64_t seed = 0;
    LossReport bayes;
    LossReport perturbed;
    double oracle_diff = 0.0;
    bool unbiased_ok = false;
    bool oracle_ok = false;
    bool optimal_ok = false;

    [[nodiscard]] bool pass() const {
        return bayes.all_ok() && perturbed.decomposition_ok && perturbed.schwarz_ok && perturbed.mean_bound_ok &&
               perturbed.sigma_bound_ok && unbiased_ok && oracle_ok && optimal_ok;
    }
};

/// One verification trial: the Bayes estimator and a random perturbation of it
/// on random_instance(dim, purity, derive_seed(seed, trial)).
inline TrialResult run_trial(std::size_t dim, Purity purity, std::uint64_t seed, std::uint64_t trial,
                             const Tolerances &tol) {
    TrialResult r;
    r.seed = derive_seed(seed, trial);
    const Instance inst = random_instance(dim, purity, r.seed);
    const auto bayes = bayes_estimator(inst.rho, inst.observable, inst.basis, tol);

    Rng rng(derive_seed(r.seed, 1));
    std::vector<double> perturbed = bayes.values();
    for (auto &v : perturbed) {
        v += rng.gaussian();
    }
    r.bayes = verify_bounds(inst.rho, inst.observable, inst.basis, std::nullopt, tol);
    r.perturbed = verify_bounds(inst.rho, inst.observable, inst.basis,
                                Estimator(inst.basis, perturbed), tol);
    const auto brute = bruteforce_bayes(inst.rho, inst.observable, inst.basis, GridSpec{}, tol);
    for (std::size_t b = 0; b < dim; ++b) {
        r.oracle_diff = std::max(r.oracle_diff, std::abs(brute.values()[b] - bayes.values()[b]));
    }
    r.unbiased_ok = r.bayes.excluded_outcomes > 0 || r.bayes.unbiased_gap <= 1e-10;
    r.oracle_ok = r.oracle_diff <= 1e-6;
    r.optimal_ok = r.perturbed.loss >= r.bayes.loss - tol.id;
    return r;
}

inline void write_verify_header(io::CsvWriter &csv) {
    csv << "trial" << "seed" << "dim" << "purity" << "loss" << "sigma2" << "mu2" << "a2"
        << "schwarz_slack" << "decomposition_residual" << "unbiased_gap" << "perturbed_loss"
        << "perturbed_decomposition_residual" << "oracle_diff" << "decomposition_ok" << "schwarz_ok"
        << "mean_bound_ok" << "sigma_bound_ok" << "pure_saturation_ok" << "unbiased_ok" << "oracle_ok"
        << "optimal_ok" << "pass";
    csv.end_row();
}

inline void write_verify_row(io::CsvWriter &csv, std::uint64_t trial, std::size_t dim,
                             Purity purity, const TrialResult &r) {
    const auto &b = r.bayes;
    csv << trial << r.seed << dim << (purity == Purity::Pure ? "pure" : "mixed") << b.loss
        << b.sigma2 << b.mu2 << b.a2 << b.schwarz_slack << b.decomposition_residual
        << b.unbiased_gap << r.perturbed.loss << r.perturbed.decomposition_residual
        << r.oracle_diff << (b.decomposition_ok && r.perturbed.decomposition_ok) << (b.schwarz_ok && r.perturbed.schwarz_ok)
        << (b.mean_bound_ok && r.perturbed.mean_bound_ok) << (b.sigma_bound_ok && r.perturbed.sigma_bound_ok)
        << (b.pure_saturation_ok ? (*b.pure_saturation_ok ? "true" : "false") : "n/a")
        << r.unbiased_ok << r.oracle_ok << r.optimal_ok << r.pass();
    csv.end_row();
}

/// Randomized sweep over all loss identities and bounds; CSV with one row per trial.
inline int cmd_verify(const VerifyOptions &opt, std::ostream &out, std::ostream &err) {
    if (opt.dim < 2 || opt.dim > 8) {
        return usage_error("--dim must lie in [2, 8]", err);
    }
    if (opt.trials < 1) {
        return usage_error("--trials must be at least 1", err);
    }
    if (!(opt.tol > 0.0)) {
        return usage_error("--tol must be positive", err);
    }
    Tolerances tol;
    tol.id = opt.tol;
    const auto dim = static_cast<std::size_t>(opt.dim);
    try {
        std::ostringstream buf;
        io::CsvWriter csv(buf);
        write_verify_header(csv);
        std::optional<std::pair<std::uint64_t, TrialResult>> first_failure;
        for (long t = 0; t < opt.trials; ++t) {
            const auto trial = static_cast<std::uint64_t>(t);
            const TrialResult r = run_trial(dim, opt.purity, opt.seed, trial, tol);
            write_verify_row(csv, trial, dim, opt.purity, r);
            if (!r.pass() && !first_failure) {
                first_failure.emplace(trial, r);
            }
        }
        with_output(opt.output, out, [&](std::ostream &s) { s << buf.str(); });
        if (first_failure) {
            const auto &[trial, r] = *first_failure;
            err << json{{"error", "InvariantViolation"},
                        {"trial", trial},
                        {"seed", r.seed},
                        {"report", io::to_json(r.bayes)},
                        {"perturbed_report", io::to_json(r.perturbed)},
                        {"oracle_diff", r.oracle_diff}}
                       .dump()
                << '\n';
            return kInvariantViolation;
        }
        return kOk;
    } catch (const Error &e) {
        return report_error(e, err);
    }
}

struct SimulateOptions {
    std::string input;
    std::string b_label;
    std::vector<double> g;
    double width = 1.0;
    std::size_t grid_n = 1024;
    double tol = 1e-4;
    std::string output; // sweep CSV
};

/// Pointer simulation sweep; prints a JSON summary and writes the sweep CSV.
inline int cmd_simulate(const SimulateOptions &opt, std::ostream &out, std::ostream &err) {
    if (opt.g.size() < 3) {
        return usage_error("need at least three --g values", err);
    }
    try {
        const io::Problem prob = io::load_problem(opt.input);
        if (!prob.psi) {
            throw io::FieldError("psi", "the simulator needs a pure state");
        }
        const auto index = prob.basis.index_of(opt.b_label);
        if (!index) {
            throw io::FieldError("b_label", "no basis vector labelled '" + opt.b_label + "'");
        }
        const CVector b = prob.basis.vector(*index);
        const Complex analytic = weak_value_pure(*prob.psi, prob.observable, b, prob.tol.ps);
        const auto grid = PointerGrid::for_width(opt.grid_n, opt.width);
        const auto readout = extract_weak_value(*prob.psi, prob.observable, b, opt.width, opt.g,
                                                grid, opt.tol, prob.tol);

        if (!opt.output.empty()) {
            with_output(opt.output, out, [&](std::ostream &s) {
                io::CsvWriter csv(s);
                csv << "g" << "p_post" << "mean_x" << "mean_k" << "mean_x/g" << "implied_re"
                    << "implied_im";
                csv.end_row();
                for (std::size_t i = 0; i < readout.sweep.size(); ++i) {
                    const auto &st = readout.sweep[i];
                    csv << st.g << st.p_post << st.mean_x << st.mean_k << st.mean_x / st.g
                        << readout.implied[i].real() << readout.implied[i].imag();
                    csv.end_row();
                }
            });
        }

        const double deviation = std::abs(readout.value - analytic);
        const bool matches = deviation <= opt.tol;
        const json summary{{"weak_value", io::to_json(readout.value)},
                           {"analytic", io::to_json(analytic)},
                           {"error_re", readout.error_re},
                           {"error_im", readout.error_im},
                           {"deviation", deviation},
                           {"matches", matches},
                           {"g", opt.g},
                           {"width", opt.width},
                           {"grid_n", opt.grid_n},
                           {"b_label", opt.b_label}};
        out << summary.dump(2) << '\n';
        return matches ? kOk : kInvariantViolation;
    } catch (const Error &e) {
        return report_error(e, err);
    }
}

struct EurOptions {
    std::string shape = "gaussian";
    double width = 1.0;
    double k0 = 0.0;
    double separation = 8.0;
    std::size_t n = 512;
    double length = 40.0;
    std::size_t dense_limit = 512; // larger grids use the Fourier path
    std::string output;
    std::string csv;
};

/// Momentum-from-position estimation demo on a periodic grid.
inline int cmd_eurdemo(const EurOptions &opt, std::ostream &out, std::ostream &err) {
    if (!fourier::is_power_of_two(opt.n) || opt.n < 4 || opt.n > 2048) {
        return usage_error("--grid-n must be a power of two in [4, 2048]", err);
    }
    if (!(opt.length > 0.0) || !std::isfinite(opt.length)) {
        return usage_error("--length must be positive", err);
    }
    try {
        std::optional<eur::GridWavefunction> psi;
        std::vector<double> centers;
        if (opt.shape == "gaussian") {
            centers = {0.0};
        } else if (opt.shape == "double-gaussian") {
            centers = {-0.5 * opt.separation, 0.5 * opt.separation};
        } else if (opt.shape != "plane") {
            return usage_error("--shape must be gaussian, plane or double-gaussian", err);
        }
        if (!centers.empty()) {
            if (!(opt.width > 0.0)) {
                return usage_error("--width must be positive", err);
            }
            if (const auto problem = eur::resolution_problem(opt.n, opt.length, opt.width, centers)) {
                err << json{{"warning", "ResolutionGuard"}, {"message", *problem}}.dump() << '\n';
                return kResolutionGuard;
            }
        }
        if (opt.shape == "gaussian") {
            psi = eur::gaussian(opt.n, opt.length, opt.width, opt.k0);
        } else if (opt.shape == "double-gaussian") {
            psi = eur::double_gaussian(opt.n, opt.length, opt.width, opt.separation, opt.k0);
        } else {
            psi = eur::plane_wave(opt.n, opt.length, opt.k0);
        }

        const bool dense = opt.n <= opt.dense_limit;
        const LossReport r = dense ? eur::exact_uncertainty_check(*psi)
                                   : eur::exact_uncertainty_fast(*psi);
        const auto moments = eur::momentum_moments(*psi);
        const double equality_gap = std::abs(r.loss - r.sigma2);
        const json doc{{"shape", opt.shape},
                       {"n", opt.n},
                       {"L", opt.length},
                       {"loss", r.loss},
                       {"sigma2", r.sigma2},
                       {"mu2", r.mu2},
                       {"a2", r.a2},
                       {"schwarz_slack", r.schwarz_slack},
                       {"equality_gap", equality_gap},
                       {"mean_p", moments.mean},
                       {"var_p", moments.variance},
                       {"excluded_points", r.excluded_outcomes},
                       {"method", dense ? "dense" : "fourier"}};
        with_output(opt.output, out, [&](std::ostream &s) { s << doc.dump(2) << '\n'; });

        if (!opt.csv.empty()) {
            const auto prof = eur::position_profile(*psi);
            with_output(opt.csv, out, [&](std::ostream &s) {
                io::CsvWriter csv(s);
                csv << "q" << "p" << "mu" << "sigma" << "excluded";
                csv.end_row();
                for (std::size_t j = 0; j < psi->n; ++j) {
                    const auto &o = prof.outcomes[j];
                    csv << psi->q(j) << o.prob << o.mu() << o.sigma() << o.excluded();
                    csv.end_row();
                }
            });
        }
        return equality_gap <= 1e-8 ? kOk : kInvariantViolation;
    } catch (const Error &e) {
        return report_error(e, err);
    }
}

} // namespace weakval::cli
