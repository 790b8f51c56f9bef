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

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "estimation.hpp"

namespace weakval::io {

using nlohmann::json;

/// Input error attributed to one field of a problem document.
class FieldError : public Error {
  public:
    FieldError(std::string field, const std::string &message,
               std::optional<ValidationReport> report = std::nullopt)
        : Error(ErrorCode::InvalidInput, "field '" + field + "': " + message),
          field_(std::move(field)), report_(std::move(report)) {}

    [[nodiscard]] const std::string &field() const noexcept { return field_; }
    [[nodiscard]] const std::optional<ValidationReport> &report() const noexcept { return report_; }

  private:
    std::string field_;
    std::optional<ValidationReport> report_;
};

/// [re, im] or a bare real number.
inline Complex complex_from_json(const json &j, const std::string &field) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw FieldError(field, "expected a complex number [re, im]");
}

inline CVector vector_from_json(const json &j, const std::string &field) {
    if (!j.is_array() || j.empty()) {
        throw FieldError(field, "expected a non-empty array of complex numbers");
    }
    CVector v;
    v.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        v.push_back(complex_from_json(j[i], field + "[" + std::to_string(i) + "]"));
    }
    return v;
}

/// Row-major nested arrays of complex numbers.
inline ComplexMatrix matrix_from_json(const json &j, const std::string &field) {
    if (!j.is_array() || j.empty()) {
        throw FieldError(field, "expected a square matrix as nested arrays");
    }
    const std::size_t n = j.size();
    std::vector<Complex> entries;
    entries.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string row = field + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != n) {
            throw FieldError(row, "row length must equal the number of rows");
        }
        for (std::size_t k = 0; k < n; ++k) {
            entries.push_back(complex_from_json(j[i][k], row));
        }
    }
    try {
        return ComplexMatrix(n, std::move(entries));
    } catch (const Error &e) {
        throw FieldError(field, e.what());
    }
}

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const ComplexMatrix &m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.dim(); ++k) {
            row.push_back(to_json(m(i, k)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Tolerances tolerances_from_json(const json &j) {
    Tolerances tol;
    if (!j.is_object()) {
        throw FieldError("tolerances", "expected an object");
    }
    const auto read = [&](const char *key, double &slot) {
        if (j.contains(key)) {
            if (!j[key].is_number() || !(j[key].get<double>() > 0.0)) {
                throw FieldError(std::string("tolerances.") + key, "expected a positive number");
            }
            slot = j[key].get<double>();
        }
    };
    read("herm", tol.herm);
    read("psd", tol.psd);
    read("eig", tol.eig);
    read("norm", tol.norm);
    read("ps", tol.ps);
    read("id", tol.id);
    return tol;
}

inline json to_json(const Tolerances &t) {
    return {{"herm", t.herm}, {"psd", t.psd}, {"eig", t.eig},
            {"norm", t.norm}, {"ps", t.ps},   {"id", t.id}};
}

/// A loaded problem document:
///
///   { "version": 1,
///     "psi": [c, ...]            or  "rho": [[c, ...], ...],
///     "observable": [[c, ...], ...],
///     "basis": {"labels": [...], "vectors": [[c, ...], ...]},   (optional)
///     "tolerances": {"herm": ..., "ps": ..., ...} }              (optional)
///
/// where c is [re, im] or a real number. Basis vectors are listed one per entry;
/// labels default to "0", "1", ... and the basis to the computational one.
struct Problem {
    std::optional<PureState> psi;
    DensityMatrix rho;
    Observable observable;
    PostselectionBasis basis;
    Tolerances tol;
};

inline PostselectionBasis basis_from_json(const json &j, std::size_t dim, const Tolerances &tol) {
    const json *vectors = &j;
    std::vector<std::string> labels;
    if (j.is_object()) {
        if (!j.contains("vectors")) {
            throw FieldError("basis.vectors", "missing");
        }
        vectors = &j["vectors"];
        if (j.contains("labels")) {
            if (!j["labels"].is_array()) {
                throw FieldError("basis.labels", "expected an array of strings");
            }
            for (const auto &l : j["labels"]) {
                if (!l.is_string()) {
                    throw FieldError("basis.labels", "expected an array of strings");
                }
                labels.push_back(l.get<std::string>());
            }
        }
    }
    if (!vectors->is_array() || vectors->size() != dim) {
        throw FieldError("basis.vectors", "expected " + std::to_string(dim) + " basis vectors");
    }
    std::vector<CVector> cols;
    for (std::size_t i = 0; i < dim; ++i) {
        cols.push_back(vector_from_json((*vectors)[i], "basis.vectors[" + std::to_string(i) + "]"));
        if (cols.back().size() != dim) {
            throw FieldError("basis.vectors", "vector length differs from the state dimension");
        }
    }
    if (labels.empty()) {
        labels = PostselectionBasis::default_labels(dim);
    }
    try {
        return {ComplexMatrix::from_columns(cols), std::move(labels), tol.herm};
    } catch (const Error &e) {
        throw FieldError("basis", e.what());
    }
}

inline Problem problem_from_json(const json &doc) {
    if (!doc.is_object()) {
        throw FieldError("(root)", "problem must be a JSON object");
    }
    if (doc.contains("version") && (!doc["version"].is_number_integer() || doc["version"] != 1)) {
        throw FieldError("version", "unsupported version (expected 1)");
    }
    const Tolerances tol = doc.contains("tolerances") ? tolerances_from_json(doc["tolerances"])
                                                      : Tolerances{};
    const bool has_psi = doc.contains("psi");
    const bool has_rho = doc.contains("rho");
    if (has_psi == has_rho) {
        throw FieldError(has_psi ? "rho" : "psi", "exactly one of 'psi' and 'rho' is required");
    }
    if (!doc.contains("observable")) {
        throw FieldError("observable", "missing");
    }

    std::optional<PureState> psi;
    std::optional<DensityMatrix> rho;
    if (has_psi) {
        try {
            psi.emplace(vector_from_json(doc["psi"], "psi"), tol.norm);
        } catch (const FieldError &) {
            throw;
        } catch (const Error &e) {
            throw FieldError("psi", e.what());
        }
        rho.emplace(density_from_pure(*psi));
    } else {
        DensityMatrix candidate(matrix_from_json(doc["rho"], "rho"));
        const auto report = validate(candidate, tol);
        if (!report.ok()) {
            throw FieldError("rho", report.describe(), report);
        }
        rho.emplace(std::move(candidate));
    }
    const std::size_t dim = rho->dim();

    ComplexMatrix a = matrix_from_json(doc["observable"], "observable");
    if (a.dim() != dim) {
        throw FieldError("observable", "dimension differs from the state");
    }
    std::optional<Observable> obs;
    try {
        obs.emplace(std::move(a), tol.herm);
    } catch (const Error &e) {
        throw FieldError("observable", e.what());
    }

    PostselectionBasis basis = doc.contains("basis") ? basis_from_json(doc["basis"], dim, tol)
                                                     : PostselectionBasis::standard(dim);
    return {std::move(psi), std::move(*rho), std::move(*obs), std::move(basis), tol};
}

inline Problem load_problem(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw FieldError("input", "cannot open " + path);
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw FieldError("(root)", std::string("malformed JSON: ") + e.what());
    }
    return problem_from_json(doc);
}

inline json to_json(const WeakValueProfile &prof) {
    json arr = json::array();
    for (const auto &o : prof.outcomes) {
        json e{{"label", o.label}, {"prob", o.prob}, {"excluded", o.excluded()}};
        if (o.excluded()) {
            e["alpha"] = nullptr;
            e["mu"] = nullptr;
            e["sigma"] = nullptr;
        } else {
            e["alpha"] = to_json(*o.alpha);
            e["mu"] = o.mu();
            e["sigma"] = o.sigma();
        }
        arr.push_back(std::move(e));
    }
    return arr;
}

inline json to_json(const Estimator &est) {
    return {{"labels", est.basis().labels()}, {"values", est.values()}};
}

inline json to_json(const LossReport &r) {
    json j{{"loss", r.loss},
           {"a2", r.a2},
           {"theta2", r.theta2},
           {"gap", r.gap},
           {"sigma2", r.sigma2},
           {"mu2", r.mu2},
           {"schwarz_slack", r.schwarz_slack},
           {"decomposition_residual", r.decomposition_residual},
           {"unbiased_gap", r.unbiased_gap},
           {"purity", r.purity},
           {"excluded_outcomes", r.excluded_outcomes},
           {"bayes", r.bayes},
           {"decomposition_ok", r.decomposition_ok},
           {"schwarz_ok", r.schwarz_ok},
           {"mean_bound_ok", r.mean_bound_ok},
           {"sigma_bound_ok", r.sigma_bound_ok}};
    if (r.pure_saturation_ok) {
        j["pure_saturation_ok"] = *r.pure_saturation_ok;
    } else {
        j["pure_saturation_ok"] = nullptr;
    }
    return j;
}

inline json to_json(const ValidationReport &report) {
    json arr = json::array();
    for (const auto &v : report.violations) {
        arr.push_back({{"invariant", v.invariant}, {"magnitude", v.magnitude}});
    }
    return arr;
}

/// Fixed 17-significant-digit decimal, the CSV float format.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Comma-separated row writer with '.' decimals.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream &out) : out_(out) {}

    CsvWriter &operator<<(double x) { return field(format_double(x)); }
    CsvWriter &operator<<(bool b) { return field(b ? "true" : "false"); }
    CsvWriter &operator<<(const std::string &s) { return field(s); }
    CsvWriter &operator<<(const char *s) { return field(s); }
    template <typename Int>
        requires std::is_integral_v<Int>
    CsvWriter &operator<<(Int i) {
        return field(std::to_string(i));
    }

    void end_row() {
        out_ << '\n';
        first_ = true;
    }

  private:
    CsvWriter &field(const std::string &s) {
        if (!first_) {
            out_ << ',';
        }
        out_ << s;
        first_ = false;
        return *this;
    }

    std::ostream &out_;
    bool first_ = true;
};

} // namespace weakval::io
