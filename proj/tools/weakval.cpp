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

// Command line front end: compute, verify, simulate, eurdemo.

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "weakval/commands.hpp"

int main(int argc, char **argv) {
    using namespace weakval;
    CLI::App app{"Weak values and Bayes estimators on pre- and postselected ensembles"};
    app.require_subcommand(1);

    cli::ComputeOptions compute;
    auto *c = app.add_subcommand("compute", "Weak-value profile, Bayes estimator and loss report");
    c->add_option("--input", compute.input, "Problem JSON file")->required();
    c->add_option("--output", compute.output, "Report JSON file (default: stdout)");

    cli::VerifyOptions verify;
    auto *v = app.add_subcommand("verify", "Randomized sweep over loss identities and bounds");
    v->add_option("--dim", verify.dim, "Hilbert space dimension in [2, 8]");
    v->add_option("--trials", verify.trials, "Number of random instances");
    v->add_option("--seed", verify.seed, "Base seed");
    v->add_option("--purity", verify.purity, "pure or mixed")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Purity>{{"pure", Purity::Pure}, {"mixed", Purity::Mixed}}));
    v->add_option("--tol", verify.tol, "Tolerance for identities and bounds");
    v->add_option("--output", verify.output, "CSV file (default: stdout)");

    cli::SimulateOptions simulate;
    auto *s = app.add_subcommand("simulate", "Weak pointer measurement and weak-value readout");
    s->add_option("--input", simulate.input, "Problem JSON file with a pure state")->required();
    s->add_option("--b-label", simulate.b_label, "Label of the postselected basis vector")->required();
    s->add_option("--g", simulate.g, "Coupling strength (repeat, strictly decreasing)")->required();
    s->add_option("--width", simulate.width, "Pointer position standard deviation");
    s->add_option("--grid-n", simulate.grid_n, "Pointer grid points (power of two)");
    s->add_option("--tol", simulate.tol, "Convergence and agreement tolerance");
    s->add_option("--output", simulate.output, "Sweep CSV file");

    cli::EurOptions eur;
    auto *e = app.add_subcommand("eurdemo", "Momentum estimated from position on a periodic grid");
    e->add_option("--shape", eur.shape, "gaussian, plane or double-gaussian");
    e->add_option("--width", eur.width, "Gaussian standard deviation s");
    e->add_option("--k0", eur.k0, "Carrier wavenumber");
    e->add_option("--separation", eur.separation, "Distance between double-gaussian centres");
    e->add_option("--grid-n", eur.n, "Grid points (power of two, <= 2048)");
    e->add_option("--length", eur.length, "Periodic box length L");
    e->add_option("--dense-limit", eur.dense_limit, "Largest n evaluated with dense operators");
    e->add_option("--output", eur.output, "Report JSON file (default: stdout)");
    e->add_option("--csv", eur.csv, "Per-point profile CSV file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &err) {
        const int rc = app.exit(err);
        return rc == 0 ? 0 : cli::kUsage;
    }

    if (c->parsed()) {
        return cli::cmd_compute(compute, std::cout, std::cerr);
    }
    if (v->parsed()) {
        return cli::cmd_verify(verify, std::cout, std::cerr);
    }
    if (s->parsed()) {
        return cli::cmd_simulate(simulate, std::cout, std::cerr);
    }
    return cli::cmd_eurdemo(eur, std::cout, std::cerr);
}
