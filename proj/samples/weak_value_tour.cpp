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

// Walks through the library on a single qubit: weak values of sigma_y between
// |+> and the computational basis, the Bayes estimator and its loss, and the
// same weak value read off a simulated pointer.

#include <cstdio>
#include <vector>

#include "weakval/weakval.hpp"

int main() {
    using namespace weakval;

    const PureState psi = qubit::plus();
    const Observable sigma_y(qubit::pauli_y());
    const auto basis = PostselectionBasis::standard(2);
    const DensityMatrix rho = density_from_pure(psi);

    const auto prof = profile(rho, sigma_y, basis);
    for (const auto &o : prof.outcomes) {
        std::printf("b=%s  p=%.3f  alpha=%+.6f%+.6fi\n", o.label.c_str(), o.prob, o.mu(), o.sigma());
    }

    const auto report = verify_bounds(rho, sigma_y, basis);
    std::printf("Bayes loss %.6f, <sigma^2> %.6f, <a^2> - <mu^2> %.6f\n", report.loss,
                report.sigma2, report.a2 - report.mu2);

    const std::vector<double> g{0.04, 0.02, 0.01};
    const auto readout = extract_weak_value(psi, sigma_y, basis.vector(0), 1.0, g,
                                            PointerGrid::for_width(1024, 1.0));
    std::printf("pointer readout for b=0: %+.8f%+.8fi\n", readout.value.real(),
                readout.value.imag());
    return 0;
}
