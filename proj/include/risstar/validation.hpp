// SPDX-License-Identifier: Apache-2.0
//
// risstar: statistical-CSI analysis and optimization of RIS / STAR-RIS assisted massive MIMO
// Copyright (C) 2026 The risstar authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISSTAR_VALIDATION_HPP
#define RISSTAR_VALIDATION_HPP

#include "risstar/experiment.hpp"
#include "risstar/montecarlo.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace risstar
{
    // Small system with Wishart correlations, O(1) path losses and a random feasible surface state
    struct RandomInstance
    {
        ScenarioConfig config;
        CorrelationSet correlation;
        PathLossSet path_losses;
        RisPhases ris;
        StarConfig star;
    };

    // rho = K sigma^2 u with u ~ U(0.5, 5); pilot power set so that sigma^2 / (tau P) ~ U(0.1, 2)
    RandomInstance random_instance(std::uint64_t seed, int M = 4, int N1 = 4, int N2 = 4, int K = 2);

    // Same instance with identity R_t, R_1, R_2
    RandomInstance with_identity_correlations(RandomInstance inst);

    // Sum SE through explicit covariances, LMMSE matrices and matrix traces (independent of the spectral route)
    double matrix_route_se(const ScenarioConfig &cfg, const CorrelationSet &corr, const PathLossSet &pl,
                           const RisPhases &ris, const StarConfig &star);

    // Relative error |analytic - fd| / |fd| per gradient block; central differences of matrix_route_se on
    // phases (radians) and amplitudes, the better of steps 1e-6 and 1e-5
    struct GradientErrors
    {
        double ris = 0.0, theta_t = 0.0, theta_r = 0.0, beta_t = 0.0, beta_r = 0.0;
        double max() const;
    };

    GradientErrors gradient_fd_errors(const RandomInstance &inst);

    struct ValidationCheck
    {
        std::string name;
        double measured = 0.0;
        double threshold = 0.0;
        bool pass = false;
    };

    struct ValidationReport
    {
        std::string suite;
        std::vector<ValidationCheck> checks;

        bool passed() const;
        void print(std::ostream &os) const;
    };

    // gradients, projections, de-tightness, covariance, phase-invariance, estimation
    const std::vector<std::string> &validation_suites();

    // Throws std::invalid_argument for an unknown suite
    ValidationReport run_validation(const std::string &suite, std::uint64_t seed = 1);
}

#endif
