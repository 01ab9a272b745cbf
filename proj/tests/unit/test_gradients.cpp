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

#include "risstar/gradients.hpp"
#include "risstar/validation.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace risstar;

TEST_SUITE("gradients")
{
    TEST_CASE("Wirtinger gradients match central differences of the explicit SE")
    {
        for (std::uint64_t seed : {1u, 2u, 3u})
        {
            const RandomInstance inst = random_instance(seed);
            const SumRateModel model(inst.config, inst.correlation, inst.path_losses);
            const GradientWorkspace ws = prepare_gradients(model, inst.ris, inst.star);
            const CVector g = grad_ris(model, ws, inst.ris, inst.star);
            const StarGradient gs = grad_star(model, ws, inst.ris, inst.star);

            // Real and imaginary perturbations of theta_bar(n): dSE/dx = 2 Re g, dSE/dy = 2 Im g
            const double h = 1e-6;
            for (Eigen::Index n = 0; n < inst.ris.size(); ++n)
            {
                for (const cdouble dir : {cdouble(1.0, 0.0), cdouble(0.0, 1.0)})
                {
                    RisPhases p = inst.ris, m = inst.ris;
                    p.theta_bar(n) += h * dir;
                    m.theta_bar(n) -= h * dir;
                    const double fd = (matrix_route_se(inst.config, inst.correlation, inst.path_losses, p, inst.star) -
                                       matrix_route_se(inst.config, inst.correlation, inst.path_losses, m, inst.star)) /
                                      (2 * h);
                    const double analytic = 2.0 * std::real(std::conj(dir) * g(n));
                    CHECK(analytic == doctest::Approx(fd).epsilon(1e-5).scale(1e-3 * g.norm()));
                }
            }
            for (Eigen::Index n = 0; n < inst.star.size(); ++n)
            {
                StarConfig p = inst.star, m = inst.star;
                p.beta_t(n) += h;
                m.beta_t(n) -= h;
                const double fd = (model.sum_se(inst.ris, p) - model.sum_se(inst.ris, m)) / (2 * h);
                CHECK(gs.beta_t(n) == doctest::Approx(fd).epsilon(1e-5).scale(1e-3 * gs.beta_t.norm()));
            }
        }
    }

    TEST_CASE("every block matches finite differences on 5 random instances")
    {
        for (std::uint64_t seed = 100; seed < 105; ++seed)
            CHECK(gradient_fd_errors(random_instance(seed)).max() < 1e-5);
        // Without RIS 1 the STAR blocks still agree
        CHECK(gradient_fd_errors(random_instance(7, 4, 0, 4, 2)).max() < 1e-5);
    }

    TEST_CASE("stale workspace is rejected")
    {
        const RandomInstance inst = random_instance(2);
        const SumRateModel model(inst.config, inst.correlation, inst.path_losses);
        const GradientWorkspace ws = prepare_gradients(model, inst.ris, inst.star);
        RisPhases moved = inst.ris;
        moved.theta_bar(0) *= std::polar(1.0, 0.1);
        CHECK_THROWS_AS(grad_ris(model, ws, moved, inst.star), std::logic_error);
        CHECK_THROWS_AS(grad_star(model, ws, moved, inst.star), std::logic_error);
    }

    TEST_CASE("phase derivative and tangent component")
    {
        std::mt19937_64 rng(1);
        std::normal_distribution<double> normal;
        CVector theta(6), g(6);
        for (int n = 0; n < 6; ++n)
        {
            theta(n) = std::polar(1.0, normal(rng));
            g(n) = cdouble(normal(rng), normal(rng));
        }
        const RVector d = phase_derivative(theta, g);
        const CVector t = tangent_component(theta, g);
        for (int n = 0; n < 6; ++n)
        {
            CHECK(d(n) == doctest::Approx(2.0 * std::imag(std::conj(theta(n)) * g(n))));
            // Tangent: orthogonal to theta_n as a real 2-vector
            CHECK(std::abs(std::real(std::conj(theta(n)) * t(n))) < 1e-15);
            // and it carries the whole phase derivative
            CHECK(std::imag(std::conj(theta(n)) * t(n)) == doctest::Approx(std::imag(std::conj(theta(n)) * g(n))));
        }
    }
}
