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

#include "risstar/montecarlo.hpp"
#include "risstar/performance.hpp"
#include "risstar/validation.hpp"

#include <doctest.h>

#include <cmath>

using namespace risstar;

namespace
{
    ScenarioConfig tiny_config(int M, int K)
    {
        ScenarioConfig cfg = desk_scenario();
        cfg.M = M;
        cfg.K = K;
        cfg.regions.assign(std::size_t(K), Region::transmission);
        cfg.tau = 0;
        cfg.rho = cfg.sigma2(); // sigma^2 / rho = 1
        cfg.validate();
        return cfg;
    }
}

TEST_SUITE("performance")
{
    TEST_CASE("make_result applies the prelog and the zero-signal convention")
    {
        RVector S(3), I(3);
        S << 3.0, 0.0, 1.0;
        I << 1.0, 0.0, 1.0;
        const PerformanceResult r = make_result(S, I, 0.5);
        CHECK(r.gamma(0) == 3.0);
        CHECK(r.gamma(1) == 0.0);
        CHECK(r.sum_se == doctest::Approx(0.5 * (2.0 + 1.0)));
    }

    TEST_CASE("UatF oracle recovers the closed form for M = 2, K = 1, identity correlation")
    {
        // MRT with perfect CSI and h ~ CN(0, I_M): E[h^H h] = M, E|h^H h|^2 = M^2 + M, E||h||^2 = M,
        // so gamma = M^2 / (M + M sigma^2 / rho) = 1 for M = 2 and rho = sigma^2
        const ScenarioConfig cfg = tiny_config(2, 1);
        Rng rng(2024);
        std::vector<std::pair<CMatrix, CMatrix>> draws;
        for (int i = 0; i < 200000; ++i)
        {
            CMatrix h = complex_gaussian(2, 1, rng);
            draws.emplace_back(h, h);
        }
        const PerformanceResult r = mc_sinr_oracle(draws, cfg);
        CHECK(r.gamma(0) == doctest::Approx(1.0).epsilon(0.02));
        CHECK(r.sum_se == doctest::Approx(1.0).epsilon(0.02));
        draws.resize(50);
        CHECK_THROWS_AS(mc_sinr_oracle(draws, cfg), std::invalid_argument);
    }

    TEST_CASE("conditional accumulation integrates precoder noise exactly")
    {
        // f = h + w, w ~ CN(0, c I): E[h^H f] = M, E|h^H f|^2 = M^2 + M + c M, E||f||^2 = M + c M
        const int M = 2;
        const double c = 0.5;
        const ScenarioConfig cfg = tiny_config(M, 1);
        const double expected = double(M * M) / (M + c * M + (M + c * M));
        Rng rng(9);
        UatfAccumulator simulated(1), conditional(1);
        const std::vector<CMatrix> cov{c * CMatrix::Identity(M, M)};
        for (int i = 0; i < 200000; ++i)
        {
            const CMatrix h = complex_gaussian(M, 1, rng);
            simulated.add(h, h + std::sqrt(c) * complex_gaussian(M, 1, rng));
            conditional.add_conditional(h, h, cov);
        }
        CHECK(simulated.finalize(cfg).gamma(0) == doctest::Approx(expected).epsilon(0.02));
        CHECK(conditional.finalize(cfg).gamma(0) == doctest::Approx(expected).epsilon(0.02));
    }

    TEST_CASE("accumulator merge equals sequential accumulation")
    {
        const ScenarioConfig cfg = tiny_config(3, 2);
        Rng rng(5);
        UatfAccumulator all(2, 1), a(2, 1), b(2, 1);
        for (int i = 0; i < 300; ++i)
        {
            const CMatrix H = complex_gaussian(3, 2, rng);
            const CMatrix F = H + 0.3 * complex_gaussian(3, 2, rng);
            RVector ctl(1);
            ctl(0) = H.col(0).squaredNorm() / 3.0 - 1.0;
            all.add(H, F, ctl);
            (i % 2 == 0 ? a : b).add(H, F, ctl);
        }
        a.merge(b);
        CHECK(a.count() == all.count());
        CHECK(a.finalize(cfg).sum_se == doctest::Approx(all.finalize(cfg).sum_se).epsilon(1e-12));
        CHECK_THROWS_AS(a.merge(UatfAccumulator(3, 1)), std::invalid_argument);
        CHECK_THROWS_AS(UatfAccumulator(2).finalize(cfg), std::invalid_argument);
        CHECK_THROWS_AS(all.add(CMatrix(3, 2), CMatrix(3, 1)), std::invalid_argument);
        CHECK_THROWS_AS(all.add(CMatrix::Zero(3, 2), CMatrix::Zero(3, 2)), std::invalid_argument);
        CHECK_THROWS_AS(UatfAccumulator(-1), std::invalid_argument);
    }

    TEST_CASE("control variates keep the mean and shrink the spread")
    {
        const int M = 2;
        const ScenarioConfig cfg = tiny_config(M, 1);
        double sq_plain = 0.0, sq_cv = 0.0;
        for (std::uint64_t seed = 0; seed < 30; ++seed)
        {
            Rng rng(seed);
            UatfAccumulator plain(1), cv(1, 1);
            for (int i = 0; i < 2000; ++i)
            {
                const CMatrix h = complex_gaussian(M, 1, rng);
                RVector ctl(1);
                ctl(0) = h.squaredNorm() / M - 1.0;
                plain.add(h, h);
                cv.add(h, h, ctl);
            }
            sq_plain += std::pow(plain.finalize(cfg).sum_se - 1.0, 2);
            sq_cv += std::pow(cv.finalize(cfg).sum_se - 1.0, 2);
        }
        CHECK(std::sqrt(sq_cv / 30) < 0.05);
        CHECK(sq_cv < sq_plain);
    }

    TEST_CASE("spectral evaluator matches the explicit matrix route")
    {
        for (std::uint64_t seed = 0; seed < 10; ++seed)
        {
            const RandomInstance inst = random_instance(seed, 5, 4, 6, 3);
            const SumRateModel model(inst.config, inst.correlation, inst.path_losses);
            const double spectral = model.sum_se(inst.ris, inst.star);
            const double matrix =
                matrix_route_se(inst.config, inst.correlation, inst.path_losses, inst.ris, inst.star);
            CHECK(spectral == doctest::Approx(matrix).epsilon(1e-10));
        }
        ScenarioConfig cfg = desk_scenario();
        const SumRateModel model(cfg);
        const double spectral = model.sum_se(RisPhases::unit(cfg.N1()), StarConfig::uniform(cfg.N2()));
        const double matrix = matrix_route_se(cfg, build_correlation_set(cfg), compute_path_losses(cfg),
                                              RisPhases::unit(cfg.N1()), StarConfig::uniform(cfg.N2()));
        CHECK(spectral == doctest::Approx(matrix).epsilon(1e-10));
    }

    TEST_CASE("psi derivative matches finite differences")
    {
        const SumRateModel model(desk_scenario());
        const double eps = model.training_noise();
        REQUIRE(eps > 0.0);
        for (double s : {0.1 * eps, eps, 10 * eps})
            for (double lambda : {0.3, 1.0, 2.5})
            {
                const double h = 1e-6 * s;
                const double fd = (model.psi(s + h, lambda) - model.psi(s - h, lambda)) / (2 * h);
                CHECK(model.dpsi(s, lambda) == doctest::Approx(fd).epsilon(1e-7));
                const double r = s * lambda;
                CHECK(model.psi(s, lambda) == doctest::Approx(r * r / (r + eps)).epsilon(1e-14));
            }
    }

    TEST_CASE("perfect CSI raises the SE of a fixed configuration and removes the pilot overhead")
    {
        ScenarioConfig cfg = desk_scenario();
        const RisPhases ris = RisPhases::unit(cfg.N1());
        const StarConfig star = StarConfig::uniform(cfg.N2());
        const PerformanceResult imperfect = SumRateModel(cfg).evaluate(ris, star);
        cfg.tau = 0;
        const PerformanceResult perfect = SumRateModel(cfg).evaluate(ris, star);
        CHECK(perfect.prelog == 1.0);
        for (int k = 0; k < cfg.K; ++k)
            CHECK(perfect.gamma(k) > imperfect.gamma(k));
    }

    TEST_CASE("model rejects mismatched statistics")
    {
        const ScenarioConfig cfg = desk_scenario();
        ScenarioConfig other = cfg;
        other.M = 8;
        CHECK_THROWS_AS(SumRateModel(cfg, build_correlation_set(other), compute_path_losses(cfg)),
                        std::invalid_argument);
    }
}
