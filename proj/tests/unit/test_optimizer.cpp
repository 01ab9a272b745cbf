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

#include "risstar/optimizer.hpp"
#include "risstar/validation.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace risstar;

namespace
{
    StarConfig random_star(int N, std::mt19937_64 &rng)
    {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        StarConfig s = StarConfig::uniform(N);
        for (int n = 0; n < N; ++n)
        {
            s.theta_t(n) = std::polar(1.0, 2 * std::numbers::pi * u(rng));
            s.theta_r(n) = std::polar(1.0, 2 * std::numbers::pi * u(rng));
            const double a = 0.5 * std::numbers::pi * u(rng);
            s.beta_t(n) = std::cos(a);
            s.beta_r(n) = std::sin(a);
        }
        return s;
    }

    void check_monotone(const OptimizationTrace &trace, double start)
    {
        double prev = start;
        for (const auto &row : trace.rows)
        {
            CHECK(row.objective >= prev);
            CHECK(row.residual <= 1e-12);
            CHECK(row.backtracks <= 60);
            prev = row.objective;
        }
    }
}

TEST_SUITE("optimizer")
{
    TEST_CASE("unit-modulus projection examples")
    {
        CVector v(4);
        v << cdouble(3, 4), cdouble(0, 0), cdouble(-2, 0), cdouble(0, 0.5);
        const CVector p = project_unit_modulus(v);
        CHECK(std::abs(p(0) - cdouble(0.6, 0.8)) < 1e-15);
        CHECK(p(1) == cdouble(1.0, 0.0));
        CHECK(p(2) == cdouble(-1.0, 0.0));
        CHECK(std::abs(p(3) - cdouble(0.0, 1.0)) < 1e-15);
        CHECK(project_unit_modulus(p) == p);
    }

    TEST_CASE("amplitude-pair projection examples")
    {
        RVector bt(4), br(4);
        bt << 3.0, 0.0, -3.0, 0.5;
        br << 4.0, 0.0, 4.0, 0.0;
        project_amplitude_pair(bt, br);
        CHECK(bt(0) == doctest::Approx(0.6));
        CHECK(br(0) == doctest::Approx(0.8));
        CHECK(bt(1) == doctest::Approx(std::sqrt(0.5)));
        CHECK(br(1) == doctest::Approx(std::sqrt(0.5)));
        CHECK(bt(2) == doctest::Approx(-0.6));
        CHECK(bt(3) == doctest::Approx(1.0));
        CHECK(br(3) == 0.0);
        RVector short_r(3);
        CHECK_THROWS_AS(project_amplitude_pair(bt, short_r), std::invalid_argument);
    }

    TEST_CASE("canonicalize keeps the coefficients and makes the amplitudes non-negative")
    {
        std::mt19937_64 rng(4);
        StarConfig s = random_star(6, rng);
        s.beta_t(1) = -s.beta_t(1);
        s.beta_r(4) = -s.beta_r(4);
        const CVector ct = s.coefficients(Region::transmission), cr = s.coefficients(Region::reflection);
        canonicalize(s);
        CHECK((s.coefficients(Region::transmission) - ct).norm() == 0.0);
        CHECK((s.coefficients(Region::reflection) - cr).norm() == 0.0);
        CHECK(feasibility_residual(RisPhases::unit(0), s) < 1e-15);
    }

    TEST_CASE("PGAM blocks ascend monotonically and stay feasible")
    {
        for (std::uint64_t seed = 0; seed < 5; ++seed)
        {
            const RandomInstance inst = random_instance(seed);
            const SumRateModel model(inst.config, inst.correlation, inst.path_losses);
            PgamOptions opt;
            OptimizationTrace t1, t2;
            LineSearchState ls1 = LineSearchState::from(opt), ls2 = LineSearchState::from(opt);
            const double f0 = model.sum_se(inst.ris, inst.star);
            const RisPhases ris = pgam_ris(model, inst.ris, inst.star, opt, ls1, t1);
            check_monotone(t1, f0);
            const double f1 = model.sum_se(ris, inst.star);
            CHECK(f1 >= f0);
            const StarConfig star = pgam_star(model, ris, inst.star, opt, ls2, t2);
            check_monotone(t2, f1);
            CHECK(model.sum_se(ris, star) >= f1);
            CHECK(feasibility_residual(ris, star) <= 1e-12);
            for (Termination t : {t1.termination, t2.termination})
                CHECK((t == Termination::converged || t == Termination::iteration_cap ||
                       t == Termination::zero_gradient));
        }
    }

    TEST_CASE("accepted steps satisfy the quadratic model test")
    {
        const RandomInstance inst = random_instance(12);
        const SumRateModel model(inst.config, inst.correlation, inst.path_losses);
        PgamOptions opt;
        opt.max_iterations = 1;
        LineSearchState ls = LineSearchState::from(opt);
        OptimizationTrace t;
        const double f0 = model.sum_se(inst.ris, inst.star);
        const GradientWorkspace ws = prepare_gradients(model, inst.ris, inst.star);
        const CVector g = tangent_component(inst.ris.theta_bar, grad_ris(model, ws, inst.ris, inst.star));
        const RisPhases next = pgam_ris(model, inst.ris, inst.star, opt, ls, t);
        REQUIRE(t.rows.size() == 1);
        const CVector d = next.theta_bar - inst.ris.theta_bar;
        const double model_value = f0 + 2.0 * std::real(g.dot(d)) - d.squaredNorm() / ls.mu;
        CHECK(model.sum_se(next, inst.star) >= model_value);
        CHECK(t.rows[0].step == ls.mu);
    }

    TEST_CASE("identity correlations leave nothing to optimize in the phases")
    {
        const RandomInstance inst = with_identity_correlations(random_instance(6));
        const SumRateModel model(inst.config, inst.correlation, inst.path_losses);
        PgamOptions opt;
        LineSearchState ls = LineSearchState::from(opt);
        OptimizationTrace t;
        const RisPhases ris = pgam_ris(model, inst.ris, inst.star, opt, ls, t);
        CHECK(t.termination == Termination::zero_gradient);
        CHECK(t.rows.empty());
        CHECK(ris.theta_bar == inst.ris.theta_bar);

        OptimizationTrace ts;
        LineSearchState ls2 = LineSearchState::from(opt);
        pgam_star(model, inst.ris, inst.star, opt, ls2, ts, StarFreeze{false, true});
        CHECK(ts.termination == Termination::zero_gradient);
    }

    TEST_CASE("frozen blocks are left untouched")
    {
        const RandomInstance inst = random_instance(9);
        const SumRateModel model(inst.config, inst.correlation, inst.path_losses);
        PgamOptions opt;
        LineSearchState ls = LineSearchState::from(opt);
        OptimizationTrace t;
        const StarConfig s = pgam_star(model, inst.ris, inst.star, opt, ls, t, StarFreeze{false, true});
        CHECK(s.beta_t == inst.star.beta_t);
        CHECK(s.beta_r == inst.star.beta_r);
        OptimizationTrace t2;
        const StarConfig s2 = pgam_star(model, inst.ris, inst.star, opt, ls, t2, StarFreeze{true, true});
        CHECK(t2.termination == Termination::frozen);
        CHECK(s2.theta_t == inst.star.theta_t);
    }

    TEST_CASE("alternating optimization beats a random-search baseline")
    {
        for (std::uint64_t seed = 30; seed < 33; ++seed)
        {
            const RandomInstance inst = random_instance(seed);
            const SumRateModel model(inst.config, inst.correlation, inst.path_losses);
            AoOptions opt;
            opt.seed = seed;
            const AoResult r = alternating_optimize(model, inst.ris, inst.star, opt);
            CHECK(r.sum_se == doctest::Approx(model.sum_se(r.ris, r.star)).epsilon(1e-14));
            CHECK(int(r.restart_se.size()) == 5);
            CHECK(r.sum_se == *std::max_element(r.restart_se.begin(), r.restart_se.end()));

            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
            double best_random = 0.0;
            for (int i = 0; i < 500; ++i)
            {
                RisPhases ris{CVector(inst.ris.size())};
                for (Eigen::Index n = 0; n < ris.theta_bar.size(); ++n)
                    ris.theta_bar(n) = std::polar(1.0, u(rng));
                best_random = std::max(best_random, model.sum_se(ris, random_star(inst.star.size(), rng)));
            }
            CHECK(r.sum_se >= best_random);
        }
    }

    TEST_CASE("alternating optimization is deterministic and worker-independent")
    {
        const RandomInstance inst = random_instance(40);
        const SumRateModel model(inst.config, inst.correlation, inst.path_losses);
        AoOptions opt;
        opt.restarts = 4;
        const AoResult a = alternating_optimize(model, inst.ris, inst.star, opt);
        opt.workers = 3;
        const AoResult b = alternating_optimize(model, inst.ris, inst.star, opt);
        CHECK(a.sum_se == b.sum_se);
        CHECK(a.restart_se == b.restart_se);
        CHECK(a.ris.theta_bar == b.ris.theta_bar);
        std::ostringstream ca, cb;
        a.trace.write_csv(ca);
        b.trace.write_csv(cb);
        CHECK(ca.str() == cb.str());
        CHECK(ca.str().rfind("restart,outer,block,iteration,objective,step,backtracks,residual\n", 0) == 0);
    }

    TEST_CASE("alternating optimization rejects bad options")
    {
        const RandomInstance inst = random_instance(1);
        const SumRateModel model(inst.config, inst.correlation, inst.path_losses);
        AoOptions opt;
        opt.restarts = 0;
        CHECK_THROWS_AS(alternating_optimize(model, inst.ris, inst.star, opt), std::invalid_argument);
        opt.restarts = 1;
        CHECK_THROWS_AS(alternating_optimize(model, RisPhases::unit(2), inst.star, opt), std::invalid_argument);
    }

    TEST_CASE("termination labels")
    {
        CHECK(termination_label(Termination::converged) == "converged");
        CHECK(termination_label(Termination::backtrack_cap) == "backtrack_cap");
        CHECK(termination_label(Termination::frozen) == "frozen");
    }
}
