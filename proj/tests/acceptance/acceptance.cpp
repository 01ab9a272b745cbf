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

// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "risstar/experiment.hpp"
#include "risstar/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace risstar;

namespace
{
    using Clock = std::chrono::steady_clock;

    struct Outcome
    {
        bool pass = false;
        std::string detail;
    };

    double seconds_since(Clock::time_point t0)
    {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    std::string fmt(const char *format, auto... args)
    {
        char buf[256];
        std::snprintf(buf, sizeof buf, format, args...);
        return buf;
    }

    const ValidationCheck &find_check(const ValidationReport &r, const std::string &prefix)
    {
        for (const auto &c : r.checks)
            if (c.name.rfind(prefix, 0) == 0)
                return c;
        throw std::logic_error("no check named " + prefix + " in suite " + r.suite);
    }

    // 1: deterministic equivalent against 2000 Monte-Carlo blocks at the desk preset. Gated on the preset
    // configuration and a random-phase configuration; the gap at the optimized ris-star point is reported as well.
    Outcome de_tightness()
    {
        const auto t0 = Clock::now();
        const ScenarioConfig cfg = desk_scenario();
        const ArchitectureSetup s = make_architecture(cfg, Architecture::ris_star, 1);
        const ArchitectureSetup p = make_architecture(cfg, Architecture::random_phase, 1);
        const SumRateModel model(s.config, build_correlation_set(s.config), s.path_losses);

        MonteCarloOptions mc;
        mc.n_blocks = 2000;
        auto gap = [&](const RisPhases &ris, const StarConfig &star)
        {
            const double de = model.sum_se(ris, star);
            const double sim = empirical_sum_se(s.config, model.correlation(), s.path_losses, ris, star, mc)
                                   .performance.sum_se;
            return std::abs(de - sim) / sim;
        };
        const double worst = std::max(gap(s.ris, s.star), gap(p.ris, p.star));
        const double elapsed = seconds_since(t0);

        const AoResult opt = alternating_optimize(model, s.ris, s.star, AoOptions{});
        const double optimized = gap(opt.ris, opt.star);
        return {worst < 0.05 && elapsed < 120.0,
                fmt("max |DE - MC| / MC = %.4f (< 0.05) over preset and random-phase configurations, %.1f s "
                    "(< 120 s); optimized ris-star point: %.4f", worst, elapsed, optimized)};
    }

    // 2: analytic gradient blocks against central differences on 20 random instances
    Outcome gradients()
    {
        const auto t0 = Clock::now();
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed)
            worst = std::max(worst, gradient_fd_errors(random_instance(seed, 4, 4, 4, 2)).max());
        const double elapsed = seconds_since(t0);
        return {worst < 1e-5 && elapsed < 30.0,
                fmt("max relative error %.2e (< 1e-5), %.2f s (< 30 s)", worst, elapsed)};
    }

    // 3: 50 seeded alternating runs; every PGAM call must end by the improvement or iteration rule
    Outcome feasibility_and_ascent()
    {
        double residual = 0.0;
        int decreases = 0, bad_terminations = 0, calls = 0, steps = 0, max_backtracks = 0;
        const PgamOptions opt;
        for (std::uint64_t seed = 0; seed < 50; ++seed)
        {
            const RandomInstance inst = random_instance(1000 + seed);
            const SumRateModel model(inst.config, inst.correlation, inst.path_losses);
            RisPhases ris = inst.ris;
            StarConfig star = inst.star;
            LineSearchState ls_ris = LineSearchState::from(opt), ls_star = LineSearchState::from(opt);
            double f = model.sum_se(ris, star);
            auto audit = [&](const OptimizationTrace &t)
            {
                ++calls;
                if (t.termination != Termination::converged && t.termination != Termination::iteration_cap &&
                    t.termination != Termination::zero_gradient)
                    ++bad_terminations;
                for (const auto &row : t.rows)
                {
                    ++steps;
                    residual = std::max(residual, row.residual);
                    decreases += row.objective < f ? 1 : 0;
                    max_backtracks = std::max(max_backtracks, row.backtracks);
                    f = row.objective;
                }
            };
            for (int outer = 0; outer < 20; ++outer)
            {
                const double before = f;
                OptimizationTrace tr, ts;
                ris = pgam_ris(model, ris, star, opt, ls_ris, tr);
                audit(tr);
                star = pgam_star(model, ris, star, opt, ls_star, ts);
                audit(ts);
                residual = std::max(residual, feasibility_residual(ris, star));
                if (f - before < 1e-4)
                    break;
            }
        }
        const bool pass = residual <= 1e-12 && decreases == 0 && bad_terminations == 0 && max_backtracks <= 60;
        return {pass, fmt("%d calls, %d accepted steps: max residual %.1e (<= 1e-12), %d decreases, "
                          "%d calls without a rule-based stop, max backtracks %d (<= 60)",
                          calls, steps, residual, decreases, bad_terminations, max_backtracks)};
    }

    // 4: identity correlations make the SE phase-invariant
    Outcome phase_invariance()
    {
        double spread = 0.0, gradient = 0.0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed)
        {
            const ValidationReport r = run_validation("phase-invariance", seed);
            spread = std::max(spread, find_check(r, "max |SE - SE_ref|").measured);
            gradient = std::max(gradient, find_check(r, "max phase-gradient").measured);
        }
        return {spread < 1e-10 && gradient < 1e-10,
                fmt("5 x 100 phase draws: max |dSE| %.1e (< 1e-10), max phase-gradient norm %.1e (< 1e-10)",
                    spread, gradient)};
    }

    // 5: sampled link covariances and LMMSE orthogonality at M = N1 = N2 = 4 with 10^4 draws
    Outcome covariance()
    {
        const ValidationReport r = run_validation("covariance", 1);
        const double fid = find_check(r, "sample vs closed-form").measured;
        const double orth = find_check(r, "LMMSE orthogonality").measured;
        return {r.passed(), fmt("relative Frobenius %.4f (< 0.05), orthogonality residual %.4f (< 0.05)", fid, orth)};
    }

    // 6: qualitative trends at the desk preset
    Outcome qualitative()
    {
        const ScenarioConfig base = desk_scenario();
        std::ostringstream detail;
        bool pass = true;

        auto sweep = [&](SweepVariable v, std::vector<double> grid, std::vector<Architecture> archs)
        {
            ExperimentManifest m;
            m.variable = v;
            m.grid = std::move(grid);
            m.architectures = std::move(archs);
            m.restarts = 5;
            return run_sweep(m, base);
        };

        // (a) monotone trends and (b) optimized >= random phases
        int non_monotone = 0, below_random = 0;
        const std::vector<std::pair<SweepVariable, std::vector<double>>> trends{
            {SweepVariable::N, {8, 16, 24, 32, 48}},
            {SweepVariable::M, {4, 8, 16, 32, 64}},
            {SweepVariable::snr, {40, 50, 60, 70, 80}}};
        for (const auto &[v, grid] : trends)
        {
            const auto t = sweep(v, grid, {Architecture::ris_star, Architecture::random_phase});
            for (std::size_t i = 0; i < grid.size(); ++i)
            {
                if (i > 0 && t[0].rows[i].de_sum_se < t[0].rows[i - 1].de_sum_se)
                    ++non_monotone;
                if (t[0].rows[i].de_sum_se < t[1].rows[i].de_sum_se)
                    ++below_random;
            }
        }
        pass = pass && non_monotone == 0 && below_random == 0;
        detail << "(a) " << non_monotone << " decreasing steps over N, M, SNR; (b) " << below_random
               << " points below random-phase; ";

        // (c) architecture ordering
        const auto arch = sweep(SweepVariable::M, {double(base.M)},
                                {Architecture::ris_star, Architecture::double_ris, Architecture::single_star,
                                 Architecture::single_ris});
        const double rs = arch[0].rows[0].de_sum_se, dr = arch[1].rows[0].de_sum_se;
        const double single = std::max(arch[2].rows[0].de_sum_se, arch[3].rows[0].de_sum_se);
        const bool ordered = rs >= dr && dr >= single;
        pass = pass && ordered;
        detail << fmt("(c) ris-star %.4g >= double-ris %.4g >= single-surface %.4g: %s; ", rs, dr, single,
                      ordered ? "yes" : "no");

        // (d) N1-split maximum in the middle third
        std::vector<double> split;
        for (int n1 = 0; n1 < base.N(); ++n1)
            split.push_back(n1);
        const auto t = sweep(SweepVariable::n1_split, split, {Architecture::ris_star});
        std::size_t best = 0;
        for (std::size_t i = 1; i < t[0].rows.size(); ++i)
            if (t[0].rows[i].de_sum_se > t[0].rows[best].de_sum_se)
                best = i;
        const double lo = double(split.size()) / 3.0, hi = 2.0 * double(split.size()) / 3.0;
        const bool middle = double(best) >= lo && double(best) <= hi;
        pass = pass && middle;
        detail << fmt("(d) split maximum at N1 = %g of [0, %d), middle third [%.1f, %.1f]: %s", split[best],
                      base.N(), lo, hi, middle ? "yes" : "no");
        return {pass, detail.str()};
    }

    // 7: LMMSE quality limits and the training-length ordering
    Outcome estimation()
    {
        const ValidationReport r = run_validation("estimation", 1);
        std::ostringstream detail;
        for (const auto &c : r.checks)
            detail << c.name << " = " << c.measured << "; ";
        std::string s = detail.str();
        s.resize(s.size() - 2);
        return {r.passed(), s};
    }
}

int main()
{
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"DE tightness", de_tightness},
        {"gradient correctness", gradients},
        {"feasibility and monotone ascent", feasibility_and_ascent},
        {"phase invariance under identity correlations", phase_invariance},
        {"covariance fidelity", covariance},
        {"qualitative trends", qualitative},
        {"estimation limits", estimation}};

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        Outcome o;
        try
        {
            o = criteria[i].second();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
                  << "): " << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
