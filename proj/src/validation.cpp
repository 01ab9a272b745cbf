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

#include "risstar/validation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace risstar
{
    namespace
    {
        using Gen = std::mt19937_64;

        CMatrix complex_wishart(int n, Gen &rng)
        {
            const CMatrix A = complex_gaussian(n, n + 2, rng);
            return A * A.adjoint() / double(n + 2);
        }

        RMatrix real_wishart(int n, Gen &rng)
        {
            if (n == 0)
                return RMatrix(0, 0);
            std::normal_distribution<double> normal;
            RMatrix A(n, n + 2);
            for (Eigen::Index j = 0; j < A.cols(); ++j)
                for (Eigen::Index i = 0; i < A.rows(); ++i)
                    A(i, j) = normal(rng);
            return A * A.transpose() / double(n + 2);
        }

        CVector random_phases(Eigen::Index n, Gen &rng)
        {
            std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
            CVector v(n);
            for (Eigen::Index i = 0; i < n; ++i)
                v(i) = std::polar(1.0, angle(rng));
            return v;
        }

        double relative(double a, double b)
        {
            const double scale = std::abs(b);
            return scale > 0.0 ? std::abs(a - b) / scale : std::abs(a - b);
        }

        double block_error(const RVector &analytic, const RVector &fd)
        {
            const double scale = fd.norm();
            return scale > 0.0 ? (analytic - fd).norm() / scale : analytic.norm();
        }

        ValidationCheck check_below(std::string name, double measured, double threshold)
        {
            return {std::move(name), measured, threshold, measured < threshold};
        }
    }

    RandomInstance random_instance(std::uint64_t seed, int M, int N1, int N2, int K)
    {
        if (M < 1 || N1 < 0 || N2 < 1 || K < 1)
            throw std::invalid_argument("random_instance: invalid dimensions");
        std::seed_seq seq{std::uint64_t(0x7273), seed};
        Gen rng(seq);
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        RandomInstance inst;
        auto &cfg = inst.config;
        cfg.M = M;
        cfg.K = K;
        cfg.ris1 = grid_for(N1);
        cfg.star = grid_for(N2);
        cfg.tau = std::max(K, 4);
        cfg.tau_c = 10 * cfg.tau;
        const bool first_t = unit(rng) < 0.5;
        for (int k = 0; k < K; ++k)
            cfg.regions.push_back(((k % 2 == 0) == first_t) ? Region::transmission : Region::reflection);
        const double s2 = cfg.sigma2();
        cfg.rho = double(K) * s2 * (0.5 + 4.5 * unit(rng));
        cfg.pilot_power = s2 / (double(cfg.tau) * (0.1 + 1.9 * unit(rng)));
        cfg.validate();

        inst.correlation = CorrelationSet::from_matrices(complex_wishart(M, rng), real_wishart(N1, rng),
                                                         real_wishart(N2, rng));
        auto &pl = inst.path_losses;
        pl.beta_t1 = 0.2 + unit(rng);
        pl.beta_12 = 0.2 + unit(rng);
        pl.beta_t2 = 0.2 + unit(rng);
        pl.beta_1k = RVector(K);
        pl.beta_2k = RVector(K);
        pl.beta_bar_k = RVector(K);
        for (int k = 0; k < K; ++k)
        {
            pl.beta_1k(k) = 0.2 + unit(rng);
            pl.beta_2k(k) = 0.2 + unit(rng);
            pl.beta_bar_k(k) = 0.2 + unit(rng);
        }
        pl.refresh_products();

        inst.ris.theta_bar = random_phases(N1, rng);
        inst.star = StarConfig::uniform(N2);
        inst.star.theta_t = random_phases(N2, rng);
        inst.star.theta_r = random_phases(N2, rng);
        for (int n = 0; n < N2; ++n)
        {
            const double a = 0.5 * std::numbers::pi * unit(rng);
            inst.star.beta_t(n) = std::cos(a);
            inst.star.beta_r(n) = std::sin(a);
        }
        return inst;
    }

    RandomInstance with_identity_correlations(RandomInstance inst)
    {
        const int M = inst.config.M, N1 = inst.config.N1(), N2 = inst.config.N2();
        inst.correlation = CorrelationSet::from_matrices(CMatrix::Identity(M, M), RMatrix::Identity(N1, N1),
                                                         RMatrix::Identity(N2, N2));
        return inst;
    }

    double matrix_route_se(const ScenarioConfig &cfg, const CorrelationSet &corr, const PathLossSet &pl,
                           const RisPhases &ris, const StarConfig &star)
    {
        const ChannelCovariances cov = channel_covariances(corr, pl, cfg.regions, ris, star);
        return de_sinr(estimate_all(cov, cfg), cov, cfg).sum_se;
    }

    double GradientErrors::max() const { return std::max({ris, theta_t, theta_r, beta_t, beta_r}); }

    GradientErrors gradient_fd_errors(const RandomInstance &inst)
    {
        const auto &cfg = inst.config;
        const SumRateModel model(cfg, inst.correlation, inst.path_losses);
        const GradientWorkspace ws = prepare_gradients(model, inst.ris, inst.star);
        const CVector g_ris = grad_ris(model, ws, inst.ris, inst.star);
        const StarGradient g_star = grad_star(model, ws, inst.ris, inst.star);

        const RVector a_ris = phase_derivative(inst.ris.theta_bar, g_ris);
        const RVector a_t = phase_derivative(inst.star.theta_t, g_star.theta_t);
        const RVector a_r = phase_derivative(inst.star.theta_r, g_star.theta_r);

        auto se = [&](const RisPhases &r, const StarConfig &s)
        { return matrix_route_se(cfg, inst.correlation, inst.path_losses, r, s); };

        // Central differences of one block, perturbing entry n by +-h through apply(state, n, delta)
        auto fd_block = [&](Eigen::Index n_entries, double h, auto apply)
        {
            RVector d(n_entries);
            for (Eigen::Index n = 0; n < n_entries; ++n)
            {
                RisPhases rp = inst.ris, rm = inst.ris;
                StarConfig sp = inst.star, sm = inst.star;
                apply(rp, sp, n, h);
                apply(rm, sm, n, -h);
                d(n) = (se(rp, sp) - se(rm, sm)) / (2.0 * h);
            }
            return d;
        };
        auto best = [&](const RVector &analytic, Eigen::Index n_entries, auto apply)
        {
            if (n_entries == 0)
                return 0.0;
            return std::min(block_error(analytic, fd_block(n_entries, 1e-6, apply)),
                            block_error(analytic, fd_block(n_entries, 1e-5, apply)));
        };

        GradientErrors e;
        e.ris = best(a_ris, inst.ris.size(), [](RisPhases &r, StarConfig &, Eigen::Index n, double h)
                     { r.theta_bar(n) *= std::polar(1.0, h); });
        e.theta_t = best(a_t, inst.star.size(), [](RisPhases &, StarConfig &s, Eigen::Index n, double h)
                         { s.theta_t(n) *= std::polar(1.0, h); });
        e.theta_r = best(a_r, inst.star.size(), [](RisPhases &, StarConfig &s, Eigen::Index n, double h)
                         { s.theta_r(n) *= std::polar(1.0, h); });
        e.beta_t = best(g_star.beta_t, inst.star.size(), [](RisPhases &, StarConfig &s, Eigen::Index n, double h)
                        { s.beta_t(n) += h; });
        e.beta_r = best(g_star.beta_r, inst.star.size(), [](RisPhases &, StarConfig &s, Eigen::Index n, double h)
                        { s.beta_r(n) += h; });
        return e;
    }

    bool ValidationReport::passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck &c) { return c.pass; });
    }

    void ValidationReport::print(std::ostream &os) const
    {
        const auto flags = os.flags();
        for (const auto &c : checks)
            os << (c.pass ? "PASS " : "FAIL ") << suite << ": " << c.name << "  measured=" << std::setprecision(4)
               << c.measured << "  threshold=" << c.threshold << '\n';
        os.flags(flags);
    }

    const std::vector<std::string> &validation_suites()
    {
        static const std::vector<std::string> names{"gradients",  "projections", "de-tightness",
                                                    "covariance", "phase-invariance", "estimation"};
        return names;
    }

    namespace
    {
        ValidationReport suite_gradients(std::uint64_t seed)
        {
            ValidationReport r{"gradients", {}};
            double worst = 0.0;
            for (std::uint64_t i = 0; i < 10; ++i)
                worst = std::max(worst, gradient_fd_errors(random_instance(seed * 1000 + i)).max());
            r.checks.push_back(check_below("max relative FD error, 10 instances", worst, 1e-5));
            return r;
        }

        ValidationReport suite_projections(std::uint64_t seed)
        {
            ValidationReport r{"projections", {}};
            Gen rng(seed);
            std::normal_distribution<double> normal;

            CVector v(1000);
            for (Eigen::Index i = 0; i < v.size(); ++i)
                v(i) = cdouble(normal(rng), normal(rng));
            const CVector p = project_unit_modulus(v);
            double modulus = 0.0;
            for (Eigen::Index i = 0; i < p.size(); ++i)
                modulus = std::max(modulus, std::abs(std::abs(p(i)) - 1.0));
            r.checks.push_back(check_below("unit-modulus residual", modulus, 1e-12));
            const double moved = (project_unit_modulus(p) - p).norm();
            r.checks.push_back({"unit-modulus idempotence (exact)", moved, 0.0, moved == 0.0});

            RVector bt(1000), br(1000);
            for (Eigen::Index i = 0; i < bt.size(); ++i)
            {
                bt(i) = normal(rng);
                br(i) = normal(rng);
            }
            project_amplitude_pair(bt, br);
            r.checks.push_back(check_below("amplitude-pair residual",
                                           (bt.array().square() + br.array().square() - 1.0).abs().maxCoeff(), 1e-12));

            double residual = 0.0;
            int decreases = 0;
            for (std::uint64_t i = 0; i < 10; ++i)
            {
                const RandomInstance inst = random_instance(seed * 1000 + i);
                const SumRateModel model(inst.config, inst.correlation, inst.path_losses);
                AoOptions opt;
                opt.restarts = 1;
                const AoResult res = alternating_optimize(model, inst.ris, inst.star, opt);
                double prev = model.sum_se(inst.ris, inst.star);
                for (const auto &row : res.trace.rows)
                {
                    residual = std::max(residual, row.residual);
                    decreases += row.objective < prev ? 1 : 0;
                    prev = row.objective;
                }
            }
            r.checks.push_back(check_below("feasibility residual along 10 PGAM runs", residual, 1e-12));
            r.checks.push_back(check_below("objective decreases along 10 PGAM runs", decreases, 0.5));
            return r;
        }

        ValidationReport suite_de_tightness(std::uint64_t seed)
        {
            ValidationReport r{"de-tightness", {}};
            const ScenarioConfig cfg = desk_scenario();
            const CorrelationSet corr = build_correlation_set(cfg);
            const PathLossSet pl = compute_path_losses(cfg);
            const SumRateModel model(cfg, corr, pl);
            const RisPhases ris = RisPhases::unit(cfg.N1());
            const StarConfig star = StarConfig::uniform(cfg.N2());
            MonteCarloOptions mc;
            mc.n_blocks = 2000;
            mc.seed = seed;
            const double de = model.sum_se(ris, star);
            const double sim = empirical_sum_se(cfg, corr, pl, ris, star, mc).performance.sum_se;
            r.checks.push_back(check_below("|DE - MC| / MC, desk preset, 2000 blocks", relative(de, sim), 0.05));
            return r;
        }

        ValidationReport suite_covariance(std::uint64_t seed)
        {
            ValidationReport r{"covariance", {}};
            const RandomInstance inst = random_instance(seed, 4, 4, 4, 2);
            const auto &cfg = inst.config;
            const ChannelCovariances cov =
                channel_covariances(inst.correlation, inst.path_losses, cfg.regions, inst.ris, inst.star);
            const EstimationStatistics est = estimate_all(cov, cfg);
            const int K = cfg.K;
            const Eigen::Index M = cfg.M;
            constexpr long draws = 10000;

            std::vector<std::array<CMatrix, 3>> sample(static_cast<std::size_t>(K)), cross(static_cast<std::size_t>(K));
            for (auto &per_k : sample)
                per_k.fill(CMatrix::Zero(M, M));
            for (auto &per_k : cross)
                per_k.fill(CMatrix::Zero(M, M));

            std::seed_seq seq{seed, std::uint64_t(0x636f76)};
            Rng rng(seq);
            for (long i = 0; i < draws; ++i)
            {
                const ChannelDraw d = sample_channels(inst.correlation, inst.path_losses, cfg.regions, inst.ris,
                                                      inst.star, rng);
                const TrainingRealization tr = simulate_training(d, cfg, cov, est, rng);
                const std::array<const CMatrix *, 3> links{&d.h, &d.h1, &d.h2};
                for (int k = 0; k < K; ++k)
                    for (std::size_t l = 0; l < 3; ++l)
                    {
                        const CVector h = links[l]->col(k);
                        const CVector hh = tr.estimate[l].col(k);
                        sample[std::size_t(k)][l] += h * h.adjoint();
                        cross[std::size_t(k)][l] += hh * (h - hh).adjoint();
                    }
            }

            double fidelity = 0.0, orthogonality = 0.0;
            for (int k = 0; k < K; ++k)
                for (std::size_t l = 0; l < 3; ++l)
                {
                    const auto &R = (l == 0 ? cov.R0 : l == 1 ? cov.R1 : cov.R2)[std::size_t(k)];
                    const CMatrix S = sample[std::size_t(k)][l] / double(draws);
                    fidelity = std::max(fidelity, (S - R).norm() / R.norm());
                    const CMatrix C = cross[std::size_t(k)][l] / double(draws);
                    orthogonality = std::max(orthogonality, C.norm() / est.links[std::size_t(k)][l].Psi.norm());
                }
            r.checks.push_back(check_below("sample vs closed-form covariance, rel. Frobenius", fidelity, 0.05));
            r.checks.push_back(check_below("LMMSE orthogonality residual", orthogonality, 0.05));
            return r;
        }

        ValidationReport suite_phase_invariance(std::uint64_t seed)
        {
            ValidationReport r{"phase-invariance", {}};
            const RandomInstance inst = with_identity_correlations(random_instance(seed));
            const SumRateModel model(inst.config, inst.correlation, inst.path_losses);
            const double reference = model.sum_se(inst.ris, inst.star);
            Gen rng(seed);
            double spread = 0.0, gradient = 0.0;
            for (int i = 0; i < 100; ++i)
            {
                RisPhases ris{random_phases(inst.ris.size(), rng)};
                StarConfig star = inst.star;
                star.theta_t = random_phases(star.size(), rng);
                star.theta_r = random_phases(star.size(), rng);
                spread = std::max(spread, std::abs(model.sum_se(ris, star) - reference));
                const GradientWorkspace ws = prepare_gradients(model, ris, star);
                const StarGradient gs = grad_star(model, ws, ris, star);
                gradient = std::max({gradient, phase_derivative(ris.theta_bar, grad_ris(model, ws, ris, star)).norm(),
                                     phase_derivative(star.theta_t, gs.theta_t).norm(),
                                     phase_derivative(star.theta_r, gs.theta_r).norm()});
            }
            r.checks.push_back(check_below("max |SE - SE_ref| over 100 phase draws", spread, 1e-10));
            r.checks.push_back(check_below("max phase-gradient norm", gradient, 1e-10));
            return r;
        }

        ValidationReport suite_estimation(std::uint64_t)
        {
            ValidationReport r{"estimation", {}};
            const ScenarioConfig base = desk_scenario();
            const ChannelCovariances cov = channel_covariances(build_correlation_set(base), compute_path_losses(base),
                                                               base.regions, RisPhases::unit(base.N1()),
                                                               StarConfig::uniform(base.N2()));
            const CMatrix &R = cov.Rbar[0];
            const double trR = std::real(R.trace());
            double previous = 0.0, violations = 0.0, last = 0.0;
            for (int i = 0; i <= 12; ++i)
            {
                const double P = base.pilot_power_mw() * std::pow(10.0, 0.25 * i);
                const double ratio = std::real(lmmse_statistics(R, base.sigma2(), base.tau, P).Psi.trace()) / trR;
                violations += (i > 0 && !(ratio > previous)) ? 1.0 : 0.0;
                previous = last = ratio;
            }
            r.checks.push_back(check_below("non-increasing steps of tr(Psi)/tr(R) over 3 decades of tau P",
                                           violations, 0.5));
            r.checks.push_back(check_below("1 - tr(Psi)/tr(R) at the top of the range", 1.0 - last, 0.1));

            const ScenarioConfig hi = apply_sweep(base, SweepVariable::snr, 80.0);
            double se[3];
            const int taus[3] = {0, 20, 40};
            for (int i = 0; i < 3; ++i)
            {
                ScenarioConfig c = hi;
                c.tau = taus[i];
                se[i] = SumRateModel(c).sum_se(RisPhases::unit(c.N1()), StarConfig::uniform(c.N2()));
            }
            r.checks.push_back(check_below("SE(tau=20) - SE(tau=0) at 80 dB", se[1] - se[0], 0.0));
            r.checks.push_back(check_below("SE(tau=40) - SE(tau=20) at 80 dB", se[2] - se[1], 0.0));
            return r;
        }
    }

    ValidationReport run_validation(const std::string &suite, std::uint64_t seed)
    {
        if (suite == "gradients")
            return suite_gradients(seed);
        if (suite == "projections")
            return suite_projections(seed);
        if (suite == "de-tightness")
            return suite_de_tightness(seed);
        if (suite == "covariance")
            return suite_covariance(seed);
        if (suite == "phase-invariance")
            return suite_phase_invariance(seed);
        if (suite == "estimation")
            return suite_estimation(seed);
        throw std::invalid_argument("unknown validation suite '" + suite + "'");
    }
}
