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

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>

namespace risstar
{
    CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng &rng)
    {
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        CMatrix X(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
            {
                const double re = normal(rng);
                X(i, j) = cdouble(re, normal(rng));
            }
        return X;
    }

    ChannelDraw sample_channels(const CorrelationSet &corr, const PathLossSet &pl, const std::vector<Region> &regions,
                                const RisPhases &ris, const StarConfig &star, Rng &rng)
    {
        const Eigen::Index M = corr.R_t.rows(), N1 = corr.R_1.rows(), N2 = corr.R_2.rows();
        const int K = int(regions.size());
        const CMatrix S1 = corr.sqrt_1.cast<cdouble>();
        const CMatrix S2 = corr.sqrt_2.cast<cdouble>();
        const CMatrix &St = corr.sqrt_t;

        ChannelDraw d;
        d.G1 = std::sqrt(pl.beta_t1) * St * complex_gaussian(M, N1, rng) * S1;
        d.D = std::sqrt(pl.beta_12) * S1 * complex_gaussian(N1, N2, rng) * S2;
        d.U2 = std::sqrt(pl.beta_t2) * St * complex_gaussian(M, N2, rng) * S2;
        d.g2 = S2 * complex_gaussian(N2, K, rng) * pl.beta_2k.cwiseSqrt().cast<cdouble>().asDiagonal();
        d.u1 = S1 * complex_gaussian(N1, K, rng) * pl.beta_1k.cwiseSqrt().cast<cdouble>().asDiagonal();
        d.c = St * complex_gaussian(M, K, rng) * pl.beta_bar_k.cwiseSqrt().cast<cdouble>().asDiagonal();

        const CMatrix G1Phi1 = d.G1 * ris.theta_bar.asDiagonal();
        const CMatrix cascade = G1Phi1 * d.D; // M x N2
        d.h.resize(M, K);
        d.h1.resize(M, K);
        d.h2.resize(M, K);
        for (int k = 0; k < K; ++k)
        {
            const CVector phi2_g = star.coefficients(regions[std::size_t(k)]).cwiseProduct(d.g2.col(k));
            d.h.col(k) = d.c.col(k) + cascade * phi2_g;
            d.h1.col(k) = G1Phi1 * d.u1.col(k);
            d.h2.col(k) = d.U2 * phi2_g;
        }
        d.hbar = d.h + d.h1 + d.h2;
        return d;
    }

    CMatrix dft_pilots(int K, int tau, double P)
    {
        if (tau < K)
            throw std::invalid_argument("dft_pilots: orthogonal pilots need tau >= K");
        CMatrix X(K, tau);
        const double amp = std::sqrt(P);
        for (int k = 0; k < K; ++k)
            for (int t = 0; t < tau; ++t)
                X(k, t) = std::polar(amp, -2.0 * std::numbers::pi * double(k) * double(t) / double(tau));
        return X;
    }

    TrainingRealization simulate_training(const ChannelDraw &draw, const ScenarioConfig &cfg,
                                          const ChannelCovariances &cov, const EstimationStatistics &est, Rng &rng)
    {
        TrainingRealization tr;
        const std::array<const CMatrix *, 3> links{&draw.h, &draw.h1, &draw.h2};
        if (cfg.perfect_csi())
        {
            for (int l = 0; l < 3; ++l)
                tr.estimate[std::size_t(l)] = *links[std::size_t(l)];
            tr.hbar_hat = draw.hbar;
            return tr;
        }

        const int K = cfg.K, tau = cfg.tau;
        const double P = cfg.pilot_power_mw();
        const Eigen::Index M = draw.h.rows();
        tr.pilots = dft_pilots(K, tau, P);
        const CMatrix despreader = tr.pilots.transpose() / (double(tau) * P); // column k is x_k / (tau P)
        const double sigma = std::sqrt(cfg.sigma2());

        tr.hbar_hat = CMatrix::Zero(M, K);
        for (int l = 0; l < 3; ++l)
        {
            const auto L = std::size_t(l);
            // Y = sum_i h_i x_i^H + Z
            tr.received[L] = *links[L] * tr.pilots.conjugate() + sigma * complex_gaussian(M, tau, rng);
            tr.despread[L] = tr.received[L] * despreader;
            tr.estimate[L].resize(M, K);
            for (int k = 0; k < K; ++k)
            {
                const auto &R = (l == 0 ? cov.R0 : l == 1 ? cov.R1 : cov.R2)[std::size_t(k)];
                const auto &Q = est.links[std::size_t(k)][L].Q;
                tr.estimate[L].col(k) = R * (Q * tr.despread[L].col(k));
            }
            tr.hbar_hat += tr.estimate[L];
        }
        return tr;
    }

    MonteCarloResult empirical_sum_se(const ScenarioConfig &cfg, const CorrelationSet &corr, const PathLossSet &pl,
                                      const RisPhases &ris, const StarConfig &star, const MonteCarloOptions &opt)
    {
        if (opt.n_blocks < 100)
            throw std::invalid_argument("empirical_sum_se: at least 100 blocks required");
        constexpr long batch_size = 25;
        const int K = cfg.K;
        const Eigen::Index M = cfg.M;

        const ChannelCovariances cov = channel_covariances(corr, pl, cfg.regions, ris, star);
        const EstimationStatistics est = estimate_all(cov, cfg);

        // Estimator matrices A_lk = R_lk Q_lk and covariance of the noise part of f_k
        std::vector<std::array<CMatrix, 3>> A(static_cast<std::size_t>(K));
        std::vector<CMatrix> noise_cov(static_cast<std::size_t>(K), CMatrix::Zero(M, M));
        const double eps = training_noise(cfg);
        for (int k = 0; k < K; ++k)
            for (int l = 0; l < 3; ++l)
            {
                const auto &R = (l == 0 ? cov.R0 : l == 1 ? cov.R1 : cov.R2)[std::size_t(k)];
                auto &a = A[std::size_t(k)][std::size_t(l)];
                a = cfg.perfect_csi() ? CMatrix::Identity(M, M) : CMatrix(R * est.links[std::size_t(k)][std::size_t(l)].Q);
                noise_cov[std::size_t(k)] += eps * a * a.adjoint();
            }

        RVector inv_trace(K);
        for (int k = 0; k < K; ++k)
        {
            const double t = std::real(cov.Rbar[std::size_t(k)].trace());
            inv_trace(k) = t > 0.0 ? 1.0 / t : 0.0;
        }
        const int n_controls = (opt.control_variates && inv_trace.minCoeff() > 0.0) ? K : 0;

        const long n_batches = (opt.n_blocks + batch_size - 1) / batch_size;
        auto run_batch = [&](long b)
        {
            std::seed_seq seq{std::uint64_t(opt.seed), std::uint64_t(b)};
            Rng rng(seq);
            UatfAccumulator acc(K, n_controls);
            const long first = b * batch_size;
            const long last = std::min(opt.n_blocks, first + batch_size);
            for (long i = first; i < last; ++i)
            {
                const ChannelDraw draw = sample_channels(corr, pl, cfg.regions, ris, star, rng);
                RVector controls;
                if (n_controls > 0)
                    controls = (draw.hbar.colwise().squaredNorm().transpose().cwiseProduct(inv_trace)).array() - 1.0;
                if (opt.noise == TrainingNoise::simulated)
                {
                    const TrainingRealization tr = simulate_training(draw, cfg, cov, est, rng);
                    acc.add(draw.hbar, tr.hbar_hat, controls);
                    continue;
                }
                CMatrix F_mean(M, K);
                for (int k = 0; k < K; ++k)
                {
                    const auto &a = A[std::size_t(k)];
                    F_mean.col(k) = a[0] * draw.h.col(k) + a[1] * draw.h1.col(k) + a[2] * draw.h2.col(k);
                }
                acc.add_conditional(draw.hbar, F_mean, noise_cov, controls);
            }
            return acc;
        };

        std::vector<UatfAccumulator> batches;
        batches.reserve(std::size_t(n_batches));
        const long wave = std::max(1, opt.workers);
        for (long start = 0; start < n_batches; start += wave)
        {
            const long stop = std::min(n_batches, start + wave);
            if (wave == 1)
            {
                batches.push_back(run_batch(start));
                continue;
            }
            std::vector<std::future<UatfAccumulator>> futures;
            for (long b = start; b < stop; ++b)
                futures.push_back(std::async(std::launch::async, run_batch, b));
            for (auto &f : futures)
                batches.push_back(f.get());
        }

        MonteCarloResult out;
        UatfAccumulator total(K, n_controls);
        std::vector<double> batch_se;
        for (const auto &b : batches)
        {
            total.merge(b);
            batch_se.push_back(b.finalize(cfg).sum_se);
        }
        out.performance = total.finalize(cfg);
        out.blocks = total.count();

        const double nb = double(batch_se.size());
        if (nb > 1.0)
        {
            double mean = 0.0, var = 0.0;
            for (double v : batch_se)
                mean += v / nb;
            for (double v : batch_se)
                var += (v - mean) * (v - mean) / (nb - 1.0);
            out.stderr_se = std::sqrt(var / nb);
        }
        return out;
    }
}
