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

#ifndef RISSTAR_MONTECARLO_HPP
#define RISSTAR_MONTECARLO_HPP

#include "risstar/channel_stats.hpp"
#include "risstar/estimation.hpp"
#include "risstar/performance.hpp"

#include <array>
#include <cstdint>
#include <random>

namespace risstar
{
    using Rng = std::mt19937_64;

    // Entries CN(0, 1): real and imaginary parts i.i.d. N(0, 1/2)
    CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng &rng);

    // One realization of every fading block, colored as sqrt(beta) R_a^{1/2} X R_b^{1/2}
    // with the BS-side factor on the M dimension.
    struct ChannelDraw
    {
        CMatrix G1; // M x N1, BS -> RIS 1
        CMatrix D;  // N1 x N2, RIS 1 -> STAR-RIS
        CMatrix U2; // M x N2, BS -> STAR-RIS
        CMatrix g2; // N2 x K, STAR-RIS -> UE
        CMatrix u1; // N1 x K, RIS 1 -> UE
        CMatrix c;  // M x K, direct

        CMatrix h;    // c_k + G1 Phi_1 D Phi_2,w_k g_2k
        CMatrix h1;   // G1 Phi_1 u_1k
        CMatrix h2;   // U2 Phi_2,w_k g_2k
        CMatrix hbar; // h + h1 + h2
    };

    ChannelDraw sample_channels(const CorrelationSet &corr, const PathLossSet &pl, const std::vector<Region> &regions,
                                const RisPhases &ris, const StarConfig &star, Rng &rng);

    // K x tau DFT pilot matrix, rows x_k^T with ||x_k||^2 = tau P and mutually orthogonal
    CMatrix dft_pilots(int K, int tau, double P);

    // Uplink training of each cascaded link with its own noise realization
    struct TrainingRealization
    {
        CMatrix pilots;                  // K x tau
        std::array<CMatrix, 3> received; // M x tau, per link
        std::array<CMatrix, 3> despread; // M x K, r_lk = h_lk + z_lk / (tau P)
        std::array<CMatrix, 3> estimate; // M x K, R_lk Q_lk r_lk
        CMatrix hbar_hat;                // sum over links
    };

    // Under perfect CSI (tau = 0) the estimates equal the true channels
    TrainingRealization simulate_training(const ChannelDraw &draw, const ScenarioConfig &cfg,
                                          const ChannelCovariances &cov, const EstimationStatistics &est, Rng &rng);

    struct MonteCarloResult
    {
        PerformanceResult performance;
        double stderr_se = 0.0; // batch-means standard error of the sum SE
        long blocks = 0;
    };

    enum class TrainingNoise
    {
        simulated,  // pilots, received signals and despreading are drawn per block
        conditional // the Gaussian training noise is integrated exactly given each channel draw
    };

    struct MonteCarloOptions
    {
        long n_blocks = 500;
        std::uint64_t seed = 1;
        int workers = 1;
        TrainingNoise noise = TrainingNoise::conditional;
        // Regress every moment on ||hbar_k||^2 / tr(Rbar_k) - 1, whose mean is known to be zero
        bool control_variates = true;
    };

    // UatF sum SE with MRT precoders f_k = sum_l R_lk Q_lk r_lk. Blocks are processed in fixed-size batches,
    // each with its own seeded stream, and merged in batch order, so the result depends only on the seed.
    MonteCarloResult empirical_sum_se(const ScenarioConfig &cfg, const CorrelationSet &corr, const PathLossSet &pl,
                                      const RisPhases &ris, const StarConfig &star, const MonteCarloOptions &opt);
}

#endif
