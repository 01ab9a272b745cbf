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

#ifndef RISSTAR_PERFORMANCE_HPP
#define RISSTAR_PERFORMANCE_HPP

#include "risstar/channel_stats.hpp"
#include "risstar/correlation.hpp"
#include "risstar/estimation.hpp"
#include "risstar/scenario.hpp"

#include <utility>
#include <vector>

namespace risstar
{
    struct PerformanceResult
    {
        RVector S;     // signal term per UE
        RVector I;     // interference-plus-noise term per UE
        RVector gamma; // S / I
        double sum_se = 0.0;
        double prelog = 1.0;
    };

    // gamma_k = S_k / I_k (0 when S_k = 0) and sum SE = prelog sum log2(1 + gamma_k)
    PerformanceResult make_result(RVector S, RVector I, double prelog);

    // Deterministic-equivalent SINR with MRT precoding
    //   S_k = tr^2(Psi_k)
    //   I_k = sum_i tr(R_k Psi_i) - tr(Psi_k^2) + (K sigma^2 / rho) sum_i tr(Psi_i)
    PerformanceResult de_sinr(const EstimationStatistics &est, const ChannelCovariances &cov,
                              const ScenarioConfig &cfg);

    // Sample moments of the use-and-then-forget bound with precoders f_i.
    // Interference uses E|h_k^H f_i|^2 and power normalization lambda = 1 / sum_i E||f_i||^2.
    // Optional zero-mean control variates per draw adjust every moment by least-squares regression.
    class UatfAccumulator
    {
    public:
        explicit UatfAccumulator(int K = 0, int n_controls = 0);

        // Hbar and F are M x K: true aggregate channels and precoders of one coherence block
        void add(const CMatrix &Hbar, const CMatrix &F, const RVector &controls = RVector());
        // Precoders f_i = m_i + w_i with w_i ~ CN(0, C_i) independent of Hbar; the w_i are integrated exactly
        void add_conditional(const CMatrix &Hbar, const CMatrix &F_mean, const std::vector<CMatrix> &F_cov,
                             const RVector &controls = RVector());
        void merge(const UatfAccumulator &other);

        long count() const { return n_; }
        PerformanceResult finalize(const ScenarioConfig &cfg) const;

    private:
        void push(const RVector &y, const RVector &controls);

        // Per-draw moment vector: [Re h_k^H f_k, Im h_k^H f_k] (2K), |h_k^H f_i|^2 (K^2, column-major), ||f_i||^2 (K)
        int K_;
        int n_controls_;
        long n_ = 0;
        RVector sum_y_;
        RVector sum_c_;
        RMatrix sum_cc_;
        RMatrix sum_yc_;
    };

    // UatF SINR from (Hbar, F) draws; needs at least 100 draws
    PerformanceResult mc_sinr_oracle(const std::vector<std::pair<CMatrix, CMatrix>> &draws, const ScenarioConfig &cfg);

    // Sum-SE evaluator for the consistent trace reading. All covariances are s_lk R_t, so every trace is
    // evaluated in the eigenbasis of R_t in O(K^2 M + N^2).
    class SumRateModel
    {
    public:
        explicit SumRateModel(ScenarioConfig cfg);
        SumRateModel(ScenarioConfig cfg, CorrelationSet corr, PathLossSet pl);

        const ScenarioConfig &config() const { return cfg_; }
        const CorrelationSet &correlation() const { return corr_; }
        const PathLossSet &path_losses() const { return pl_; }
        double training_noise() const { return eps_; }
        double noise_weight() const; // K sigma^2 / rho

        // Per-eigenvalue estimate spectrum of a link with covariance s R_t, and its derivative in s
        double psi(double s, double lambda) const;
        double dpsi(double s, double lambda) const;

        PerformanceResult evaluate(const RisPhases &ris, const StarConfig &star) const;
        PerformanceResult evaluate(const LinkGains &gains) const;
        double sum_se(const RisPhases &ris, const StarConfig &star) const { return evaluate(ris, star).sum_se; }

    private:
        ScenarioConfig cfg_;
        CorrelationSet corr_;
        PathLossSet pl_;
        double eps_;
    };
}

#endif
