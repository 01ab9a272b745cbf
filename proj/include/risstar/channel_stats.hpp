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

#ifndef RISSTAR_CHANNEL_STATS_HPP
#define RISSTAR_CHANNEL_STATS_HPP

#include "risstar/correlation.hpp"
#include "risstar/scenario.hpp"

#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace risstar
{
    // Diagonal of the RIS-1 reflection matrix
    struct RisPhases
    {
        CVector theta_bar;

        static RisPhases unit(int N1);
        int size() const { return int(theta_bar.size()); }
    };

    // Energy-splitting STAR-RIS configuration
    struct StarConfig
    {
        CVector theta_t, theta_r;
        RVector beta_t, beta_r;

        // theta = 1, beta_t = beta_r = sqrt(0.5)
        static StarConfig uniform(int N2);

        int size() const { return int(theta_t.size()); }
        const CVector &theta(Region w) const { return w == Region::transmission ? theta_t : theta_r; }
        const RVector &beta(Region w) const { return w == Region::transmission ? beta_t : beta_r; }

        // Diagonal of Phi_{2,w} = diag(beta^w o theta^w)
        CVector coefficients(Region w) const;
    };

    struct SurfaceState
    {
        RisPhases ris;
        StarConfig star;
    };

    std::uint64_t fingerprint(const RisPhases &ris, const StarConfig &star);

    // Largest violation of |theta| = 1, beta_t^2 + beta_r^2 = 1 and beta >= 0
    double feasibility_residual(const RisPhases &ris, const StarConfig &star);

    // How surface traces are formed.
    //   consistent:    inter-surface kernel tr(R_q Phi R_q Phi^H) on each surface, covariances proportional to R_t
    //   cross_surface: mixed kernels tr(R_1 Phi_2 R_2 Phi_2^H) tr(R_1 Phi_1 R_2 Phi_1^H) and
    //                  tr(R_t Phi_q R_q Phi_q^H) R_q; only defined when M == N1 == N2
    enum class TraceReading
    {
        consistent,
        cross_surface
    };

    // tr(R Phi R Phi^H) for Phi = diag(x), via the Hadamard kernel W = R o R^T
    double surface_trace(const RMatrix &W, const CVector &x);

    // Per-UE scalars with R_lk = s_lk R_t under the consistent reading
    struct LinkGains
    {
        double b = 0.0; // tr(R_1 Phi_1 R_1 Phi_1^H)
        RVector a;      // tr(R_2 Phi_2,w_k R_2 Phi_2,w_k^H) per UE
        RVector s0, s1, s2;
    };

    LinkGains link_gains(const CorrelationSet &corr, const PathLossSet &pl, const std::vector<Region> &regions,
                         const RisPhases &ris, const StarConfig &star);

    CMatrix double_reflection_cov(const CorrelationSet &corr, const PathLossSet &pl, const RisPhases &ris,
                                  const StarConfig &star, int k, Region w_k,
                                  TraceReading reading = TraceReading::consistent);

    // (R_1k, R_2k): BS -> RIS 1 -> UE and BS -> STAR-RIS -> UE
    std::pair<CMatrix, CMatrix> single_reflection_covs(const CorrelationSet &corr, const PathLossSet &pl,
                                                       const RisPhases &ris, const StarConfig &star, int k,
                                                       Region w_k, TraceReading reading = TraceReading::consistent);

    CMatrix aggregate_cov(const CMatrix &R0, const CMatrix &R1, const CMatrix &R2);

    struct ChannelCovariances
    {
        std::vector<CMatrix> R0, R1, R2, Rbar;
        int K() const { return int(Rbar.size()); }
    };

    ChannelCovariances channel_covariances(const CorrelationSet &corr, const PathLossSet &pl,
                                           const std::vector<Region> &regions, const RisPhases &ris,
                                           const StarConfig &star, TraceReading reading = TraceReading::consistent);

    // Bounded LRU cache of covariances keyed by surface fingerprint; thread-safe
    class CovarianceCache
    {
    public:
        CovarianceCache(const CorrelationSet &corr, const PathLossSet &pl, std::vector<Region> regions,
                        std::size_t capacity = 16, TraceReading reading = TraceReading::consistent);

        std::shared_ptr<const ChannelCovariances> get(const RisPhases &ris, const StarConfig &star);

        std::size_t hits() const;
        std::size_t misses() const;

    private:
        const CorrelationSet &corr_;
        const PathLossSet &pl_;
        std::vector<Region> regions_;
        std::size_t capacity_;
        TraceReading reading_;

        mutable std::mutex mutex_;
        std::list<std::pair<std::uint64_t, std::shared_ptr<const ChannelCovariances>>> entries_;
        std::size_t hits_ = 0, misses_ = 0;
    };
}

#endif
