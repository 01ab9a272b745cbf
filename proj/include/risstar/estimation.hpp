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

#ifndef RISSTAR_ESTIMATION_HPP
#define RISSTAR_ESTIMATION_HPP

#include "risstar/channel_stats.hpp"
#include "risstar/scenario.hpp"

#include <array>
#include <vector>

namespace risstar
{
    // LMMSE statistics of one cascaded link observed as r = h + n, n ~ CN(0, eps I)
    struct LinkEstimate
    {
        CMatrix Q;   // (R + eps I)^-1; empty under perfect CSI
        CMatrix Psi; // R Q R, covariance of the estimate
        CMatrix E;   // R - Psi, error covariance
    };

    // Effective training noise variance sigma^2 / (tau P); 0 for tau = 0
    double training_noise(const ScenarioConfig &cfg);

    // Throws std::invalid_argument for a non-PSD R. eps = 0 gives Psi = R, E = 0.
    LinkEstimate lmmse_statistics(const CMatrix &R, double eps);
    LinkEstimate lmmse_statistics(const CMatrix &R, double sigma2, int tau, double P);

    CMatrix aggregate_estimate_cov(const LinkEstimate &l0, const LinkEstimate &l1, const LinkEstimate &l2);

    struct EstimationStatistics
    {
        std::vector<std::array<LinkEstimate, 3>> links; // [k][l], l = 0 double, 1 via RIS 1, 2 via STAR-RIS
        std::vector<CMatrix> Psi_bar;
        int K() const { return int(Psi_bar.size()); }
    };

    EstimationStatistics estimate_all(const ChannelCovariances &cov, const ScenarioConfig &cfg);
}

#endif
