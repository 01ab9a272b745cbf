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

#ifndef RISSTAR_GRADIENTS_HPP
#define RISSTAR_GRADIENTS_HPP

#include "risstar/performance.hpp"

#include <cstdint>

namespace risstar
{
    // Sensitivities of the sum SE to the link gains s_lk of R_lk = s_lk R_t, shared by both surface gradients.
    // Tagged with the fingerprint of the surface state it was built from.
    struct GradientWorkspace
    {
        std::uint64_t tag = 0;
        LinkGains gains;
        PerformanceResult value;
        RVector nu0, nu1, nu2; // dSE / ds_lk
    };

    GradientWorkspace prepare_gradients(const SumRateModel &model, const RisPhases &ris, const StarConfig &star);

    // Wirtinger gradient dSE / d(theta_bar^*). Throws std::logic_error on a stale workspace.
    CVector grad_ris(const SumRateModel &model, const GradientWorkspace &ws, const RisPhases &ris,
                     const StarConfig &star);

    struct StarGradient
    {
        CVector theta_t, theta_r; // Wirtinger, dSE / d(theta^*)
        RVector beta_t, beta_r;   // real partial derivatives
    };

    StarGradient grad_star(const SumRateModel &model, const GradientWorkspace &ws, const RisPhases &ris,
                           const StarConfig &star);

    // dSE / dphi_n = 2 Im{theta_n^* g_n} for theta_n = exp(j phi_n) and Wirtinger gradient g
    RVector phase_derivative(const CVector &theta, const CVector &g);

    // Component of g tangent to the unit circle at theta: j theta Im{theta^* g}
    CVector tangent_component(const CVector &theta, const CVector &g);
}

#endif
