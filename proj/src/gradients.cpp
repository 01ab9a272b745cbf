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

#include "risstar/gradients.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

// Chain rule through the link gains:
//   s_0k = beta_bar_k + beta_hat_k a_k b,  s_1k = beta_hat_1k b,  s_2k = beta_hat_2k a_k
//   b = theta_bar^H W_1 theta_bar,  a_k = x^H W_2 x with x = beta^{w_k} o theta^{w_k}
// and in the eigenbasis of R_t (eigenvalues l_j, Psi_tot = sum_i Psi_i, c = K sigma^2 / rho):
//   dS_k / ds_li = 2 d_ik tr(Psi_k) sum_j psi'_lk,j
//   dI_k / ds_li = d_ik sum_j l_j Psi_tot,j + sum_j (R_k,j + c) psi'_li,j - 2 d_ik sum_j Psi_k,j psi'_lk,j

namespace risstar
{
    GradientWorkspace prepare_gradients(const SumRateModel &model, const RisPhases &ris, const StarConfig &star)
    {
        const auto &cfg = model.config();
        const auto &lam = model.correlation().eig_t;
        const int K = cfg.K;
        const Eigen::Index M = lam.size();

        GradientWorkspace ws;
        ws.tag = fingerprint(ris, star);
        ws.gains = link_gains(model.correlation(), model.path_losses(), cfg.regions, ris, star);
        ws.value = model.evaluate(ws.gains);
        const auto &g = ws.gains;

        RMatrix psi_bar(M, K), r_bar(M, K);
        std::array<RMatrix, 3> dpsi{RMatrix(M, K), RMatrix(M, K), RMatrix(M, K)};
        for (int k = 0; k < K; ++k)
        {
            const double s[3] = {g.s0(k), g.s1(k), g.s2(k)};
            for (Eigen::Index j = 0; j < M; ++j)
            {
                psi_bar(j, k) = model.psi(s[0], lam(j)) + model.psi(s[1], lam(j)) + model.psi(s[2], lam(j));
                r_bar(j, k) = (s[0] + s[1] + s[2]) * lam(j);
                for (int l = 0; l < 3; ++l)
                    dpsi[std::size_t(l)](j, k) = model.dpsi(s[l], lam(j));
            }
        }
        const RVector psi_total = psi_bar.rowwise().sum();
        const double c = model.noise_weight();

        // dSE/dS_k and dSE/dI_k
        const double scale = ws.value.prelog / std::numbers::ln2;
        RVector dS(K), dI(K);
        for (int k = 0; k < K; ++k)
        {
            const double S = ws.value.S(k), I = ws.value.I(k);
            if (!(I > 0.0))
            {
                dS(k) = dI(k) = 0.0;
                continue;
            }
            dS(k) = scale / (I + S);
            dI(k) = -scale * S / (I * (I + S));
        }

        RVector u = RVector::Zero(M); // sum_k dI_k (R_k,j + c)
        for (int k = 0; k < K; ++k)
            u += dI(k) * (r_bar.col(k).array() + c).matrix();
        const double lam_psi = lam.dot(psi_total);

        std::array<RVector *, 3> nu{&ws.nu0, &ws.nu1, &ws.nu2};
        for (int l = 0; l < 3; ++l)
        {
            RVector &out = *nu[std::size_t(l)];
            out.resize(K);
            const RMatrix &d = dpsi[std::size_t(l)];
            for (int i = 0; i < K; ++i)
            {
                const double tr_psi = psi_bar.col(i).sum();
                out(i) = dS(i) * 2.0 * tr_psi * d.col(i).sum() + dI(i) * lam_psi + u.dot(d.col(i)) -
                         2.0 * dI(i) * psi_bar.col(i).dot(d.col(i));
            }
        }
        return ws;
    }

    namespace
    {
        void check_fresh(const GradientWorkspace &ws, const RisPhases &ris, const StarConfig &star)
        {
            if (ws.tag != fingerprint(ris, star))
                throw std::logic_error("gradient workspace is stale for this surface configuration");
        }
    }

    CVector grad_ris(const SumRateModel &model, const GradientWorkspace &ws, const RisPhases &ris,
                     const StarConfig &star)
    {
        check_fresh(ws, ris, star);
        const auto &pl = model.path_losses();
        double weight = 0.0;
        for (int i = 0; i < model.config().K; ++i)
            weight += ws.nu0(i) * pl.beta_hat_k(i) * ws.gains.a(i) + ws.nu1(i) * pl.beta_hat_1k(i);
        if (ris.size() == 0)
            return CVector(0);
        return weight * (model.correlation().W_1.cast<cdouble>() * ris.theta_bar);
    }

    StarGradient grad_star(const SumRateModel &model, const GradientWorkspace &ws, const RisPhases &ris,
                           const StarConfig &star)
    {
        check_fresh(ws, ris, star);
        const auto &pl = model.path_losses();
        const auto &regions = model.config().regions;

        StarGradient out;
        for (Region w : {Region::transmission, Region::reflection})
        {
            double weight = 0.0;
            for (int i = 0; i < model.config().K; ++i)
                if (regions[std::size_t(i)] == w)
                    weight += ws.nu0(i) * pl.beta_hat_k(i) * ws.gains.b + ws.nu2(i) * pl.beta_hat_2k(i);

            const CVector G = weight * (model.correlation().W_2.cast<cdouble>() * star.coefficients(w));
            const CVector g_theta = star.beta(w).cast<cdouble>().cwiseProduct(G);
            const RVector g_beta = 2.0 * star.theta(w).conjugate().cwiseProduct(G).real();
            if (w == Region::transmission)
            {
                out.theta_t = g_theta;
                out.beta_t = g_beta;
            }
            else
            {
                out.theta_r = g_theta;
                out.beta_r = g_beta;
            }
        }
        return out;
    }

    RVector phase_derivative(const CVector &theta, const CVector &g)
    {
        return 2.0 * theta.conjugate().cwiseProduct(g).imag();
    }

    CVector tangent_component(const CVector &theta, const CVector &g)
    {
        const RVector im = theta.conjugate().cwiseProduct(g).imag();
        return cdouble(0.0, 1.0) * theta.cwiseProduct(im.cast<cdouble>());
    }
}
