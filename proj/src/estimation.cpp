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

#include "risstar/estimation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <stdexcept>

namespace risstar
{
    double training_noise(const ScenarioConfig &cfg)
    {
        if (cfg.perfect_csi())
            return 0.0;
        return cfg.sigma2() / (double(cfg.tau) * cfg.pilot_power_mw());
    }

    LinkEstimate lmmse_statistics(const CMatrix &R, double eps)
    {
        if (R.rows() != R.cols())
            throw std::invalid_argument("lmmse_statistics: covariance must be square");
        if (!(eps >= 0.0))
            throw std::invalid_argument("lmmse_statistics: noise variance must be >= 0");
        const Eigen::Index M = R.rows();
        const double scale = std::max(R.norm(), 1e-300);
        if ((R - R.adjoint()).norm() > 1e-8 * scale)
            throw std::invalid_argument("lmmse_statistics: covariance is not Hermitian");

        Eigen::SelfAdjointEigenSolver<CMatrix> es(R, Eigen::EigenvaluesOnly);
        if (M > 0 && es.eigenvalues().minCoeff() < -1e-10 * std::max(es.eigenvalues().maxCoeff(), 0.0))
            throw std::invalid_argument("lmmse_statistics: covariance is not PSD");

        LinkEstimate out;
        if (eps == 0.0)
        {
            out.Psi = R;
            out.E = CMatrix::Zero(M, M);
            return out;
        }

        CMatrix A = R;
        A.diagonal().array() += eps;
        Eigen::LLT<CMatrix> llt(A);
        if (llt.info() != Eigen::Success)
            throw std::invalid_argument("lmmse_statistics: regularized covariance is not positive definite");
        out.Q = llt.solve(CMatrix::Identity(M, M));
        out.Psi = hermitian_part(R * llt.solve(R));
        out.E = R - out.Psi;
        return out;
    }

    LinkEstimate lmmse_statistics(const CMatrix &R, double sigma2, int tau, double P)
    {
        if (tau == 0)
            return lmmse_statistics(R, 0.0);
        if (tau < 0 || !(sigma2 > 0.0) || !(P > 0.0))
            throw std::invalid_argument("lmmse_statistics: sigma2, P must be > 0 and tau >= 0");
        return lmmse_statistics(R, sigma2 / (double(tau) * P));
    }

    CMatrix aggregate_estimate_cov(const LinkEstimate &l0, const LinkEstimate &l1, const LinkEstimate &l2)
    {
        return l0.Psi + l1.Psi + l2.Psi;
    }

    EstimationStatistics estimate_all(const ChannelCovariances &cov, const ScenarioConfig &cfg)
    {
        const double eps = training_noise(cfg);
        EstimationStatistics s;
        s.links.resize(std::size_t(cov.K()));
        s.Psi_bar.reserve(std::size_t(cov.K()));
        for (int k = 0; k < cov.K(); ++k)
        {
            auto &l = s.links[std::size_t(k)];
            l[0] = lmmse_statistics(cov.R0[std::size_t(k)], eps);
            l[1] = lmmse_statistics(cov.R1[std::size_t(k)], eps);
            l[2] = lmmse_statistics(cov.R2[std::size_t(k)], eps);
            s.Psi_bar.push_back(aggregate_estimate_cov(l[0], l[1], l[2]));
        }
        return s;
    }
}
