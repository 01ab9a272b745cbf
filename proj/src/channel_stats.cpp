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

#include "risstar/channel_stats.hpp"

#include <cmath>
#include <stdexcept>

namespace risstar
{
    RisPhases RisPhases::unit(int N1)
    {
        return {CVector::Ones(N1)};
    }

    StarConfig StarConfig::uniform(int N2)
    {
        const double h = std::sqrt(0.5);
        return {CVector::Ones(N2), CVector::Ones(N2), RVector::Constant(N2, h), RVector::Constant(N2, h)};
    }

    CVector StarConfig::coefficients(Region w) const
    {
        return beta(w).cast<cdouble>().cwiseProduct(theta(w));
    }

    std::uint64_t fingerprint(const RisPhases &ris, const StarConfig &star)
    {
        Fingerprint f;
        f.add(ris.theta_bar);
        f.add(star.theta_t);
        f.add(star.theta_r);
        f.add(star.beta_t);
        f.add(star.beta_r);
        return f.value();
    }

    double feasibility_residual(const RisPhases &ris, const StarConfig &star)
    {
        double r = 0.0;
        for (Eigen::Index n = 0; n < ris.theta_bar.size(); ++n)
            r = std::max(r, std::abs(std::abs(ris.theta_bar(n)) - 1.0));
        for (Eigen::Index n = 0; n < star.theta_t.size(); ++n)
        {
            r = std::max(r, std::abs(std::abs(star.theta_t(n)) - 1.0));
            r = std::max(r, std::abs(std::abs(star.theta_r(n)) - 1.0));
            const double bt = star.beta_t(n), br = star.beta_r(n);
            r = std::max(r, std::abs(bt * bt + br * br - 1.0));
            r = std::max({r, -bt, -br});
        }
        return r;
    }

    double surface_trace(const RMatrix &W, const CVector &x)
    {
        if (x.size() == 0)
            return 0.0;
        return std::real(x.dot(W.cast<cdouble>() * x));
    }

    LinkGains link_gains(const CorrelationSet &corr, const PathLossSet &pl, const std::vector<Region> &regions,
                         const RisPhases &ris, const StarConfig &star)
    {
        const int K = int(regions.size());
        LinkGains g;
        g.b = surface_trace(corr.W_1, ris.theta_bar);
        const double a_t = surface_trace(corr.W_2, star.coefficients(Region::transmission));
        const double a_r = surface_trace(corr.W_2, star.coefficients(Region::reflection));
        g.a.resize(K);
        g.s0.resize(K);
        g.s1.resize(K);
        g.s2.resize(K);
        for (int k = 0; k < K; ++k)
        {
            g.a(k) = regions[std::size_t(k)] == Region::transmission ? a_t : a_r;
            g.s0(k) = pl.beta_bar_k(k) + pl.beta_hat_k(k) * g.a(k) * g.b;
            g.s1(k) = pl.beta_hat_1k(k) * g.b;
            g.s2(k) = pl.beta_hat_2k(k) * g.a(k);
        }
        return g;
    }

    namespace
    {
        // tr(A Phi B Phi^H) by explicit products, Phi = diag(x)
        double product_trace(const CMatrix &A, const CVector &x, const CMatrix &B)
        {
            if (A.cols() != x.size() || B.rows() != x.size())
                throw std::invalid_argument("surface trace: dimension mismatch");
            const CMatrix left = A * x.asDiagonal();
            const CMatrix right = B * x.conjugate().asDiagonal();
            return std::real((left * right).trace());
        }

        void check_cross_surface(const CorrelationSet &corr)
        {
            const auto M = corr.R_t.rows(), N1 = corr.R_1.rows(), N2 = corr.R_2.rows();
            if (M != N1 || M != N2)
                throw std::invalid_argument("cross-surface trace reading needs M == N1 == N2");
        }
    }

    CMatrix double_reflection_cov(const CorrelationSet &corr, const PathLossSet &pl, const RisPhases &ris,
                                  const StarConfig &star, int k, Region w_k, TraceReading reading)
    {
        if (ris.size() != corr.R_1.rows() || star.size() != corr.R_2.rows())
            throw std::invalid_argument("double_reflection_cov: surface size mismatch");
        const CVector x = star.coefficients(w_k);
        const CMatrix R1 = corr.R_1.cast<cdouble>();
        const CMatrix R2 = corr.R_2.cast<cdouble>();

        double product = 0.0;
        if (reading == TraceReading::consistent)
        {
            product = (ris.size() == 0) ? 0.0 : product_trace(R2, x, R2) * product_trace(R1, ris.theta_bar, R1);
        }
        else
        {
            check_cross_surface(corr);
            product = product_trace(R1, x, R2) * product_trace(R1, ris.theta_bar, R2);
        }
        return (pl.beta_bar_k(k) + pl.beta_hat_k(k) * product) * corr.R_t;
    }

    std::pair<CMatrix, CMatrix> single_reflection_covs(const CorrelationSet &corr, const PathLossSet &pl,
                                                       const RisPhases &ris, const StarConfig &star, int k,
                                                       Region w_k, TraceReading reading)
    {
        if (ris.size() != corr.R_1.rows() || star.size() != corr.R_2.rows())
            throw std::invalid_argument("single_reflection_covs: surface size mismatch");
        const CVector x = star.coefficients(w_k);
        const CMatrix R1 = corr.R_1.cast<cdouble>();
        const CMatrix R2 = corr.R_2.cast<cdouble>();

        if (reading == TraceReading::consistent)
        {
            const double t1 = (ris.size() == 0) ? 0.0 : product_trace(R1, ris.theta_bar, R1);
            const double t2 = product_trace(R2, x, R2);
            return {pl.beta_hat_1k(k) * t1 * corr.R_t, pl.beta_hat_2k(k) * t2 * corr.R_t};
        }
        check_cross_surface(corr);
        const double t1 = product_trace(corr.R_t, ris.theta_bar, R1);
        const double t2 = product_trace(corr.R_t, x, R2);
        return {pl.beta_hat_1k(k) * t1 * R1, pl.beta_hat_2k(k) * t2 * R2};
    }

    CMatrix aggregate_cov(const CMatrix &R0, const CMatrix &R1, const CMatrix &R2)
    {
        return R0 + R1 + R2;
    }

    ChannelCovariances channel_covariances(const CorrelationSet &corr, const PathLossSet &pl,
                                           const std::vector<Region> &regions, const RisPhases &ris,
                                           const StarConfig &star, TraceReading reading)
    {
        ChannelCovariances c;
        const int K = int(regions.size());
        c.R0.reserve(std::size_t(K));
        c.R1.reserve(std::size_t(K));
        c.R2.reserve(std::size_t(K));
        c.Rbar.reserve(std::size_t(K));
        for (int k = 0; k < K; ++k)
        {
            const Region w = regions[std::size_t(k)];
            c.R0.push_back(double_reflection_cov(corr, pl, ris, star, k, w, reading));
            auto [r1, r2] = single_reflection_covs(corr, pl, ris, star, k, w, reading);
            c.R1.push_back(std::move(r1));
            c.R2.push_back(std::move(r2));
            c.Rbar.push_back(aggregate_cov(c.R0.back(), c.R1.back(), c.R2.back()));
        }
        return c;
    }

    CovarianceCache::CovarianceCache(const CorrelationSet &corr, const PathLossSet &pl, std::vector<Region> regions,
                                     std::size_t capacity, TraceReading reading)
        : corr_(corr), pl_(pl), regions_(std::move(regions)), capacity_(std::max<std::size_t>(capacity, 1)),
          reading_(reading)
    {
    }

    std::shared_ptr<const ChannelCovariances> CovarianceCache::get(const RisPhases &ris, const StarConfig &star)
    {
        const auto key = fingerprint(ris, star);
        {
            std::lock_guard lock(mutex_);
            for (auto it = entries_.begin(); it != entries_.end(); ++it)
                if (it->first == key)
                {
                    entries_.splice(entries_.begin(), entries_, it);
                    ++hits_;
                    return entries_.front().second;
                }
            ++misses_;
        }
        auto value = std::make_shared<const ChannelCovariances>(
            channel_covariances(corr_, pl_, regions_, ris, star, reading_));
        std::lock_guard lock(mutex_);
        entries_.emplace_front(key, value);
        if (entries_.size() > capacity_)
            entries_.pop_back();
        return value;
    }

    std::size_t CovarianceCache::hits() const
    {
        std::lock_guard lock(mutex_);
        return hits_;
    }

    std::size_t CovarianceCache::misses() const
    {
        std::lock_guard lock(mutex_);
        return misses_;
    }
}
