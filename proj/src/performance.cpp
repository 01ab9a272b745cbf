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

#include "risstar/performance.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

namespace risstar
{
    PerformanceResult make_result(RVector S, RVector I, double prelog)
    {
        PerformanceResult r;
        r.prelog = prelog;
        r.gamma.resize(S.size());
        double total = 0.0;
        for (Eigen::Index k = 0; k < S.size(); ++k)
        {
            r.gamma(k) = (S(k) == 0.0) ? 0.0 : S(k) / I(k);
            total += std::log2(1.0 + r.gamma(k));
        }
        r.sum_se = prelog * total;
        r.S = std::move(S);
        r.I = std::move(I);
        return r;
    }

    namespace
    {
        double real_trace(cdouble t, const char *what)
        {
            if (!std::isfinite(t.real()) || !std::isfinite(t.imag()))
                throw std::runtime_error(std::string("de_sinr: non-finite trace in ") + what);
            if (std::abs(t.imag()) > 1e-10 * std::max(1.0, std::abs(t.real())))
                throw std::runtime_error(std::string("de_sinr: complex residue in ") + what);
            return t.real();
        }
    }

    PerformanceResult de_sinr(const EstimationStatistics &est, const ChannelCovariances &cov,
                              const ScenarioConfig &cfg)
    {
        const int K = est.K();
        if (K < 1 || cov.K() != K)
            throw std::invalid_argument("de_sinr: statistics missing");

        RVector tr_psi(K);
        for (int i = 0; i < K; ++i)
            tr_psi(i) = real_trace(est.Psi_bar[std::size_t(i)].trace(), "tr(Psi)");
        const double noise = double(K) * cfg.sigma2() / cfg.rho * tr_psi.sum();

        RVector S(K), I(K);
        for (int k = 0; k < K; ++k)
        {
            const auto &Rk = cov.Rbar[std::size_t(k)];
            const auto &Pk = est.Psi_bar[std::size_t(k)];
            S(k) = tr_psi(k) * tr_psi(k);
            double interference = 0.0;
            for (int i = 0; i < K; ++i)
                interference += real_trace(trace_product(Rk, est.Psi_bar[std::size_t(i)]), "tr(R Psi)");
            interference -= real_trace(trace_product(Pk, Pk), "tr(Psi^2)");
            I(k) = interference + noise;
        }
        return make_result(std::move(S), std::move(I), cfg.prelog());
    }

    // ---------- use-and-then-forget sample moments ----------

    UatfAccumulator::UatfAccumulator(int K, int n_controls)
        : K_(K), n_controls_(n_controls), sum_y_(RVector::Zero(3 * K + K * K)), sum_c_(RVector::Zero(n_controls)),
          sum_cc_(RMatrix::Zero(n_controls, n_controls)), sum_yc_(RMatrix::Zero(3 * K + K * K, n_controls))
    {
        if (K < 0 || n_controls < 0)
            throw std::invalid_argument("UatfAccumulator: negative size");
    }

    void UatfAccumulator::push(const RVector &y, const RVector &controls)
    {
        if (controls.size() != n_controls_)
            throw std::invalid_argument("UatfAccumulator: wrong number of control variates");
        sum_y_ += y;
        if (n_controls_ > 0)
        {
            sum_c_ += controls;
            sum_cc_ += controls * controls.transpose();
            sum_yc_ += y * controls.transpose();
        }
        ++n_;
    }

    void UatfAccumulator::add(const CMatrix &Hbar, const CMatrix &F, const RVector &controls)
    {
        if (Hbar.cols() != K_ || F.cols() != K_ || Hbar.rows() != F.rows())
            throw std::invalid_argument("UatfAccumulator: shape mismatch");
        const CMatrix G = Hbar.adjoint() * F; // G(k, i) = h_k^H f_i
        RVector y(sum_y_.size());
        for (int k = 0; k < K_; ++k)
        {
            y(2 * k) = G(k, k).real();
            y(2 * k + 1) = G(k, k).imag();
        }
        y.segment(2 * K_, K_ * K_) = G.cwiseAbs2().reshaped();
        y.tail(K_) = F.colwise().squaredNorm().transpose();
        push(y, controls);
    }

    void UatfAccumulator::add_conditional(const CMatrix &Hbar, const CMatrix &F_mean, const std::vector<CMatrix> &F_cov,
                                          const RVector &controls)
    {
        if (Hbar.cols() != K_ || F_mean.cols() != K_ || Hbar.rows() != F_mean.rows() || int(F_cov.size()) != K_)
            throw std::invalid_argument("UatfAccumulator: shape mismatch");
        const CMatrix G = Hbar.adjoint() * F_mean;
        RMatrix power = G.cwiseAbs2();
        RVector norm_f = F_mean.colwise().squaredNorm().transpose();
        for (int i = 0; i < K_; ++i)
        {
            const CMatrix CH = F_cov[std::size_t(i)] * Hbar; // column k: C_i h_k
            for (int k = 0; k < K_; ++k)
                power(k, i) += std::real(Hbar.col(k).dot(CH.col(k)));
            norm_f(i) += std::real(F_cov[std::size_t(i)].trace());
        }
        RVector y(sum_y_.size());
        for (int k = 0; k < K_; ++k)
        {
            y(2 * k) = G(k, k).real();
            y(2 * k + 1) = G(k, k).imag();
        }
        y.segment(2 * K_, K_ * K_) = power.reshaped();
        y.tail(K_) = norm_f;
        push(y, controls);
    }

    void UatfAccumulator::merge(const UatfAccumulator &other)
    {
        if (other.K_ != K_ || other.n_controls_ != n_controls_)
            throw std::invalid_argument("UatfAccumulator: merging different shapes");
        sum_y_ += other.sum_y_;
        sum_c_ += other.sum_c_;
        sum_cc_ += other.sum_cc_;
        sum_yc_ += other.sum_yc_;
        n_ += other.n_;
    }

    PerformanceResult UatfAccumulator::finalize(const ScenarioConfig &cfg) const
    {
        if (n_ < 1)
            throw std::invalid_argument("UatfAccumulator: no samples");
        const double inv = 1.0 / double(n_);
        RVector y = sum_y_ * inv;
        if (n_controls_ > 0 && n_ > n_controls_ + 1)
        {
            const RVector c = sum_c_ * inv;
            const RMatrix cov_cc = sum_cc_ * inv - c * c.transpose();
            const RMatrix cov_yc = sum_yc_ * inv - y * c.transpose();
            const Eigen::LDLT<RMatrix> ldlt(cov_cc);
            const double scale = cov_cc.diagonal().maxCoeff();
            if (ldlt.info() == Eigen::Success && scale > 0.0 && ldlt.vectorD().minCoeff() > 1e-12 * scale)
                y -= cov_yc * ldlt.solve(c);
        }

        const double total_norm = y.tail(K_).cwiseMax(0.0).sum(); // 1 / lambda
        const double noise = double(K_) * cfg.sigma2() / cfg.rho * total_norm;

        RVector S(K_), I(K_);
        for (int k = 0; k < K_; ++k)
        {
            const double signal = y(2 * k) * y(2 * k) + y(2 * k + 1) * y(2 * k + 1);
            double interference = 0.0;
            for (int i = 0; i < K_; ++i)
                interference += y(2 * K_ + i * K_ + k);
            S(k) = signal;
            I(k) = std::max(interference - signal, 0.0) + noise;
        }
        return make_result(std::move(S), std::move(I), cfg.prelog());
    }

    PerformanceResult mc_sinr_oracle(const std::vector<std::pair<CMatrix, CMatrix>> &draws, const ScenarioConfig &cfg)
    {
        if (draws.size() < 100)
            throw std::invalid_argument("mc_sinr_oracle: at least 100 draws required");
        UatfAccumulator acc(int(draws.front().first.cols()));
        for (const auto &[H, F] : draws)
            acc.add(H, F);
        return acc.finalize(cfg);
    }

    // ---------- spectral evaluator ----------

    SumRateModel::SumRateModel(ScenarioConfig cfg)
        : SumRateModel(cfg, build_correlation_set(cfg), compute_path_losses(cfg))
    {
    }

    SumRateModel::SumRateModel(ScenarioConfig cfg, CorrelationSet corr, PathLossSet pl)
        : cfg_(std::move(cfg)), corr_(std::move(corr)), pl_(std::move(pl)), eps_(risstar::training_noise(cfg_))
    {
        if (corr_.R_t.rows() != cfg_.M || corr_.R_1.rows() != cfg_.N1() || corr_.R_2.rows() != cfg_.N2())
            throw std::invalid_argument("SumRateModel: correlation sizes do not match the scenario");
    }

    double SumRateModel::noise_weight() const
    {
        return double(cfg_.K) * cfg_.sigma2() / cfg_.rho;
    }

    double SumRateModel::psi(double s, double lambda) const
    {
        const double r = s * lambda;
        if (eps_ == 0.0)
            return r;
        return r * r / (r + eps_);
    }

    double SumRateModel::dpsi(double s, double lambda) const
    {
        const double r = s * lambda;
        if (eps_ == 0.0)
            return lambda;
        const double d = r + eps_;
        return lambda * (r * r + 2.0 * r * eps_) / (d * d);
    }

    PerformanceResult SumRateModel::evaluate(const RisPhases &ris, const StarConfig &star) const
    {
        return evaluate(link_gains(corr_, pl_, cfg_.regions, ris, star));
    }

    PerformanceResult SumRateModel::evaluate(const LinkGains &g) const
    {
        const int K = cfg_.K;
        const auto &lam = corr_.eig_t;
        const Eigen::Index M = lam.size();

        RMatrix psi_bar(M, K), r_bar(M, K);
        for (int k = 0; k < K; ++k)
            for (Eigen::Index j = 0; j < M; ++j)
            {
                psi_bar(j, k) = psi(g.s0(k), lam(j)) + psi(g.s1(k), lam(j)) + psi(g.s2(k), lam(j));
                r_bar(j, k) = (g.s0(k) + g.s1(k) + g.s2(k)) * lam(j);
            }
        const RVector psi_total = psi_bar.rowwise().sum();
        const double c = noise_weight();

        RVector S(K), I(K);
        for (int k = 0; k < K; ++k)
        {
            const double t = psi_bar.col(k).sum();
            S(k) = t * t;
            I(k) = (r_bar.col(k).array() + c).matrix().dot(psi_total) - psi_bar.col(k).squaredNorm();
        }
        return make_result(std::move(S), std::move(I), cfg_.prelog());
    }
}
