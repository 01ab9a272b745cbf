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

#include "risstar/correlation.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace risstar
{
    namespace
    {
        constexpr double clamp_relative = 1e-10;
        constexpr double hermitian_tolerance = 1e-8;

        template <typename Matrix>
        void check_hermitian(const Matrix &R)
        {
            if (R.rows() != R.cols())
                throw std::invalid_argument("psd_sqrt: matrix must be square");
            const double scale = std::max(1.0, R.norm());
            if ((R - R.adjoint()).norm() > hermitian_tolerance * scale)
                throw std::invalid_argument("psd_sqrt: matrix is not Hermitian");
        }

        template <typename Matrix>
        Matrix clamped_sqrt(const Matrix &R)
        {
            if (R.size() == 0)
                return Matrix(R.rows(), R.cols());
            check_hermitian(R);
            const Matrix H = 0.5 * (R + R.adjoint());
            Eigen::SelfAdjointEigenSolver<Matrix> es(H);
            if (es.info() != Eigen::Success)
                throw std::runtime_error("psd_sqrt: eigendecomposition failed");
            RVector ev = es.eigenvalues();
            const double floor = clamp_relative * std::max(ev.maxCoeff(), 0.0);
            for (Eigen::Index i = 0; i < ev.size(); ++i)
                ev(i) = ev(i) > floor ? std::sqrt(ev(i)) : 0.0;
            const auto &V = es.eigenvectors();
            return V * ev.asDiagonal() * V.adjoint();
        }

        RMatrix hadamard_kernel(const RMatrix &R)
        {
            return R.cwiseProduct(R.transpose());
        }
    }

    double sinc(double x)
    {
        if (x == 0.0)
            return 1.0;
        const double px = std::numbers::pi * x;
        return std::sin(px) / px;
    }

    RMatrix build_surface_correlation(int N_H, int N_V, double d_H, double d_V, double wavelength, ElementLayout layout)
    {
        if (N_H < 1 || N_V < 1)
            throw std::invalid_argument("build_surface_correlation: grid factors must be >= 1");
        if (!(d_H > 0.0) || !(d_V > 0.0) || !(wavelength > 0.0))
            throw std::invalid_argument("build_surface_correlation: spacings and wavelength must be > 0");

        const int N = N_H * N_V;
        const int row_stride = (layout == ElementLayout::vertical_stride) ? N_V : N_H;
        std::vector<double> y(static_cast<std::size_t>(N)), z(static_cast<std::size_t>(N));
        for (int e = 0; e < N; ++e)
        {
            y[std::size_t(e)] = double(e % N_H) * d_H;
            z[std::size_t(e)] = double(e / row_stride) * d_V;
        }

        const double area = d_H * d_V;
        RMatrix R(N, N);
        for (int i = 0; i < N; ++i)
        {
            R(i, i) = area;
            for (int j = i + 1; j < N; ++j)
            {
                const double dy = y[std::size_t(i)] - y[std::size_t(j)];
                const double dz = z[std::size_t(i)] - z[std::size_t(j)];
                R(i, j) = R(j, i) = area * sinc(2.0 * std::sqrt(dy * dy + dz * dz) / wavelength);
            }
        }
        return R;
    }

    CMatrix build_bs_correlation(int M, BsCorrelationModel model, cdouble coefficient)
    {
        if (M < 1)
            throw std::invalid_argument("build_bs_correlation: M must be >= 1");
        if (model == BsCorrelationModel::identity)
            return CMatrix::Identity(M, M);
        if (model != BsCorrelationModel::exponential)
            throw std::invalid_argument("build_bs_correlation: unknown model");
        if (std::abs(coefficient) >= 1.0)
            throw std::invalid_argument("build_bs_correlation: |coefficient| must be < 1");

        CMatrix R(M, M);
        for (int i = 0; i < M; ++i)
            for (int j = i; j < M; ++j)
            {
                const cdouble v = (j == i) ? cdouble(1.0) : std::pow(coefficient, double(j - i));
                R(i, j) = v;
                R(j, i) = std::conj(v);
            }
        return R;
    }

    CMatrix psd_sqrt(const CMatrix &R) { return clamped_sqrt(R); }
    RMatrix psd_sqrt(const RMatrix &R) { return clamped_sqrt(R); }

    CorrelationSet CorrelationSet::from_matrices(const CMatrix &R_t, const RMatrix &R_1, const RMatrix &R_2)
    {
        CorrelationSet c;
        c.sqrt_t = psd_sqrt(R_t);
        c.sqrt_1 = psd_sqrt(R_1);
        c.sqrt_2 = psd_sqrt(R_2);
        c.R_t = c.sqrt_t * c.sqrt_t.adjoint();
        c.R_1 = c.sqrt_1 * c.sqrt_1.transpose();
        c.R_2 = c.sqrt_2 * c.sqrt_2.transpose();
        c.R_t = hermitian_part(c.R_t);
        c.R_1 = 0.5 * (c.R_1 + c.R_1.transpose());
        c.R_2 = 0.5 * (c.R_2 + c.R_2.transpose());

        Eigen::SelfAdjointEigenSolver<CMatrix> es(c.R_t);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("CorrelationSet: eigendecomposition of R_t failed");
        c.eig_t = es.eigenvalues().cwiseMax(0.0);
        c.basis_t = es.eigenvectors();

        c.W_1 = hadamard_kernel(c.R_1);
        c.W_2 = hadamard_kernel(c.R_2);
        return c;
    }

    CorrelationSet build_correlation_set(const ScenarioConfig &cfg)
    {
        auto surface = [&cfg](const SurfaceGrid &g) -> RMatrix
        {
            if (g.size() == 0)
                return RMatrix(0, 0);
            if (cfg.surface_correlation == SurfaceCorrelationModel::identity)
                return RMatrix::Identity(g.size(), g.size());
            RMatrix R = build_surface_correlation(g.horizontal, g.vertical, cfg.element_width, cfg.element_height,
                                                  cfg.wavelength, cfg.layout);
            if (cfg.correlation_scale == CorrelationScale::unit)
                R /= cfg.element_width * cfg.element_height;
            return R;
        };
        return CorrelationSet::from_matrices(build_bs_correlation(cfg.M, cfg.bs_correlation, cfg.bs_coefficient),
                                             surface(cfg.ris1), surface(cfg.star));
    }
}
