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
#include "risstar/correlation.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace risstar;

TEST_SUITE("correlation")
{
    TEST_CASE("sinc is normalized")
    {
        CHECK(sinc(0.0) == 1.0);
        CHECK(std::abs(sinc(1.0)) < 1e-15);
        CHECK(std::abs(sinc(-3.0)) < 1e-15);
        CHECK(sinc(0.5) == doctest::Approx(2.0 / std::numbers::pi));
        CHECK(sinc(0.25) == doctest::Approx(sinc(-0.25)));
    }

    TEST_CASE("surface correlation entries match the element geometry")
    {
        const double d = 0.025, lambda = 0.1;
        const RMatrix R = build_surface_correlation(4, 2, d, d, lambda, ElementLayout::row_major);
        REQUIRE(R.rows() == 8);
        CHECK((R - R.transpose()).norm() == 0.0);
        for (int i = 0; i < 8; ++i)
            CHECK(R(i, i) == doctest::Approx(d * d));
        // Row-major: element e sits at column e mod 4, row e / 4
        auto at = [&](int e) { return std::array<double, 2>{double(e % 4) * d, double(e / 4) * d}; };
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
            {
                const auto a = at(i), b = at(j);
                const double dist = std::hypot(a[0] - b[0], a[1] - b[1]);
                CHECK(R(i, j) == doctest::Approx(d * d * sinc(2.0 * dist / lambda)).epsilon(1e-13));
            }
    }

    TEST_CASE("layouts agree on square grids and differ otherwise")
    {
        const RMatrix a = build_surface_correlation(3, 3, 0.02, 0.03, 0.1, ElementLayout::vertical_stride);
        const RMatrix b = build_surface_correlation(3, 3, 0.02, 0.03, 0.1, ElementLayout::row_major);
        CHECK((a - b).norm() == 0.0);
        const RMatrix c = build_surface_correlation(4, 2, 0.025, 0.025, 0.1, ElementLayout::vertical_stride);
        const RMatrix d = build_surface_correlation(4, 2, 0.025, 0.025, 0.1, ElementLayout::row_major);
        CHECK((c - d).norm() > 1e-6);
    }

    TEST_CASE("surface correlation rejects bad input")
    {
        CHECK_THROWS_AS(build_surface_correlation(0, 2, 0.1, 0.1, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(build_surface_correlation(2, 2, -0.1, 0.1, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(build_surface_correlation(2, 2, 0.1, 0.1, 0.0), std::invalid_argument);
    }

    TEST_CASE("exponential BS correlation is Hermitian Toeplitz with unit diagonal")
    {
        const cdouble c(0.3, 0.4);
        const CMatrix R = build_bs_correlation(5, BsCorrelationModel::exponential, c);
        CHECK((R - R.adjoint()).norm() < 1e-15);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
            {
                const cdouble expected = j >= i ? std::pow(c, double(j - i)) : std::conj(std::pow(c, double(i - j)));
                CHECK(std::abs(R(i, j) - expected) < 1e-15);
            }
        Eigen::SelfAdjointEigenSolver<CMatrix> es(R);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        CHECK((build_bs_correlation(3, BsCorrelationModel::identity, 0.9) - CMatrix::Identity(3, 3)).norm() == 0.0);
        CHECK_THROWS_AS(build_bs_correlation(3, BsCorrelationModel::exponential, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(build_bs_correlation(0, BsCorrelationModel::identity, 0.0), std::invalid_argument);
    }

    TEST_CASE("psd_sqrt squares back and clamps tiny negative eigenvalues")
    {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> normal;
        CMatrix A(6, 3);
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            for (Eigen::Index i = 0; i < A.rows(); ++i)
                A(i, j) = cdouble(normal(rng), normal(rng));
        CMatrix R = A * A.adjoint(); // rank 3
        const CMatrix S = psd_sqrt(R);
        CHECK((S - S.adjoint()).norm() < 1e-12);
        CHECK((S * S - R).norm() / R.norm() < 1e-10);

        RMatrix P = RMatrix::Identity(3, 3);
        P(2, 2) = -1e-14;
        const RMatrix Q = psd_sqrt(P);
        CHECK(Q(2, 2) == 0.0);
        CHECK(Q(0, 0) == doctest::Approx(1.0));

        CMatrix N = CMatrix::Identity(2, 2);
        N(0, 1) = 0.5;
        CHECK_THROWS_AS(psd_sqrt(N), std::invalid_argument);
        CHECK_THROWS_AS(psd_sqrt(RMatrix(2, 3)), std::invalid_argument);
    }

    TEST_CASE("correlation set keeps R = S S^H and the Hadamard kernels")
    {
        const ScenarioConfig cfg = desk_scenario();
        const CorrelationSet c = build_correlation_set(cfg);
        CHECK((c.sqrt_t * c.sqrt_t.adjoint() - c.R_t).norm() < 1e-12);
        CHECK((c.sqrt_1 * c.sqrt_1.transpose() - c.R_1).norm() < 1e-12);
        CHECK((c.sqrt_2 * c.sqrt_2.transpose() - c.R_2).norm() < 1e-12);
        CHECK((c.basis_t * c.eig_t.asDiagonal() * c.basis_t.adjoint() - c.R_t).norm() < 1e-12);
        for (int i = 0; i < c.R_1.rows(); ++i)
            CHECK(c.R_1(i, i) == doctest::Approx(1.0)); // unit scaling
        CHECK((c.W_1 - c.R_1.cwiseProduct(c.R_1.transpose())).norm() == 0.0);
    }

    TEST_CASE("Hadamard kernel reproduces tr(R Phi R Phi^H)")
    {
        const RMatrix R = build_surface_correlation(4, 2, 0.025, 0.025, 0.1, ElementLayout::row_major) / (0.025 * 0.025);
        const CorrelationSet c = CorrelationSet::from_matrices(CMatrix::Identity(2, 2), R, R);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        CVector x(8);
        for (int n = 0; n < 8; ++n)
            x(n) = std::polar(0.2 + std::abs(u(rng)), u(rng));
        const CMatrix Phi = x.asDiagonal();
        const double direct = std::real((c.R_1.cast<cdouble>() * Phi * c.R_1.cast<cdouble>() * Phi.adjoint()).trace());
        CHECK(surface_trace(c.W_1, x) == doctest::Approx(direct).epsilon(1e-12));
    }
}
