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

#ifndef RISSTAR_CORRELATION_HPP
#define RISSTAR_CORRELATION_HPP

#include "risstar/scenario.hpp"
#include "risstar/types.hpp"

namespace risstar
{
    // Normalized sinc, sin(pi x) / (pi x)
    double sinc(double x);

    // Isotropic-scattering surface correlation r_ij = d_H d_V sinc(2 |u_i - u_j| / wavelength)
    RMatrix build_surface_correlation(int N_H, int N_V, double d_H, double d_V, double wavelength,
                                      ElementLayout layout = ElementLayout::vertical_stride);

    // Exponential ULA model c^(j-i) above the diagonal, Hermitian completion below; identity model ignores c
    CMatrix build_bs_correlation(int M, BsCorrelationModel model, cdouble coefficient);

    // Principal square root of a Hermitian PSD matrix. Eigenvalues below 1e-10 of the largest are clamped to 0.
    // Throws std::invalid_argument for input that is not Hermitian within 1e-8 (relative).
    CMatrix psd_sqrt(const CMatrix &R);
    RMatrix psd_sqrt(const RMatrix &R);

    // Eigen-repaired correlation matrices with cached square roots.
    // Every stored R equals S S^H of its stored root S.
    struct CorrelationSet
    {
        CMatrix R_t, sqrt_t;
        RMatrix R_1, sqrt_1;
        RMatrix R_2, sqrt_2;

        // Spectral data of R_t; every cascaded covariance is a multiple of R_t
        RVector eig_t;
        CMatrix basis_t;

        // Hadamard kernels W_q = R_q o R_q^T, so that tr(R_q Phi R_q Phi^H) = x^H W_q x for Phi = diag(x)
        RMatrix W_1, W_2;

        static CorrelationSet from_matrices(const CMatrix &R_t, const RMatrix &R_1, const RMatrix &R_2);
    };

    CorrelationSet build_correlation_set(const ScenarioConfig &cfg);
}

#endif
