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

#ifndef RISSTAR_TYPES_HPP
#define RISSTAR_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace risstar
{
    using cdouble = std::complex<double>;

    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using RMatrix = Eigen::MatrixXd;
    using RVector = Eigen::VectorXd;

    // STAR-RIS side a UE is located on
    enum class Region
    {
        transmission,
        reflection
    };

    inline char region_label(Region w) { return w == Region::transmission ? 't' : 'r'; }

    // FNV-1a over raw bytes; used to tag cached statistics with the configuration they came from
    class Fingerprint
    {
    public:
        void add_bytes(const void *data, std::size_t n)
        {
            const auto *p = static_cast<const unsigned char *>(data);
            for (std::size_t i = 0; i < n; ++i)
            {
                state_ ^= p[i];
                state_ *= 0x100000001b3ULL;
            }
        }
        template <typename Derived>
        void add(const Eigen::DenseBase<Derived> &m)
        {
            const auto rows = static_cast<std::int64_t>(m.rows());
            const auto cols = static_cast<std::int64_t>(m.cols());
            add_bytes(&rows, sizeof rows);
            add_bytes(&cols, sizeof cols);
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                for (Eigen::Index i = 0; i < m.rows(); ++i)
                {
                    const auto v = m(i, j);
                    add_bytes(&v, sizeof v);
                }
        }
        std::uint64_t value() const { return state_; }

    private:
        std::uint64_t state_ = 0xcbf29ce484222325ULL;
    };

    // tr(A B) for Hermitian B, as a Frobenius inner product (no matrix product formed)
    template <typename A, typename B>
    cdouble trace_product(const Eigen::MatrixBase<A> &a, const Eigen::MatrixBase<B> &b)
    {
        return (a.array() * b.conjugate().array()).sum();
    }

    // Hermitian part (A + A^H) / 2
    inline CMatrix hermitian_part(const CMatrix &a) { return 0.5 * (a + a.adjoint()); }
}

#endif
