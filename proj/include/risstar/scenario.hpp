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

#ifndef RISSTAR_SCENARIO_HPP
#define RISSTAR_SCENARIO_HPP

#include "risstar/types.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace risstar
{
    inline constexpr int scenario_schema_version = 1;

    // Configuration error tagged with the offending document key
    class ScenarioError : public std::invalid_argument
    {
    public:
        ScenarioError(std::string key, const std::string &message)
            : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}
        const std::string &key() const noexcept { return key_; }

    private:
        std::string key_;
    };

    using Position = std::array<double, 3>;

    double distance(const Position &a, const Position &b);

    struct SurfaceGrid
    {
        int horizontal = 0; // N_{q,H}
        int vertical = 0;   // N_{q,V}
        int size() const { return horizontal * vertical; }
    };

    // Element-position rule for the sinc correlation model.
    //   vertical_stride: u = [0, mod(e, N_H) d_H, floor(e / N_V) d_V]
    //   row_major:       u = [0, mod(e, N_H) d_H, floor(e / N_H) d_V]
    // Both agree on square grids.
    enum class ElementLayout
    {
        vertical_stride,
        row_major
    };

    // unit: R_q has unit diagonal; area: R_q carries the d_H d_V element area
    enum class CorrelationScale
    {
        unit,
        area
    };

    enum class SurfaceCorrelationModel
    {
        sinc,
        identity
    };

    enum class BsCorrelationModel
    {
        identity,
        exponential
    };

    struct PathLossExponents
    {
        double bs_ris1 = 2.0;   // BS -> RIS 1
        double ris1_star = 2.0; // RIS 1 -> STAR-RIS
        double star_ue = 2.0;   // STAR-RIS -> UE
        double bs_star = 3.5;   // BS -> STAR-RIS
        double ris1_ue = 3.5;   // RIS 1 -> UE
        double bs_ue = 3.7;     // direct link
    };

    struct ScenarioConfig
    {
        int M = 0; // BS antennas
        int K = 0; // UEs
        SurfaceGrid ris1; // N1 = N_1H N_1V; N1 = 0 removes RIS 1
        SurfaceGrid star; // N2 = N_2H N_2V
        std::vector<Region> regions; // w_k per UE

        int tau_c = 200; // coherence block length
        int tau = 20;    // training length; 0 selects perfect CSI

        double rho = 0.0;                      // downlink power budget [mW]
        std::optional<double> pilot_power;     // P [mW], defaults to rho / K
        double bandwidth_hz = 200e3;           // noise bandwidth
        double noise_psd_dbm_per_hz = -174.0;

        double wavelength = 0.1;
        double element_width = 0.025;  // d_H
        double element_height = 0.025; // d_V
        ElementLayout layout = ElementLayout::row_major;
        CorrelationScale correlation_scale = CorrelationScale::unit;
        SurfaceCorrelationModel surface_correlation = SurfaceCorrelationModel::sinc;

        BsCorrelationModel bs_correlation = BsCorrelationModel::exponential;
        cdouble bs_coefficient = 0.5;

        Position bs{0.0, 0.0, 0.0};
        Position ris1_position{50.0, 10.0, 20.0};
        Position star_position{100.0, 30.0, 20.0};
        double ue_line_length = 20.0; // d0
        double ue_height = 0.0;
        std::vector<Position> ue_positions; // explicit positions; empty selects the two d0 line segments

        double element_area = 1.0; // A in A d^-alpha
        PathLossExponents exponents;
        double penetration_loss_direct_db = 15.0;

        int N1() const { return ris1.size(); }
        int N2() const { return star.size(); }
        int N() const { return N1() + N2(); }
        int count(Region w) const;
        bool perfect_csi() const { return tau == 0; }

        double sigma2() const;              // noise variance [mW]
        double pilot_power_mw() const;      // resolved P
        double prelog() const;              // (tau_c - tau) / tau_c
        std::vector<Position> resolved_ue_positions() const;

        // Throws ScenarioError naming the first violated key
        void validate() const;
    };

    struct PathLossSet
    {
        double beta_t1 = 0.0; // BS -> RIS 1
        double beta_12 = 0.0; // RIS 1 -> STAR-RIS
        double beta_t2 = 0.0; // BS -> STAR-RIS
        RVector beta_1k;      // RIS 1 -> UE k
        RVector beta_2k;      // STAR-RIS -> UE k
        RVector beta_bar_k;   // BS -> UE k, penetration loss included

        // Products entering the cascaded covariances
        RVector beta_hat_k;  // beta_t1 beta_2k beta_12
        RVector beta_hat_1k; // beta_1k beta_t1
        RVector beta_hat_2k; // beta_2k beta_t2

        void refresh_products();
    };

    PathLossSet compute_path_losses(const ScenarioConfig &cfg);

    ScenarioConfig load_scenario(const std::string &document);
    ScenarioConfig load_scenario_file(const std::string &path);
    std::string to_document(const ScenarioConfig &cfg);

    // Default evaluation scenario (K = 4 split evenly over t and r)
    ScenarioConfig preset_scenario();
    // Reduced scenario: M = 16, K = 2 (one t, one r), N1 = N2 = 8
    ScenarioConfig desk_scenario();

    // Near-square grid with N_H >= N_V, so the vertical-stride layout has no coincident elements
    SurfaceGrid grid_for(int n);
}

#endif
