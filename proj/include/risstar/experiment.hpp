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

#ifndef RISSTAR_EXPERIMENT_HPP
#define RISSTAR_EXPERIMENT_HPP

#include "risstar/optimizer.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace risstar
{
    enum class Architecture
    {
        ris_star,     // RIS 1 plus STAR-RIS, all blocks optimized
        double_ris,   // RIS 1 plus a STAR-RIS split into fixed transmit-only and reflect-only halves
        single_star,  // one STAR-RIS with all N elements, no RIS 1
        single_ris,   // one reflect-only RIS with all N elements at the STAR-RIS position
        random_phase, // ris-star geometry with random phases and sqrt 0.5 amplitudes, not optimized
        no_direct     // ris-star with the direct links removed
    };

    std::string architecture_label(Architecture a);
    Architecture parse_architecture(const std::string &label);

    enum class SweepVariable
    {
        N,       // total elements, split evenly between the surfaces
        M,       // BS antennas
        snr,     // rho / sigma^2 in dB
        n1_split // elements on RIS 1 at fixed total N
    };

    std::string sweep_label(SweepVariable v);
    SweepVariable parse_sweep(const std::string &label);

    // Scenario with one sweep coordinate applied
    ScenarioConfig apply_sweep(const ScenarioConfig &base, SweepVariable v, double value);

    // Scenario, statistics and starting point of one architecture
    struct ArchitectureSetup
    {
        ScenarioConfig config;
        PathLossSet path_losses;
        RisPhases ris;
        StarConfig star;
        bool optimize = true;
        bool optimize_ris = true;
        StarFreeze freeze;
    };

    ArchitectureSetup make_architecture(const ScenarioConfig &cfg, Architecture a, std::uint64_t seed);

    struct ExperimentManifest
    {
        std::string scenario = "preset:default"; // file path, or preset:default / preset:desk
        SweepVariable variable = SweepVariable::N;
        std::vector<double> grid;
        std::vector<Architecture> architectures{Architecture::ris_star};
        std::uint64_t seed = 1;
        int restarts = 5;
        int workers = 1;
        long mc_blocks = 0; // 0 disables the Monte-Carlo columns
        std::string output_dir = "results";

        // Throws std::invalid_argument on an empty grid or no architectures
        void validate() const;
    };

    ExperimentManifest load_manifest(const std::string &document);
    std::string to_document(const ExperimentManifest &m);

    // Resolves preset:default, preset:desk or a scenario file path
    ScenarioConfig resolve_scenario(const std::string &reference);

    struct SweepRow
    {
        double sweep_value = 0.0;
        double de_sum_se = 0.0;
        double mc_sum_se = 0.0; // NaN when Monte Carlo is disabled
        double mc_stderr = 0.0; // NaN when Monte Carlo is disabled
        int iterations = 0;
        double wall_time_s = 0.0;
    };

    struct PointOptions
    {
        std::uint64_t seed = 1;
        int restarts = 5;
        long mc_blocks = 0;
    };

    SweepRow evaluate_point(const ScenarioConfig &cfg, Architecture a, const PointOptions &opt);

    struct SweepTable
    {
        Architecture architecture;
        std::vector<SweepRow> rows;
    };

    // One table per architecture; grid points run concurrently up to manifest.workers
    std::vector<SweepTable> run_sweep(const ExperimentManifest &manifest, const ScenarioConfig &base);

    // sweep_value,de_sum_se,mc_sum_se,mc_stderr,iterations,wall_time_s
    void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows);

    // Writes <variable>_<architecture>.csv per table plus manifest.yaml and scenario.yaml; returns the CSV paths
    std::vector<std::string> persist_sweep(const ExperimentManifest &manifest, const ScenarioConfig &base,
                                           const std::vector<SweepTable> &tables);
}

#endif
