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

#ifndef RISSTAR_OPTIMIZER_HPP
#define RISSTAR_OPTIMIZER_HPP

#include "risstar/gradients.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace risstar
{
    // Entry-wise v_n / |v_n|; zero entries map to 1. Entries already on the unit circle are returned unchanged.
    CVector project_unit_modulus(const CVector &v);

    // Normalizes each pair (beta_t[n], beta_r[n]) onto the unit circle, keeping signs; (0, 0) maps to (sqrt 0.5, sqrt 0.5)
    void project_amplitude_pair(RVector &beta_t, RVector &beta_r);

    // Flips (beta, theta) -> (-beta, -theta) wherever beta < 0; the coefficients beta * theta are unchanged
    void canonicalize(StarConfig &star);

    struct PgamOptions
    {
        double mu0 = 1e3;
        double kappa = 0.5;
        double tolerance = 1e-5; // stop when one accepted step improves the SE by less than this
        int max_iterations = 200;
        int max_backtracks = 60;
        double mu_floor = 1e-12;
        // On the first iteration of a fresh line-search state, raise the trial step so the largest entry of the
        // first step has unit size. Keeps the iteration meaningful when the SE (and its gradient) is small.
        bool scale_first_step = true;
    };

    // Step size carried from one iteration (and one call) to the next
    struct LineSearchState
    {
        double mu = 1e3;
        double kappa = 0.5;
        int iteration = 0;
        double objective = 0.0;

        static LineSearchState from(const PgamOptions &opt) { return {opt.mu0, opt.kappa, 0, 0.0}; }
    };

    enum class Termination
    {
        none,
        converged,      // improvement below tolerance
        zero_gradient,  // no ascent direction on the feasible set
        iteration_cap,
        step_floor,     // mu fell below the floor without an acceptable step
        backtrack_cap,
        frozen          // nothing to optimize
    };

    std::string termination_label(Termination t);

    struct TraceRow
    {
        int restart = 0;
        int outer = 0;
        std::string block; // "ris" or "star"
        int iteration = 0;
        double objective = 0.0;
        double step = 0.0;
        int backtracks = 0;
        double residual = 0.0; // feasibility residual after the step
    };

    struct OptimizationTrace
    {
        std::vector<TraceRow> rows;
        Termination termination = Termination::none;
        std::uint64_t seed = 0;
        int restart = 0;

        void append(const OptimizationTrace &other);
        // restart,outer,block,iteration,objective,step,backtracks,residual
        void write_csv(std::ostream &os) const;
    };

    // Which STAR-RIS blocks move
    struct StarFreeze
    {
        bool theta = false;
        bool beta = false;
    };

    // Algorithm for RIS 1 with the STAR-RIS fixed. Returns the final phases; rows are appended to trace.
    RisPhases pgam_ris(const SumRateModel &model, const RisPhases &init, const StarConfig &star,
                       const PgamOptions &opt, LineSearchState &ls, OptimizationTrace &trace);

    // Joint phase and amplitude steps on the STAR-RIS with RIS 1 fixed
    StarConfig pgam_star(const SumRateModel &model, const RisPhases &ris, const StarConfig &init,
                         const PgamOptions &opt, LineSearchState &ls, OptimizationTrace &trace,
                         StarFreeze freeze = {});

    struct AoOptions
    {
        PgamOptions pgam;
        double outer_tolerance = 1e-4;
        int max_outer = 20;
        int restarts = 5;
        std::uint64_t seed = 1;
        int workers = 1;
        bool optimize_ris = true;
        StarFreeze freeze;
    };

    struct AoResult
    {
        RisPhases ris;
        StarConfig star;
        double sum_se = 0.0;
        int best_restart = 0;
        int iterations = 0;             // accepted PGAM steps of the best restart
        std::vector<double> restart_se; // final SE per restart
        OptimizationTrace trace;        // trace of the best restart
    };

    // Alternates pgam_ris and pgam_star from several starting points and keeps the best. Restart 0 starts from
    // (ris, star); the others draw uniform phases (and sqrt 0.5 amplitudes unless frozen) from seed_seq{seed, r}.
    AoResult alternating_optimize(const SumRateModel &model, const RisPhases &ris, const StarConfig &star,
                                  const AoOptions &opt);
}

#endif
