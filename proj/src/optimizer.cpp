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

#include "risstar/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace risstar
{
    CVector project_unit_modulus(const CVector &v)
    {
        constexpr double keep = 4.0 * std::numeric_limits<double>::epsilon();
        CVector out(v.size());
        for (Eigen::Index n = 0; n < v.size(); ++n)
        {
            const double m = std::abs(v(n));
            if (m == 0.0)
                out(n) = 1.0;
            else if (std::abs(m - 1.0) <= keep)
                out(n) = v(n);
            else
                out(n) = v(n) / m;
        }
        return out;
    }

    void project_amplitude_pair(RVector &beta_t, RVector &beta_r)
    {
        if (beta_t.size() != beta_r.size())
            throw std::invalid_argument("project_amplitude_pair: size mismatch");
        const double half = std::sqrt(0.5);
        for (Eigen::Index n = 0; n < beta_t.size(); ++n)
        {
            const double r = std::hypot(beta_t(n), beta_r(n));
            if (r == 0.0)
            {
                beta_t(n) = beta_r(n) = half;
                continue;
            }
            beta_t(n) /= r;
            beta_r(n) /= r;
        }
    }

    void canonicalize(StarConfig &star)
    {
        for (Eigen::Index n = 0; n < star.beta_t.size(); ++n)
        {
            if (star.beta_t(n) < 0.0)
            {
                star.beta_t(n) = -star.beta_t(n);
                star.theta_t(n) = -star.theta_t(n);
            }
            if (star.beta_r(n) < 0.0)
            {
                star.beta_r(n) = -star.beta_r(n);
                star.theta_r(n) = -star.theta_r(n);
            }
        }
    }

    std::string termination_label(Termination t)
    {
        switch (t)
        {
        case Termination::none:
            return "none";
        case Termination::converged:
            return "converged";
        case Termination::zero_gradient:
            return "zero_gradient";
        case Termination::iteration_cap:
            return "iteration_cap";
        case Termination::step_floor:
            return "step_floor";
        case Termination::backtrack_cap:
            return "backtrack_cap";
        case Termination::frozen:
            return "frozen";
        }
        return "unknown";
    }

    void OptimizationTrace::append(const OptimizationTrace &other)
    {
        rows.insert(rows.end(), other.rows.begin(), other.rows.end());
        termination = other.termination;
    }

    void OptimizationTrace::write_csv(std::ostream &os) const
    {
        const auto old = os.precision(17);
        os << "restart,outer,block,iteration,objective,step,backtracks,residual\n";
        for (const auto &r : rows)
            os << r.restart << ',' << r.outer << ',' << r.block << ',' << r.iteration << ',' << r.objective << ','
               << r.step << ',' << r.backtracks << ',' << r.residual << '\n';
        os.precision(old);
    }

    namespace
    {
        double inner(const CVector &a, const CVector &b) { return 2.0 * std::real(a.dot(b)); }

        bool negligible(double tangent_norm, double gradient_norm)
        {
            return tangent_norm == 0.0 || tangent_norm <= 1e-12 * gradient_norm;
        }

        // Generic backtracking loop shared by both blocks. step(mu) returns the candidate, its displacement
        // inner product with the ascent direction, and its squared displacement norm.
        template <typename State, typename Step, typename Evaluate>
        bool backtrack(double f, LineSearchState &ls, const PgamOptions &opt, Step step, Evaluate evaluate,
                       State &accepted, double &f_new, int &backtracks)
        {
            double mu = ls.mu;
            backtracks = 0;
            while (true)
            {
                double linear = 0.0, displacement = 0.0;
                State candidate = step(mu, linear, displacement);
                const double value = evaluate(candidate);
                const double model = f + linear - displacement / mu;
                if (std::isfinite(value) && value >= model && value >= f)
                {
                    accepted = std::move(candidate);
                    f_new = value;
                    ls.mu = mu;
                    return true;
                }
                mu *= ls.kappa;
                ++backtracks;
                if (backtracks > opt.max_backtracks || mu < opt.mu_floor)
                {
                    ls.mu = std::max(mu, opt.mu_floor);
                    return false;
                }
            }
        }

        void scale_trial(LineSearchState &ls, const PgamOptions &opt, double largest)
        {
            if (opt.scale_first_step && ls.iteration == 0 && largest > 0.0)
                ls.mu = std::max(ls.mu, 1.0 / largest);
        }

        Termination failure(int backtracks, const PgamOptions &opt)
        {
            return backtracks > opt.max_backtracks ? Termination::backtrack_cap : Termination::step_floor;
        }
    }

    RisPhases pgam_ris(const SumRateModel &model, const RisPhases &init, const StarConfig &star,
                       const PgamOptions &opt, LineSearchState &ls, OptimizationTrace &trace)
    {
        RisPhases ris = init;
        if (ris.size() == 0)
        {
            trace.termination = Termination::frozen;
            return ris;
        }
        GradientWorkspace ws = prepare_gradients(model, ris, star);
        double f = ws.value.sum_se;
        ls.objective = f;
        trace.termination = Termination::iteration_cap;

        for (int n = 1; n <= opt.max_iterations; ++n)
        {
            const CVector g = grad_ris(model, ws, ris, star);
            const CVector t = tangent_component(ris.theta_bar, g);
            if (negligible(t.norm(), g.norm()))
            {
                trace.termination = Termination::zero_gradient;
                break;
            }
            scale_trial(ls, opt, t.cwiseAbs().maxCoeff());

            auto step = [&](double mu, double &linear, double &displacement)
            {
                RisPhases c{project_unit_modulus(ris.theta_bar + mu * t)};
                const CVector d = c.theta_bar - ris.theta_bar;
                linear = inner(t, d);
                displacement = d.squaredNorm();
                return c;
            };
            auto evaluate = [&](const RisPhases &c) { return model.sum_se(c, star); };

            RisPhases next;
            double f_new = f;
            int backtracks = 0;
            if (!backtrack(f, ls, opt, step, evaluate, next, f_new, backtracks))
            {
                trace.termination = failure(backtracks, opt);
                break;
            }
            const double gain = f_new - f;
            ris = std::move(next);
            f = f_new;
            ls.objective = f;
            ++ls.iteration;
            trace.rows.push_back({trace.restart, 0, "ris", n, f, ls.mu, backtracks, feasibility_residual(ris, star)});
            if (gain < opt.tolerance)
            {
                trace.termination = Termination::converged;
                break;
            }
            ws = prepare_gradients(model, ris, star);
        }
        return ris;
    }

    StarConfig pgam_star(const SumRateModel &model, const RisPhases &ris, const StarConfig &init,
                         const PgamOptions &opt, LineSearchState &ls, OptimizationTrace &trace, StarFreeze freeze)
    {
        StarConfig star = init;
        if (star.size() == 0 || (freeze.theta && freeze.beta))
        {
            trace.termination = Termination::frozen;
            return star;
        }
        GradientWorkspace ws = prepare_gradients(model, ris, star);
        double f = ws.value.sum_se;
        ls.objective = f;
        trace.termination = Termination::iteration_cap;
        const Eigen::Index N = star.size();

        for (int n = 1; n <= opt.max_iterations; ++n)
        {
            const StarGradient g = grad_star(model, ws, ris, star);
            CVector tt = CVector::Zero(N), tr = CVector::Zero(N);
            RVector gt = RVector::Zero(N), gr = RVector::Zero(N);
            double full = 0.0;
            if (!freeze.theta)
            {
                tt = tangent_component(star.theta_t, g.theta_t);
                tr = tangent_component(star.theta_r, g.theta_r);
                full += g.theta_t.squaredNorm() + g.theta_r.squaredNorm();
            }
            if (!freeze.beta)
            {
                gt = g.beta_t;
                gr = g.beta_r;
                full += gt.squaredNorm() + gr.squaredNorm();
            }
            const double ascent = std::sqrt(tt.squaredNorm() + tr.squaredNorm() + gt.squaredNorm() + gr.squaredNorm());
            if (negligible(ascent, std::sqrt(full)))
            {
                trace.termination = Termination::zero_gradient;
                break;
            }
            scale_trial(ls, opt,
                        std::max({tt.cwiseAbs().maxCoeff(), tr.cwiseAbs().maxCoeff(), gt.cwiseAbs().maxCoeff(),
                                  gr.cwiseAbs().maxCoeff()}));

            auto step = [&](double mu, double &linear, double &displacement)
            {
                StarConfig c = star;
                if (!freeze.theta)
                {
                    c.theta_t = project_unit_modulus(star.theta_t + mu * tt);
                    c.theta_r = project_unit_modulus(star.theta_r + mu * tr);
                }
                if (!freeze.beta)
                {
                    c.beta_t = star.beta_t + mu * gt;
                    c.beta_r = star.beta_r + mu * gr;
                    project_amplitude_pair(c.beta_t, c.beta_r);
                }
                const CVector dt = c.theta_t - star.theta_t, dr = c.theta_r - star.theta_r;
                const RVector bt = c.beta_t - star.beta_t, br = c.beta_r - star.beta_r;
                linear = inner(tt, dt) + inner(tr, dr) + gt.dot(bt) + gr.dot(br);
                displacement = dt.squaredNorm() + dr.squaredNorm() + bt.squaredNorm() + br.squaredNorm();
                return c;
            };
            auto evaluate = [&](const StarConfig &c) { return model.sum_se(ris, c); };

            StarConfig next;
            double f_new = f;
            int backtracks = 0;
            if (!backtrack(f, ls, opt, step, evaluate, next, f_new, backtracks))
            {
                trace.termination = failure(backtracks, opt);
                break;
            }
            canonicalize(next);
            const double gain = f_new - f;
            star = std::move(next);
            f = f_new;
            ls.objective = f;
            ++ls.iteration;
            trace.rows.push_back({trace.restart, 0, "star", n, f, ls.mu, backtracks, feasibility_residual(ris, star)});
            if (gain < opt.tolerance)
            {
                trace.termination = Termination::converged;
                break;
            }
            ws = prepare_gradients(model, ris, star);
        }
        return star;
    }

    namespace
    {
        struct RestartOutcome
        {
            RisPhases ris;
            StarConfig star;
            double sum_se = 0.0;
            int iterations = 0;
            OptimizationTrace trace;
        };

        CVector random_phases(Eigen::Index n, std::mt19937_64 &rng)
        {
            std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
            CVector v(n);
            for (Eigen::Index i = 0; i < n; ++i)
                v(i) = std::polar(1.0, angle(rng));
            return v;
        }

        RestartOutcome run_restart(const SumRateModel &model, RisPhases ris, StarConfig star, const AoOptions &opt,
                                   int restart)
        {
            RestartOutcome out;
            out.trace.seed = opt.seed;
            out.trace.restart = restart;
            if (restart > 0)
            {
                std::seed_seq seq{opt.seed, std::uint64_t(restart)};
                std::mt19937_64 rng(seq);
                if (opt.optimize_ris)
                    ris.theta_bar = random_phases(ris.size(), rng);
                if (!opt.freeze.theta)
                {
                    star.theta_t = random_phases(star.size(), rng);
                    star.theta_r = random_phases(star.size(), rng);
                }
                if (!opt.freeze.beta)
                {
                    star.beta_t = RVector::Constant(star.size(), std::sqrt(0.5));
                    star.beta_r = star.beta_t;
                }
            }

            LineSearchState ls_ris = LineSearchState::from(opt.pgam);
            LineSearchState ls_star = LineSearchState::from(opt.pgam);
            double f = model.sum_se(ris, star);
            for (int outer = 1; outer <= opt.max_outer; ++outer)
            {
                const double before = f;
                if (opt.optimize_ris && ris.size() > 0)
                {
                    OptimizationTrace t;
                    t.restart = restart;
                    ris = pgam_ris(model, ris, star, opt.pgam, ls_ris, t);
                    for (auto &row : t.rows)
                        row.outer = outer;
                    out.iterations += int(t.rows.size());
                    out.trace.append(t);
                }
                {
                    OptimizationTrace t;
                    t.restart = restart;
                    star = pgam_star(model, ris, star, opt.pgam, ls_star, t, opt.freeze);
                    for (auto &row : t.rows)
                        row.outer = outer;
                    out.iterations += int(t.rows.size());
                    out.trace.append(t);
                }
                f = model.sum_se(ris, star);
                if (f - before < opt.outer_tolerance)
                    break;
            }
            out.ris = std::move(ris);
            out.star = std::move(star);
            out.sum_se = f;
            return out;
        }
    }

    AoResult alternating_optimize(const SumRateModel &model, const RisPhases &ris, const StarConfig &star,
                                  const AoOptions &opt)
    {
        if (opt.restarts < 1)
            throw std::invalid_argument("alternating_optimize: restarts must be >= 1");
        if (opt.max_outer < 1)
            throw std::invalid_argument("alternating_optimize: max_outer must be >= 1");
        if (ris.size() != model.config().N1() || star.size() != model.config().N2())
            throw std::invalid_argument("alternating_optimize: surface sizes do not match the scenario");

        std::vector<RestartOutcome> outcomes;
        outcomes.reserve(std::size_t(opt.restarts));
        const int wave = std::max(1, opt.workers);
        for (int start = 0; start < opt.restarts; start += wave)
        {
            const int stop = std::min(opt.restarts, start + wave);
            if (wave == 1)
            {
                outcomes.push_back(run_restart(model, ris, star, opt, start));
                continue;
            }
            std::vector<std::future<RestartOutcome>> futures;
            for (int r = start; r < stop; ++r)
                futures.push_back(std::async(std::launch::async, run_restart, std::cref(model), ris, star,
                                             std::cref(opt), r));
            for (auto &fu : futures)
                outcomes.push_back(fu.get());
        }

        AoResult result;
        std::size_t best = 0;
        for (std::size_t r = 0; r < outcomes.size(); ++r)
        {
            result.restart_se.push_back(outcomes[r].sum_se);
            if (outcomes[r].sum_se > outcomes[best].sum_se)
                best = r;
        }
        auto &b = outcomes[best];
        result.ris = std::move(b.ris);
        result.star = std::move(b.star);
        result.sum_se = b.sum_se;
        result.best_restart = int(best);
        result.iterations = b.iterations;
        result.trace = std::move(b.trace);
        return result;
    }
}
