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

// Command-line driver: parameter sweeps, single optimizations with convergence traces, and validation suites.

#include "risstar/experiment.hpp"
#include "risstar/validation.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace
{
    using namespace risstar;

    int run_validate(const std::string &suite, std::uint64_t seed)
    {
        std::vector<std::string> suites;
        if (suite == "all")
            suites = validation_suites();
        else
            suites.push_back(suite);
        bool ok = true;
        for (const auto &s : suites)
        {
            const ValidationReport r = run_validation(s, seed);
            r.print(std::cout);
            ok = ok && r.passed();
        }
        return ok ? 0 : 1;
    }

    std::string read_file(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw std::runtime_error("cannot read " + path);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"risstar: RIS / STAR-RIS assisted massive MIMO analysis and optimization"};
    app.require_subcommand(0, 1);

    std::string validate_suite;
    std::uint64_t validate_seed = 1;
    app.add_option("--validate", validate_suite, "Run a validation suite (all, gradients, projections, de-tightness, "
                                                 "covariance, phase-invariance, estimation)");
    app.add_option("--validate-seed", validate_seed, "Seed for the validation suites");

    // sweep
    auto *sweep = app.add_subcommand("sweep", "Run a parameter sweep and write one CSV per architecture");
    std::string manifest_path, scenario = "preset:default", variable = "N", out = "results";
    std::vector<double> grid;
    std::vector<std::string> archs;
    std::uint64_t seed = 1;
    int workers = 1, restarts = 5;
    long mc_blocks = 0;
    sweep->add_option("--manifest", manifest_path, "Manifest YAML; other sweep flags are ignored when given");
    sweep->add_option("--scenario", scenario, "Scenario YAML path, preset:default or preset:desk");
    sweep->add_option("--sweep", variable, "Sweep variable: N, M, SNR, N1-split");
    sweep->add_option("--grid", grid, "Sweep values")->delimiter(',');
    sweep->add_option("--arch", archs,
                      "Architectures: ris-star, double-ris, single-star, single-ris, random-phase, no-direct")
        ->delimiter(',');
    sweep->add_option("--seed", seed, "Base seed");
    sweep->add_option("--workers", workers, "Grid points evaluated concurrently")->check(CLI::PositiveNumber);
    sweep->add_option("--restarts", restarts, "Optimizer restarts per point")->check(CLI::PositiveNumber);
    sweep->add_option("--mc-blocks", mc_blocks, "Monte-Carlo blocks per point (0 disables)");
    sweep->add_option("--out", out, "Output directory");

    // optimize
    auto *optimize = app.add_subcommand("optimize", "Optimize one scenario and write the convergence trace");
    std::string opt_scenario = "preset:default", opt_arch = "ris-star", trace_path;
    std::uint64_t opt_seed = 1;
    int opt_restarts = 5;
    long opt_mc = 0;
    optimize->add_option("--scenario", opt_scenario, "Scenario YAML path, preset:default or preset:desk");
    optimize->add_option("--arch", opt_arch, "Architecture");
    optimize->add_option("--seed", opt_seed, "Seed");
    optimize->add_option("--restarts", opt_restarts, "Restarts")->check(CLI::PositiveNumber);
    optimize->add_option("--mc-blocks", opt_mc, "Monte-Carlo blocks for the final configuration (0 disables)");
    optimize->add_option("--trace", trace_path, "Write the trace of the best restart as CSV");

    // scenario
    auto *dump = app.add_subcommand("scenario", "Print a resolved scenario document");
    std::string dump_ref = "preset:default";
    dump->add_option("reference", dump_ref, "Scenario YAML path, preset:default or preset:desk");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (!validate_suite.empty())
            return run_validate(validate_suite, validate_seed);

        if (*sweep)
        {
            ExperimentManifest m;
            if (!manifest_path.empty())
                m = load_manifest(read_file(manifest_path));
            else
            {
                m.scenario = scenario;
                m.variable = parse_sweep(variable);
                m.grid = grid;
                if (!archs.empty())
                {
                    m.architectures.clear();
                    for (const auto &a : archs)
                        m.architectures.push_back(parse_architecture(a));
                }
                m.seed = seed;
                m.workers = workers;
                m.restarts = restarts;
                m.mc_blocks = mc_blocks;
                m.output_dir = out;
                m.validate();
            }
            const ScenarioConfig base = resolve_scenario(m.scenario);
            const auto tables = run_sweep(m, base);
            for (const auto &path : persist_sweep(m, base, tables))
                std::cout << path << '\n';
            return 0;
        }

        if (*optimize)
        {
            const ScenarioConfig cfg = resolve_scenario(opt_scenario);
            const ArchitectureSetup s = make_architecture(cfg, parse_architecture(opt_arch), opt_seed);
            const SumRateModel model(s.config, build_correlation_set(s.config), s.path_losses);
            std::cout << "initial sum SE: " << model.sum_se(s.ris, s.star) << '\n';
            RisPhases ris = s.ris;
            StarConfig star = s.star;
            if (s.optimize)
            {
                AoOptions ao;
                ao.restarts = opt_restarts;
                ao.seed = opt_seed;
                ao.optimize_ris = s.optimize_ris;
                ao.freeze = s.freeze;
                const AoResult r = alternating_optimize(model, ris, star, ao);
                ris = r.ris;
                star = r.star;
                std::cout << "best restart: " << r.best_restart << "  accepted steps: " << r.iterations
                          << "  termination: " << termination_label(r.trace.termination) << '\n';
                if (!trace_path.empty())
                {
                    std::ofstream f(trace_path);
                    if (!f)
                        throw std::runtime_error("cannot write " + trace_path);
                    r.trace.write_csv(f);
                }
            }
            std::cout << "optimized sum SE (DE): " << model.sum_se(ris, star) << '\n';
            if (opt_mc > 0)
            {
                MonteCarloOptions mc;
                mc.n_blocks = opt_mc;
                mc.seed = opt_seed;
                const auto r = empirical_sum_se(s.config, model.correlation(), s.path_losses, ris, star, mc);
                std::cout << "sum SE (MC): " << r.performance.sum_se << " +- " << r.stderr_se << '\n';
            }
            return 0;
        }

        if (*dump)
        {
            std::cout << to_document(resolve_scenario(dump_ref));
            return 0;
        }

        std::cout << app.help();
        return 0;
    }
    catch (const ScenarioError &e)
    {
        std::cerr << "scenario error [" << e.key() << "]: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
