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

#include "risstar/experiment.hpp"
#include "risstar/montecarlo.hpp"

#include <yaml-cpp/yaml.h>

#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace risstar
{
    namespace
    {
        constexpr std::array<std::pair<Architecture, const char *>, 6> architecture_names{{
            {Architecture::ris_star, "ris-star"},
            {Architecture::double_ris, "double-ris"},
            {Architecture::single_star, "single-star"},
            {Architecture::single_ris, "single-ris"},
            {Architecture::random_phase, "random-phase"},
            {Architecture::no_direct, "no-direct"},
        }};

        constexpr std::array<std::pair<SweepVariable, const char *>, 4> sweep_names{{
            {SweepVariable::N, "N"},
            {SweepVariable::M, "M"},
            {SweepVariable::snr, "SNR"},
            {SweepVariable::n1_split, "N1-split"},
        }};

        int integral(double v, const char *what)
        {
            if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 1e9)
                throw std::invalid_argument(std::string("apply_sweep: ") + what + " must be an integer");
            return int(v);
        }

        // Independent 64-bit seed for (seed, a, b)
        std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
        {
            std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(a), std::uint32_t(b)};
            std::array<std::uint32_t, 2> out{};
            seq.generate(out.begin(), out.end());
            return (std::uint64_t(out[0]) << 32) | out[1];
        }
    }

    std::string architecture_label(Architecture a)
    {
        for (const auto &[arch, name] : architecture_names)
            if (arch == a)
                return name;
        throw std::invalid_argument("architecture_label: unknown architecture");
    }

    Architecture parse_architecture(const std::string &label)
    {
        for (const auto &[arch, name] : architecture_names)
            if (label == name)
                return arch;
        throw std::invalid_argument("unknown architecture '" + label + "'");
    }

    std::string sweep_label(SweepVariable v)
    {
        for (const auto &[var, name] : sweep_names)
            if (var == v)
                return name;
        throw std::invalid_argument("sweep_label: unknown sweep variable");
    }

    SweepVariable parse_sweep(const std::string &label)
    {
        for (const auto &[var, name] : sweep_names)
            if (label == name)
                return var;
        throw std::invalid_argument("unknown sweep variable '" + label + "'");
    }

    ScenarioConfig apply_sweep(const ScenarioConfig &base, SweepVariable v, double value)
    {
        ScenarioConfig cfg = base;
        switch (v)
        {
        case SweepVariable::N:
        {
            const int N = integral(value, "N");
            if (N < 2 || N % 2 != 0)
                throw std::invalid_argument("apply_sweep: N must be even and >= 2");
            cfg.ris1 = grid_for(N / 2);
            cfg.star = grid_for(N / 2);
            break;
        }
        case SweepVariable::M:
            cfg.M = integral(value, "M");
            break;
        case SweepVariable::snr:
            if (!std::isfinite(value))
                throw std::invalid_argument("apply_sweep: SNR must be finite");
            cfg.rho = cfg.sigma2() * std::pow(10.0, value / 10.0);
            break;
        case SweepVariable::n1_split:
        {
            const int N1 = integral(value, "N1");
            const int N = base.N();
            if (N1 < 0 || N1 >= N)
                throw std::invalid_argument("apply_sweep: N1 must lie in [0, N)");
            cfg.ris1 = grid_for(N1);
            cfg.star = grid_for(N - N1);
            break;
        }
        }
        cfg.validate();
        return cfg;
    }

    ArchitectureSetup make_architecture(const ScenarioConfig &cfg, Architecture a, std::uint64_t seed)
    {
        ArchitectureSetup s;
        s.config = cfg;
        if (a == Architecture::single_star || a == Architecture::single_ris)
        {
            s.config.ris1 = {0, 0};
            s.config.star = grid_for(cfg.N());
        }
        s.config.validate();
        s.path_losses = compute_path_losses(s.config);
        s.ris = RisPhases::unit(s.config.N1());
        s.star = StarConfig::uniform(s.config.N2());
        s.optimize_ris = s.config.N1() > 0;
        const int N2 = s.config.N2();

        switch (a)
        {
        case Architecture::ris_star:
        case Architecture::single_star:
            break;
        case Architecture::double_ris:
            for (int n = 0; n < N2; ++n)
            {
                const bool transmit = n < N2 / 2;
                s.star.beta_t(n) = transmit ? 1.0 : 0.0;
                s.star.beta_r(n) = transmit ? 0.0 : 1.0;
            }
            s.freeze.beta = true;
            break;
        case Architecture::single_ris:
            s.star.beta_t.setZero();
            s.star.beta_r.setOnes();
            s.freeze.beta = true;
            break;
        case Architecture::random_phase:
        {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
            for (Eigen::Index n = 0; n < s.ris.theta_bar.size(); ++n)
                s.ris.theta_bar(n) = std::polar(1.0, angle(rng));
            for (int n = 0; n < N2; ++n)
            {
                s.star.theta_t(n) = std::polar(1.0, angle(rng));
                s.star.theta_r(n) = std::polar(1.0, angle(rng));
            }
            s.optimize = false;
            break;
        }
        case Architecture::no_direct:
            s.path_losses.beta_bar_k.setZero();
            s.path_losses.refresh_products();
            break;
        }
        return s;
    }

    void ExperimentManifest::validate() const
    {
        if (grid.empty())
            throw std::invalid_argument("manifest: sweep grid is empty");
        if (architectures.empty())
            throw std::invalid_argument("manifest: no architectures");
        if (restarts < 1)
            throw std::invalid_argument("manifest: restarts must be >= 1");
        if (workers < 1)
            throw std::invalid_argument("manifest: workers must be >= 1");
        if (mc_blocks != 0 && mc_blocks < 100)
            throw std::invalid_argument("manifest: mc_blocks must be 0 or >= 100");
        if (output_dir.empty())
            throw std::invalid_argument("manifest: output directory is empty");
    }

    ExperimentManifest load_manifest(const std::string &document)
    {
        YAML::Node root;
        try
        {
            root = YAML::Load(document);
        }
        catch (const YAML::Exception &e)
        {
            throw std::invalid_argument(std::string("manifest: parse error: ") + e.what());
        }
        if (!root.IsMap())
            throw std::invalid_argument("manifest: document must be a mapping");

        static const std::set<std::string> known{"scenario", "sweep",   "architectures", "seed",
                                                 "restarts", "workers", "mc_blocks",     "output"};
        for (const auto &kv : root)
        {
            const auto key = kv.first.as<std::string>();
            if (!known.count(key))
                throw std::invalid_argument("manifest: unknown key '" + key + "'");
        }

        ExperimentManifest m;
        try
        {
            if (root["scenario"])
                m.scenario = root["scenario"].as<std::string>();
            const auto sweep = root["sweep"];
            if (!sweep || !sweep.IsMap() || !sweep["variable"] || !sweep["values"])
                throw std::invalid_argument("manifest: sweep.variable and sweep.values are required");
            m.variable = parse_sweep(sweep["variable"].as<std::string>());
            m.grid = sweep["values"].as<std::vector<double>>();
            if (root["architectures"])
            {
                m.architectures.clear();
                for (const auto &a : root["architectures"].as<std::vector<std::string>>())
                    m.architectures.push_back(parse_architecture(a));
            }
            if (root["seed"])
                m.seed = root["seed"].as<std::uint64_t>();
            if (root["restarts"])
                m.restarts = root["restarts"].as<int>();
            if (root["workers"])
                m.workers = root["workers"].as<int>();
            if (root["mc_blocks"])
                m.mc_blocks = root["mc_blocks"].as<long>();
            if (root["output"])
                m.output_dir = root["output"].as<std::string>();
        }
        catch (const YAML::Exception &e)
        {
            throw std::invalid_argument(std::string("manifest: malformed value: ") + e.what());
        }
        m.validate();
        return m;
    }

    std::string to_document(const ExperimentManifest &m)
    {
        YAML::Emitter out;
        out.SetDoublePrecision(17);
        out << YAML::BeginMap;
        out << YAML::Key << "scenario" << YAML::Value << m.scenario;
        out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "variable" << YAML::Value << sweep_label(m.variable);
        out << YAML::Key << "values" << YAML::Value << YAML::Flow << m.grid;
        out << YAML::EndMap;
        out << YAML::Key << "architectures" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (auto a : m.architectures)
            out << architecture_label(a);
        out << YAML::EndSeq;
        out << YAML::Key << "seed" << YAML::Value << m.seed;
        out << YAML::Key << "restarts" << YAML::Value << m.restarts;
        out << YAML::Key << "workers" << YAML::Value << m.workers;
        out << YAML::Key << "mc_blocks" << YAML::Value << m.mc_blocks;
        out << YAML::Key << "output" << YAML::Value << m.output_dir;
        out << YAML::EndMap;
        return std::string(out.c_str()) + "\n";
    }

    ScenarioConfig resolve_scenario(const std::string &reference)
    {
        if (reference == "preset:default")
            return preset_scenario();
        if (reference == "preset:desk")
            return desk_scenario();
        if (reference.rfind("preset:", 0) == 0)
            throw std::invalid_argument("unknown preset '" + reference + "'");
        return load_scenario_file(reference);
    }

    SweepRow evaluate_point(const ScenarioConfig &cfg, Architecture a, const PointOptions &opt)
    {
        const auto start = std::chrono::steady_clock::now();
        const ArchitectureSetup s = make_architecture(cfg, a, opt.seed);
        const SumRateModel model(s.config, build_correlation_set(s.config), s.path_losses);

        RisPhases ris = s.ris;
        StarConfig star = s.star;
        SweepRow row;
        if (s.optimize)
        {
            AoOptions ao;
            ao.restarts = opt.restarts;
            ao.seed = opt.seed;
            ao.optimize_ris = s.optimize_ris;
            ao.freeze = s.freeze;
            AoResult r = alternating_optimize(model, ris, star, ao);
            ris = std::move(r.ris);
            star = std::move(r.star);
            row.iterations = r.iterations;
        }
        row.de_sum_se = model.sum_se(ris, star);
        row.mc_sum_se = row.mc_stderr = std::numeric_limits<double>::quiet_NaN();
        if (opt.mc_blocks > 0)
        {
            MonteCarloOptions mc;
            mc.n_blocks = opt.mc_blocks;
            mc.seed = derive_seed(opt.seed, 0x6d63, 0);
            const auto r = empirical_sum_se(s.config, model.correlation(), s.path_losses, ris, star, mc);
            row.mc_sum_se = r.performance.sum_se;
            row.mc_stderr = r.stderr_se;
        }
        row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return row;
    }

    std::vector<SweepTable> run_sweep(const ExperimentManifest &manifest, const ScenarioConfig &base)
    {
        manifest.validate();
        struct Job
        {
            std::size_t table, point;
        };
        std::vector<SweepTable> tables;
        std::vector<Job> jobs;
        std::vector<ScenarioConfig> points;
        for (double v : manifest.grid)
            points.push_back(apply_sweep(base, manifest.variable, v));
        for (std::size_t t = 0; t < manifest.architectures.size(); ++t)
        {
            tables.push_back({manifest.architectures[t], std::vector<SweepRow>(manifest.grid.size())});
            for (std::size_t p = 0; p < points.size(); ++p)
                jobs.push_back({t, p});
        }

        auto run = [&](const Job &j)
        {
            PointOptions opt;
            opt.seed = derive_seed(manifest.seed, std::uint64_t(tables[j.table].architecture), j.point);
            opt.restarts = manifest.restarts;
            opt.mc_blocks = manifest.mc_blocks;
            SweepRow row = evaluate_point(points[j.point], tables[j.table].architecture, opt);
            row.sweep_value = manifest.grid[j.point];
            return row;
        };

        const std::size_t wave = std::size_t(manifest.workers);
        for (std::size_t start = 0; start < jobs.size(); start += wave)
        {
            const std::size_t stop = std::min(jobs.size(), start + wave);
            if (wave == 1)
            {
                tables[jobs[start].table].rows[jobs[start].point] = run(jobs[start]);
                continue;
            }
            std::vector<std::future<SweepRow>> futures;
            for (std::size_t i = start; i < stop; ++i)
                futures.push_back(std::async(std::launch::async, run, jobs[i]));
            for (std::size_t i = start; i < stop; ++i)
                tables[jobs[i].table].rows[jobs[i].point] = futures[i - start].get();
        }
        return tables;
    }

    void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows)
    {
        const auto old = os.precision(17);
        os << "sweep_value,de_sum_se,mc_sum_se,mc_stderr,iterations,wall_time_s\n";
        auto field = [&os](double v)
        {
            if (std::isnan(v))
                os << "nan";
            else
                os << v;
        };
        for (const auto &r : rows)
        {
            field(r.sweep_value);
            os << ',';
            field(r.de_sum_se);
            os << ',';
            field(r.mc_sum_se);
            os << ',';
            field(r.mc_stderr);
            os << ',' << r.iterations << ',';
            field(r.wall_time_s);
            os << '\n';
        }
        os.precision(old);
    }

    std::vector<std::string> persist_sweep(const ExperimentManifest &manifest, const ScenarioConfig &base,
                                           const std::vector<SweepTable> &tables)
    {
        namespace fs = std::filesystem;
        const fs::path dir(manifest.output_dir);
        fs::create_directories(dir);
        auto write = [](const fs::path &p, const std::string &text)
        {
            std::ofstream f(p);
            if (!f)
                throw std::runtime_error("cannot write " + p.string());
            f << text;
        };
        write(dir / "manifest.yaml", to_document(manifest));
        write(dir / "scenario.yaml", to_document(base));

        std::vector<std::string> paths;
        for (const auto &t : tables)
        {
            const fs::path p = dir / (sweep_label(manifest.variable) + "_" + architecture_label(t.architecture) + ".csv");
            std::ostringstream csv;
            write_sweep_csv(csv, t.rows);
            write(p, csv.str());
            paths.push_back(p.string());
        }
        return paths;
    }
}
