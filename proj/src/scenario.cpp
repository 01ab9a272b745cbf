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

#include "risstar/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace risstar
{
    double distance(const Position &a, const Position &b)
    {
        const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }

    int ScenarioConfig::count(Region w) const
    {
        int n = 0;
        for (auto r : regions)
            n += (r == w) ? 1 : 0;
        return n;
    }

    double ScenarioConfig::sigma2() const
    {
        return std::pow(10.0, (noise_psd_dbm_per_hz + 10.0 * std::log10(bandwidth_hz)) / 10.0);
    }

    double ScenarioConfig::pilot_power_mw() const
    {
        return pilot_power ? *pilot_power : rho / double(K);
    }

    double ScenarioConfig::prelog() const
    {
        return double(tau_c - tau) / double(tau_c);
    }

    std::vector<Position> ScenarioConfig::resolved_ue_positions() const
    {
        if (!ue_positions.empty())
            return ue_positions;

        // Two segments of length d0 centred on the STAR-RIS, t side at +d0/2, r side at -d0/2
        std::vector<Position> out(static_cast<std::size_t>(K));
        const double x0 = star_position[0] - 0.5 * ue_line_length;
        for (Region w : {Region::transmission, Region::reflection})
        {
            const int n = count(w);
            const double y = star_position[1] + (w == Region::transmission ? 0.5 : -0.5) * ue_line_length;
            int j = 0;
            for (int k = 0; k < K; ++k)
            {
                if (regions[std::size_t(k)] != w)
                    continue;
                const double x = (n == 1) ? star_position[0] : x0 + ue_line_length * double(j) / double(n - 1);
                out[std::size_t(k)] = {x, y, ue_height};
                ++j;
            }
        }
        return out;
    }

    void ScenarioConfig::validate() const
    {
        auto require = [](bool ok, const char *key, const std::string &msg)
        {
            if (!ok)
                throw ScenarioError(key, msg);
        };
        auto finite_positive = [](double v)
        { return std::isfinite(v) && v > 0.0; };

        require(M >= 1, "system.M", "must be a positive integer");
        require(K >= 1, "system.K", "must be a positive integer");
        require(int(regions.size()) == K, "system.regions", "length must equal K");
        require(ris1.horizontal >= 0 && ris1.vertical >= 0, "surfaces.ris1", "grid factors must be non-negative");
        require((ris1.horizontal == 0) == (ris1.vertical == 0), "surfaces.ris1", "N_H and N_V must both be zero or both positive");
        require(star.horizontal >= 1 && star.vertical >= 1, "surfaces.star", "grid factors must be positive");
        require(tau_c >= 1, "system.tau_c", "must be a positive integer");
        require(tau >= 0, "system.tau", "must be non-negative");
        require(tau < tau_c, "system.tau", "training length must be < coherence block");
        require(tau == 0 || tau >= K, "system.tau", "orthogonal pilots need tau >= K");
        require(finite_positive(rho), "powers.rho", "must be > 0");
        require(!pilot_power || finite_positive(*pilot_power), "powers.pilot_power", "must be > 0");
        require(finite_positive(bandwidth_hz), "powers.bandwidth_Hz", "must be > 0");
        require(std::isfinite(noise_psd_dbm_per_hz), "powers.noise_psd_dBm_per_Hz", "must be finite");
        require(finite_positive(wavelength), "surfaces.wavelength", "must be > 0");
        require(finite_positive(element_width), "surfaces.element_width", "must be > 0");
        require(finite_positive(element_height), "surfaces.element_height", "must be > 0");
        require(finite_positive(element_area), "pathloss.element_area", "must be > 0");
        require(std::isfinite(penetration_loss_direct_db) && penetration_loss_direct_db >= 0.0,
                "pathloss.penetration_loss_direct_dB", "must be >= 0");
        require(finite_positive(ue_line_length), "geometry.ue_line_d0", "must be > 0");
        require(ue_positions.empty() || int(ue_positions.size()) == K, "geometry.ues", "length must equal K");
        require(bs_correlation != BsCorrelationModel::exponential || std::abs(bs_coefficient) < 1.0,
                "bs_correlation.coefficient", "|coefficient| must be < 1");
        for (double a : {exponents.bs_ris1, exponents.ris1_star, exponents.star_ue,
                         exponents.bs_star, exponents.ris1_ue, exponents.bs_ue})
            require(std::isfinite(a), "pathloss.exponents", "must be finite");
    }

    void PathLossSet::refresh_products()
    {
        beta_hat_k = beta_t1 * beta_12 * beta_2k;
        beta_hat_1k = beta_t1 * beta_1k;
        beta_hat_2k = beta_t2 * beta_2k;
    }

    PathLossSet compute_path_losses(const ScenarioConfig &cfg)
    {
        const double A = cfg.element_area;
        auto gain = [A](const Position &a, const Position &b, double alpha, const char *link)
        {
            const double d = distance(a, b);
            if (!(d > 0.0))
                throw std::invalid_argument(std::string("zero distance on link ") + link);
            return A * std::pow(d, -alpha);
        };

        PathLossSet pl;
        pl.beta_t1 = gain(cfg.bs, cfg.ris1_position, cfg.exponents.bs_ris1, "BS-RIS1");
        pl.beta_12 = gain(cfg.ris1_position, cfg.star_position, cfg.exponents.ris1_star, "RIS1-STAR");
        pl.beta_t2 = gain(cfg.bs, cfg.star_position, cfg.exponents.bs_star, "BS-STAR");

        const auto ues = cfg.resolved_ue_positions();
        const double penetration = std::pow(10.0, -cfg.penetration_loss_direct_db / 10.0);
        pl.beta_1k.resize(cfg.K);
        pl.beta_2k.resize(cfg.K);
        pl.beta_bar_k.resize(cfg.K);
        for (int k = 0; k < cfg.K; ++k)
        {
            const auto &u = ues[std::size_t(k)];
            pl.beta_1k(k) = gain(cfg.ris1_position, u, cfg.exponents.ris1_ue, "RIS1-UE");
            pl.beta_2k(k) = gain(cfg.star_position, u, cfg.exponents.star_ue, "STAR-UE");
            pl.beta_bar_k(k) = gain(cfg.bs, u, cfg.exponents.bs_ue, "BS-UE") * penetration;
        }
        pl.refresh_products();
        return pl;
    }

    SurfaceGrid grid_for(int n)
    {
        if (n <= 0)
            return {0, 0};
        int v = int(std::floor(std::sqrt(double(n))));
        while (n % v != 0)
            --v;
        return {n / v, v};
    }

    // ---------- document I/O ----------

    namespace
    {
        YAML::Node child(const YAML::Node &parent, const std::string &path, const std::string &key)
        {
            const std::string full = path.empty() ? key : path + "." + key;
            if (!parent.IsMap() || !parent[key])
                throw ScenarioError(full, "missing key");
            return parent[key];
        }

        template <typename T>
        T scalar(const YAML::Node &parent, const std::string &path, const std::string &key)
        {
            const std::string full = path.empty() ? key : path + "." + key;
            auto node = child(parent, path, key);
            try
            {
                return node.as<T>();
            }
            catch (const YAML::Exception &)
            {
                throw ScenarioError(full, "malformed value");
            }
        }

        template <typename T>
        T scalar_or(const YAML::Node &parent, const std::string &path, const std::string &key, T fallback)
        {
            if (!parent.IsMap() || !parent[key])
                return fallback;
            return scalar<T>(parent, path, key);
        }

        Position position(const YAML::Node &node, const std::string &key)
        {
            if (!node.IsSequence() || node.size() != 3)
                throw ScenarioError(key, "expected [x, y, z]");
            try
            {
                return {node[0].as<double>(), node[1].as<double>(), node[2].as<double>()};
            }
            catch (const YAML::Exception &)
            {
                throw ScenarioError(key, "malformed coordinate");
            }
        }

        SurfaceGrid grid(const YAML::Node &parent, const std::string &path, const std::string &key)
        {
            auto node = child(parent, path, key);
            const std::string full = path + "." + key;
            return {scalar<int>(node, full, "N_H"), scalar<int>(node, full, "N_V")};
        }

        template <typename E>
        E enum_value(const std::string &text, const std::string &key,
                     std::initializer_list<std::pair<const char *, E>> table)
        {
            for (const auto &[name, value] : table)
                if (text == name)
                    return value;
            throw ScenarioError(key, "unknown value '" + text + "'");
        }

        const char *layout_name(ElementLayout l) { return l == ElementLayout::vertical_stride ? "vertical_stride" : "row_major"; }
        const char *scale_name(CorrelationScale s) { return s == CorrelationScale::unit ? "unit" : "area"; }
        const char *surface_model_name(SurfaceCorrelationModel m) { return m == SurfaceCorrelationModel::sinc ? "sinc" : "identity"; }
        const char *bs_model_name(BsCorrelationModel m) { return m == BsCorrelationModel::exponential ? "exponential" : "identity"; }
    }

    ScenarioConfig load_scenario(const std::string &document)
    {
        YAML::Node root;
        try
        {
            root = YAML::Load(document);
        }
        catch (const YAML::Exception &e)
        {
            throw ScenarioError("document", std::string("parse error: ") + e.what());
        }
        if (!root.IsMap())
            throw ScenarioError("document", "expected a mapping at top level");

        const int version = scalar<int>(root, "", "schema_version");
        if (version != scenario_schema_version)
            throw ScenarioError("schema_version", "unsupported version " + std::to_string(version));

        ScenarioConfig cfg;

        auto sys = child(root, "", "system");
        cfg.M = scalar<int>(sys, "system", "M");
        cfg.K = scalar<int>(sys, "system", "K");
        cfg.tau_c = scalar<int>(sys, "system", "tau_c");
        cfg.tau = scalar<int>(sys, "system", "tau");
        auto regions = child(sys, "system", "regions");
        if (!regions.IsSequence())
            throw ScenarioError("system.regions", "expected a list of t/r labels");
        for (const auto &r : regions)
        {
            const auto label = r.as<std::string>();
            cfg.regions.push_back(enum_value<Region>(label, "system.regions",
                                                     {{"t", Region::transmission}, {"r", Region::reflection}}));
        }

        auto surf = child(root, "", "surfaces");
        cfg.wavelength = scalar<double>(surf, "surfaces", "wavelength");
        cfg.element_width = scalar<double>(surf, "surfaces", "element_width");
        cfg.element_height = scalar<double>(surf, "surfaces", "element_height");
        cfg.layout = enum_value<ElementLayout>(scalar_or<std::string>(surf, "surfaces", "layout", "row_major"), "surfaces.layout",
                                               {{"vertical_stride", ElementLayout::vertical_stride}, {"row_major", ElementLayout::row_major}});
        cfg.correlation_scale = enum_value<CorrelationScale>(scalar_or<std::string>(surf, "surfaces", "correlation_scale", "unit"),
                                                             "surfaces.correlation_scale",
                                                             {{"unit", CorrelationScale::unit}, {"area", CorrelationScale::area}});
        cfg.surface_correlation = enum_value<SurfaceCorrelationModel>(
            scalar_or<std::string>(surf, "surfaces", "correlation_model", "sinc"), "surfaces.correlation_model",
            {{"sinc", SurfaceCorrelationModel::sinc}, {"identity", SurfaceCorrelationModel::identity}});
        cfg.ris1 = grid(surf, "surfaces", "ris1");
        cfg.star = grid(surf, "surfaces", "star");

        if (root["bs_correlation"])
        {
            auto bc = root["bs_correlation"];
            cfg.bs_correlation = enum_value<BsCorrelationModel>(scalar<std::string>(bc, "bs_correlation", "model"), "bs_correlation.model",
                                                                {{"identity", BsCorrelationModel::identity},
                                                                 {"exponential", BsCorrelationModel::exponential}});
            cfg.bs_coefficient = {scalar_or<double>(bc, "bs_correlation", "coefficient", 0.0),
                                  scalar_or<double>(bc, "bs_correlation", "coefficient_imag", 0.0)};
        }

        auto pw = child(root, "", "powers");
        cfg.rho = scalar<double>(pw, "powers", "rho");
        if (pw["pilot_power"])
            cfg.pilot_power = scalar<double>(pw, "powers", "pilot_power");
        cfg.bandwidth_hz = scalar_or<double>(pw, "powers", "bandwidth_Hz", cfg.bandwidth_hz);
        cfg.noise_psd_dbm_per_hz = scalar_or<double>(pw, "powers", "noise_psd_dBm_per_Hz", cfg.noise_psd_dbm_per_hz);

        auto geo = child(root, "", "geometry");
        cfg.bs = position(child(geo, "geometry", "bs"), "geometry.bs");
        cfg.ris1_position = position(child(geo, "geometry", "ris1"), "geometry.ris1");
        cfg.star_position = position(child(geo, "geometry", "star"), "geometry.star");
        cfg.ue_line_length = scalar_or<double>(geo, "geometry", "ue_line_d0", cfg.ue_line_length);
        cfg.ue_height = scalar_or<double>(geo, "geometry", "ue_height", cfg.ue_height);
        if (geo["ues"])
        {
            auto ues = geo["ues"];
            if (!ues.IsSequence())
                throw ScenarioError("geometry.ues", "expected a list of [x, y, z]");
            for (const auto &u : ues)
                cfg.ue_positions.push_back(position(u, "geometry.ues"));
        }

        auto plc = child(root, "", "pathloss");
        cfg.element_area = scalar<double>(plc, "pathloss", "element_area");
        cfg.penetration_loss_direct_db = scalar_or<double>(plc, "pathloss", "penetration_loss_direct_dB", cfg.penetration_loss_direct_db);
        auto ex = child(plc, "pathloss", "exponents");
        cfg.exponents.bs_ris1 = scalar<double>(ex, "pathloss.exponents", "bs_ris1");
        cfg.exponents.ris1_star = scalar<double>(ex, "pathloss.exponents", "ris1_star");
        cfg.exponents.star_ue = scalar<double>(ex, "pathloss.exponents", "star_ue");
        cfg.exponents.bs_star = scalar<double>(ex, "pathloss.exponents", "bs_star");
        cfg.exponents.ris1_ue = scalar<double>(ex, "pathloss.exponents", "ris1_ue");
        cfg.exponents.bs_ue = scalar<double>(ex, "pathloss.exponents", "bs_ue");

        cfg.validate();
        return cfg;
    }

    ScenarioConfig load_scenario_file(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ScenarioError("document", "cannot open " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return load_scenario(ss.str());
    }

    std::string to_document(const ScenarioConfig &cfg)
    {
        YAML::Emitter out;
        out.SetDoublePrecision(17);
        auto pos = [&out](const Position &p)
        {
            out << YAML::Flow << YAML::BeginSeq << p[0] << p[1] << p[2] << YAML::EndSeq;
        };

        out << YAML::BeginMap;
        out << YAML::Key << "schema_version" << YAML::Value << scenario_schema_version;

        out << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "M" << YAML::Value << cfg.M;
        out << YAML::Key << "K" << YAML::Value << cfg.K;
        out << YAML::Key << "tau_c" << YAML::Value << cfg.tau_c;
        out << YAML::Key << "tau" << YAML::Value << cfg.tau;
        out << YAML::Key << "regions" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (auto r : cfg.regions)
            out << std::string(1, region_label(r));
        out << YAML::EndSeq << YAML::EndMap;

        out << YAML::Key << "surfaces" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "wavelength" << YAML::Value << cfg.wavelength;
        out << YAML::Key << "element_width" << YAML::Value << cfg.element_width;
        out << YAML::Key << "element_height" << YAML::Value << cfg.element_height;
        out << YAML::Key << "layout" << YAML::Value << layout_name(cfg.layout);
        out << YAML::Key << "correlation_model" << YAML::Value << surface_model_name(cfg.surface_correlation);
        out << YAML::Key << "correlation_scale" << YAML::Value << scale_name(cfg.correlation_scale);
        out << YAML::Key << "ris1" << YAML::Value << YAML::Flow << YAML::BeginMap
            << YAML::Key << "N_H" << YAML::Value << cfg.ris1.horizontal
            << YAML::Key << "N_V" << YAML::Value << cfg.ris1.vertical << YAML::EndMap;
        out << YAML::Key << "star" << YAML::Value << YAML::Flow << YAML::BeginMap
            << YAML::Key << "N_H" << YAML::Value << cfg.star.horizontal
            << YAML::Key << "N_V" << YAML::Value << cfg.star.vertical << YAML::EndMap;
        out << YAML::EndMap;

        out << YAML::Key << "bs_correlation" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "model" << YAML::Value << bs_model_name(cfg.bs_correlation);
        out << YAML::Key << "coefficient" << YAML::Value << cfg.bs_coefficient.real();
        out << YAML::Key << "coefficient_imag" << YAML::Value << cfg.bs_coefficient.imag();
        out << YAML::EndMap;

        out << YAML::Key << "powers" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "rho" << YAML::Value << cfg.rho;
        if (cfg.pilot_power)
            out << YAML::Key << "pilot_power" << YAML::Value << *cfg.pilot_power;
        out << YAML::Key << "bandwidth_Hz" << YAML::Value << cfg.bandwidth_hz;
        out << YAML::Key << "noise_psd_dBm_per_Hz" << YAML::Value << cfg.noise_psd_dbm_per_hz;
        out << YAML::EndMap;

        out << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "bs" << YAML::Value;
        pos(cfg.bs);
        out << YAML::Key << "ris1" << YAML::Value;
        pos(cfg.ris1_position);
        out << YAML::Key << "star" << YAML::Value;
        pos(cfg.star_position);
        out << YAML::Key << "ue_line_d0" << YAML::Value << cfg.ue_line_length;
        out << YAML::Key << "ue_height" << YAML::Value << cfg.ue_height;
        if (!cfg.ue_positions.empty())
        {
            out << YAML::Key << "ues" << YAML::Value << YAML::BeginSeq;
            for (const auto &u : cfg.ue_positions)
                pos(u);
            out << YAML::EndSeq;
        }
        out << YAML::EndMap;

        out << YAML::Key << "pathloss" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "element_area" << YAML::Value << cfg.element_area;
        out << YAML::Key << "penetration_loss_direct_dB" << YAML::Value << cfg.penetration_loss_direct_db;
        out << YAML::Key << "exponents" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "bs_ris1" << YAML::Value << cfg.exponents.bs_ris1;
        out << YAML::Key << "ris1_star" << YAML::Value << cfg.exponents.ris1_star;
        out << YAML::Key << "star_ue" << YAML::Value << cfg.exponents.star_ue;
        out << YAML::Key << "bs_star" << YAML::Value << cfg.exponents.bs_star;
        out << YAML::Key << "ris1_ue" << YAML::Value << cfg.exponents.ris1_ue;
        out << YAML::Key << "bs_ue" << YAML::Value << cfg.exponents.bs_ue;
        out << YAML::EndMap << YAML::EndMap;

        out << YAML::EndMap;
        return std::string(out.c_str()) + "\n";
    }

    ScenarioConfig preset_scenario()
    {
        ScenarioConfig cfg;
        cfg.M = 64;
        cfg.K = 4;
        cfg.regions = {Region::transmission, Region::transmission, Region::reflection, Region::reflection};
        cfg.ris1 = {8, 4};
        cfg.star = {8, 4};
        cfg.tau_c = 200;
        cfg.tau = 20;
        cfg.wavelength = 0.1;
        cfg.element_width = cfg.wavelength / 4.0;
        cfg.element_height = cfg.wavelength / 4.0;
        cfg.rho = 2.0e-8;
        cfg.bs_correlation = BsCorrelationModel::exponential;
        cfg.bs_coefficient = 0.5;
        cfg.validate();
        return cfg;
    }

    ScenarioConfig desk_scenario()
    {
        ScenarioConfig cfg = preset_scenario();
        cfg.M = 16;
        cfg.K = 2;
        cfg.regions = {Region::transmission, Region::reflection};
        cfg.ris1 = {4, 2};
        cfg.star = {4, 2};
        cfg.rho = 2.0e-7;
        cfg.ue_positions.clear();
        cfg.validate();
        return cfg;
    }
}
