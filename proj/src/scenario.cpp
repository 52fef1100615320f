// SPDX-License-Identifier: Apache-2.0
//
// sixdma: statistical channel estimation for six-dimensional movable antennas
// Copyright (C) 2026 The sixdma Authors
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

#include "sixdma/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sixdma
{
    namespace
    {
        Vec3 uniform_direction(Rng &rng)
        {
            const double z = 2.0 * uniform01(rng) - 1.0;
            const double a = two_pi * uniform01(rng);
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            return {r * std::cos(a), r * std::sin(a), z};
        }

        void require(bool ok, const std::string &field, const std::string &what)
        {
            if (!ok)
                throw std::invalid_argument("scenario." + field + ": " + what);
        }

        constexpr std::size_t max_rejections = 10000;
    }

    Region Region::annulus(const Vec3 &center, double inner, double outer)
    {
        if (!(inner >= 0.0 && inner < outer))
            throw std::invalid_argument("Region: require 0 <= inner_radius < outer_radius");
        return {Kind::spherical_annulus, center, inner, outer};
    }

    Region Region::ball(const Vec3 &center, double radius)
    {
        if (!(radius > 0.0))
            throw std::invalid_argument("Region: sphere radius must be positive");
        return {Kind::sphere, center, 0.0, radius};
    }

    bool Region::contains(const Vec3 &p) const
    {
        const double d = (p - center).norm();
        if (kind == Kind::sphere)
            return d <= outer_radius;
        return d >= inner_radius && d <= outer_radius;
    }

    double Region::volume() const
    {
        const double ri = kind == Kind::sphere ? 0.0 : inner_radius;
        return 4.0 / 3.0 * pi * (outer_radius * outer_radius * outer_radius - ri * ri * ri);
    }

    Vec3 Region::sample(Rng &rng) const
    {
        const double ri = kind == Kind::sphere ? 0.0 : inner_radius;
        const double ri3 = ri * ri * ri;
        const double ro3 = outer_radius * outer_radius * outer_radius;
        const double r = std::cbrt(ri3 + uniform01(rng) * (ro3 - ri3));
        return center + r * uniform_direction(rng);
    }

    SurfaceLayout ScenarioConfig::layout() const
    {
        return SurfaceLayout::upa(antennas_x, antennas_y, antenna_spacing * wavelength);
    }

    Region ScenarioConfig::coverage() const
    {
        return Region::annulus(Vec3::Zero(), annulus_inner, annulus_outer);
    }

    void ScenarioConfig::validate() const
    {
        require(users >= 1, "users", "must be at least 1");
        require(paths_per_user >= 1, "paths_per_user", "must be at least 1");
        require(scatter_radius >= 0.0, "scatter_radius", "must be non-negative");
        require(regular_fraction >= 0.0 && regular_fraction <= 1.0, "regular_fraction", "must lie in [0, 1]");
        require(annulus_inner >= 0.0 && annulus_inner < annulus_outer, "annulus_inner",
                "require 0 <= annulus_inner < annulus_outer");
        for (std::size_t i = 0; i < hotspots.size(); ++i)
        {
            require(hotspots[i].radius > 0.0, "hotspots[" + std::to_string(i) + "].radius", "must be positive");
            require(hotspots[i].distance >= 0.0, "hotspots[" + std::to_string(i) + "].distance", "must be non-negative");
        }
        require(regular_fraction == 1.0 || !hotspots.empty() || users == 0, "hotspots",
                "at least one hotspot is required when regular_fraction < 1");
        require(wavelength > 0.0, "wavelength", "must be positive");
        require(antennas_x >= 1 && antennas_y >= 1, "antennas_x", "array dimensions must be at least 1");
        require(antenna_spacing >= 0.0, "antenna_spacing", "must be non-negative");
        require(evaluation_poses >= 1, "evaluation_poses", "must be at least 1");
        require(measurement_poses >= 1, "measurement_poses", "must be at least 1");
        require(coherence_blocks >= 1, "coherence_blocks", "must be at least 1");
        require(measurement_poses <= evaluation_poses, "measurement_poses", "must not exceed evaluation_poses");
        require(surfaces >= 1 && surfaces <= measurement_poses, "surfaces", "require 1 <= surfaces <= measurement_poses");
        require(site_radius > 0.0, "site_radius", "must be positive");
        require(reference_gain > 0.0, "reference_gain", "must be positive");
        require(reference_distance > 0.0, "reference_distance", "must be positive");
        require(pathloss_exponent >= 0.0, "pathloss_exponent", "must be non-negative");
    }

    bool operator==(const HotspotSpec &a, const HotspotSpec &b)
    {
        return a.distance == b.distance && a.radius == b.radius;
    }

    bool operator==(const ScenarioConfig &a, const ScenarioConfig &b)
    {
        return a.users == b.users && a.paths_per_user == b.paths_per_user &&
               a.scatter_radius == b.scatter_radius && a.regular_fraction == b.regular_fraction &&
               a.annulus_inner == b.annulus_inner && a.annulus_outer == b.annulus_outer &&
               a.hotspots == b.hotspots && a.wavelength == b.wavelength &&
               a.antennas_x == b.antennas_x && a.antennas_y == b.antennas_y &&
               a.antenna_spacing == b.antenna_spacing && a.surfaces == b.surfaces &&
               a.measurement_poses == b.measurement_poses && a.evaluation_poses == b.evaluation_poses &&
               a.site_radius == b.site_radius && a.reference_gain == b.reference_gain &&
               a.reference_distance == b.reference_distance && a.pathloss_exponent == b.pathloss_exponent &&
               a.random_rotations == b.random_rotations && a.coherence_blocks == b.coherence_blocks;
    }

    std::vector<Region> place_hotspots(const ScenarioConfig &cfg, Rng &rng)
    {
        std::vector<Region> out;
        out.reserve(cfg.hotspots.size());
        for (const auto &h : cfg.hotspots)
            out.push_back(Region::ball(h.distance * uniform_direction(rng), h.radius));
        return out;
    }

    std::vector<UserPlacement> sample_users(const ScenarioConfig &cfg, std::span<const Region> hotspots, Rng &rng)
    {
        const Region coverage = cfg.coverage();
        const std::size_t K = cfg.users;
        const auto n_regular = std::min<std::size_t>(K, std::size_t(std::llround(cfg.regular_fraction * double(K))));

        if (n_regular < K && hotspots.empty())
            throw std::invalid_argument("sample_users: hotspot users requested but no hotspots given");

        std::vector<double> cumulative;
        double total_volume = 0.0;
        for (const auto &h : hotspots)
        {
            total_volume += h.volume();
            cumulative.push_back(total_volume);
        }

        std::vector<UserPlacement> users;
        users.reserve(K);
        for (std::size_t i = 0; i < n_regular; ++i)
            users.push_back({coverage.sample(rng), 0});

        for (std::size_t i = n_regular; i < K; ++i)
        {
            const double u = uniform01(rng) * total_volume;
            auto v = std::size_t(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
            v = std::min(v, hotspots.size() - 1);

            std::size_t attempts = 0;
            Vec3 p = hotspots[v].sample(rng);
            while (!coverage.contains(p))
            {
                if (++attempts >= max_rejections)
                    throw std::runtime_error("sample_users: hotspot " + std::to_string(v + 1) +
                                             " does not intersect the coverage annulus");
                p = hotspots[v].sample(rng);
            }
            users.push_back({p, int(v + 1)});
        }
        return users;
    }

    std::vector<Vec3> sample_scatterers(const Vec3 &user_position, std::size_t count, double radius, Rng &rng)
    {
        if (!(radius >= 0.0))
            throw std::invalid_argument("sample_scatterers: radius must be non-negative");
        std::vector<Vec3> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
        {
            if (radius == 0.0)
            {
                out.push_back(user_position);
                continue;
            }
            out.push_back(Region{Region::Kind::sphere, user_position, 0.0, radius}.sample(rng));
        }
        return out;
    }

    std::vector<Pose> evaluation_grid(const ScenarioConfig &cfg)
    {
        std::vector<Pose> grid;
        grid.reserve(cfg.evaluation_poses);
        for (const auto &d : fibonacci_sphere(cfg.evaluation_poses))
            grid.emplace_back(cfg.site_radius * d, facing_rotation(d));
        return grid;
    }

    std::vector<std::size_t> measurement_indices(const ScenarioConfig &cfg, Rng &rng)
    {
        const std::size_t M = cfg.measurement_poses, Mbar = cfg.evaluation_poses;
        if (M > Mbar)
            throw std::invalid_argument("measurement_indices: measurement_poses exceeds evaluation_poses");

        std::vector<std::size_t> idx(Mbar);
        std::iota(idx.begin(), idx.end(), std::size_t(0));
        for (std::size_t i = 0; i < M; ++i)
        {
            const auto j = i + std::size_t(uniform01(rng) * double(Mbar - i));
            std::swap(idx[i], idx[std::min(j, Mbar - 1)]);
        }
        idx.resize(M);
        return idx;
    }

    UserChannel user_channel_from_site(const ScenarioConfig &cfg, const UserSite &site)
    {
        const Vec3 &pos = site.placement.position;
        const double d = pos.norm();
        const double s = cfg.reference_gain * std::pow(d / cfg.reference_distance, -cfg.pathloss_exponent);

        std::vector<Vec3> doas;
        doas.reserve(site.scatterers.size());
        for (const auto &p : site.scatterers)
            doas.push_back(p.normalized());
        return make_user_channel(pos.normalized(), doas, s);
    }

    Scenario generate_scenario(const ScenarioConfig &cfg, std::uint64_t seed)
    {
        cfg.validate();

        Scenario sc;
        sc.config = cfg;
        sc.seed = seed;

        Rng rng(derive_seed(seed, {stream::scenario}));
        sc.hotspots = place_hotspots(cfg, rng);
        const auto placements = sample_users(cfg, sc.hotspots, rng);

        sc.sites.reserve(placements.size());
        sc.users.reserve(placements.size());
        for (const auto &pl : placements)
        {
            UserSite site{pl, sample_scatterers(pl.position, cfg.paths_per_user, cfg.scatter_radius, rng)};
            sc.users.push_back(redraw_phases(user_channel_from_site(cfg, site), rng));
            sc.sites.push_back(std::move(site));
        }

        sc.grid = evaluation_grid(cfg);

        Rng pose_rng(derive_seed(seed, {stream::poses}));
        sc.measurement_grid_indices = measurement_indices(cfg, pose_rng);
        sc.measurement_poses.reserve(cfg.measurement_poses);
        for (auto i : sc.measurement_grid_indices)
        {
            if (cfg.random_rotations)
            {
                RotationAngles u(two_pi * uniform01(pose_rng), two_pi * uniform01(pose_rng), two_pi * uniform01(pose_rng));
                sc.measurement_poses.emplace_back(sc.grid[i].position(), u);
            }
            else
                sc.measurement_poses.push_back(sc.grid[i]);
        }
        return sc;
    }

    // ---------- JSON ----------

    namespace
    {
        nlohmann::json vec_json(const Vec3 &v)
        {
            return nlohmann::json::array({v.x(), v.y(), v.z()});
        }

        Vec3 json_vec(const nlohmann::json &j)
        {
            if (!j.is_array() || j.size() != 3)
                throw std::invalid_argument("scenario JSON: expected a 3-element array");
            return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
        }

        nlohmann::json pose_json(const Pose &p)
        {
            const auto &u = p.rotation();
            return {{"position", vec_json(p.position())},
                    {"rotation", nlohmann::json::array({u.alpha, u.beta, u.gamma})}};
        }

        Pose json_pose(const nlohmann::json &j)
        {
            const auto &r = j.at("rotation");
            return Pose(json_vec(j.at("position")),
                        RotationAngles(r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>()));
        }
    }

    nlohmann::json to_json(const ScenarioConfig &cfg)
    {
        nlohmann::json hs = nlohmann::json::array();
        for (const auto &h : cfg.hotspots)
            hs.push_back({{"distance", h.distance}, {"radius", h.radius}});
        return {
            {"users", cfg.users},
            {"paths_per_user", cfg.paths_per_user},
            {"scatter_radius", cfg.scatter_radius},
            {"regular_fraction", cfg.regular_fraction},
            {"annulus_inner", cfg.annulus_inner},
            {"annulus_outer", cfg.annulus_outer},
            {"hotspots", hs},
            {"wavelength", cfg.wavelength},
            {"antennas_x", cfg.antennas_x},
            {"antennas_y", cfg.antennas_y},
            {"antenna_spacing", cfg.antenna_spacing},
            {"surfaces", cfg.surfaces},
            {"measurement_poses", cfg.measurement_poses},
            {"evaluation_poses", cfg.evaluation_poses},
            {"site_radius", cfg.site_radius},
            {"reference_gain", cfg.reference_gain},
            {"reference_distance", cfg.reference_distance},
            {"pathloss_exponent", cfg.pathloss_exponent},
            {"random_rotations", cfg.random_rotations},
            {"coherence_blocks", cfg.coherence_blocks},
        };
    }

    ScenarioConfig scenario_config_from_json(const nlohmann::json &j)
    {
        ScenarioConfig cfg;
        cfg.users = j.at("users").get<std::size_t>();
        cfg.paths_per_user = j.at("paths_per_user").get<std::size_t>();
        cfg.scatter_radius = j.at("scatter_radius").get<double>();
        cfg.regular_fraction = j.at("regular_fraction").get<double>();
        cfg.annulus_inner = j.at("annulus_inner").get<double>();
        cfg.annulus_outer = j.at("annulus_outer").get<double>();
        cfg.hotspots.clear();
        for (const auto &h : j.at("hotspots"))
            cfg.hotspots.push_back({h.at("distance").get<double>(), h.at("radius").get<double>()});
        cfg.wavelength = j.at("wavelength").get<double>();
        cfg.antennas_x = j.at("antennas_x").get<std::size_t>();
        cfg.antennas_y = j.at("antennas_y").get<std::size_t>();
        cfg.antenna_spacing = j.at("antenna_spacing").get<double>();
        cfg.surfaces = j.at("surfaces").get<std::size_t>();
        cfg.measurement_poses = j.at("measurement_poses").get<std::size_t>();
        cfg.evaluation_poses = j.at("evaluation_poses").get<std::size_t>();
        cfg.site_radius = j.at("site_radius").get<double>();
        cfg.reference_gain = j.at("reference_gain").get<double>();
        cfg.reference_distance = j.at("reference_distance").get<double>();
        cfg.pathloss_exponent = j.at("pathloss_exponent").get<double>();
        cfg.random_rotations = j.at("random_rotations").get<bool>();
        cfg.coherence_blocks = j.at("coherence_blocks").get<std::size_t>();
        return cfg;
    }

    nlohmann::json to_json(const Scenario &sc)
    {
        nlohmann::json j;
        j["format"] = "sixdma-scenario";
        j["version"] = 1;
        j["seed"] = sc.seed;
        j["config"] = to_json(sc.config);

        auto &hs = j["hotspots"] = nlohmann::json::array();
        for (const auto &h : sc.hotspots)
            hs.push_back({{"center", vec_json(h.center)}, {"radius", h.outer_radius}});

        auto &us = j["users"] = nlohmann::json::array();
        for (std::size_t k = 0; k < sc.users.size(); ++k)
        {
            const auto &site = sc.sites.at(k);
            const auto &user = sc.users[k];
            nlohmann::json scat = nlohmann::json::array();
            for (const auto &p : site.scatterers)
                scat.push_back(vec_json(p));
            nlohmann::json paths = nlohmann::json::array();
            for (const auto &p : user.paths)
                paths.push_back({{"gain", p.gain}, {"phase", p.phase}, {"doa", vec_json(p.doa)}});
            us.push_back({{"position", vec_json(site.placement.position)},
                          {"region", site.placement.region},
                          {"scatterers", scat},
                          {"center_doa", vec_json(user.center_doa)},
                          {"multipath_power", user.multipath_power},
                          {"paths", paths}});
        }

        auto &grid = j["grid"] = nlohmann::json::array();
        for (const auto &p : sc.grid)
            grid.push_back(pose_json(p));

        j["measurement_grid_indices"] = sc.measurement_grid_indices;
        auto &mp = j["measurement_poses"] = nlohmann::json::array();
        for (const auto &p : sc.measurement_poses)
            mp.push_back(pose_json(p));
        return j;
    }

    Scenario scenario_from_json(const nlohmann::json &j)
    {
        if (j.value("format", std::string()) != "sixdma-scenario")
            throw std::invalid_argument("scenario JSON: missing or unknown format tag");

        Scenario sc;
        sc.seed = j.at("seed").get<std::uint64_t>();
        sc.config = scenario_config_from_json(j.at("config"));

        for (const auto &h : j.at("hotspots"))
            sc.hotspots.push_back(Region::ball(json_vec(h.at("center")), h.at("radius").get<double>()));

        for (const auto &u : j.at("users"))
        {
            UserSite site;
            site.placement.position = json_vec(u.at("position"));
            site.placement.region = u.at("region").get<int>();
            for (const auto &p : u.at("scatterers"))
                site.scatterers.push_back(json_vec(p));

            UserChannel user;
            user.center_doa = json_vec(u.at("center_doa"));
            user.multipath_power = u.at("multipath_power").get<double>();
            for (const auto &p : u.at("paths"))
                user.paths.push_back({p.at("gain").get<double>(), p.at("phase").get<double>(), json_vec(p.at("doa"))});
            user.validate();

            sc.sites.push_back(std::move(site));
            sc.users.push_back(std::move(user));
        }

        for (const auto &p : j.at("grid"))
            sc.grid.push_back(json_pose(p));
        sc.measurement_grid_indices = j.at("measurement_grid_indices").get<std::vector<std::size_t>>();
        for (const auto &p : j.at("measurement_poses"))
            sc.measurement_poses.push_back(json_pose(p));
        return sc;
    }
}
