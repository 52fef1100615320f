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

#ifndef SIXDMA_SCENARIO_HPP
#define SIXDMA_SCENARIO_HPP

#include "sixdma/channel.hpp"
#include "sixdma/geometry.hpp"
#include "sixdma/random.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sixdma
{
    struct Region
    {
        enum class Kind
        {
            spherical_annulus,
            sphere
        };

        Kind kind = Kind::sphere;
        Vec3 center = Vec3::Zero();
        double inner_radius = 0.0; // Ignored for spheres
        double outer_radius = 1.0;

        static Region annulus(const Vec3 &center, double inner, double outer);
        static Region ball(const Vec3 &center, double radius);

        bool contains(const Vec3 &p) const;
        double volume() const;
        Vec3 sample(Rng &rng) const; // Uniform in volume
    };

    // Hotspot sphere placed at a random direction, `distance` meters from the CPU
    struct HotspotSpec
    {
        double distance = 0.0;
        double radius = 0.0;
    };

    struct ScenarioConfig
    {
        std::size_t users = 50;
        std::size_t paths_per_user = 20;
        double scatter_radius = 3.0;        // [m]
        double regular_fraction = 0.3;      // Share of users in the regular annulus
        double annulus_inner = 30.0;        // [m]
        double annulus_outer = 200.0;       // [m]
        std::vector<HotspotSpec> hotspots = {{100.0, 15.0}, {60.0, 10.0}, {40.0, 5.0}};
        double wavelength = 0.125;          // [m]
        std::size_t antennas_x = 2;
        std::size_t antennas_y = 2;
        double antenna_spacing = 0.5;       // [wavelengths]
        std::size_t surfaces = 16;          // B, surfaces deployed for data transmission
        std::size_t measurement_poses = 32; // M
        std::size_t evaluation_poses = 350; // M-bar
        double site_radius = 1.0;           // [m]
        double reference_gain = 1e-3;       // Path gain at the reference distance
        double reference_distance = 1.0;    // [m]
        double pathloss_exponent = 2.0;
        bool random_rotations = false;      // Draw measurement rotations uniformly instead of facing outward
        std::size_t coherence_blocks = 256; // S, fading blocks averaged into one pose's sample covariance

        std::size_t antennas() const { return antennas_x * antennas_y; }
        SurfaceLayout layout() const;
        Region coverage() const;

        // Throws std::invalid_argument naming the offending field
        void validate() const;
    };

    bool operator==(const HotspotSpec &a, const HotspotSpec &b);
    bool operator==(const ScenarioConfig &a, const ScenarioConfig &b);

    struct UserPlacement
    {
        Vec3 position = Vec3::Zero();
        int region = 0; // 0 = regular annulus, v >= 1 = hotspot v
    };

    // Hotspot spheres at uniformly random directions
    std::vector<Region> place_hotspots(const ScenarioConfig &cfg, Rng &rng);

    // Exactly K users: round(regular_fraction * K) uniform in the annulus, the rest
    // assigned to hotspots with probability proportional to hotspot volume.
    // Throws std::runtime_error if rejection sampling into the coverage region fails.
    std::vector<UserPlacement> sample_users(const ScenarioConfig &cfg, std::span<const Region> hotspots, Rng &rng);

    // Gamma points i.i.d. uniform in the ball around the user
    std::vector<Vec3> sample_scatterers(const Vec3 &user_position, std::size_t count, double radius, Rng &rng);

    // M-bar poses on the site sphere, boresight pointing radially outward
    std::vector<Pose> evaluation_grid(const ScenarioConfig &cfg);

    // M grid indices drawn uniformly without replacement (partial Fisher-Yates)
    std::vector<std::size_t> measurement_indices(const ScenarioConfig &cfg, Rng &rng);

    struct UserSite
    {
        UserPlacement placement;
        std::vector<Vec3> scatterers;
    };

    struct Scenario
    {
        ScenarioConfig config;
        std::uint64_t seed = 0;
        std::vector<Region> hotspots;
        std::vector<UserSite> sites;
        std::vector<UserChannel> users;
        std::vector<Pose> grid;
        std::vector<std::size_t> measurement_grid_indices;
        std::vector<Pose> measurement_poses;
    };

    // Deterministic function of (cfg, seed)
    Scenario generate_scenario(const ScenarioConfig &cfg, std::uint64_t seed);

    // User channel from a placement and its scatterers: free-space path loss from the
    // cluster center, split equally over the paths
    UserChannel user_channel_from_site(const ScenarioConfig &cfg, const UserSite &site);

    nlohmann::json to_json(const ScenarioConfig &cfg);
    ScenarioConfig scenario_config_from_json(const nlohmann::json &j);
    nlohmann::json to_json(const Scenario &scenario);
    Scenario scenario_from_json(const nlohmann::json &j);
}

#endif
