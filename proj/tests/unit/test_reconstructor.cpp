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

#include "sixdma/channel.hpp"
#include "sixdma/reconstructor.hpp"
#include "sixdma/scenario.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

using namespace sixdma;

namespace
{
    SupportSet full_support(std::size_t n)
    {
        SupportSet s;
        for (std::size_t i = 0; i < n; ++i)
            s.indices.push_back(i);
        return s;
    }

    std::vector<Pose> random_poses(std::size_t n, Rng &rng)
    {
        std::vector<Pose> poses;
        for (std::size_t i = 0; i < n; ++i)
            poses.emplace_back(Vec3(uniform01(rng), uniform01(rng), uniform01(rng)),
                               RotationAngles(two_pi * uniform01(rng), pi * uniform01(rng), two_pi * uniform01(rng)));
        return poses;
    }
}

TEST_CASE("support extraction", "[reconstructor]")
{
    SparsityMatrix Z(4, 2);
    Z << 1, 0, 0, 0, 1, 0, 1, 0;
    CHECK(support_of(Z, 0).indices == std::vector<std::size_t>{0, 2, 3});
    CHECK(support_of(Z, 1).empty());
    CHECK_THROWS_AS(support_of(Z, 2), std::out_of_range);
}

TEST_CASE("dictionary", "[reconstructor]")
{
    const auto pattern = AntennaPattern::half_space_directive();
    Rng rng(70);

    SECTION("single grid point")
    {
        const std::vector<Pose> poses{Pose(Vec3::Zero(), facing_rotation(Vec3::UnitZ()))};
        const std::vector<Vec3> grid{Vec3::UnitZ()};
        const auto d = build_dictionary(full_support(1), poses, pattern, grid);
        REQUIRE(d.atoms.rows() == 1);
        REQUIRE(d.atoms.cols() == 1);
        CHECK(d.atoms(0, 0) == Catch::Approx(4.0).epsilon(1e-14));
    }

    SECTION("grid behind every pose gives a zero dictionary")
    {
        const std::vector<Pose> poses{Pose(Vec3::Zero(), facing_rotation(Vec3::UnitZ())),
                                      Pose(Vec3::Zero(), facing_rotation(Vec3(0.1, 0, 1).normalized()))};
        const std::vector<Vec3> grid{-Vec3::UnitZ(), Vec3(0.2, 0.1, -1).normalized()};
        CHECK(build_dictionary(full_support(2), poses, pattern, grid).atoms.isZero());
    }

    SECTION("gain oracle")
    {
        const auto poses = random_poses(8, rng);
        const auto grid = fibonacci_sphere(500);
        const auto d = build_dictionary(full_support(8), poses, pattern, grid);
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t g = 0; g < 500; ++g)
            {
                const auto inc = oracle::incidence(poses[i].matrix(), grid[g]);
                REQUIRE(std::abs(d.atoms(Eigen::Index(i), Eigen::Index(g)) - oracle::half_space_gain(inc.first)) <
                        1e-12);
            }
    }

    SECTION("rows follow the support")
    {
        const auto poses = random_poses(6, rng);
        const auto grid = fibonacci_sphere(50);
        SupportSet s;
        s.indices = {1, 4};
        const auto sub = build_dictionary(s, poses, pattern, grid);
        const auto all = build_dictionary(full_support(6), poses, pattern, grid);
        CHECK(sub.atoms.row(0) == all.atoms.row(1));
        CHECK(sub.atoms.row(1) == all.atoms.row(4));
    }

    SECTION("invalid inputs")
    {
        const auto poses = random_poses(2, rng);
        const auto grid = fibonacci_sphere(10);
        CHECK_THROWS_AS(build_dictionary(SupportSet{}, poses, pattern, grid), std::invalid_argument);
        CHECK_THROWS_AS(build_dictionary(full_support(2), poses, pattern, std::vector<Vec3>{}),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_dictionary(full_support(3), poses, pattern, grid), std::out_of_range);
    }
}

TEST_CASE("single-atom fit", "[reconstructor]")
{
    const auto pattern = AntennaPattern::half_space_directive();
    Rng rng(71);
    const std::size_t N = 4;

    SECTION("exact atom is recovered")
    {
        const auto poses = random_poses(10, rng);
        const auto grid = fibonacci_sphere(300);
        const auto support = full_support(10);
        const auto d = build_dictionary(support, poses, pattern, grid);
        for (int t = 0; t < 20; ++t)
        {
            Eigen::Index g = 0;
            do
                g = Eigen::Index(uniform01(rng) * 300.0);
            while (d.atoms.col(g).isZero());
            const double s = 0.5 + uniform01(rng);
            const RVec p = double(N) * s * d.atoms.col(g);
            const auto u = estimate_user(p, support, d, N);
            REQUIRE(u.valid());
            CHECK(u.residual < 1e-20 * (1.0 + p.squaredNorm()));
            // Atoms seen by a single pose are proportional, so compare the fitted vectors
            CHECK((double(N) * u.s_hat * d.atoms.col(u.grid_index) - p).norm() < 1e-12 * p.norm());
            if (u.grid_index == g)
                CHECK(u.s_hat == Catch::Approx(s).epsilon(1e-12));
            CHECK(u.f_hat == grid[std::size_t(u.grid_index)]);
        }
    }

    SECTION("zero input gives zero power")
    {
        const auto poses = random_poses(4, rng);
        const auto grid = fibonacci_sphere(100);
        const auto d = build_dictionary(full_support(4), poses, pattern, grid);
        const auto u = estimate_user(RVec::Zero(4), full_support(4), d, N);
        CHECK(u.valid());
        CHECK(u.s_hat == 0.0);
        CHECK(u.grid_index == 0);
    }

    SECTION("empty support gives an invalid estimate")
    {
        const auto u = estimate_user(RVec::Ones(3), SupportSet{}, Dictionary{}, N);
        CHECK_FALSE(u.valid());
        CHECK(u.s_hat == 0.0);
    }

    SECTION("exhaustive search oracle")
    {
        for (const std::size_t G : {1u, 7u, 500u, 2000u})
            for (int t = 0; t < 5; ++t)
            {
                const auto poses = random_poses(12, rng);
                const auto grid = fibonacci_sphere(G);
                const auto support = full_support(12);
                const auto d = build_dictionary(support, poses, pattern, grid);
                RVec p(12);
                for (Eigen::Index i = 0; i < 12; ++i)
                    p[i] = uniform01(rng) < 0.3 ? 0.0 : uniform01(rng);

                // Residual per atom via ||p||^2 - max(0, <v,p>)^2 / ||v||^2
                std::ptrdiff_t best = -1;
                double best_r = std::numeric_limits<double>::infinity();
                for (std::size_t g = 0; g < G; ++g)
                {
                    double vp = 0.0, vv = 0.0;
                    for (Eigen::Index i = 0; i < 12; ++i)
                    {
                        vp += d.atoms(i, Eigen::Index(g)) * p[i];
                        vv += d.atoms(i, Eigen::Index(g)) * d.atoms(i, Eigen::Index(g));
                    }
                    const double r = vv > 0.0 ? p.squaredNorm() - std::pow(std::max(0.0, vp), 2) / vv
                                              : p.squaredNorm();
                    if (r < best_r - 1e-12)
                    {
                        best_r = r;
                        best = std::ptrdiff_t(g);
                    }
                }
                const auto u = estimate_user(p, support, d, N);
                CHECK(u.grid_index == best);
                CHECK(std::abs(u.residual - best_r) < 1e-12);
            }
    }

    SECTION("scale equivariance")
    {
        const auto poses = random_poses(8, rng);
        const auto grid = fibonacci_sphere(200);
        const auto support = full_support(8);
        const auto d = build_dictionary(support, poses, pattern, grid);
        RVec p(8);
        for (Eigen::Index i = 0; i < 8; ++i)
            p[i] = uniform01(rng);
        const auto a = estimate_user(p, support, d, N);
        const auto b = estimate_user(1000.0 * p, support, d, N);
        CHECK(a.grid_index == b.grid_index);
        CHECK(b.s_hat == Catch::Approx(1000.0 * a.s_hat).epsilon(1e-12));
    }
}

TEST_CASE("reconstruction", "[reconstructor]")
{
    const auto pattern = AntennaPattern::half_space_directive();

    SECTION("entries off the support are ignored")
    {
        Rng rng(72);
        const auto poses = random_poses(6, rng);
        const auto grid = fibonacci_sphere(100);
        RMat p(6, 1);
        for (Eigen::Index i = 0; i < 6; ++i)
            p(i, 0) = uniform01(rng);
        SparsityMatrix Z = SparsityMatrix::Ones(6, 1);
        Z(2, 0) = 0;
        Z(5, 0) = 0;
        const auto a = estimate_users(p, Z, poses, pattern, grid, 4);
        RMat q = p;
        q(2, 0) = 1e6;
        q(5, 0) = -3.0;
        const auto b = estimate_users(q, Z, poses, pattern, grid, 4);
        CHECK(a[0].grid_index == b[0].grid_index);
        CHECK(a[0].s_hat == b[0].s_hat);
    }

    SECTION("noiseless on-grid identity")
    {
        ScenarioConfig cfg;
        cfg.users = 20;
        cfg.evaluation_poses = 100;
        const auto sc = generate_scenario(cfg, 73);
        const auto grid = fibonacci_sphere(500);
        Rng rng(74);

        // Cluster centers snapped to dictionary points
        std::vector<UserChannel> users;
        for (const auto &u : sc.users)
        {
            std::size_t nearest = 0;
            for (std::size_t g = 1; g < grid.size(); ++g)
                if (grid[g].dot(u.center_doa) > grid[nearest].dot(u.center_doa))
                    nearest = g;
            users.push_back(make_user_channel(grid[nearest], std::vector<Vec3>{grid[nearest]}, u.multipath_power));
        }
        const auto truth = ground_truth_power(users, sc.grid, cfg.layout(), pattern);
        const RMat p_bar = ground_truth_power(users, sc.measurement_poses, cfg.layout(), pattern);
        const SparsityMatrix Z = (p_bar.array() > 0.0).cast<int>();

        const auto models = estimate_users(p_bar, Z, sc.measurement_poses, pattern, grid, cfg.antennas());
        const auto P = reconstruct_power(models, sc.grid, pattern, cfg.antennas());
        for (Eigen::Index k = 0; k < truth.cols(); ++k)
            if (Z.col(k).any())
                CHECK((P.col(k) - truth.col(k)).norm() <= 1e-8 * truth.col(k).norm());
        CHECK(P.minCoeff() >= 0.0);
    }

    SECTION("invalid users give zero columns")
    {
        std::vector<UserEstimate> models(2);
        models[1].grid_index = 0;
        models[1].s_hat = 2.0;
        models[1].f_hat = -Vec3::UnitZ();
        const std::vector<Pose> poses{Pose(Vec3::Zero(), facing_rotation(-Vec3::UnitZ()))};
        const auto P = reconstruct_power(models, poses, pattern, 4);
        CHECK(P(0, 0) == 0.0);
        CHECK(P(0, 1) == Catch::Approx(32.0).epsilon(1e-14));
    }

    SECTION("shape mismatches throw")
    {
        Rng rng(75);
        const auto poses = random_poses(3, rng);
        const auto grid = fibonacci_sphere(10);
        CHECK_THROWS_AS(estimate_users(RMat::Zero(3, 2), SparsityMatrix::Zero(3, 1), poses, pattern, grid, 4),
                        std::invalid_argument);
        CHECK_THROWS_AS(estimate_users(RMat::Zero(2, 2), SparsityMatrix::Zero(2, 2), poses, pattern, grid, 4),
                        std::invalid_argument);
    }
}

TEST_CASE("model serialization", "[reconstructor]")
{
    std::vector<UserEstimate> models(3);
    models[0] = {0.25, Vec3(0, 0.6, 0.8), 12, 1e-5};
    models[2] = {1e-7, Vec3(1, 0, 0), 0, 0.0};
    const auto back = user_estimates_from_json(to_json(models));
    REQUIRE(back.size() == 3);
    for (std::size_t k = 0; k < 3; ++k)
    {
        CHECK(back[k].s_hat == models[k].s_hat);
        CHECK(back[k].f_hat == models[k].f_hat);
        CHECK(back[k].grid_index == models[k].grid_index);
        CHECK(back[k].residual == models[k].residual);
    }
    CHECK_THROWS_AS(user_estimates_from_json(nlohmann::json::object()), std::invalid_argument);
}
