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

#include "sixdma/baselines.hpp"
#include "sixdma/metrics.hpp"
#include "sixdma/pipeline.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>

using namespace sixdma;

namespace
{
    ScenarioConfig small_config()
    {
        ScenarioConfig cfg;
        cfg.users = 8;
        cfg.evaluation_poses = 60;
        cfg.measurement_poses = 20;
        cfg.surfaces = 4;
        cfg.coherence_blocks = 64;
        return cfg;
    }
}

TEST_CASE("trial inputs", "[baselines]")
{
    const auto sc = generate_scenario(small_config(), 90);
    const auto a = prepare_trial(sc, 30, 20.0, 91);
    const auto b = prepare_trial(sc, 10, 0.0, 91);
    REQUIRE(a.pilots.rows() == 30);
    REQUIRE(a.pilots.cols() == 8);
    CHECK(a.pilots.topRows(10) == b.pilots);
    CHECK(b.sigma2 == Catch::Approx(100.0 * a.sigma2).epsilon(1e-12));
    CHECK(a.grid_truth.rows() == 60);
}

TEST_CASE("exhaustive measurement", "[baselines]")
{
    SECTION("single user at high SNR")
    {
        auto cfg = small_config();
        cfg.users = 1;
        cfg.regular_fraction = 1.0;
        cfg.coherence_blocks = 1024;
        const auto sc = generate_scenario(cfg, 92);
        const auto in = prepare_trial(sc, 20, 50.0, 93);
        const auto P = exhaustive_measurement(sc, in, EstimatorConfig{});
        REQUIRE(P.rows() == 60);
        CHECK((P - in.grid_truth).norm() / in.grid_truth.norm() < 0.05);
    }

    SECTION("silent users are estimated near zero")
    {
        const auto cfg = small_config();
        auto sc = generate_scenario(cfg, 94);
        for (auto &u : sc.users)
        {
            u.multipath_power = 0.0;
            for (auto &p : u.paths)
                p.gain = 0.0;
        }
        Rng rng(95);
        const CMat X = generate_pilots(30, cfg.users, rng);
        const double sigma2 = 2.0;
        const auto est = exhaustive_estimate(sc, X, sigma2, EstimatorConfig{}, 96);
        CHECK(est.eta.maxCoeff() < 0.05 * sigma2);
        CHECK(est.eta.minCoeff() >= 0.0);
    }

    SECTION("full default grid within the time budget")
    {
        ScenarioConfig cfg;
        const auto sc = generate_scenario(cfg, 97);
        const auto in = prepare_trial(sc, 50, 30.0, 98);
        const auto start = std::chrono::steady_clock::now();
        const auto P = exhaustive_measurement(sc, in, EstimatorConfig{});
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        CHECK(seconds < 120.0);
        CHECK(P.rows() == 350);
        CHECK(P.cols() == 50);
        CHECK(nmse(in.grid_truth, P) < 0.1);
    }
}

TEST_CASE("proposed pipeline", "[baselines]")
{
    const auto sc = generate_scenario(small_config(), 99);
    const auto in = prepare_trial(sc, 40, 30.0, 100);
    PipelineConfig cfg;

    const auto r = run_proposed(sc, in, cfg);
    REQUIRE(r.blocks.size() == 20);
    REQUIRE(r.grid_estimate.rows() == 60);
    CHECK(r.models.size() == 8);
    CHECK(r.grid_estimate.minCoeff() >= 0.0);
    CHECK(nmse(in.grid_truth, r.grid_estimate) < 0.2);

    // Same data at shared poses regardless of which method measures them
    const auto exhaustive = measure_poses(sc, std::vector<std::size_t>(sc.measurement_grid_indices.begin(),
                                                                       sc.measurement_grid_indices.end()),
                                          sc.measurement_poses, in.pilots, in.sigma2, in.seed);
    for (std::size_t m = 0; m < r.blocks.size(); ++m)
    {
        CHECK(r.blocks[m].pose_index == sc.measurement_grid_indices[m]);
        CHECK(r.blocks[m].received == exhaustive[m].received);
    }

    const auto par = run_proposed(sc, in, cfg, 3);
    CHECK(par.grid_estimate == r.grid_estimate);
}
