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

#include <numeric>

namespace sixdma
{
    PowerEstimate exhaustive_estimate(const Scenario &scenario, const CMat &X, double sigma2,
                                      const EstimatorConfig &cfg, std::uint64_t seed, std::size_t threads)
    {
        std::vector<std::size_t> all(scenario.grid.size());
        std::iota(all.begin(), all.end(), std::size_t(0));

        const auto blocks = measure_poses(scenario, all, scenario.grid, X, sigma2, seed);
        return estimate_all(blocks, X, sigma2, scenario.config.antennas(), cfg,
                            derive_seed(seed, {stream::estimator}), threads);
    }

    RMat exhaustive_measurement(const Scenario &scenario, const CMat &X, double sigma2, const EstimatorConfig &cfg,
                                std::uint64_t seed, std::size_t threads)
    {
        return exhaustive_estimate(scenario, X, sigma2, cfg, seed, threads).power;
    }
}
