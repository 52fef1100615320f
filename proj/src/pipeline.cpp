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

#include "sixdma/pipeline.hpp"

#include <stdexcept>

namespace sixdma
{
    TrialInputs prepare_trial(const Scenario &scenario, std::size_t pilot_length, double snr_db, std::uint64_t seed)
    {
        const auto &cfg = scenario.config;
        const auto layout = cfg.layout();
        const auto pattern = AntennaPattern::half_space_directive();

        TrialInputs in;
        in.seed = seed;
        in.grid_truth = ground_truth_power(scenario.users, scenario.grid, layout, pattern);
        in.sigma2 = noise_power_for_snr(in.grid_truth, layout.size(), snr_db);

        Rng rng(derive_seed(seed, {stream::pilots}));
        in.pilots = generate_pilots(pilot_length, scenario.users.size(), rng);
        return in;
    }

    std::vector<MeasurementBlock> measure_poses(const Scenario &scenario, std::span<const std::size_t> grid_indices,
                                                std::span<const Pose> poses, const CMat &X, double sigma2,
                                                std::uint64_t seed)
    {
        if (grid_indices.size() != poses.size())
            throw std::invalid_argument("measure_poses: one grid index per pose is required");

        const auto &cfg = scenario.config;
        const auto layout = cfg.layout();
        const auto pattern = AntennaPattern::half_space_directive();
        const auto Z = sparsity_indicator(scenario.users, poses, pattern);

        Rng fading_rng(derive_seed(seed, {stream::fading}));
        const auto fading = draw_fading(scenario.users, cfg.coherence_blocks, fading_rng);

        std::vector<MeasurementBlock> blocks;
        blocks.reserve(poses.size());
        for (std::size_t m = 0; m < poses.size(); ++m)
        {
            const PoseChannelModel model(scenario.users, poses[m], layout, pattern, cfg.wavelength);
            Rng noise(derive_seed(seed, {stream::noise, std::uint64_t(grid_indices[m])}));
            const Eigen::VectorXi z = Z.row(Eigen::Index(m)).transpose();
            blocks.push_back(receive_stacked(X, model.stacked_transposed(fading), z, sigma2, noise, grid_indices[m]));
        }
        return blocks;
    }

    ProposedResult run_proposed(const Scenario &scenario, const TrialInputs &inputs, const PipelineConfig &cfg,
                                std::size_t threads)
    {
        const auto N = scenario.config.antennas();
        const auto pattern = AntennaPattern::half_space_directive();

        ProposedResult r;
        r.blocks = measure_poses(scenario, scenario.measurement_grid_indices, scenario.measurement_poses,
                                 inputs.pilots, inputs.sigma2, inputs.seed);
        r.step_one = estimate_all(r.blocks, inputs.pilots, inputs.sigma2, N, cfg.estimator,
                                  derive_seed(inputs.seed, {stream::estimator}), threads);

        const auto grid_doas = fibonacci_sphere(cfg.grid_points);
        r.models = estimate_users(r.step_one.power, r.step_one.support, scenario.measurement_poses, pattern,
                                  grid_doas, N);
        r.grid_estimate = reconstruct_power(r.models, scenario.grid, pattern, N);
        return r;
    }
}
