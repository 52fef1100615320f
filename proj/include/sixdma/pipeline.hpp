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

#ifndef SIXDMA_PIPELINE_HPP
#define SIXDMA_PIPELINE_HPP

#include "sixdma/estimator.hpp"
#include "sixdma/measurement.hpp"
#include "sixdma/reconstructor.hpp"
#include "sixdma/scenario.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sixdma
{
    struct PipelineConfig
    {
        EstimatorConfig estimator;
        std::size_t grid_points = 500; // G, size of the DOA dictionary
    };

    // Shared inputs of one trial at one operating point (pilot length, SNR)
    struct TrialInputs
    {
        std::uint64_t seed = 0;
        double sigma2 = 0.0;
        CMat pilots;       // L x K
        RMat grid_truth;   // M-bar x K ground-truth power on the evaluation grid
    };

    // Pilots come from derive_seed(seed, {pilots}), so pilots of different lengths share
    // their leading rows. sigma2 follows from the grid ground truth and the target SNR.
    TrialInputs prepare_trial(const Scenario &scenario, std::size_t pilot_length, double snr_db, std::uint64_t seed);

    // Received blocks at the given poses, each stacking coherence_blocks fading realizations.
    // Path phases of all blocks come from derive_seed(seed, {fading}) and are shared by all
    // poses; noise for grid pose i comes from derive_seed(seed, {noise, i}). A pose thus sees
    // the same data in every method.
    std::vector<MeasurementBlock> measure_poses(const Scenario &scenario, std::span<const std::size_t> grid_indices,
                                                std::span<const Pose> poses, const CMat &X, double sigma2,
                                                std::uint64_t seed);

    struct ProposedResult
    {
        std::vector<MeasurementBlock> blocks;
        PowerEstimate step_one;
        std::vector<UserEstimate> models;
        RMat grid_estimate; // M-bar x K
    };

    // Step I at the M measurement poses followed by Step II and reconstruction on the grid
    ProposedResult run_proposed(const Scenario &scenario, const TrialInputs &inputs, const PipelineConfig &cfg,
                                std::size_t threads = 1);
}

#endif
