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

#ifndef SIXDMA_BASELINES_HPP
#define SIXDMA_BASELINES_HPP

#include "sixdma/pipeline.hpp"

namespace sixdma
{
    // Step I run directly at every evaluation-grid pose, no reconstruction.
    // Returns the M-bar x K matrix of estimated powers (summed over the N antennas).
    RMat exhaustive_measurement(const Scenario &scenario, const CMat &X, double sigma2, const EstimatorConfig &cfg,
                                std::uint64_t seed, std::size_t threads = 1);

    // Same run, keeping eta, the thresholded support and the per-pose traces
    PowerEstimate exhaustive_estimate(const Scenario &scenario, const CMat &X, double sigma2,
                                      const EstimatorConfig &cfg, std::uint64_t seed, std::size_t threads = 1);

    inline RMat exhaustive_measurement(const Scenario &scenario, const TrialInputs &inputs, const EstimatorConfig &cfg,
                                       std::size_t threads = 1)
    {
        return exhaustive_measurement(scenario, inputs.pilots, inputs.sigma2, cfg, inputs.seed, threads);
    }
}

#endif
