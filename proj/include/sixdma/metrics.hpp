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

#ifndef SIXDMA_METRICS_HPP
#define SIXDMA_METRICS_HPP

#include "sixdma/channel.hpp"
#include "sixdma/random.hpp"

#include <cstddef>
#include <span>

namespace sixdma
{
    // ||P - P_hat||_F^2 / ||P||_F^2; throws std::invalid_argument on shape mismatch or zero reference
    double nmse(const RMat &P_true, const RMat &P_hat);

    struct RateConfig
    {
        double transmit_power = 1.0; // p, linear
        double noise_power = 1.0;    // sigma2, linear
        std::size_t mc_samples = 1000;

        void validate() const;
    };

    // sum_k log2(1 + p/sigma2 sum_b [P]_{b,k}) [bit/s/Hz]
    double sum_rate_upper_bound(const RMat &P, const RateConfig &cfg);

    // log2 det(I_K + p/sigma2 H^H H) for one channel realization
    double sum_rate(const CMat &H, const RateConfig &cfg);

    struct MonteCarloEstimate
    {
        double mean = 0.0;
        double std_error = 0.0;
    };

    // Ergodic sum rate with the B surfaces at `poses`, averaging over i.i.d. path phases
    MonteCarloEstimate ergodic_sum_rate_mc(std::span<const UserChannel> users, std::span<const Pose> poses,
                                           const SurfaceLayout &layout, const AntennaPattern &pattern,
                                           double lambda, const RateConfig &cfg, Rng &rng);
}

#endif
