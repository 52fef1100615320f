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

#ifndef SIXDMA_RANDOM_HPP
#define SIXDMA_RANDOM_HPP

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace sixdma
{
    using Rng = std::mt19937_64;

    // SplitMix64 finalizer
    std::uint64_t mix64(std::uint64_t x);

    // Child seed for a labelled sub-stream:
    //   h = parent; for each tag t: h = mix64(h ^ mix64(t + 0x9e3779b97f4a7c15))
    // Streams with different tag tuples are statistically independent, and adding
    // tags for new streams never perturbs existing ones.
    std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> tags);

    // Stream labels used with derive_seed
    namespace stream
    {
        inline constexpr std::uint64_t scenario = 1;
        inline constexpr std::uint64_t pilots = 2;
        inline constexpr std::uint64_t noise = 3;
        inline constexpr std::uint64_t estimator = 4;
        inline constexpr std::uint64_t poses = 5;
        inline constexpr std::uint64_t fading = 6;
    }

    // Uniform in [0, 1)
    double uniform01(Rng &rng);

    // Circularly-symmetric complex Gaussian with the given variance
    std::complex<double> complex_normal(Rng &rng, double variance = 1.0);
}

#endif
