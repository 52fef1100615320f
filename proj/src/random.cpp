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

#include "sixdma/random.hpp"

#include <cmath>

namespace sixdma
{
    std::uint64_t mix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> tags)
    {
        std::uint64_t h = parent;
        for (auto t : tags)
            h = mix64(h ^ mix64(t + 0x9e3779b97f4a7c15ULL));
        return h;
    }

    double uniform01(Rng &rng)
    {
        return double(rng() >> 11) * 0x1.0p-53;
    }

    std::complex<double> complex_normal(Rng &rng, double variance)
    {
        // Marsaglia polar method; the accepted pair gives the real and imaginary parts
        double u, v, s;
        do
        {
            u = 2.0 * uniform01(rng) - 1.0;
            v = 2.0 * uniform01(rng) - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double r = std::sqrt(-variance * std::log(s) / s);
        return {r * u, r * v};
    }
}
