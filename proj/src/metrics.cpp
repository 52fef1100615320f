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

#include "sixdma/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace sixdma
{
    double nmse(const RMat &P_true, const RMat &P_hat)
    {
        if (P_true.rows() != P_hat.rows() || P_true.cols() != P_hat.cols())
            throw std::invalid_argument("nmse: matrices differ in shape");
        const double ref = P_true.squaredNorm();
        if (!(ref > 0.0))
            throw std::invalid_argument("nmse: ground truth has zero norm");
        return (P_true - P_hat).squaredNorm() / ref;
    }

    void RateConfig::validate() const
    {
        if (!(transmit_power > 0.0))
            throw std::invalid_argument("RateConfig: transmit power must be positive");
        if (!(noise_power > 0.0))
            throw std::invalid_argument("RateConfig: noise power must be positive");
        if (mc_samples < 1)
            throw std::invalid_argument("RateConfig: at least one Monte Carlo sample is required");
    }

    double sum_rate_upper_bound(const RMat &P, const RateConfig &cfg)
    {
        cfg.validate();
        if ((P.array() < 0.0).any())
            throw std::invalid_argument("sum_rate_upper_bound: powers must be non-negative");
        const double snr = cfg.transmit_power / cfg.noise_power;
        double rate = 0.0;
        for (Eigen::Index k = 0; k < P.cols(); ++k)
            rate += std::log2(1.0 + snr * P.col(k).sum());
        return rate;
    }

    double sum_rate(const CMat &H, const RateConfig &cfg)
    {
        cfg.validate();
        const double snr = cfg.transmit_power / cfg.noise_power;
        CMat G = snr * (H.adjoint() * H);
        G.diagonal().array() += 1.0;
        Eigen::LLT<CMat> llt(G);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("sum_rate: I + p/sigma2 H^H H is not positive definite");
        double logdet = 0.0;
        for (Eigen::Index i = 0; i < G.rows(); ++i)
            logdet += 2.0 * std::log(llt.matrixLLT()(i, i).real());
        return logdet / std::log(2.0);
    }

    MonteCarloEstimate ergodic_sum_rate_mc(std::span<const UserChannel> users, std::span<const Pose> poses,
                                           const SurfaceLayout &layout, const AntennaPattern &pattern,
                                           double lambda, const RateConfig &cfg, Rng &rng)
    {
        cfg.validate();
        const auto N = Eigen::Index(layout.size());
        const auto B = Eigen::Index(poses.size());
        const auto K = Eigen::Index(users.size());

        // Per-path amplitude vectors do not depend on the phases, so precompute them
        struct PathTerm
        {
            Eigen::Index user;
            Eigen::Index surface;
            std::size_t path;
            CVec weighted_steering; // sqrt(mu g) a
        };
        std::vector<PathTerm> terms;
        for (Eigen::Index k = 0; k < K; ++k)
            for (Eigen::Index b = 0; b < B; ++b)
                for (std::size_t i = 0; i < users[std::size_t(k)].paths.size(); ++i)
                {
                    const auto &p = users[std::size_t(k)].paths[i];
                    const double g = effective_gain(pattern, poses[std::size_t(b)], p.doa);
                    if (g <= 0.0 || p.gain <= 0.0)
                        continue;
                    terms.push_back({k, b, i, std::sqrt(p.gain * g) * steering_vector(poses[std::size_t(b)], layout, p.doa, lambda)});
                }

        // Welford accumulation of the mean and the sum of squared deviations
        double mean = 0.0, m2 = 0.0;
        CMat H(B * N, K);
        std::vector<std::vector<double>> phases(static_cast<std::size_t>(K));
        for (std::size_t s = 0; s < cfg.mc_samples; ++s)
        {
            for (Eigen::Index k = 0; k < K; ++k)
            {
                auto &ph = phases[std::size_t(k)];
                ph.resize(users[std::size_t(k)].paths.size());
                for (auto &x : ph)
                    x = two_pi * uniform01(rng);
            }
            H.setZero();
            for (const auto &t : terms)
                H.block(t.surface * N, t.user, N, 1) += std::polar(1.0, -phases[std::size_t(t.user)][t.path]) * t.weighted_steering;

            const double r = sum_rate(H, cfg);
            const double delta = r - mean;
            mean += delta / double(s + 1);
            m2 += delta * (r - mean);
        }
        const double n = double(cfg.mc_samples);
        MonteCarloEstimate est;
        est.mean = mean;
        if (cfg.mc_samples > 1)
            est.std_error = std::sqrt(m2 / (n - 1.0) / n);
        return est;
    }
}
