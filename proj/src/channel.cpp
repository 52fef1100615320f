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

#include <cmath>
#include <stdexcept>

namespace sixdma
{
    namespace
    {
        bool is_unit(const Vec3 &v)
        {
            return std::abs(v.norm() - 1.0) <= 1e-12;
        }
    }

    void UserChannel::validate() const
    {
        if (paths.empty())
            throw std::invalid_argument("UserChannel: at least one path is required");
        if (!is_unit(center_doa))
            throw std::invalid_argument("UserChannel: center DOA must be a unit vector");
        double total = 0.0;
        for (const auto &p : paths)
        {
            if (!(p.gain >= 0.0))
                throw std::invalid_argument("UserChannel: path gains must be non-negative");
            if (!is_unit(p.doa))
                throw std::invalid_argument("UserChannel: path DOAs must be unit vectors");
            total += p.gain;
        }
        if (std::abs(total - multipath_power) > 1e-9 * std::max(1.0, std::abs(total)))
            throw std::invalid_argument("UserChannel: multipath power must equal the sum of the path gains");
    }

    UserChannel make_user_channel(const Vec3 &center_doa, std::span<const Vec3> path_doas, double total_power)
    {
        if (path_doas.empty())
            throw std::invalid_argument("make_user_channel: at least one path is required");
        if (!(total_power >= 0.0))
            throw std::invalid_argument("make_user_channel: total power must be non-negative");

        UserChannel user;
        user.center_doa = center_doa.normalized();
        const double mu = total_power / double(path_doas.size());
        user.paths.reserve(path_doas.size());
        for (const auto &f : path_doas)
            user.paths.push_back({mu, 0.0, f.normalized()});
        user.multipath_power = mu * double(path_doas.size());
        return user;
    }

    UserChannel redraw_phases(const UserChannel &user, Rng &rng)
    {
        UserChannel out = user;
        for (auto &p : out.paths)
            p.phase = two_pi * uniform01(rng);
        return out;
    }

    CVec steering_vector(const Pose &pose, const SurfaceLayout &layout, const Vec3 &f, double lambda)
    {
        if (!(lambda > 0.0))
            throw std::invalid_argument("steering_vector: wavelength must be positive");

        const double k0 = two_pi / lambda;
        const std::size_t N = layout.size();
        CVec a(N);
        for (std::size_t n = 0; n < N; ++n)
        {
            const Vec3 r = pose.position() + pose.matrix() * layout.offset(n);
            const double phase = -k0 * f.dot(r);
            a[Eigen::Index(n)] = {std::cos(phase), std::sin(phase)};
        }
        return a;
    }

    CVec exact_channel(const UserChannel &user, const Pose &pose, const SurfaceLayout &layout,
                       const AntennaPattern &pattern, double lambda)
    {
        CVec h = CVec::Zero(Eigen::Index(layout.size()));
        for (const auto &p : user.paths)
        {
            const double g = effective_gain(pattern, pose, p.doa);
            if (g <= 0.0 || p.gain <= 0.0)
                continue;
            const std::complex<double> amp = std::sqrt(p.gain * g) * std::polar(1.0, -p.phase);
            h += amp * steering_vector(pose, layout, p.doa, lambda);
        }
        return h;
    }

    CVec approx_channel(const UserChannel &user, const Pose &pose, const SurfaceLayout &layout,
                        const AntennaPattern &pattern, double lambda, Rng &rng)
    {
        std::complex<double> cluster = 0.0;
        for (const auto &p : user.paths)
            cluster += std::sqrt(p.gain) * std::polar(1.0, -two_pi * uniform01(rng));

        const double g = effective_gain(pattern, pose, user.center_doa);
        if (g <= 0.0)
            return CVec::Zero(Eigen::Index(layout.size()));
        return (std::sqrt(g) * cluster) * steering_vector(pose, layout, user.center_doa, lambda);
    }

    FadingBlocks draw_fading(std::span<const UserChannel> users, std::size_t blocks, Rng &rng)
    {
        FadingBlocks f;
        f.blocks = blocks;
        f.phasors.reserve(users.size());
        for (const auto &u : users)
        {
            CMat E(static_cast<Eigen::Index>(blocks), static_cast<Eigen::Index>(u.paths.size()));
            for (Eigen::Index s = 0; s < E.rows(); ++s)
                for (Eigen::Index i = 0; i < E.cols(); ++i)
                    E(s, i) = std::polar(1.0, -two_pi * uniform01(rng));
            f.phasors.push_back(std::move(E));
        }
        return f;
    }

    PoseChannelModel::PoseChannelModel(std::span<const UserChannel> users, const Pose &pose,
                                       const SurfaceLayout &layout, const AntennaPattern &pattern, double lambda)
        : antennas_(layout.size())
    {
        const auto N = Eigen::Index(antennas_);
        terms_.reserve(users.size());
        for (const auto &u : users)
        {
            CMat T = CMat::Zero(Eigen::Index(u.paths.size()), N);
            for (std::size_t i = 0; i < u.paths.size(); ++i)
            {
                const auto &path = u.paths[i];
                const double g = effective_gain(pattern, pose, path.doa);
                if (g > 0.0 && path.gain > 0.0)
                    T.row(Eigen::Index(i)) = std::sqrt(path.gain * g) * steering_vector(pose, layout, path.doa, lambda).transpose();
            }
            terms_.push_back(std::move(T));
        }
    }

    CMat PoseChannelModel::evaluate(std::span<const UserChannel> users) const
    {
        if (users.size() != terms_.size())
            throw std::invalid_argument("PoseChannelModel::evaluate: user count mismatch");
        CMat H(Eigen::Index(antennas_), Eigen::Index(terms_.size()));
        for (std::size_t k = 0; k < terms_.size(); ++k)
        {
            const auto &paths = users[k].paths;
            if (Eigen::Index(paths.size()) != terms_[k].rows())
                throw std::invalid_argument("PoseChannelModel::evaluate: path count mismatch");
            CVec e(terms_[k].rows());
            for (std::size_t i = 0; i < paths.size(); ++i)
                e[Eigen::Index(i)] = std::polar(1.0, -paths[i].phase);
            H.col(Eigen::Index(k)) = terms_[k].transpose() * e;
        }
        return H;
    }

    CMat PoseChannelModel::realize(const FadingBlocks &fading, std::size_t s) const
    {
        if (fading.phasors.size() != terms_.size() || s >= fading.blocks)
            throw std::out_of_range("PoseChannelModel::realize: fading block out of range");
        CMat H(Eigen::Index(antennas_), Eigen::Index(terms_.size()));
        for (std::size_t k = 0; k < terms_.size(); ++k)
            H.col(Eigen::Index(k)) = terms_[k].transpose() * fading.phasors[k].row(Eigen::Index(s)).transpose();
        return H;
    }

    CMat PoseChannelModel::stacked_transposed(const FadingBlocks &fading) const
    {
        if (fading.phasors.size() != terms_.size())
            throw std::invalid_argument("PoseChannelModel::stacked_transposed: user count mismatch");
        const auto N = Eigen::Index(antennas_), S = Eigen::Index(fading.blocks);
        CMat G(Eigen::Index(terms_.size()), N * S);
        for (std::size_t k = 0; k < terms_.size(); ++k)
        {
            // (S x N) block-by-antenna channels of user k, laid out row-major along row k
            const CMat B = fading.phasors[k] * terms_[k];
            for (Eigen::Index s = 0; s < S; ++s)
                G.row(Eigen::Index(k)).segment(s * N, N) = B.row(s);
        }
        return G;
    }

    CMat channel_matrix(std::span<const UserChannel> users, const Pose &pose, const SurfaceLayout &layout,
                        const AntennaPattern &pattern, double lambda)
    {
        CMat H(Eigen::Index(layout.size()), Eigen::Index(users.size()));
        for (std::size_t k = 0; k < users.size(); ++k)
            H.col(Eigen::Index(k)) = exact_channel(users[k], pose, layout, pattern, lambda);
        return H;
    }

    SparsityMatrix sparsity_indicator(std::span<const UserChannel> users, std::span<const Pose> poses,
                                      const AntennaPattern &pattern)
    {
        SparsityMatrix Z = SparsityMatrix::Zero(Eigen::Index(poses.size()), Eigen::Index(users.size()));
        for (std::size_t m = 0; m < poses.size(); ++m)
            for (std::size_t k = 0; k < users.size(); ++k)
                for (const auto &p : users[k].paths)
                    if (effective_gain(pattern, poses[m], p.doa) > 0.0)
                    {
                        Z(Eigen::Index(m), Eigen::Index(k)) = 1;
                        break;
                    }
        return Z;
    }

    RMat ground_truth_power(std::span<const UserChannel> users, std::span<const Pose> poses,
                            const SurfaceLayout &layout, const AntennaPattern &pattern)
    {
        const double N = double(layout.size());
        RMat P(Eigen::Index(poses.size()), Eigen::Index(users.size()));
        for (std::size_t m = 0; m < poses.size(); ++m)
            for (std::size_t k = 0; k < users.size(); ++k)
                P(Eigen::Index(m), Eigen::Index(k)) =
                    N * effective_gain(pattern, poses[m], users[k].center_doa) * users[k].multipath_power;
        return P;
    }

    RMat expected_power(std::span<const UserChannel> users, std::span<const Pose> poses,
                        const SurfaceLayout &layout, const AntennaPattern &pattern)
    {
        const double N = double(layout.size());
        RMat P = RMat::Zero(Eigen::Index(poses.size()), Eigen::Index(users.size()));
        for (std::size_t m = 0; m < poses.size(); ++m)
            for (std::size_t k = 0; k < users.size(); ++k)
            {
                double acc = 0.0;
                for (const auto &p : users[k].paths)
                    acc += p.gain * effective_gain(pattern, poses[m], p.doa);
                P(Eigen::Index(m), Eigen::Index(k)) = N * acc;
            }
        return P;
    }
}
