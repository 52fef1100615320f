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

#ifndef SIXDMA_CHANNEL_HPP
#define SIXDMA_CHANNEL_HPP

#include "sixdma/geometry.hpp"
#include "sixdma/random.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace sixdma
{
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;
    using RVec = Eigen::VectorXd;
    using RMat = Eigen::MatrixXd;

    // Binary M x K matrix: entry (m,k) is 1 iff user k has non-zero gain at pose m
    using SparsityMatrix = Eigen::MatrixXi;

    struct PathComponent
    {
        double gain = 0.0;  // Linear path power
        double phase = 0.0; // Phase shift [rad]
        Vec3 doa = Vec3::UnitX();
    };

    // Scattering cluster of one user
    struct UserChannel
    {
        std::vector<PathComponent> paths;
        Vec3 center_doa = Vec3::UnitX(); // DOA of the cluster center
        double multipath_power = 0.0;    // Sum of the path gains

        // Throws std::invalid_argument if any invariant is violated
        void validate() const;
    };

    // Builds a user with equal power split across one path per DOA, all phases zero
    UserChannel make_user_channel(const Vec3 &center_doa, std::span<const Vec3> path_doas, double total_power);

    // Copy of the user with fresh i.i.d. uniform path phases
    UserChannel redraw_phases(const UserChannel &user, Rng &rng);

    // Far-field steering vector: a[n] = exp(-j 2pi/lambda f^T r_n)
    CVec steering_vector(const Pose &pose, const SurfaceLayout &layout, const Vec3 &f, double lambda);

    // Multi-path channel of one user at one surface, summing the paths with per-path gains
    CVec exact_channel(const UserChannel &user, const Pose &pose, const SurfaceLayout &layout,
                       const AntennaPattern &pattern, double lambda);

    // Cluster-center approximation: all paths share the center gain and steering phase,
    // with i.i.d. uniform residual phases drawn from rng
    CVec approx_channel(const UserChannel &user, const Pose &pose, const SurfaceLayout &layout,
                        const AntennaPattern &pattern, double lambda, Rng &rng);

    // Path phasors exp(-j phi) of S independent fading blocks: one S x Gamma_k matrix per user.
    // Phases belong to the paths, so one draw serves every pose.
    struct FadingBlocks
    {
        std::size_t blocks = 0;
        std::vector<CMat> phasors;
    };

    FadingBlocks draw_fading(std::span<const UserChannel> users, std::size_t blocks, Rng &rng);

    // Per-path terms sqrt(mu g) a of all users at one pose, so that channels for many
    // phase draws at a fixed pose reduce to small matrix products
    class PoseChannelModel
    {
    public:
        PoseChannelModel(std::span<const UserChannel> users, const Pose &pose, const SurfaceLayout &layout,
                         const AntennaPattern &pattern, double lambda);

        std::size_t antennas() const { return antennas_; }
        std::size_t users() const { return terms_.size(); }

        // N x K channel with the phases stored in the users
        CMat evaluate(std::span<const UserChannel> users) const;

        // N x K channel of fading block s
        CMat realize(const FadingBlocks &fading, std::size_t s) const;

        // K x (N S) matrix [H_1^T ... H_S^T]
        CMat stacked_transposed(const FadingBlocks &fading) const;

    private:
        std::size_t antennas_;
        std::vector<CMat> terms_; // per user, Gamma_k x N, row i = sqrt(mu_i g_i) a_i^T
    };

    // N x K matrix of exact channels for all users at one pose
    CMat channel_matrix(std::span<const UserChannel> users, const Pose &pose, const SurfaceLayout &layout,
                        const AntennaPattern &pattern, double lambda);

    // Z with [Z]_{m,k} = 1 iff at least one path of user k has positive gain at pose m
    SparsityMatrix sparsity_indicator(std::span<const UserChannel> users, std::span<const Pose> poses,
                                      const AntennaPattern &pattern);

    // Average power summed over the N antennas, using the cluster-center model:
    //   [P]_{m,k} = N g(u_m, f_k) s_k
    RMat ground_truth_power(std::span<const UserChannel> users, std::span<const Pose> poses,
                            const SurfaceLayout &layout, const AntennaPattern &pattern);

    // Exact expectation of sum_n |h_n|^2 over the path phases: N sum_i mu_i g(u_m, f_i)
    RMat expected_power(std::span<const UserChannel> users, std::span<const Pose> poses,
                        const SurfaceLayout &layout, const AntennaPattern &pattern);
}

#endif
