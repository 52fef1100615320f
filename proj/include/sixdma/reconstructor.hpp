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

#ifndef SIXDMA_RECONSTRUCTOR_HPP
#define SIXDMA_RECONSTRUCTOR_HPP

#include "sixdma/channel.hpp"
#include "sixdma/geometry.hpp"

#include <json.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace sixdma
{
    // Sorted pose indices where user k is marked active in Z
    struct SupportSet
    {
        std::vector<std::size_t> indices;

        std::size_t size() const { return indices.size(); }
        bool empty() const { return indices.empty(); }
    };

    SupportSet support_of(const SparsityMatrix &Z, Eigen::Index k);

    // Gains of every grid DOA at the supported poses: atoms(i, g) = g(u_{I_i}, f_g).
    // grid_doas refers to caller-owned storage that must outlive the dictionary.
    struct Dictionary
    {
        std::span<const Vec3> grid_doas;
        RMat atoms;
    };

    // Throws std::invalid_argument for an empty support or an empty grid
    Dictionary build_dictionary(const SupportSet &support, std::span<const Pose> poses,
                                const AntennaPattern &pattern, std::span<const Vec3> grid_doas);

    struct UserEstimate
    {
        double s_hat = 0.0;             // Multi-path average power
        Vec3 f_hat = Vec3::Zero();      // Cluster-center DOA, unit length when valid
        std::ptrdiff_t grid_index = -1; // Selected atom, -1 if the user was not observed
        double residual = 0.0;          // ||p_I - N v_g s||^2

        bool valid() const { return grid_index >= 0; }
    };

    // Single-atom non-negative fit over the whole dictionary. For each atom
    //   s_g = max(0, <v_g, p_I> / (N ||v_g||^2)),
    // and the atom with the smallest residual wins, ties going to the lowest index.
    // An empty support yields an invalid estimate with s_hat = 0.
    UserEstimate estimate_user(const RVec &p_bar_col, const SupportSet &support, const Dictionary &dict,
                               std::size_t antennas);

    // Step II for all users
    std::vector<UserEstimate> estimate_users(const RMat &p_bar, const SparsityMatrix &Z, std::span<const Pose> poses,
                                             const AntennaPattern &pattern, std::span<const Vec3> grid_doas,
                                             std::size_t antennas);

    // [P-hat]_{b,k} = N g(u_b, f_hat_k) s_hat_k; invalid users give zero columns
    RMat reconstruct_power(std::span<const UserEstimate> models, std::span<const Pose> query_poses,
                           const AntennaPattern &pattern, std::size_t antennas);

    nlohmann::json to_json(std::span<const UserEstimate> models);
    std::vector<UserEstimate> user_estimates_from_json(const nlohmann::json &j);
}

#endif
