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

#include "sixdma/reconstructor.hpp"

#include <stdexcept>
#include <string>

namespace sixdma
{
    SupportSet support_of(const SparsityMatrix &Z, Eigen::Index k)
    {
        if (k < 0 || k >= Z.cols())
            throw std::out_of_range("support_of: user index out of range");
        SupportSet s;
        for (Eigen::Index m = 0; m < Z.rows(); ++m)
            if (Z(m, k) != 0)
                s.indices.push_back(std::size_t(m));
        return s;
    }

    Dictionary build_dictionary(const SupportSet &support, std::span<const Pose> poses,
                                const AntennaPattern &pattern, std::span<const Vec3> grid_doas)
    {
        if (support.empty())
            throw std::invalid_argument("build_dictionary: empty support, the user was not observed");
        if (grid_doas.empty())
            throw std::invalid_argument("build_dictionary: the DOA grid is empty");

        Dictionary dict;
        dict.grid_doas = grid_doas;
        dict.atoms.resize(Eigen::Index(support.size()), Eigen::Index(grid_doas.size()));
        for (std::size_t i = 0; i < support.size(); ++i)
        {
            const auto m = support.indices[i];
            if (m >= poses.size())
                throw std::out_of_range("build_dictionary: support index " + std::to_string(m) + " out of range");
            for (std::size_t g = 0; g < grid_doas.size(); ++g)
                dict.atoms(Eigen::Index(i), Eigen::Index(g)) = effective_gain(pattern, poses[m], grid_doas[g]);
        }
        return dict;
    }

    UserEstimate estimate_user(const RVec &p_bar_col, const SupportSet &support, const Dictionary &dict,
                               std::size_t antennas)
    {
        UserEstimate best;
        if (support.empty())
            return best;
        if (dict.atoms.rows() != Eigen::Index(support.size()))
            throw std::invalid_argument("estimate_user: dictionary was built for a different support");

        RVec p(Eigen::Index(support.size()));
        for (std::size_t i = 0; i < support.size(); ++i)
        {
            if (Eigen::Index(support.indices[i]) >= p_bar_col.size())
                throw std::out_of_range("estimate_user: support index out of range");
            p[Eigen::Index(i)] = p_bar_col[Eigen::Index(support.indices[i])];
        }

        const double N = double(antennas);
        for (Eigen::Index g = 0; g < dict.atoms.cols(); ++g)
        {
            const auto v = dict.atoms.col(g);
            const double vv = v.squaredNorm();
            const double s = vv > 0.0 ? std::max(0.0, v.dot(p) / (N * vv)) : 0.0;
            const double r = (p - (N * s) * v).squaredNorm();
            if (best.grid_index < 0 || r < best.residual)
            {
                best.grid_index = g;
                best.residual = r;
                best.s_hat = s;
            }
        }
        best.f_hat = dict.grid_doas[std::size_t(best.grid_index)];
        return best;
    }

    std::vector<UserEstimate> estimate_users(const RMat &p_bar, const SparsityMatrix &Z, std::span<const Pose> poses,
                                             const AntennaPattern &pattern, std::span<const Vec3> grid_doas,
                                             std::size_t antennas)
    {
        if (p_bar.rows() != Z.rows() || p_bar.cols() != Z.cols())
            throw std::invalid_argument("estimate_users: power and sparsity matrices differ in shape");
        if (Eigen::Index(poses.size()) != p_bar.rows())
            throw std::invalid_argument("estimate_users: one pose per row of the power matrix is required");

        std::vector<UserEstimate> out(std::size_t(p_bar.cols()));
        for (Eigen::Index k = 0; k < p_bar.cols(); ++k)
        {
            const auto support = support_of(Z, k);
            if (support.empty())
                continue;
            const auto dict = build_dictionary(support, poses, pattern, grid_doas);
            out[std::size_t(k)] = estimate_user(p_bar.col(k), support, dict, antennas);
        }
        return out;
    }

    RMat reconstruct_power(std::span<const UserEstimate> models, std::span<const Pose> query_poses,
                           const AntennaPattern &pattern, std::size_t antennas)
    {
        RMat P = RMat::Zero(Eigen::Index(query_poses.size()), Eigen::Index(models.size()));
        for (std::size_t k = 0; k < models.size(); ++k)
        {
            const auto &u = models[k];
            if (!u.valid() || u.s_hat <= 0.0)
                continue;
            for (std::size_t b = 0; b < query_poses.size(); ++b)
                P(Eigen::Index(b), Eigen::Index(k)) =
                    double(antennas) * effective_gain(pattern, query_poses[b], u.f_hat) * u.s_hat;
        }
        return P;
    }

    nlohmann::json to_json(std::span<const UserEstimate> models)
    {
        nlohmann::json users = nlohmann::json::array();
        for (std::size_t k = 0; k < models.size(); ++k)
        {
            const auto &u = models[k];
            users.push_back({{"user", k},
                             {"valid", u.valid()},
                             {"s_hat", u.s_hat},
                             {"f_hat", {u.f_hat.x(), u.f_hat.y(), u.f_hat.z()}},
                             {"grid_index", u.grid_index},
                             {"residual", u.residual}});
        }
        return {{"format", "sixdma-models"}, {"version", 1}, {"users", users}};
    }

    std::vector<UserEstimate> user_estimates_from_json(const nlohmann::json &j)
    {
        if (j.value("format", std::string()) != "sixdma-models")
            throw std::invalid_argument("models JSON: missing or unknown format tag");
        std::vector<UserEstimate> out;
        for (const auto &e : j.at("users"))
        {
            UserEstimate u;
            u.s_hat = e.at("s_hat").get<double>();
            const auto &f = e.at("f_hat");
            u.f_hat = Vec3(f.at(0).get<double>(), f.at(1).get<double>(), f.at(2).get<double>());
            u.grid_index = e.at("grid_index").get<std::ptrdiff_t>();
            u.residual = e.at("residual").get<double>();
            out.push_back(u);
        }
        return out;
    }
}
