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

#ifndef SIXDMA_MEASUREMENT_HPP
#define SIXDMA_MEASUREMENT_HPP

#include "sixdma/channel.hpp"
#include "sixdma/random.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace sixdma
{
    // Received pilot block of one pose
    struct MeasurementBlock
    {
        std::size_t pose_index = 0;
        CMat received;   // Y, L x (N S) for S stacked fading blocks
        CMat sample_cov; // Y Y^H / cols(Y), L x L
    };

    // L x K pilots with i.i.d. CN(0,1) entries, drawn row by row so that the first
    // rows of a longer pilot equal a shorter pilot from the same stream
    CMat generate_pilots(std::size_t L, std::size_t K, Rng &rng);

    // L x N matrix of i.i.d. CN(0,1) entries, drawn row by row
    CMat unit_noise(std::size_t L, std::size_t N, Rng &rng);

    // (1/N) Y Y^H
    CMat sample_covariance(const CMat &Y);

    // Y = X diag(z) H^T + sqrt(sigma2) * W_unit
    MeasurementBlock receive_block(const CMat &X, const CMat &H, const Eigen::VectorXi &z_row,
                                   double sigma2, const CMat &W_unit, std::size_t pose_index = 0);

    // As above, drawing the noise from rng
    MeasurementBlock receive_block(const CMat &X, const CMat &H, const Eigen::VectorXi &z_row,
                                   double sigma2, Rng &rng, std::size_t pose_index = 0);

    // S blocks of the same pilots over independent fading realizations, stacked side by
    // side: Y = [Y_1 ... Y_S] = X diag(z) [H_1^T ... H_S^T] + sqrt(sigma2) W with W_unit L x (N S)
    MeasurementBlock receive_stacked(const CMat &X, const CMat &stacked_channels, const Eigen::VectorXi &z_row,
                                     double sigma2, const CMat &W_unit, std::size_t pose_index = 0);

    MeasurementBlock receive_stacked(const CMat &X, const CMat &stacked_channels, const Eigen::VectorXi &z_row,
                                     double sigma2, Rng &rng, std::size_t pose_index = 0);

    // Noise power such that the mean per-antenna power over supported pairs, i.e.
    // mean_{P(m,k) > 0} P(m,k) / N, divided by sigma2 equals the target SNR.
    // Throws std::invalid_argument if no pair is supported.
    double noise_power_for_snr(const RMat &P, std::size_t antennas, double target_snr_db);

    // Binary container for complex matrices:
    //   bytes [0, 8)   magic "6DMACMAT"
    //   bytes [8, 16)  header length H as little-endian uint64
    //   bytes [16, 16+H) UTF-8 JSON header {"format", "version", "matrices": [{"name", "rows",
    //                  "cols", "offset", ...}], ...}
    //   payload        for each matrix at byte `offset` after the header: row-major entries,
    //                  each stored as real then imaginary part, little-endian IEEE-754 float64
    struct NamedMatrix
    {
        std::string name;
        CMat data;
        nlohmann::json attributes = nlohmann::json::object();
    };

    void write_matrix_container(const std::filesystem::path &path, const std::vector<NamedMatrix> &matrices,
                                const nlohmann::json &metadata = nlohmann::json::object());
    std::vector<NamedMatrix> read_matrix_container(const std::filesystem::path &path,
                                                   nlohmann::json *metadata = nullptr);

    // Y_m and Sigma-hat_m of every block as "Y_<m>" / "S_<m>" entries
    void write_blocks(const std::filesystem::path &path, const std::vector<MeasurementBlock> &blocks);
}

#endif
