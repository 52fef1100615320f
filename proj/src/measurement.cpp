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

#include "sixdma/measurement.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace sixdma
{
    CMat generate_pilots(std::size_t L, std::size_t K, Rng &rng)
    {
        if (L == 0 || K == 0)
            throw std::invalid_argument("generate_pilots: L and K must be positive");
        CMat X(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(K));
        for (Eigen::Index l = 0; l < X.rows(); ++l)
            for (Eigen::Index k = 0; k < X.cols(); ++k)
                X(l, k) = complex_normal(rng);
        return X;
    }

    CMat unit_noise(std::size_t L, std::size_t N, Rng &rng)
    {
        CMat W(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(N));
        for (Eigen::Index l = 0; l < W.rows(); ++l)
            for (Eigen::Index n = 0; n < W.cols(); ++n)
                W(l, n) = complex_normal(rng);
        return W;
    }

    CMat sample_covariance(const CMat &Y)
    {
        if (Y.cols() == 0)
            throw std::invalid_argument("sample_covariance: at least one antenna is required");
        const auto L = Y.rows();
        CMat S = CMat::Zero(L, L);
        S.selfadjointView<Eigen::Lower>().rankUpdate(Y, 1.0 / double(Y.cols()));
        // Mirror the lower triangle so that S is exactly Hermitian
        S.triangularView<Eigen::StrictlyUpper>() = S.adjoint();
        return S;
    }

    MeasurementBlock receive_block(const CMat &X, const CMat &H, const Eigen::VectorXi &z_row,
                                   double sigma2, const CMat &W_unit, std::size_t pose_index)
    {
        if (H.cols() != X.cols())
            throw std::invalid_argument("receive_block: channel has " + std::to_string(H.cols()) +
                                        " users, pilots have " + std::to_string(X.cols()));
        if (z_row.size() != X.cols())
            throw std::invalid_argument("receive_block: sparsity row length does not match the user count");
        if (W_unit.rows() != X.rows() || W_unit.cols() != H.rows())
            throw std::invalid_argument("receive_block: noise block must be L x N");
        if (!(sigma2 >= 0.0))
            throw std::invalid_argument("receive_block: noise power must be non-negative");

        CMat Hm = H;
        for (Eigen::Index k = 0; k < Hm.cols(); ++k)
            if (z_row[k] == 0)
                Hm.col(k).setZero();

        MeasurementBlock b;
        b.pose_index = pose_index;
        b.received = X * Hm.transpose();
        if (sigma2 > 0.0)
            b.received += std::sqrt(sigma2) * W_unit;
        b.sample_cov = sample_covariance(b.received);
        return b;
    }

    MeasurementBlock receive_block(const CMat &X, const CMat &H, const Eigen::VectorXi &z_row,
                                   double sigma2, Rng &rng, std::size_t pose_index)
    {
        const CMat W = unit_noise(std::size_t(X.rows()), std::size_t(H.rows()), rng);
        return receive_block(X, H, z_row, sigma2, W, pose_index);
    }

    MeasurementBlock receive_stacked(const CMat &X, const CMat &stacked_channels, const Eigen::VectorXi &z_row,
                                     double sigma2, const CMat &W_unit, std::size_t pose_index)
    {
        if (stacked_channels.rows() != X.cols())
            throw std::invalid_argument("receive_stacked: channel has " + std::to_string(stacked_channels.rows()) +
                                        " users, pilots have " + std::to_string(X.cols()));
        if (z_row.size() != X.cols())
            throw std::invalid_argument("receive_stacked: sparsity row length does not match the user count");
        if (W_unit.rows() != X.rows() || W_unit.cols() != stacked_channels.cols())
            throw std::invalid_argument("receive_stacked: noise block must be L x (N S)");
        if (!(sigma2 >= 0.0))
            throw std::invalid_argument("receive_stacked: noise power must be non-negative");

        MeasurementBlock b;
        b.pose_index = pose_index;
        b.received = X * (z_row.cast<std::complex<double>>().asDiagonal() * stacked_channels);
        if (sigma2 > 0.0)
            b.received += std::sqrt(sigma2) * W_unit;
        b.sample_cov = sample_covariance(b.received);
        return b;
    }

    MeasurementBlock receive_stacked(const CMat &X, const CMat &stacked_channels, const Eigen::VectorXi &z_row,
                                     double sigma2, Rng &rng, std::size_t pose_index)
    {
        const CMat W = unit_noise(std::size_t(X.rows()), std::size_t(stacked_channels.cols()), rng);
        return receive_stacked(X, stacked_channels, z_row, sigma2, W, pose_index);
    }

    double noise_power_for_snr(const RMat &P, std::size_t antennas, double target_snr_db)
    {
        if (antennas == 0)
            throw std::invalid_argument("noise_power_for_snr: antenna count must be positive");
        double sum = 0.0;
        std::size_t count = 0;
        for (Eigen::Index k = 0; k < P.cols(); ++k)
            for (Eigen::Index m = 0; m < P.rows(); ++m)
                if (P(m, k) > 0.0)
                {
                    sum += P(m, k) / double(antennas);
                    ++count;
                }
        if (count == 0)
            throw std::invalid_argument("noise_power_for_snr: scenario has no supported pose-user pair");
        return (sum / double(count)) / std::pow(10.0, target_snr_db / 10.0);
    }

    // ---------- Binary container ----------

    namespace
    {
        constexpr char magic[8] = {'6', 'D', 'M', 'A', 'C', 'M', 'A', 'T'};

        void put_u64(std::ostream &os, std::uint64_t v)
        {
            unsigned char b[8];
            for (int i = 0; i < 8; ++i)
                b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
            os.write(reinterpret_cast<const char *>(b), 8);
        }

        std::uint64_t get_u64(std::istream &is)
        {
            unsigned char b[8];
            if (!is.read(reinterpret_cast<char *>(b), 8))
                throw std::runtime_error("matrix container: truncated file");
            std::uint64_t v = 0;
            for (int i = 0; i < 8; ++i)
                v |= std::uint64_t(b[i]) << (8 * i);
            return v;
        }

        void put_f64(std::ostream &os, double x)
        {
            put_u64(os, std::bit_cast<std::uint64_t>(x));
        }

        double get_f64(std::istream &is)
        {
            return std::bit_cast<double>(get_u64(is));
        }
    }

    void write_matrix_container(const std::filesystem::path &path, const std::vector<NamedMatrix> &matrices,
                                const nlohmann::json &metadata)
    {
        nlohmann::json header = metadata;
        header["format"] = "sixdma-cmat";
        header["version"] = 1;
        auto &list = header["matrices"] = nlohmann::json::array();
        std::uint64_t offset = 0;
        for (const auto &m : matrices)
        {
            nlohmann::json e = m.attributes;
            e["name"] = m.name;
            e["rows"] = m.data.rows();
            e["cols"] = m.data.cols();
            e["offset"] = offset;
            list.push_back(e);
            offset += std::uint64_t(m.data.size()) * 16;
        }
        const std::string text = header.dump();

        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("matrix container: cannot open " + path.string() + " for writing");
        os.write(magic, 8);
        put_u64(os, text.size());
        os.write(text.data(), std::streamsize(text.size()));
        for (const auto &m : matrices)
            for (Eigen::Index r = 0; r < m.data.rows(); ++r)
                for (Eigen::Index c = 0; c < m.data.cols(); ++c)
                {
                    put_f64(os, m.data(r, c).real());
                    put_f64(os, m.data(r, c).imag());
                }
        if (!os)
            throw std::runtime_error("matrix container: write failed for " + path.string());
    }

    std::vector<NamedMatrix> read_matrix_container(const std::filesystem::path &path, nlohmann::json *metadata)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw std::runtime_error("matrix container: cannot open " + path.string());
        char m[8];
        if (!is.read(m, 8) || std::memcmp(m, magic, 8) != 0)
            throw std::runtime_error("matrix container: bad magic in " + path.string());
        const auto len = get_u64(is);
        std::string text(len, '\0');
        if (!is.read(text.data(), std::streamsize(len)))
            throw std::runtime_error("matrix container: truncated header");
        const auto header = nlohmann::json::parse(text);
        const auto payload_start = is.tellg();

        std::vector<NamedMatrix> out;
        for (const auto &e : header.at("matrices"))
        {
            NamedMatrix nm;
            nm.name = e.at("name").get<std::string>();
            const auto rows = e.at("rows").get<Eigen::Index>();
            const auto cols = e.at("cols").get<Eigen::Index>();
            is.seekg(payload_start + std::streamoff(e.at("offset").get<std::uint64_t>()));
            nm.data.resize(rows, cols);
            for (Eigen::Index r = 0; r < rows; ++r)
                for (Eigen::Index c = 0; c < cols; ++c)
                {
                    const double re = get_f64(is);
                    const double im = get_f64(is);
                    nm.data(r, c) = {re, im};
                }
            nm.attributes = e;
            for (const char *key : {"name", "rows", "cols", "offset"})
                nm.attributes.erase(key);
            out.push_back(std::move(nm));
        }
        if (metadata)
        {
            *metadata = header;
            metadata->erase("matrices");
        }
        return out;
    }

    void write_blocks(const std::filesystem::path &path, const std::vector<MeasurementBlock> &blocks)
    {
        std::vector<NamedMatrix> mats;
        for (const auto &b : blocks)
        {
            nlohmann::json attr = {{"pose_index", b.pose_index}};
            mats.push_back({"Y_" + std::to_string(b.pose_index), b.received, attr});
            mats.push_back({"S_" + std::to_string(b.pose_index), b.sample_cov, attr});
        }
        write_matrix_container(path, mats);
    }
}
