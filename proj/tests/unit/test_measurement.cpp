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
#include "sixdma/measurement.hpp"
#include "sixdma/scenario.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace sixdma;

namespace
{
    CMat random_matrix(Eigen::Index r, Eigen::Index c, Rng &rng)
    {
        CMat A(r, c);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j)
                A(i, j) = complex_normal(rng);
        return A;
    }

    std::filesystem::path temp_file(const std::string &name)
    {
        return std::filesystem::temp_directory_path() / ("sixdma_test_" + name);
    }
}

TEST_CASE("pilot statistics", "[measurement]")
{
    Rng rng(50);
    const CMat X = generate_pilots(400, 250, rng);
    const double n = double(X.size());
    const std::complex<double> mean = X.sum() / n;
    const double power = X.squaredNorm() / n;
    const std::complex<double> pseudo = (X.array() * X.array()).sum() / n;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(power - 1.0) < 0.01);
    CHECK(std::abs(pseudo) < 0.01);

    // Prefix property: shorter pilots are the first rows of longer ones
    Rng a(51), b(51);
    const CMat long_x = generate_pilots(90, 5, a);
    const CMat short_x = generate_pilots(10, 5, b);
    CHECK(long_x.topRows(10) == short_x);

    CHECK_THROWS_AS(generate_pilots(0, 3, rng), std::invalid_argument);
}

TEST_CASE("received block", "[measurement]")
{
    Rng rng(52);
    const Eigen::Index L = 12, K = 3, N = 4;
    const CMat X = generate_pilots(L, K, rng);
    const Eigen::VectorXi all = Eigen::VectorXi::Ones(K);

    SECTION("zero channels and zero noise give zero")
    {
        const auto b = receive_block(X, CMat::Zero(N, K), all, 0.0, rng);
        CHECK(b.received.norm() == 0.0);
        CHECK(b.sample_cov.norm() == 0.0);
    }

    SECTION("single user without noise is an outer product")
    {
        const CMat x = X.leftCols(1);
        const CMat h = random_matrix(N, 1, rng);
        const auto b = receive_block(x, h, Eigen::VectorXi::Ones(1), 0.0, rng, 7);
        CHECK(b.pose_index == 7);
        CHECK((b.received - x * h.transpose()).norm() < 1e-13);
    }

    SECTION("blocked users are removed")
    {
        const CMat H = random_matrix(N, K, rng);
        Eigen::VectorXi z = all;
        z[1] = 0;
        const auto b = receive_block(X, H, z, 0.0, rng);
        CMat H0 = H;
        H0.col(1).setZero();
        CHECK((b.received - X * H0.transpose()).norm() < 1e-12);
    }

    SECTION("linear in the channel")
    {
        const CMat H1 = random_matrix(N, K, rng), H2 = random_matrix(N, K, rng);
        const CMat W = CMat::Zero(L, N);
        const auto y1 = receive_block(X, H1, all, 0.0, W).received;
        const auto y2 = receive_block(X, H2, all, 0.0, W).received;
        const auto y = receive_block(X, 2.0 * H1 - H2, all, 0.0, W).received;
        CHECK((y - (2.0 * y1 - y2)).norm() < 1e-12 * y.norm());
    }

    SECTION("noise enters with the square root of its power")
    {
        const CMat W = random_matrix(L, N, rng);
        const auto b = receive_block(X, CMat::Zero(N, K), all, 0.25, W);
        CHECK((b.received - 0.5 * W).norm() < 1e-14);
    }

    SECTION("shape errors throw")
    {
        CHECK_THROWS_AS(receive_block(X, CMat::Zero(N, K + 1), all, 1.0, rng), std::invalid_argument);
        CHECK_THROWS_AS(receive_block(X, CMat::Zero(N, K), Eigen::VectorXi::Ones(K + 1), 1.0, rng),
                        std::invalid_argument);
        CHECK_THROWS_AS(receive_block(X, CMat::Zero(N, K), all, -1.0, rng), std::invalid_argument);
    }
}

TEST_CASE("stacked blocks with one block equal a single block", "[measurement]")
{
    Rng rng(53);
    const CMat X = generate_pilots(9, 4, rng);
    const CMat H = random_matrix(4, 4, rng);
    const CMat W = random_matrix(9, 4, rng);
    Eigen::VectorXi z = Eigen::VectorXi::Ones(4);
    z[2] = 0;
    const auto a = receive_block(X, H, z, 0.3, W, 3);
    const auto b = receive_stacked(X, H.transpose(), z, 0.3, W, 3);
    CHECK((a.received - b.received).norm() < 1e-13);
    CHECK((a.sample_cov - b.sample_cov).norm() < 1e-13);
    CHECK_THROWS_AS(receive_stacked(X, H.transpose(), z, 0.3, random_matrix(9, 5, rng)), std::invalid_argument);
}

TEST_CASE("sample covariance", "[measurement]")
{
    Rng rng(54);
    const CMat y = random_matrix(6, 1, rng);
    CHECK((sample_covariance(y) - y * y.adjoint()).norm() < 1e-13);

    for (int i = 0; i < 50; ++i)
    {
        const CMat Y = random_matrix(10, 1 + i % 7, rng);
        const CMat S = sample_covariance(Y);
        CHECK((S - S.adjoint()).norm() == 0.0);
        CHECK((S - Y * Y.adjoint() / double(Y.cols())).norm() < 1e-12 * S.norm());
        const Eigen::SelfAdjointEigenSolver<CMat> eig(S);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
    }
    CHECK_THROWS_AS(sample_covariance(CMat(3, 0)), std::invalid_argument);
}

TEST_CASE("expected sample covariance under noise", "[measurement]")
{
    // Orthogonal channel columns: E[Sigma-hat] = X diag(|h_k|^2 / N) X^H + sigma2 I
    Rng rng(55);
    const Eigen::Index L = 8, K = 3, N = 4;
    const CMat X = generate_pilots(L, K, rng);
    CMat H = CMat::Zero(N, K);
    H(0, 0) = 2.0;
    H(1, 1) = std::complex<double>(0.0, 1.0);
    H(2, 2) = std::complex<double>(0.6, 0.8);
    H(3, 2) = 1.0;
    const double sigma2 = 0.5;
    const RVec eta = H.colwise().squaredNorm().transpose() / double(N);
    const CMat model = X * eta.cast<std::complex<double>>().asDiagonal() * X.adjoint() +
                       sigma2 * CMat::Identity(L, L);

    CMat acc = CMat::Zero(L, L);
    const int draws = 20000;
    for (int i = 0; i < draws; ++i)
        acc += receive_block(X, H, Eigen::VectorXi::Ones(K), sigma2, rng).sample_cov;
    acc /= double(draws);
    CHECK((acc - model).norm() / model.norm() < 0.02);
}

TEST_CASE("expected sample covariance under fading", "[measurement]")
{
    ScenarioConfig cfg;
    cfg.users = 5;
    cfg.evaluation_poses = 20;
    cfg.measurement_poses = 4;
    cfg.surfaces = 2;
    const auto sc = generate_scenario(cfg, 56);
    const auto pattern = AntennaPattern::half_space_directive();
    // Pose that sees the most power
    const auto all = expected_power(sc.users, sc.grid, cfg.layout(), pattern);
    Eigen::Index best = 0;
    all.rowwise().sum().maxCoeff(&best);
    const auto &pose = sc.grid[std::size_t(best)];
    const RMat P = all.row(best);
    const double N = double(cfg.antennas());

    Rng rng(57);
    const CMat X = generate_pilots(10, cfg.users, rng);
    const RVec eta = P.row(0).transpose() / N;
    REQUIRE(eta.maxCoeff() > 0.0);
    const double sigma2 = eta.maxCoeff() * 0.1;
    const CMat model = X * eta.cast<std::complex<double>>().asDiagonal() * X.adjoint() +
                       sigma2 * CMat::Identity(10, 10);

    const PoseChannelModel channel(sc.users, pose, cfg.layout(), pattern, cfg.wavelength);
    const auto fading = draw_fading(sc.users, 1000, rng);
    const auto z = sparsity_indicator(sc.users, std::vector<Pose>{pose}, pattern).row(0).transpose().eval();
    const auto b = receive_stacked(X, channel.stacked_transposed(fading), z, sigma2, rng);
    REQUIRE(b.received.cols() == 4000);
    CHECK((b.sample_cov - model).norm() / model.norm() < 0.1);
}

TEST_CASE("noise power for a target SNR", "[measurement]")
{
    RMat P(2, 2);
    P << 8.0, 0.0, 4.0, 12.0;
    // Mean per-antenna power over supported pairs: (2 + 1 + 3) / 3 = 2
    CHECK(noise_power_for_snr(P, 4, 0.0) == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(noise_power_for_snr(P, 4, 10.0) == Catch::Approx(0.2).epsilon(1e-14));
    CHECK(noise_power_for_snr(P, 4, -10.0) == Catch::Approx(20.0).epsilon(1e-14));
    CHECK_THROWS_AS(noise_power_for_snr(RMat::Zero(2, 2), 4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(noise_power_for_snr(P, 0, 0.0), std::invalid_argument);
}

TEST_CASE("matrix container", "[measurement]")
{
    Rng rng(58);
    const auto path = temp_file("container.cmat");
    std::vector<NamedMatrix> mats{{"A", random_matrix(3, 5, rng)}, {"empty", CMat(0, 2)},
                                  {"B", random_matrix(7, 1, rng), {{"pose", 4}}}};
    write_matrix_container(path, mats, {{"run", "test"}});

    nlohmann::json meta;
    const auto back = read_matrix_container(path, &meta);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
    {
        CHECK(back[i].name == mats[i].name);
        CHECK(back[i].data.rows() == mats[i].data.rows());
        CHECK(back[i].data.cols() == mats[i].data.cols());
        CHECK(back[i].data == mats[i].data);
    }
    CHECK(back[2].attributes.at("pose") == 4);
    CHECK(meta.at("run") == "test");

    {
        std::ofstream bad(path, std::ios::binary);
        bad << "NOTAMATRIXFILE";
    }
    CHECK_THROWS(read_matrix_container(path));
    std::filesystem::remove(path);

    const auto blocks_path = temp_file("blocks.cmat");
    MeasurementBlock blk;
    blk.pose_index = 11;
    blk.received = random_matrix(4, 8, rng);
    blk.sample_cov = sample_covariance(blk.received);
    write_blocks(blocks_path, {blk});
    const auto entries = read_matrix_container(blocks_path);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].name == "Y_11");
    CHECK(entries[1].name == "S_11");
    CHECK(entries[1].data == blk.sample_cov);
    std::filesystem::remove(blocks_path);
}
