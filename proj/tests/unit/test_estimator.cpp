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

#include "sixdma/estimator.hpp"
#include "sixdma/measurement.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

using namespace sixdma;

namespace
{
    struct Instance
    {
        CMat X;
        RVec eta;
        double sigma2 = 0.0;
        CMat sample_cov;
    };

    // Sample covariance from N antennas with i.i.d. channels of per-antenna power eta_k
    Instance make_instance(Eigen::Index L, Eigen::Index K, Eigen::Index N, Rng &rng, double sigma2 = 0.1)
    {
        Instance in;
        in.X = generate_pilots(std::size_t(L), std::size_t(K), rng);
        in.eta = RVec(K);
        for (Eigen::Index k = 0; k < K; ++k)
            in.eta[k] = uniform01(rng);
        in.sigma2 = sigma2;
        CMat H(N, K);
        for (Eigen::Index n = 0; n < N; ++n)
            for (Eigen::Index k = 0; k < K; ++k)
                H(n, k) = std::sqrt(in.eta[k]) * complex_normal(rng);
        in.sample_cov = receive_block(in.X, H, Eigen::VectorXi::Ones(K), sigma2, rng).sample_cov;
        return in;
    }

    CMat dense_cov(const CMat &X, const RVec &eta, double sigma2)
    {
        CMat S = sigma2 * CMat::Identity(X.rows(), X.rows());
        for (Eigen::Index k = 0; k < X.cols(); ++k)
            S += eta[k] * X.col(k) * X.col(k).adjoint();
        return S;
    }

    double dense_objective(const Instance &in, const RVec &eta)
    {
        return oracle::ml_objective(dense_cov(in.X, eta, in.sigma2), in.sample_cov);
    }
}

TEST_CASE("objective", "[estimator]")
{
    SECTION("zero powers and a white sample covariance")
    {
        const double sigma2 = 0.7;
        const auto st = initial_state(3, 6, sigma2);
        CHECK(st.eta.isZero());
        const CMat S = sigma2 * CMat::Identity(6, 6);
        CHECK(objective(st, S) == Catch::Approx(6.0 * std::log(sigma2) + 6.0).epsilon(1e-13));
    }

    SECTION("dense oracle")
    {
        Rng rng(60);
        for (int i = 0; i < 100; ++i)
        {
            const auto in = make_instance(10, 4, 4, rng);
            const auto st = state_from_eta(in.eta, in.X, in.sigma2);
            const double ref = dense_objective(in, in.eta);
            CHECK(std::abs(objective(st, in.sample_cov) - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
        }
    }

    SECTION("trace term is linear in the sample covariance")
    {
        Rng rng(61);
        const auto in = make_instance(8, 3, 4, rng);
        const auto st = state_from_eta(in.eta, in.X, in.sigma2);
        const double f1 = objective(st, in.sample_cov);
        const double f3 = objective(st, 3.0 * in.sample_cov);
        const double logdet = objective(st, CMat::Zero(8, 8));
        CHECK((f3 - logdet) == Catch::Approx(3.0 * (f1 - logdet)).epsilon(1e-12));
    }
}

TEST_CASE("coordinate gradient", "[estimator]")
{
    Rng rng(62);
    for (int i = 0; i < 100; ++i)
    {
        const auto in = make_instance(8, 3, 4, rng);
        const auto st = state_from_eta(in.eta, in.X, in.sigma2);
        const Eigen::Index k = i % 3;
        const double nu = (uniform01(rng) - 0.5) * in.eta[k];
        const double h = 1e-5;
        RVec plus = in.eta, minus = in.eta;
        plus[k] += nu + h;
        minus[k] += nu - h;
        const double fd = (dense_objective(in, plus) - dense_objective(in, minus)) / (2.0 * h);
        const double g = coordinate_gradient(st, in.sample_cov, in.X.col(k), nu);
        CHECK(std::abs(g - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("stationary step", "[estimator]")
{
    Rng rng(63);
    for (int i = 0; i < 50; ++i)
    {
        const auto in = make_instance(8, 2, 4, rng);
        const auto st = state_from_eta(in.eta, in.X, in.sigma2);
        const double nu = stationary_step(st, in.sample_cov, in.X.col(0));
        CHECK(std::abs(coordinate_gradient(st, in.sample_cov, in.X.col(0), nu)) < 1e-8);
    }

    SECTION("sample covariance equal to the model gives a zero step")
    {
        const auto in = make_instance(8, 2, 4, rng);
        const auto st = state_from_eta(in.eta, in.X, in.sigma2);
        CHECK(std::abs(stationary_step(st, st.model_cov, in.X.col(1))) < 1e-10);
    }

    SECTION("negative steps are clipped at zero power")
    {
        const auto in = make_instance(8, 2, 4, rng);
        auto st = state_from_eta(RVec::Constant(2, 5.0), in.X, in.sigma2);
        const CMat white = in.sigma2 * CMat::Identity(8, 8);
        const auto up = coordinate_step(st, white, 0, in.X.col(0));
        CHECK(up.nu_bar < -5.0);
        CHECK(up.nu_star == -5.0);
        CHECK(st.eta[0] == 0.0);
    }
}

TEST_CASE("coordinate step minimizes along the coordinate", "[estimator]")
{
    Rng rng(64);
    for (int i = 0; i < 50; ++i)
    {
        const auto in = make_instance(8, 2, 4, rng);
        RVec start = in.eta;
        start[1] = 0.5 * uniform01(rng);
        auto st = state_from_eta(start, in.X, in.sigma2);
        const auto up = coordinate_step(st, in.sample_cov, 1, in.X.col(1));

        // Brute-force grid over the feasible ray
        const double lo = -start[1];
        const double hi = std::max(1.0, up.nu_star + 1.0);
        const double step = 1e-4;
        double best_nu = lo, best_f = std::numeric_limits<double>::infinity();
        for (double nu = lo; nu <= hi; nu += step)
        {
            RVec e = start;
            e[1] = std::max(0.0, start[1] + nu);
            const double f = dense_objective(in, e);
            if (f < best_f)
            {
                best_f = f;
                best_nu = nu;
            }
        }
        CHECK(std::abs(up.nu_star - best_nu) <= 1e-3);
    }
}

TEST_CASE("coordinate descent", "[estimator]")
{
    Rng rng(65);
    EstimatorConfig cfg;

    SECTION("every step lowers the objective and the inverse stays exact")
    {
        for (int i = 0; i < 20; ++i)
        {
            const auto in = make_instance(20, 6, 4, rng);
            auto st = initial_state(6, 20, in.sigma2);
            double f = dense_objective(in, st.eta);
            for (int sweep = 0; sweep < 30; ++sweep)
                for (Eigen::Index k = 0; k < 6; ++k)
                {
                    coordinate_step(st, in.sample_cov, k, in.X.col(k));
                    const double next = dense_objective(in, st.eta);
                    REQUIRE(next <= f + 1e-9 * std::max(1.0, std::abs(f)));
                    f = next;
                }
            const CMat dense = dense_cov(in.X, st.eta, in.sigma2).inverse();
            CHECK((st.model_cov_inv - dense).norm() < 1e-8);
            CHECK((st.model_cov - dense_cov(in.X, st.eta, in.sigma2)).norm() < 1e-8);
        }
    }

    SECTION("sweep objectives are non-increasing and match the final state")
    {
        const auto in = make_instance(30, 10, 4, rng);
        EstimatorTrace trace;
        const auto st = estimate_pose(in.sample_cov, in.X, in.sigma2, cfg, rng, &trace);
        REQUIRE(!trace.sweep_objectives.empty());
        for (std::size_t i = 1; i < trace.sweep_objectives.size(); ++i)
            CHECK(trace.sweep_objectives[i] <= trace.sweep_objectives[i - 1] + 1e-9);
        CHECK(trace.sweep_objectives.back() == Catch::Approx(dense_objective(in, st.eta)).epsilon(1e-9));
        CHECK((st.model_cov_inv - dense_cov(in.X, st.eta, in.sigma2).inverse()).norm() < 1e-8);
        CHECK(st.eta.minCoeff() >= 0.0);
    }

    SECTION("converged point satisfies the optimality conditions")
    {
        cfg.sweeps = 500;
        cfg.tolerance = 1e-14;
        for (int i = 0; i < 10; ++i)
        {
            const auto in = make_instance(16, 4, 8, rng);
            const auto st = estimate_pose(in.sample_cov, in.X, in.sigma2, cfg, rng);
            for (Eigen::Index k = 0; k < 4; ++k)
            {
                const double g = coordinate_gradient(st, in.sample_cov, in.X.col(k), 0.0);
                if (st.eta[k] > 1e-8)
                    CHECK(std::abs(g) < 1e-5);
                else
                    CHECK(g > -1e-5);
            }
        }
    }

    SECTION("single user with many antennas")
    {
        const auto in = make_instance(12, 1, 10000, rng, 0.05);
        const auto st = estimate_pose(in.sample_cov, in.X, in.sigma2, cfg, rng);
        CHECK(std::abs(st.eta[0] - in.eta[0]) / in.eta[0] < 0.05);
    }

    SECTION("zero sample covariance is rejected or gives zero powers")
    {
        const auto in = make_instance(8, 3, 4, rng);
        const auto st = estimate_pose(CMat::Zero(8, 8), in.X, in.sigma2, cfg, rng);
        CHECK(st.eta.isZero());
    }

    SECTION("relabelling users permutes the estimate")
    {
        cfg.sweeps = 500;
        cfg.tolerance = 1e-15;
        const auto in = make_instance(20, 5, 8, rng);
        std::vector<Eigen::Index> perm{3, 0, 4, 1, 2};
        CMat Xp(20, 5);
        for (Eigen::Index k = 0; k < 5; ++k)
            Xp.col(k) = in.X.col(perm[std::size_t(k)]);
        const auto a = estimate_pose(in.sample_cov, in.X, in.sigma2, cfg, rng);
        const auto b = estimate_pose(in.sample_cov, Xp, in.sigma2, cfg, rng);
        for (Eigen::Index k = 0; k < 5; ++k)
            CHECK(std::abs(b.eta[k] - a.eta[perm[std::size_t(k)]]) < 1e-5 * (1.0 + a.eta.maxCoeff()));
    }

    SECTION("same stream gives the same result")
    {
        const auto in = make_instance(20, 5, 4, rng);
        Rng r1(7), r2(7);
        const auto a = estimate_pose(in.sample_cov, in.X, in.sigma2, cfg, r1);
        const auto b = estimate_pose(in.sample_cov, in.X, in.sigma2, cfg, r2);
        CHECK(a.eta == b.eta);
    }
}

TEST_CASE("support thresholding", "[estimator]")
{
    EstimatorConfig cfg;
    CHECK(threshold_support(RMat::Zero(4, 3), cfg).isZero());

    RMat eta(3, 2);
    eta << 1.0, 0.0, 0.02, 5.0, 0.005, 0.04;
    const auto Z = threshold_support(eta, cfg);
    CHECK(Z(0, 0) == 1);
    CHECK(Z(1, 0) == 1);
    CHECK(Z(2, 0) == 0);
    CHECK(Z(0, 1) == 0);
    CHECK(Z(1, 1) == 1);
    CHECK(Z(2, 1) == 0);

    cfg.threshold_mode = ThresholdMode::absolute;
    cfg.threshold = 0.03;
    const auto Za = threshold_support(eta, cfg);
    CHECK(Za(1, 0) == 0);
    CHECK(Za(2, 1) == 1);
}

TEST_CASE("configuration validation", "[estimator]")
{
    EstimatorConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.sweeps = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = EstimatorConfig{};
    cfg.threshold = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("estimator runtime", "[estimator]")
{
    Rng rng(66);
    const Eigen::Index L = 70, K = 50, N = 4;
    std::vector<MeasurementBlock> blocks;
    const CMat X = generate_pilots(L, K, rng);
    for (std::size_t m = 0; m < 32; ++m)
    {
        CMat H(N, K);
        for (Eigen::Index n = 0; n < N; ++n)
            for (Eigen::Index k = 0; k < K; ++k)
                H(n, k) = (k % 3 == 0 ? 1.0 : 0.1) * complex_normal(rng);
        blocks.push_back(receive_block(X, H, Eigen::VectorXi::Ones(K), 0.01, rng, m));
    }
    const auto start = std::chrono::steady_clock::now();
    const auto est = estimate_all(blocks, X, 0.01, 4, EstimatorConfig{}, 67);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(seconds < 10.0);
    REQUIRE(est.eta.rows() == 32);
    CHECK((est.power - 4.0 * est.eta).norm() < 1e-12 * est.power.norm());

    // Independent of the thread count
    const auto par = estimate_all(blocks, X, 0.01, 4, EstimatorConfig{}, 67, 3);
    CHECK(par.eta == est.eta);
}
