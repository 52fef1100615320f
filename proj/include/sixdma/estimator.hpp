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

#ifndef SIXDMA_ESTIMATOR_HPP
#define SIXDMA_ESTIMATOR_HPP

#include "sixdma/channel.hpp"
#include "sixdma/measurement.hpp"
#include "sixdma/random.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace sixdma
{
    // Raised when a covariance becomes singular or the state is numerically corrupted
    class NumericalError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class ThresholdMode
    {
        relative, // [Z]_{m,k} = 1 iff eta_{m,k} > threshold * max_m' eta_{m',k}
        absolute  // [Z]_{m,k} = 1 iff eta_{m,k} > threshold
    };

    struct EstimatorConfig
    {
        std::size_t sweeps = 50;         // Maximum number of coordinate sweeps T
        double tolerance = 1e-8;         // Stop when a sweep lowers f by less than tolerance * |f|
        std::size_t refresh_period = 1;  // Rebuild the inverse every this many sweeps, 0 = never
        ThresholdMode threshold_mode = ThresholdMode::relative;
        double threshold = 0.01;

        void validate() const;
    };

    bool operator==(const EstimatorConfig &a, const EstimatorConfig &b);

    // Per-pose estimation state. model_cov = X diag(eta) X^H + sigma2 I, model_cov_inv its inverse.
    struct PowerState
    {
        RVec eta;
        CMat model_cov;
        CMat model_cov_inv;
    };

    // eta = 0, Sigma = sigma2 I
    PowerState initial_state(std::size_t K, std::size_t L, double sigma2);

    // Dense rebuild of Sigma and its inverse from eta
    PowerState state_from_eta(const RVec &eta, const CMat &X, double sigma2);

    // Negative log-likelihood per antenna: ln det(Sigma) + tr(Sigma^-1 Sigma_hat)
    double objective(const PowerState &state, const CMat &sample_cov);

    // Unconstrained minimizer of f(eta + nu e_k):
    //   nu_bar = (x^H S^-1 C S^-1 x - x^H S^-1 x) / (x^H S^-1 x)^2
    double stationary_step(const PowerState &state, const CMat &sample_cov, const CVec &x_k);

    // d/dnu f(eta + nu e_k) = d / (1 + nu d) - q / (1 + nu d)^2 with d = x^H S^-1 x, q = x^H S^-1 C S^-1 x
    double coordinate_gradient(const PowerState &state, const CMat &sample_cov, const CVec &x_k, double nu);

    struct CoordinateUpdate
    {
        double nu_bar = 0.0;  // Unconstrained stationary step
        double nu_star = 0.0; // Applied step, max(nu_bar, -eta_k)
    };

    // Exact minimization along coordinate k with a Sherman-Morrison update of the inverse.
    // Throws NumericalError if x^H Sigma^-1 x <= 0.
    CoordinateUpdate coordinate_step(PowerState &state, const CMat &sample_cov, Eigen::Index k, const CVec &x_k);

    struct EstimatorTrace
    {
        std::size_t pose_index = 0;
        std::vector<double> sweep_objectives; // Objective after each sweep
    };

    // Randomized coordinate descent from eta = 0; each sweep visits all K coordinates in a
    // fresh random order
    PowerState estimate_pose(const CMat &sample_cov, const CMat &X, double sigma2, const EstimatorConfig &cfg,
                             Rng &rng, EstimatorTrace *trace = nullptr);

    // Sparsity matrix from the M x K matrix of estimated powers
    SparsityMatrix threshold_support(const RMat &eta, const EstimatorConfig &cfg);

    struct PowerEstimate
    {
        RMat eta;                   // M x K, row m is eta_m (per-antenna covariance powers)
        RMat power;                 // M x K, N * eta: power summed over the N antennas
        SparsityMatrix support;     // Z
        std::vector<EstimatorTrace> traces;
    };

    // Runs estimate_pose for every block. Block m uses the coordinate stream
    // derive_seed(seed, {pose_index}), so results do not depend on the thread count.
    PowerEstimate estimate_all(std::span<const MeasurementBlock> blocks, const CMat &X, double sigma2,
                               std::size_t antennas, const EstimatorConfig &cfg, std::uint64_t seed,
                               std::size_t threads = 1);
}

#endif
