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
#include "sixdma/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sixdma
{
    namespace
    {
        // Factorizes model_cov; throws if it is not positive definite
        Eigen::LLT<CMat> factorize(const CMat &cov)
        {
            Eigen::LLT<CMat> llt(cov);
            if (llt.info() != Eigen::Success)
                throw NumericalError("model covariance is not positive definite");
            return llt;
        }

        double log_det(const Eigen::LLT<CMat> &llt)
        {
            const CMat &Lf = llt.matrixLLT();
            double logdet = 0.0;
            for (Eigen::Index i = 0; i < Lf.rows(); ++i)
                logdet += 2.0 * std::log(Lf(i, i).real());
            return logdet;
        }

        double checked(double f)
        {
            if (!std::isfinite(f))
                throw NumericalError("objective is not finite");
            return f;
        }

        double objective_from(const Eigen::LLT<CMat> &llt, const CMat &sample_cov)
        {
            const double tr = llt.solve(sample_cov).trace().real();
            const double f = log_det(llt) + tr;
            if (!std::isfinite(f))
                throw NumericalError("objective is not finite");
            return f;
        }

        // Rebuilds Sigma and Sigma^-1 from eta and returns the objective
        double refresh(PowerState &state, const CMat &X, double sigma2, const CMat &sample_cov)
        {
            const auto L = X.rows();
            state.model_cov = X * state.eta.cast<std::complex<double>>().asDiagonal() * X.adjoint();
            state.model_cov.diagonal().array() += sigma2;
            const auto llt = factorize(state.model_cov);
            state.model_cov_inv = llt.solve(CMat::Identity(L, L));
            // tr(A B) for Hermitian A, B is the sum of A .* conj(B)
            const double tr = (state.model_cov_inv.array() * sample_cov.array().conjugate()).sum().real();
            return checked(log_det(llt) + tr);
        }

        struct QuadForms
        {
            double d; // x^H S^-1 x
            double q; // x^H S^-1 C S^-1 x
        };

        QuadForms quad_forms(const PowerState &state, const CMat &sample_cov, const CVec &x_k, CVec &a)
        {
            a.noalias() = state.model_cov_inv * x_k;
            const double d = x_k.dot(a).real();
            if (!(d > 0.0) || !std::isfinite(d))
                throw NumericalError("x^H Sigma^-1 x is not positive; the inverse is corrupted");
            const double q = a.dot(sample_cov * a).real();
            return {d, q};
        }

        // One coordinate update. Returns the change of the objective, using
        // ln det(S + nu x x^H) = ln det S + ln(1 + nu d) and the Sherman-Morrison form of the trace.
        double update_coordinate(PowerState &state, const CMat &sample_cov, Eigen::Index k, const CVec &x_k,
                                 CVec &a, CoordinateUpdate &u, bool keep_cov)
        {
            const auto [d, q] = quad_forms(state, sample_cov, x_k, a);
            u.nu_bar = (q - d) / (d * d);
            u.nu_star = std::max(u.nu_bar, -state.eta[k]);
            if (u.nu_star == 0.0)
                return 0.0;

            if (u.nu_star == -state.eta[k])
                state.eta[k] = 0.0;
            else
                state.eta[k] = std::max(0.0, state.eta[k] + u.nu_star);

            const double nu = u.nu_star;
            const double den = 1.0 + nu * d;
            if (keep_cov)
                state.model_cov.noalias() += nu * x_k * x_k.adjoint();
            state.model_cov_inv.noalias() -= (nu / den) * a * a.adjoint();
            return std::log(den) - nu * q / den;
        }
    }

    void EstimatorConfig::validate() const
    {
        if (sweeps < 1)
            throw std::invalid_argument("estimator.sweeps: must be at least 1");
        if (!(tolerance >= 0.0))
            throw std::invalid_argument("estimator.tolerance: must be non-negative");
        if (!(threshold > 0.0))
            throw std::invalid_argument("estimator.threshold: must be positive");
    }

    bool operator==(const EstimatorConfig &a, const EstimatorConfig &b)
    {
        return a.sweeps == b.sweeps && a.tolerance == b.tolerance && a.refresh_period == b.refresh_period &&
               a.threshold_mode == b.threshold_mode && a.threshold == b.threshold;
    }

    PowerState initial_state(std::size_t K, std::size_t L, double sigma2)
    {
        if (!(sigma2 > 0.0))
            throw NumericalError("initial_state: noise power must be positive, Sigma = sigma2 I is singular");
        PowerState s;
        s.eta = RVec::Zero(Eigen::Index(K));
        s.model_cov = sigma2 * CMat::Identity(Eigen::Index(L), Eigen::Index(L));
        s.model_cov_inv = (1.0 / sigma2) * CMat::Identity(Eigen::Index(L), Eigen::Index(L));
        return s;
    }

    PowerState state_from_eta(const RVec &eta, const CMat &X, double sigma2)
    {
        if (eta.size() != X.cols())
            throw std::invalid_argument("state_from_eta: eta length must equal the number of pilot columns");
        if ((eta.array() < 0.0).any())
            throw std::invalid_argument("state_from_eta: eta must be non-negative");
        PowerState s;
        s.eta = eta;
        const CMat dummy = CMat::Zero(X.rows(), X.rows());
        refresh(s, X, sigma2, dummy);
        return s;
    }

    double objective(const PowerState &state, const CMat &sample_cov)
    {
        if (sample_cov.rows() != state.model_cov.rows() || sample_cov.cols() != state.model_cov.cols())
            throw std::invalid_argument("objective: sample covariance size does not match the state");
        return objective_from(factorize(state.model_cov), sample_cov);
    }

    double stationary_step(const PowerState &state, const CMat &sample_cov, const CVec &x_k)
    {
        CVec a;
        const auto [d, q] = quad_forms(state, sample_cov, x_k, a);
        return (q - d) / (d * d);
    }

    double coordinate_gradient(const PowerState &state, const CMat &sample_cov, const CVec &x_k, double nu)
    {
        CVec a;
        const auto [d, q] = quad_forms(state, sample_cov, x_k, a);
        const double den = 1.0 + nu * d;
        return d / den - q / (den * den);
    }

    CoordinateUpdate coordinate_step(PowerState &state, const CMat &sample_cov, Eigen::Index k, const CVec &x_k)
    {
        if (k < 0 || k >= state.eta.size())
            throw std::out_of_range("coordinate_step: coordinate " + std::to_string(k) + " out of range");
        CVec a;
        CoordinateUpdate u;
        update_coordinate(state, sample_cov, k, x_k, a, u, true);
        return u;
    }

    PowerState estimate_pose(const CMat &sample_cov, const CMat &X, double sigma2, const EstimatorConfig &cfg,
                             Rng &rng, EstimatorTrace *trace)
    {
        cfg.validate();
        const auto L = X.rows(), K = X.cols();
        if (sample_cov.rows() != L || sample_cov.cols() != L)
            throw std::invalid_argument("estimate_pose: sample covariance must be L x L with L = pilot length");

        PowerState state = initial_state(std::size_t(K), std::size_t(L), sigma2);
        double f = checked(double(L) * std::log(sigma2) + sample_cov.trace().real() / sigma2);
        double f_prev = f;
        bool cov_stale = false;
        CVec a(L);
        CoordinateUpdate u;

        std::vector<Eigen::Index> order(std::size_t(K), 0);
        std::vector<CVec> columns;
        columns.reserve(std::size_t(K));
        for (Eigen::Index k = 0; k < K; ++k)
            columns.emplace_back(X.col(k));

        for (std::size_t sweep = 1; sweep <= cfg.sweeps; ++sweep)
        {
            std::iota(order.begin(), order.end(), Eigen::Index(0));
            for (std::size_t i = order.size(); i > 1; --i)
            {
                const auto j = std::size_t(uniform01(rng) * double(i));
                std::swap(order[i - 1], order[std::min(j, i - 1)]);
            }

            // Sigma itself is rebuilt from eta at each refresh, so it is only tracked when no
            // refresh follows this sweep
            const bool refreshing = cfg.refresh_period > 0 && sweep % cfg.refresh_period == 0;
            const bool keep_cov = !refreshing && !cov_stale;
            if (!keep_cov)
                cov_stale = true;
            for (auto k : order)
                f += update_coordinate(state, sample_cov, k, columns[std::size_t(k)], a, u, keep_cov);

            if (refreshing)
            {
                f = refresh(state, X, sigma2, sample_cov);
                cov_stale = false;
            }
            else
                f = checked(f);

            if (trace)
                trace->sweep_objectives.push_back(f);

            const bool converged = (f_prev - f) < cfg.tolerance * std::abs(f);
            f_prev = f;
            if (converged)
                break;
        }
        if (cov_stale)
        {
            state.model_cov = X * state.eta.cast<std::complex<double>>().asDiagonal() * X.adjoint();
            state.model_cov.diagonal().array() += sigma2;
        }
        return state;
    }

    SparsityMatrix threshold_support(const RMat &eta, const EstimatorConfig &cfg)
    {
        SparsityMatrix Z = SparsityMatrix::Zero(eta.rows(), eta.cols());
        for (Eigen::Index k = 0; k < eta.cols(); ++k)
        {
            double level = cfg.threshold;
            if (cfg.threshold_mode == ThresholdMode::relative)
            {
                const double peak = eta.rows() > 0 ? eta.col(k).maxCoeff() : 0.0;
                if (!(peak > 0.0))
                    continue;
                level = cfg.threshold * peak;
            }
            for (Eigen::Index m = 0; m < eta.rows(); ++m)
                Z(m, k) = eta(m, k) > level ? 1 : 0;
        }
        return Z;
    }

    PowerEstimate estimate_all(std::span<const MeasurementBlock> blocks, const CMat &X, double sigma2,
                               std::size_t antennas, const EstimatorConfig &cfg, std::uint64_t seed,
                               std::size_t threads)
    {
        cfg.validate();
        const auto M = Eigen::Index(blocks.size()), K = X.cols();

        PowerEstimate out;
        out.eta = RMat::Zero(M, K);
        out.traces.resize(blocks.size());

        parallel_for(blocks.size(), threads, [&](std::size_t m)
                     {
            Rng rng(derive_seed(seed, {std::uint64_t(blocks[m].pose_index)}));
            out.traces[m].pose_index = blocks[m].pose_index;
            const auto state = estimate_pose(blocks[m].sample_cov, X, sigma2, cfg, rng, &out.traces[m]);
            out.eta.row(Eigen::Index(m)) = state.eta.transpose(); });

        out.power = double(antennas) * out.eta;
        out.support = threshold_support(out.eta, cfg);
        return out;
    }
}
