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

#include "sixdma/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sixdma
{
    double wrap_angle(double angle)
    {
        double w = angle - two_pi * std::floor(angle / two_pi);
        if (w >= two_pi || w < 0.0) // floor rounding for tiny negative inputs
            w = 0.0;
        return w;
    }

    RotationAngles::RotationAngles(double a, double b, double c)
        : alpha(wrap_angle(a)), beta(wrap_angle(b)), gamma(wrap_angle(c))
    {
    }

    Mat3 rotation_matrix(const RotationAngles &u)
    {
        const double ca = std::cos(u.alpha), sa = std::sin(u.alpha);
        const double cb = std::cos(u.beta), sb = std::sin(u.beta);
        const double cg = std::cos(u.gamma), sg = std::sin(u.gamma);

        Mat3 R;
        R << cb * cg, cb * sg, -sb,
            sb * sa * cg - ca * sg, sb * sa * sg + ca * cg, cb * sa,
            ca * sb * cg + sa * sg, ca * sb * sg - sa * cg, ca * cb;
        return R;
    }

    RotationAngles angles_from_matrix(const Mat3 &R)
    {
        const double sb = std::clamp(-R(0, 2), -1.0, 1.0);
        const double beta = std::asin(sb);
        const double cb = std::cos(beta);

        if (cb > 1e-12)
        {
            const double gamma = std::atan2(R(0, 1), R(0, 0));
            const double alpha = std::atan2(R(1, 2), R(2, 2));
            return {alpha, beta, gamma};
        }

        // Gimbal lock: only alpha -/+ gamma is observable, fix gamma = 0
        // Then R(1,0) = sb*sa and R(1,1) = ca
        const double alpha = std::atan2(R(1, 0) * (sb >= 0.0 ? 1.0 : -1.0), R(1, 1));
        return {alpha, beta, 0.0};
    }

    Pose::Pose(const Vec3 &position, const RotationAngles &rotation)
        : position_(position), rotation_(rotation), matrix_(rotation_matrix(rotation))
    {
    }

    Vec3 Pose::boresight() const
    {
        return -matrix_.col(2);
    }

    RotationAngles facing_rotation(const Vec3 &direction)
    {
        const double norm = direction.norm();
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw std::invalid_argument("facing_rotation: direction must be a finite non-zero vector");
        const Vec3 d = direction / norm;

        // Boresight is -R(u) e_z, so the third column of R must equal -d
        const double beta = std::asin(std::clamp(d.x(), -1.0, 1.0));
        double alpha = 0.0;
        if (std::abs(d.y()) > 0.0 || std::abs(d.z()) > 0.0)
            alpha = std::atan2(-d.y(), -d.z());
        return {alpha, beta, 0.0};
    }

    SurfaceLayout::SurfaceLayout(std::vector<Vec3> local_offsets)
        : offsets_(std::move(local_offsets))
    {
        if (offsets_.empty())
            throw std::invalid_argument("SurfaceLayout: at least one antenna is required");
    }

    SurfaceLayout SurfaceLayout::upa(std::size_t n_x, std::size_t n_y, double spacing)
    {
        if (n_x == 0 || n_y == 0)
            throw std::invalid_argument("SurfaceLayout::upa: array dimensions must be positive");
        if (!(spacing >= 0.0))
            throw std::invalid_argument("SurfaceLayout::upa: spacing must be non-negative");

        std::vector<Vec3> offsets;
        offsets.reserve(n_x * n_y);
        const double x0 = 0.5 * double(n_x - 1) * spacing;
        const double y0 = 0.5 * double(n_y - 1) * spacing;
        for (std::size_t iy = 0; iy < n_y; ++iy)
            for (std::size_t ix = 0; ix < n_x; ++ix)
                offsets.emplace_back(double(ix) * spacing - x0, double(iy) * spacing - y0, 0.0);
        return SurfaceLayout(std::move(offsets));
    }

    bool SurfaceLayout::is_planar() const
    {
        return std::all_of(offsets_.begin(), offsets_.end(), [](const Vec3 &r)
                           { return r.z() == 0.0; });
    }

    Vec3 antenna_position(const Pose &pose, const SurfaceLayout &layout, std::size_t n)
    {
        if (n >= layout.size())
            throw std::out_of_range("antenna_position: antenna index " + std::to_string(n) +
                                    " out of range for " + std::to_string(layout.size()) + " antennas");
        return pose.position() + pose.matrix() * layout.offset(n);
    }

    Vec3 doa_vector(double theta, double phi)
    {
        if (!(theta >= -0.5 * pi && theta <= 0.5 * pi))
            throw std::out_of_range("doa_vector: elevation must lie in [-pi/2, pi/2]");
        if (!(phi >= -pi && phi <= pi))
            throw std::out_of_range("doa_vector: azimuth must lie in [-pi, pi]");
        const double ct = std::cos(theta);
        return {ct * std::cos(phi), ct * std::sin(phi), std::sin(theta)};
    }

    DoaAngles doa_angles(const Vec3 &f)
    {
        return {std::asin(std::clamp(f.z(), -1.0, 1.0)), std::atan2(f.y(), f.x())};
    }

    IncidenceAngles incidence_angles(const Mat3 &R, const Vec3 &f)
    {
        const Vec3 local = -(R.transpose() * f);
        const double x = local.x(), y = local.y(), z = local.z();

        // atan2 keeps full precision near the poles and at azimuth 0 and pi, where the
        // arccosine forms lose digits
        IncidenceAngles out{};
        const double rho = std::hypot(x, y);
        out.elevation = std::atan2(z, rho);
        if (rho == 0.0)
        {
            out.azimuth = 0.0;
            out.boresight = true;
            return out;
        }
        out.azimuth = std::atan2(y, x);
        return out;
    }

    IncidenceAngles incidence_angles(const RotationAngles &u, const Vec3 &f)
    {
        return incidence_angles(rotation_matrix(u), f);
    }

    AntennaPattern::AntennaPattern(GainFunction linear_gain)
        : gain_(std::move(linear_gain))
    {
        if (!gain_)
            throw std::invalid_argument("AntennaPattern: empty gain function");
    }

    AntennaPattern AntennaPattern::from_dbi(std::function<double(double, double)> gain_dbi)
    {
        if (!gain_dbi)
            throw std::invalid_argument("AntennaPattern: empty gain function");
        return AntennaPattern([fn = std::move(gain_dbi)](double el, double az)
                              { return std::pow(10.0, fn(el, az) / 10.0); });
    }

    AntennaPattern AntennaPattern::half_space_directive()
    {
        return AntennaPattern([](double el, double)
                              { return el > 0.0 ? 4.0 * std::sin(el) : 0.0; });
    }

    double effective_gain(const AntennaPattern &pattern, const Pose &pose, const Vec3 &f)
    {
        const auto inc = incidence_angles(pose.matrix(), f);
        if (inc.elevation <= 0.0)
            return 0.0;
        return std::max(0.0, pattern(inc.elevation, inc.azimuth));
    }

    double effective_gain(const AntennaPattern &pattern, const RotationAngles &u, const Vec3 &f)
    {
        return effective_gain(pattern, Pose(Vec3::Zero(), u), f);
    }

    std::vector<Vec3> fibonacci_sphere(std::size_t n)
    {
        std::vector<Vec3> points;
        if (n == 0)
            return points;
        if (n == 1)
            return {Vec3(0.0, 0.0, 1.0)};

        points.reserve(n);
        const double golden_angle = pi * (3.0 - std::sqrt(5.0));
        for (std::size_t i = 0; i < n; ++i)
        {
            const double z = 1.0 - (2.0 * double(i) + 1.0) / double(n);
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double a = golden_angle * double(i);
            points.emplace_back(r * std::cos(a), r * std::sin(a), z);
        }
        return points;
    }
}
