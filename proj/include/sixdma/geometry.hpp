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

#ifndef SIXDMA_GEOMETRY_HPP
#define SIXDMA_GEOMETRY_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace sixdma
{
    using Vec3 = Eigen::Vector3d;
    using Mat3 = Eigen::Matrix3d;

    inline constexpr double pi = std::numbers::pi;
    inline constexpr double two_pi = 2.0 * std::numbers::pi;

    // Reduces an angle into [0, 2*pi)
    double wrap_angle(double angle);

    // Rotation of a surface around the global x-, y- and z-axes in [rad]
    // All three angles are normalized into [0, 2*pi) on construction.
    struct RotationAngles
    {
        double alpha = 0.0;
        double beta = 0.0;
        double gamma = 0.0;

        RotationAngles() = default;
        RotationAngles(double alpha, double beta, double gamma);

        bool operator==(const RotationAngles &) const = default;
    };

    // Rotation matrix R(u), laid out row by row as
    //   [ cb*cg,              cb*sg,              -sb   ]
    //   [ sb*sa*cg - ca*sg,   sb*sa*sg + ca*cg,   cb*sa ]
    //   [ ca*sb*cg + sa*sg,   ca*sb*sg - sa*cg,   ca*cb ]
    // It maps local surface coordinates to the global frame (r = q + R * r_local).
    Mat3 rotation_matrix(const RotationAngles &u);

    // Inverse of rotation_matrix for any proper rotation; gamma is set to 0 at gimbal lock
    RotationAngles angles_from_matrix(const Mat3 &R);

    // Position and rotation of one surface. The rotation matrix is cached.
    class Pose
    {
    public:
        Pose() = default;
        Pose(const Vec3 &position, const RotationAngles &rotation);

        const Vec3 &position() const { return position_; }
        const RotationAngles &rotation() const { return rotation_; }
        const Mat3 &matrix() const { return matrix_; }

        // Unit DOA vector that hits the surface at normal incidence (maximum gain direction)
        Vec3 boresight() const;

        bool operator==(const Pose &other) const
        {
            return position_ == other.position_ && rotation_ == other.rotation_;
        }

    private:
        Vec3 position_ = Vec3::Zero();
        RotationAngles rotation_{};
        Mat3 matrix_ = Mat3::Identity();
    };

    // Rotation angles whose boresight points along the given direction (need not be normalized)
    RotationAngles facing_rotation(const Vec3 &direction);

    // Antenna element positions on a surface in its local coordinate system [m]
    class SurfaceLayout
    {
    public:
        explicit SurfaceLayout(std::vector<Vec3> local_offsets);

        // Uniform planar array in the local x'-y' plane, centered at the origin
        static SurfaceLayout upa(std::size_t n_x, std::size_t n_y, double spacing);

        std::size_t size() const { return offsets_.size(); }
        const Vec3 &offset(std::size_t n) const { return offsets_.at(n); }
        const std::vector<Vec3> &offsets() const { return offsets_; }
        bool is_planar() const;

    private:
        std::vector<Vec3> offsets_;
    };

    // Global position of antenna n (0-based) of a surface at the given pose
    Vec3 antenna_position(const Pose &pose, const SurfaceLayout &layout, std::size_t n);

    // Unit DOA vector for elevation theta in [-pi/2, pi/2] and azimuth phi in [-pi, pi]
    Vec3 doa_vector(double theta, double phi);

    // Elevation and azimuth of a unit vector, the inverse of doa_vector
    struct DoaAngles
    {
        double theta;
        double phi;
    };
    DoaAngles doa_angles(const Vec3 &f);

    // Incidence direction of a DOA in the local frame of a rotated surface
    struct IncidenceAngles
    {
        double elevation;       // pi/2 at boresight, <= 0 in the back half-space
        double azimuth;         // in [-pi, pi]
        bool boresight = false; // local x and y components both vanish; azimuth is then set to 0
    };
    IncidenceAngles incidence_angles(const RotationAngles &u, const Vec3 &f);
    IncidenceAngles incidence_angles(const Mat3 &R, const Vec3 &f);

    // Element radiation pattern as linear power gain over local incidence (elevation, azimuth)
    class AntennaPattern
    {
    public:
        using GainFunction = std::function<double(double elevation, double azimuth)>;

        explicit AntennaPattern(GainFunction linear_gain);

        // Pattern given in dBi; converted with 10^(A/10)
        static AntennaPattern from_dbi(std::function<double(double, double)> gain_dbi);

        // g = 4 sin(elevation) in the front half-space, 0 behind; integrates to 4*pi over the sphere
        static AntennaPattern half_space_directive();

        double operator()(double elevation, double azimuth) const { return gain_(elevation, azimuth); }

    private:
        GainFunction gain_;
    };

    // Linear gain of a surface with rotation u for DOA f, 0 in the back half-space
    double effective_gain(const AntennaPattern &pattern, const RotationAngles &u, const Vec3 &f);
    double effective_gain(const AntennaPattern &pattern, const Pose &pose, const Vec3 &f);

    // Near-uniform points on the unit sphere (golden-angle spiral); n = 1 gives the north pole
    std::vector<Vec3> fibonacci_sphere(std::size_t n);
}

#endif
