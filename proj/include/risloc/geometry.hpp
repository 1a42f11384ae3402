// SPDX-License-Identifier: Apache-2.0
//
// risloc: RIS configuration based localization toolkit
// Copyright (C) 2026 The risloc Authors
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

#ifndef RISLOC_GEOMETRY_HPP
#define RISLOC_GEOMETRY_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace risloc
{
    using Vec3 = Eigen::Vector3d;
    using Vec2 = Eigen::Vector2d;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;

    inline constexpr double kSpeedOfLight = 299792458.0;
    inline constexpr double kPi = 3.14159265358979323846;
    inline constexpr double kTwoPi = 2.0 * kPi;

    // How the reference element p_ref of a UPA is chosen.
    struct RefChoice
    {
        enum class Kind
        {
            geometric_center, // element nearest the centroid
            corner,           // element with minimal y and z
            index             // explicit element index
        };
        Kind kind = Kind::geometric_center;
        std::size_t index = 0;

        static RefChoice center() { return {Kind::geometric_center, 0}; }
        static RefChoice corner() { return {Kind::corner, 0}; }
        static RefChoice at(std::size_t i) { return {Kind::index, i}; }
    };

    // Uniform planar array on a plane parallel to yz. Element n sits at row n / n_y (z index) and
    // column n % n_y (y index); rows and columns grow with z and y respectively.
    // element_positions is public so rotated or hand-built layouts can be used in place of the grid.
    struct RisLayout
    {
        int n_y = 1;
        int n_z = 1;
        double spacing = 0.0;
        Vec3 center = Vec3::Zero();
        std::size_t ref_index = 0;
        std::vector<Vec3> element_positions;

        std::size_t size() const { return element_positions.size(); }
        const Vec3 &ref_position() const { return element_positions.at(ref_index); }
        int row(std::size_t n) const { return static_cast<int>(n) / n_y; }
        int col(std::size_t n) const { return static_cast<int>(n) % n_y; }
    };

    RisLayout build_upa_layout(int n_y, int n_z, double spacing, const Vec3 &center, RefChoice ref);

    struct PathLossParams
    {
        double gamma0 = 1.0; // linear power gain at d0
        double d0 = 1.0;     // meters
        double beta = 2.0;   // path-loss exponent
    };

    // gamma0 * (d0 / |x - y|)^beta. Throws NumericError for coincident points.
    double path_gain(const Vec3 &x, const Vec3 &y, const PathLossParams &params);

    struct Segment2
    {
        Vec2 a = Vec2::Zero();
        Vec2 b = Vec2::Zero();
    };

    // Mirror (specular, lossless) and blockage (fully absorbing), both vertical walls of unbounded
    // height standing on a segment of the service-area plane.
    struct NlosScene
    {
        Segment2 mirror;
        Segment2 blockage;
    };

    enum class Visibility
    {
        los,
        reflected_nlos,
        excluded
    };

    const char *to_string(Visibility v);

    // Rectangle of candidate UE positions at fixed height. Bounds are inclusive.
    struct ServiceArea
    {
        double x_min = 1.0;
        double x_max = 100.0;
        double y_min = -50.0;
        double y_max = 50.0;
        double ue_height = 1.5;
    };

    // Row-major grid (x fastest) from the lower corner with the given step. A step larger than the
    // extent yields the single corner point.
    std::vector<Vec3> grid_points(const ServiceArea &area, double step);

    struct Scenario
    {
        Vec3 bs_position = Vec3(1000.0, -200.0, 50.0);
        int bs_antennas = 16;
        Vec3 bs_axis = Vec3::UnitY(); // ULA direction, elements at lambda/2
        RisLayout ris;
        double carrier_hz = 6e9;
        PathLossParams pathloss;
        double tx_power = 1.0;
        double noise_power = 1e-12;
        double phase_noise_sigma = kPi / 6.0;
        int quantization_bits = 1; // 0 = continuous phases
        std::optional<NlosScene> scene;
        ServiceArea area;
        double grid_step = 1.0;

        double wavelength() const { return kSpeedOfLight / carrier_hz; }

        // Throws InvalidArgument when a field is out of range.
        void validate() const;
    };

    // The two deployments used throughout: 21x21 RIS over a 100 m x 100 m area with 1 m grid, and the
    // 9x9 RIS over 10 m x 10 m with 0.1 m grid. The RIS faces +x from [0, 0, 3.5], the area extends
    // in front of it (depth along x, symmetric in y), and the BS sits at [1000, -200, 50] with 16
    // antennas. f0 = 6 GHz, beta = 2, Q = 1 and sigma_theta = pi/6.
    Scenario outdoor_scenario(RefChoice ref = RefChoice::center());
    Scenario indoor_scenario(RefChoice ref = RefChoice::center());

    // The outdoor deployment with a blockage wall on x = 40 for y in [-30, -10] and a mirror wall on
    // y = -45 for x in [30, 100].
    Scenario nlos_scenario(RefChoice ref = RefChoice::center());

    struct ChannelSet
    {
        CMatrix h_rb; // N x M, RIS <- BS
        CVector h_ru; // N, RIS -> UE
        CVector h_d;  // M, BS -> UE
    };

    // {a(p)}_n = exp(-j 2pi/lambda (|p - p_n| - |p - p_ref|)) for arbitrary element positions.
    CVector steering_vector(std::span<const Vec3> elements, const Vec3 &ref, double wavelength, const Vec3 &p);

    CVector array_response(const RisLayout &layout, double wavelength, const Vec3 &p);

    std::vector<Vec3> bs_element_positions(const Scenario &scenario);

    Visibility classify_visibility(const NlosScene &scene, const Vec3 &u, const Vec3 &ris_center);

    // Reflection of u across the vertical plane holding the mirror segment; z is preserved.
    Vec3 mirror_image(const NlosScene &scene, const Vec3 &u);

    // Caches the u-independent parts (element positions, H_RB) of a scenario so that channels can be
    // evaluated at many UE positions. Immutable after construction.
    class ChannelModel
    {
    public:
        explicit ChannelModel(Scenario scenario);

        const Scenario &scenario() const { return scenario_; }
        const CMatrix &h_rb() const { return h_rb_; }

        Visibility visibility(const Vec3 &u) const;

        // Throws UnreachablePosition for excluded positions and NumericError for coincident points.
        ChannelSet channels(const Vec3 &u) const;

        // Only the UE-dependent blocks; H_RB is shared through h_rb().
        struct UeChannels
        {
            CVector h_ru;
            CVector h_d;
        };
        UeChannels ue_channels(const Vec3 &u) const;

    private:
        Scenario scenario_;
        std::vector<Vec3> bs_elements_;
        CMatrix h_rb_;
    };

    ChannelSet assemble_channels(const Scenario &scenario, const Vec3 &u);

    // 2D segment helpers shared with the AoA baseline.
    namespace geom2
    {
        double cross(const Vec2 &a, const Vec2 &b);
        bool segments_intersect(const Vec2 &p1, const Vec2 &p2, const Vec2 &q1, const Vec2 &q2);
        // Signed side of p relative to the line a->b (positive on the left).
        double side(const Vec2 &a, const Vec2 &b, const Vec2 &p);
    }
}

#endif
