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

#include "doctest.h"

#include "risloc/error.hpp"
#include "risloc/geometry.hpp"

#include <cmath>
#include <complex>
#include <functional>

using namespace risloc;

namespace
{
    // Minimum of a convex function on [lo, hi] by ternary search.
    double ternary_min(const std::function<double(double)> &f, double lo, double hi)
    {
        for (int it = 0; it < 200; ++it)
        {
            const double a = lo + (hi - lo) / 3.0;
            const double b = hi - (hi - lo) / 3.0;
            if (f(a) < f(b))
                hi = b;
            else
                lo = a;
        }
        return f(0.5 * (lo + hi));
    }

    // Shortest path p -> wall y = wall_y -> q with the bounce point found numerically.
    double bounce_path_length(const Vec3 &p, const Vec3 &q, double wall_y)
    {
        return ternary_min(
            [&](double x)
            {
                return ternary_min(
                    [&](double z)
                    {
                        const Vec3 m(x, wall_y, z);
                        return (p - m).norm() + (m - q).norm();
                    },
                    -100.0, 100.0);
            },
            -200.0, 300.0);
    }
}

TEST_SUITE("geometry")
{
    TEST_CASE("upa layout examples")
    {
        const RisLayout one = build_upa_layout(1, 1, 0.025, Vec3::Zero(), RefChoice::center());
        CHECK(one.size() == 1);
        CHECK(one.ref_index == 0);
        CHECK(one.ref_position().norm() == 0.0);

        const double lambda = kSpeedOfLight / 6e9;
        const RisLayout big = build_upa_layout(21, 21, lambda / 2, Vec3(0, 0, 3.5), RefChoice::center());
        CHECK(big.size() == 441);
        CHECK((big.ref_position() - Vec3(0, 0, 3.5)).norm() < 1e-12);

        const RisLayout c = build_upa_layout(3, 3, 1.0, Vec3::Zero(), RefChoice::corner());
        CHECK(c.ref_position().y() == doctest::Approx(-1.0));
        CHECK(c.ref_position().z() == doctest::Approx(-1.0));
    }

    TEST_CASE("upa layout is a regular grid in the yz plane")
    {
        const RisLayout l = build_upa_layout(4, 3, 0.5, Vec3(2, 1, 3), RefChoice::at(5));
        REQUIRE(l.size() == 12);
        CHECK(l.ref_index == 5);
        Vec3 centroid = Vec3::Zero();
        for (std::size_t n = 0; n < l.size(); ++n)
        {
            const Vec3 &p = l.element_positions[n];
            CHECK(p.x() == doctest::Approx(2.0));
            CHECK(p.y() == doctest::Approx(1.0 + 0.5 * (l.col(n) - 1.5)));
            CHECK(p.z() == doctest::Approx(3.0 + 0.5 * (l.row(n) - 1.0)));
            centroid += p;
        }
        CHECK((centroid / 12.0 - Vec3(2, 1, 3)).norm() < 1e-12);
        CHECK_THROWS_AS(build_upa_layout(0, 3, 0.5, Vec3::Zero(), RefChoice::center()), InvalidArgument);
        CHECK_THROWS_AS(build_upa_layout(2, 2, 0.5, Vec3::Zero(), RefChoice::at(4)), InvalidArgument);
    }

    TEST_CASE("path gain")
    {
        const PathLossParams p{1.0, 1.0, 2.0};
        CHECK(path_gain(Vec3::Zero(), Vec3(1, 0, 0), p) == doctest::Approx(1.0));
        CHECK(path_gain(Vec3::Zero(), Vec3(10, 0, 0), p) == doctest::Approx(0.01));
        CHECK(path_gain(Vec3::Zero(), Vec3(0, 2, 0), p) == doctest::Approx(0.25));
        CHECK_THROWS_AS(path_gain(Vec3(1, 2, 3), Vec3(1, 2, 3), p), NumericError);

        const PathLossParams q{3.0, 2.0, 2.7};
        const Vec3 a(0.3, -1.2, 4.0), b(7.0, 2.5, -1.0);
        CHECK(path_gain(a, b, q) == path_gain(b, a, q));
        double last = INFINITY;
        for (double d = 0.1; d < 100.0; d *= 1.3)
        {
            const double g = path_gain(Vec3::Zero(), Vec3(d, 0, 0), q);
            CHECK(g < last);
            last = g;
        }
    }

    TEST_CASE("steering vector examples")
    {
        const double lambda = 0.05;
        const std::vector<Vec3> el{Vec3::Zero(), Vec3(0, 0.025, 0)};
        const CVector a = steering_vector(el, Vec3::Zero(), lambda, Vec3(0, 1e6, 0));
        CHECK(std::abs(a[0] - std::complex<double>(1, 0)) < 1e-12);
        CHECK(std::abs(a[1] - std::complex<double>(-1, 0)) < 1e-6);

        // Equidistant from the element and the reference.
        const CVector b = steering_vector(el, Vec3::Zero(), lambda, Vec3(3.0, 0.0125, 0.7));
        CHECK(std::abs(b[1] - std::complex<double>(1, 0)) < 1e-9);
    }

    TEST_CASE("array response has unit modulus")
    {
        const Scenario s = outdoor_scenario();
        for (const Vec3 &u : {Vec3(1, -50, 1.5), Vec3(37, 12, 1.5), Vec3(100, 50, 1.5)})
        {
            const CVector a = array_response(s.ris, s.wavelength(), u);
            for (Eigen::Index n = 0; n < a.size(); ++n)
                CHECK(std::abs(std::abs(a[n]) - 1.0) < 1e-12);
            CHECK(std::abs(a[static_cast<Eigen::Index>(s.ris.ref_index)] - 1.0) < 1e-15);
        }
    }

    TEST_CASE("channels of a single-antenna single-element link")
    {
        Scenario s = outdoor_scenario();
        s.ris = build_upa_layout(1, 1, 0.025, Vec3(0, 0, 0), RefChoice::center());
        s.bs_antennas = 1;
        s.pathloss = {1.0, 1.0, 2.0};
        const ChannelSet ch = assemble_channels(s, Vec3(1, 0, 0));
        REQUIRE(ch.h_ru.size() == 1);
        CHECK(std::abs(ch.h_ru[0] - std::complex<double>(1, 0)) < 1e-12);
        CHECK(ch.h_rb.rows() == 1);
        CHECK(ch.h_rb.cols() == 1);
    }

    TEST_CASE("h_ru energy equals the sum of element path gains")
    {
        const Scenario s = outdoor_scenario();
        const Vec3 u(50, 0, 1.5);
        const ChannelSet ch = assemble_channels(s, u);
        double expect = 0.0;
        for (const Vec3 &p : s.ris.element_positions)
            expect += path_gain(p, u, s.pathloss);
        CHECK(ch.h_ru.squaredNorm() == doctest::Approx(expect).epsilon(1e-12));
        CHECK(ch.h_rb.rows() == 441);
        CHECK(ch.h_rb.cols() == 16);
        CHECK(ch.h_d.size() == 16);
        CHECK(ch.h_rb.allFinite());
    }

    TEST_CASE("h_rb entries follow the element-pair path")
    {
        const Scenario s = indoor_scenario();
        const ChannelModel model(s);
        const std::vector<Vec3> bs = bs_element_positions(s);
        const double k = kTwoPi / s.wavelength();
        const Vec3 &ref = s.ris.ref_position();
        for (std::size_t n : {0u, 17u, 80u})
            for (std::size_t m : {0u, 9u, 15u})
            {
                const Vec3 &pn = s.ris.element_positions[n];
                const Vec3 &pm = bs[m];
                const double phase = -k * ((pm - pn).norm() - (pm - ref).norm()) + k * ((pn - pm).norm() - (pn - s.bs_position).norm());
                const std::complex<double> expect = std::sqrt(path_gain(pn, pm, s.pathloss)) * std::polar(1.0, phase);
                CHECK(std::abs(model.h_rb()(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) - expect) < 1e-9 * std::abs(expect));
            }
    }

    TEST_CASE("channel assembly is deterministic")
    {
        const Scenario s = nlos_scenario();
        const Vec3 u(60, -25, 1.5);
        const ChannelSet a = assemble_channels(s, u);
        const ChannelSet b = assemble_channels(s, u);
        CHECK(a.h_ru == b.h_ru);
        CHECK(a.h_d == b.h_d);
        CHECK(a.h_rb == b.h_rb);
    }

    TEST_CASE("mirror image")
    {
        NlosScene axis{{Vec2(-5, 0), Vec2(5, 0)}, {Vec2(20, 1), Vec2(20, 2)}};
        const Vec3 img = mirror_image(axis, Vec3(3, 4, 1.5));
        CHECK((img - Vec3(3, -4, 1.5)).norm() < 1e-12);
        CHECK((mirror_image(axis, Vec3(2, 0, 1.5)) - Vec3(2, 0, 1.5)).norm() < 1e-12);

        NlosScene oblique{{Vec2(1.3, -2.0), Vec2(4.1, 7.7)}, {Vec2(0, 0), Vec2(0, 1)}};
        for (const Vec3 &u : {Vec3(0.2, 9.1, 1.5), Vec3(-3, -4, 0.3), Vec3(50, 1, 2)})
        {
            const Vec3 twice = mirror_image(oblique, mirror_image(oblique, u));
            CHECK((twice - u).norm() < 1e-12);
            CHECK(mirror_image(oblique, u).z() == u.z());
        }
    }

    TEST_CASE("visibility classes")
    {
        const Scenario s = nlos_scenario();
        const NlosScene &scene = *s.scene;
        const Vec3 r = s.ris.center;
        CHECK(classify_visibility(scene, Vec3(50, 20, 1.5), r) == Visibility::los);
        // Direct ray crosses the blockage at x = 40, the image ray bounces at x = 41.5 on the mirror.
        CHECK(classify_visibility(scene, Vec3(60, -25, 1.5), r) == Visibility::reflected_nlos);
        // Beyond the mirror wall.
        CHECK(classify_visibility(scene, Vec3(60, -48, 1.5), r) == Visibility::excluded);
        // Shadowed by the blockage and the image ray misses the mirror (bounce at x < 30).
        CHECK(classify_visibility(scene, Vec3(41, -11, 1.5), r) == Visibility::excluded);
    }

    TEST_CASE("empty scene is line of sight everywhere")
    {
        const Scenario s = outdoor_scenario();
        const ChannelModel model(s);
        for (const Vec3 &u : grid_points(s.area, 5.0))
            CHECK(model.visibility(u) == Visibility::los);
    }

    TEST_CASE("reflected h_ru phases follow the bounce path lengths")
    {
        const Scenario s = nlos_scenario();
        const Vec3 u(60, -25, 1.5);
        const ChannelSet ch = assemble_channels(s, u);
        const double k = kTwoPi / s.wavelength();
        const std::size_t ref = s.ris.ref_index;
        const double l_ref = bounce_path_length(s.ris.element_positions[ref], u, -45.0);
        for (std::size_t n : {0u, 20u, 200u, 440u})
        {
            const double l = bounce_path_length(s.ris.element_positions[n], u, -45.0);
            const std::complex<double> expect = std::sqrt(s.pathloss.gamma0 * std::pow(s.pathloss.d0 / l, s.pathloss.beta)) *
                                                std::polar(1.0, -k * (l - l_ref));
            CHECK(std::abs(ch.h_ru[static_cast<Eigen::Index>(n)] - expect) < 1e-6 * std::abs(expect));
        }
        CHECK_THROWS_AS(assemble_channels(s, Vec3(60, -48, 1.5)), UnreachablePosition);
    }

    TEST_CASE("grid points")
    {
        const ServiceArea area{1, 100, -50, 50, 1.5};
        const auto g = grid_points(area, 1.0);
        CHECK(g.size() == 100 * 101);
        CHECK((g.front() - Vec3(1, -50, 1.5)).norm() == 0.0);
        CHECK(g[1].x() == doctest::Approx(2.0));
        const auto single = grid_points(area, 1000.0);
        CHECK(single.size() == 1);
        const auto indoor = grid_points(indoor_scenario().area, 0.1);
        CHECK(indoor.size() == 100 * 101);
    }

    TEST_CASE("segment intersection")
    {
        CHECK(geom2::segments_intersect(Vec2(0, 0), Vec2(2, 2), Vec2(0, 2), Vec2(2, 0)));
        CHECK_FALSE(geom2::segments_intersect(Vec2(0, 0), Vec2(1, 1), Vec2(0, 2), Vec2(2, 3)));
        CHECK(geom2::segments_intersect(Vec2(0, 0), Vec2(2, 0), Vec2(1, 0), Vec2(1, 5)));
        CHECK(geom2::side(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)) > 0.0);
    }

    TEST_CASE("scenario validation")
    {
        Scenario s = outdoor_scenario();
        CHECK_NOTHROW(s.validate());
        s.carrier_hz = -1.0;
        CHECK_THROWS_AS(s.validate(), InvalidArgument);
        s = outdoor_scenario();
        s.phase_noise_sigma = -0.1;
        CHECK_THROWS_AS(s.validate(), InvalidArgument);
        CHECK(outdoor_scenario().wavelength() == doctest::Approx(0.0499654));
    }
}
