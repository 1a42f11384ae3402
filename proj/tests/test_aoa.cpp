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

#include "risloc/aoa.hpp"
#include "risloc/error.hpp"

#include <cmath>

using namespace risloc;

TEST_SUITE("aoa")
{
    TEST_CASE("half-power beamwidth")
    {
        CHECK(hpbw(0.05, 21, 0.025, 0.0) == doctest::Approx(0.886 * 0.05 / (21 * 0.025)));
        CHECK(hpbw(0.05, 21, 0.025, 0.0) == doctest::Approx(0.08438).epsilon(1e-4));
        CHECK(hpbw(0.05, 21, 0.025, kPi / 3) == doctest::Approx(2.0 * hpbw(0.05, 21, 0.025, 0.0)));
        CHECK_THROWS_AS(hpbw(0.05, 21, 0.025, kPi / 2), InvalidArgument);
    }

    TEST_CASE("off-boresight angle")
    {
        const AoaDevice d{Vec2(0, 0), Vec2(1, 0), 21, 0.025};
        CHECK(off_boresight_angle(d, Vec2(5, 0)) == doctest::Approx(0.0));
        CHECK(off_boresight_angle(d, Vec2(5, 5)) == doctest::Approx(kPi / 4));
        CHECK(off_boresight_angle(d, Vec2(5, -5)) == doctest::Approx(-kPi / 4));
    }

    TEST_CASE("symmetric placement gives a centered estimate")
    {
        // Two devices facing each other across the bisector x = 0.
        const AoaDevice a{Vec2(-20, 0), Vec2(1, 1).normalized(), 21, 0.025};
        const AoaDevice b{Vec2(20, 0), Vec2(-1, 1).normalized(), 21, 0.025};
        const Vec3 u(0, 20, 1.5);
        const AoaResult r = aoa_baseline(a, b, u, 0.05);
        CHECK(r.estimate.x() == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
        CHECK(std::abs(r.estimate.y() - 20.0) < 0.05);
        CHECK(r.estimate.z() == 1.5);
        CHECK(r.hpbw_pair[0] == doctest::Approx(r.hpbw_pair[1]));
        CHECK(r.region.size() == 4);
        CHECK(r.region_area > 0.0);
        CHECK(r.uncertainty_radius > 0.0);
        for (const Vec2 &v : r.region)
            CHECK((v - r.estimate.head<2>()).norm() <= r.uncertainty_radius + 1e-12);
    }

    TEST_CASE("uncertainty grows with distance")
    {
        const AoaDevice a{Vec2(-20, 0), Vec2(1, 1).normalized(), 21, 0.025};
        const AoaDevice b{Vec2(20, 0), Vec2(-1, 1).normalized(), 21, 0.025};
        double last = 0.0;
        for (double y : {10.0, 40.0, 90.0})
        {
            const AoaResult r = aoa_baseline(a, b, Vec3(3.0, y, 1.5), 0.05);
            CHECK(r.uncertainty_radius > last);
            last = r.uncertainty_radius;
        }
    }

    TEST_CASE("default devices see the service area")
    {
        const auto devs = default_aoa_devices(21, 0.025);
        for (const Vec3 &u : {Vec3(10, 10, 1.5), Vec3(60, -20, 1.5), Vec3(95, 45, 1.5)})
        {
            const AoaResult r = aoa_baseline(devs[0], devs[1], u, 0.05);
            CHECK((r.estimate - u).head<2>().norm() <= r.uncertainty_radius);
        }
    }

    TEST_CASE("degenerate geometry")
    {
        const AoaDevice a{Vec2(0, 0), Vec2(1, 0), 21, 0.025};
        const AoaDevice b{Vec2(0, 10), Vec2(1, 0), 21, 0.025};
        // Collinear with both devices: bearings are parallel.
        const AoaDevice c{Vec2(-10, 0), Vec2(1, 0), 21, 0.025};
        CHECK_THROWS_AS(aoa_baseline(a, c, Vec3(30, 0, 1.5), 0.05), NumericError);
        CHECK_THROWS_AS(aoa_baseline(a, b, Vec3(-5, 3, 1.5), 0.05), InvalidArgument);
    }
}
