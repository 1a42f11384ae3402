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

#ifndef RISLOC_AOA_HPP
#define RISLOC_AOA_HPP

#include "risloc/geometry.hpp"

#include <array>
#include <vector>

namespace risloc
{
    // A RIS seen from above: position and unit boresight in the xy plane, horizontal aperture
    // N_y * spacing.
    struct AoaDevice
    {
        Vec2 position = Vec2::Zero();
        Vec2 normal = Vec2::UnitX();
        int n_y = 21;
        double spacing = 0.025;
    };

    // 0.886 lambda / (N_y d cos phi). Throws InvalidArgument for |phi| >= pi/2.
    double hpbw(double wavelength, int n_y, double spacing, double phi);

    // Off-boresight angle of the direction device -> target, in (-pi, pi].
    double off_boresight_angle(const AoaDevice &device, const Vec2 &target);

    struct AoaResult
    {
        Vec3 estimate = Vec3::Zero();
        std::array<double, 2> hpbw_pair{};
        double uncertainty_radius = 0.0;
        double region_area = 0.0;
        std::vector<Vec2> region; // counter-clockwise vertices of the wedge intersection
    };

    // Each device measures the true bearing to u with an uncertainty of +-HPBW/2. The estimate is the
    // centroid of the intersection of the two wedges, at the height of u.
    // Throws NumericError for parallel bearings or an unbounded intersection and InvalidArgument
    // when u is behind a device.
    AoaResult aoa_baseline(const AoaDevice &a, const AoaDevice &b, const Vec3 &u, double wavelength);

    // The two-device layout used for the comparison, in the frame of outdoor_scenario: one RIS at
    // (0, 0) facing +x and one at (50, -50) facing +y, both with the given aperture.
    std::array<AoaDevice, 2> default_aoa_devices(int n_y, double spacing);
}

#endif
