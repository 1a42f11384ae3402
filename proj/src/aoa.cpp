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

#include "risloc/aoa.hpp"
#include "risloc/error.hpp"

#include <algorithm>
#include <cmath>

namespace risloc
{
    double hpbw(double wavelength, int n_y, double spacing, double phi)
    {
        if (!(wavelength > 0.0) || n_y < 1 || !(spacing > 0.0))
            throw InvalidArgument("hpbw: wavelength, n_y and spacing must be positive");
        if (!(std::abs(phi) < 0.5 * kPi))
            throw InvalidArgument("hpbw: steering angle must be within +-pi/2 of boresight");
        return 0.886 * wavelength / (n_y * spacing * std::cos(phi));
    }

    double off_boresight_angle(const AoaDevice &device, const Vec2 &target)
    {
        const Vec2 d = target - device.position;
        return std::atan2(geom2::cross(device.normal, d), device.normal.dot(d));
    }

    namespace
    {
        using Polygon = std::vector<Vec2>;

        // Keeps the part of poly where cross(dir, p - apex) * sign >= 0.
        Polygon clip(const Polygon &poly, const Vec2 &apex, const Vec2 &dir, double sign)
        {
            auto value = [&](const Vec2 &p)
            { return sign * geom2::cross(dir, p - apex); };
            Polygon out;
            for (std::size_t i = 0; i < poly.size(); ++i)
            {
                const Vec2 &p = poly[i];
                const Vec2 &q = poly[(i + 1) % poly.size()];
                const double vp = value(p);
                const double vq = value(q);
                if (vp >= 0.0)
                    out.push_back(p);
                if ((vp >= 0.0) != (vq >= 0.0))
                    out.push_back(p + (vp / (vp - vq)) * (q - p));
            }
            return out;
        }

        Polygon clip_wedge(Polygon poly, const Vec2 &apex, double bearing, double half_width)
        {
            const Vec2 lo(std::cos(bearing - half_width), std::sin(bearing - half_width));
            const Vec2 hi(std::cos(bearing + half_width), std::sin(bearing + half_width));
            poly = clip(poly, apex, lo, 1.0);
            return clip(poly, apex, hi, -1.0);
        }
    }

    AoaResult aoa_baseline(const AoaDevice &a, const AoaDevice &b, const Vec3 &u, double wavelength)
    {
        const Vec2 target = u.head<2>();
        const AoaDevice *dev[2] = {&a, &b};
        AoaResult out;
        double bearing[2];
        for (int i = 0; i < 2; ++i)
        {
            const Vec2 d = target - dev[i]->position;
            if (!(d.norm() > 0.0))
                throw NumericError("aoa_baseline: UE coincides with a device");
            bearing[i] = std::atan2(d.y(), d.x());
            out.hpbw_pair[i] = hpbw(wavelength, dev[i]->n_y, dev[i]->spacing, off_boresight_angle(*dev[i], target));
        }
        const Vec2 da(std::cos(bearing[0]), std::sin(bearing[0]));
        const Vec2 db(std::cos(bearing[1]), std::sin(bearing[1]));
        if (std::abs(geom2::cross(da, db)) < 1e-9)
            throw NumericError("aoa_baseline: bearings are parallel");

        double extent = (target - a.position).norm() + (target - b.position).norm() + (a.position - b.position).norm();
        const double box = 1e3 * extent;
        const Vec2 c = target;
        Polygon poly = {c + Vec2(-box, -box), c + Vec2(box, -box), c + Vec2(box, box), c + Vec2(-box, box)};
        for (int i = 0; i < 2; ++i)
            poly = clip_wedge(poly, dev[i]->position, bearing[i], 0.5 * out.hpbw_pair[i]);
        if (poly.size() < 3)
            throw NumericError("aoa_baseline: empty wedge intersection");

        double area = 0.0;
        Vec2 centroid = Vec2::Zero();
        for (std::size_t i = 0; i < poly.size(); ++i)
        {
            const Vec2 &p = poly[i];
            const Vec2 &q = poly[(i + 1) % poly.size()];
            const double w = geom2::cross(p, q);
            area += w;
            centroid += w * (p + q);
            if (std::max(std::abs(p.x() - c.x()), std::abs(p.y() - c.y())) > 0.5 * box)
                throw NumericError("aoa_baseline: wedge intersection is unbounded");
        }
        area *= 0.5;
        if (!(std::abs(area) > 0.0))
            throw NumericError("aoa_baseline: degenerate wedge intersection");
        centroid /= 6.0 * area;

        out.region = poly;
        out.region_area = std::abs(area);
        out.estimate = Vec3(centroid.x(), centroid.y(), u.z());
        for (const Vec2 &p : poly)
            out.uncertainty_radius = std::max(out.uncertainty_radius, (p - centroid).norm());
        return out;
    }

    std::array<AoaDevice, 2> default_aoa_devices(int n_y, double spacing)
    {
        return {AoaDevice{Vec2(0.0, 0.0), Vec2(1.0, 0.0), n_y, spacing},
                AoaDevice{Vec2(50.0, -50.0), Vec2(0.0, 1.0), n_y, spacing}};
    }
}
