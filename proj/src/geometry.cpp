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

#include "risloc/geometry.hpp"
#include "risloc/error.hpp"

#include <cmath>
#include <limits>

namespace risloc
{
    RisLayout build_upa_layout(int n_y, int n_z, double spacing, const Vec3 &center, RefChoice ref)
    {
        if (n_y < 1 || n_z < 1)
            throw InvalidArgument("build_upa_layout: n_y and n_z must be >= 1");
        if (!(spacing > 0.0) || !std::isfinite(spacing))
            throw InvalidArgument("build_upa_layout: spacing must be positive");

        RisLayout layout;
        layout.n_y = n_y;
        layout.n_z = n_z;
        layout.spacing = spacing;
        layout.center = center;
        layout.element_positions.reserve(static_cast<std::size_t>(n_y) * n_z);

        const double y0 = 0.5 * (n_y - 1);
        const double z0 = 0.5 * (n_z - 1);
        for (int row = 0; row < n_z; ++row)
            for (int col = 0; col < n_y; ++col)
                layout.element_positions.emplace_back(center.x(),
                                                      center.y() + (col - y0) * spacing,
                                                      center.z() + (row - z0) * spacing);

        switch (ref.kind)
        {
        case RefChoice::Kind::geometric_center:
        {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t n = 0; n < layout.size(); ++n)
            {
                const double d = (layout.element_positions[n] - center).squaredNorm();
                if (d < best - 1e-15)
                {
                    best = d;
                    layout.ref_index = n;
                }
            }
            break;
        }
        case RefChoice::Kind::corner:
            layout.ref_index = 0;
            break;
        case RefChoice::Kind::index:
            if (ref.index >= layout.size())
                throw InvalidArgument("build_upa_layout: reference index out of range");
            layout.ref_index = ref.index;
            break;
        }
        return layout;
    }

    double path_gain(const Vec3 &x, const Vec3 &y, const PathLossParams &params)
    {
        const double d = (x - y).norm();
        if (!(d > 0.0))
            throw NumericError("path_gain: coincident points");
        return params.gamma0 * std::pow(params.d0 / d, params.beta);
    }

    const char *to_string(Visibility v)
    {
        switch (v)
        {
        case Visibility::los:
            return "los";
        case Visibility::reflected_nlos:
            return "reflected_nlos";
        case Visibility::excluded:
            return "excluded";
        }
        return "?";
    }

    std::vector<Vec3> grid_points(const ServiceArea &area, double step)
    {
        if (!(step > 0.0))
            throw InvalidArgument("grid_points: step must be positive");
        if (!(area.x_max >= area.x_min) || !(area.y_max >= area.y_min))
            throw InvalidArgument("grid_points: empty area");
        const auto count = [step](double lo, double hi)
        { return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1; };
        const std::size_t nx = count(area.x_min, area.x_max);
        const std::size_t ny = count(area.y_min, area.y_max);
        std::vector<Vec3> points;
        points.reserve(nx * ny);
        for (std::size_t iy = 0; iy < ny; ++iy)
            for (std::size_t ix = 0; ix < nx; ++ix)
                points.emplace_back(area.x_min + static_cast<double>(ix) * step,
                                    area.y_min + static_cast<double>(iy) * step, area.ue_height);
        return points;
    }

    void Scenario::validate() const
    {
        if (bs_antennas < 1)
            throw InvalidArgument("scenario: bs.antennas must be >= 1");
        if (ris.size() == 0 || ris.size() != static_cast<std::size_t>(ris.n_y) * ris.n_z)
            throw InvalidArgument("scenario: ris layout must hold n_y * n_z elements");
        if (ris.ref_index >= ris.size())
            throw InvalidArgument("scenario: ris.ref out of range");
        if (!(carrier_hz > 0.0))
            throw InvalidArgument("scenario: carrier_hz must be positive");
        if (!(pathloss.gamma0 > 0.0) || !(pathloss.d0 > 0.0) || !(pathloss.beta > 0.0))
            throw InvalidArgument("scenario: pathloss gamma0, d0 and beta must be positive");
        if (!(tx_power > 0.0) || !(noise_power > 0.0))
            throw InvalidArgument("scenario: tx_power and noise_power must be positive");
        if (!(phase_noise_sigma >= 0.0) || !std::isfinite(phase_noise_sigma))
            throw InvalidArgument("scenario: phase_noise_sigma must be >= 0");
        if (quantization_bits < 0 || quantization_bits > 16)
            throw InvalidArgument("scenario: quantization_bits must be in [0, 16]");
        if (!(grid_step > 0.0))
            throw InvalidArgument("scenario: grid step must be positive");
        if (std::abs(bs_axis.norm() - 1.0) > 1e-9)
            throw InvalidArgument("scenario: bs.axis must be a unit vector");
        if (scene)
        {
            if ((scene->mirror.a - scene->mirror.b).norm() == 0.0 || (scene->blockage.a - scene->blockage.b).norm() == 0.0)
                throw InvalidArgument("scenario: scene segments must have nonzero length");
        }
    }

    namespace
    {
        Scenario base_scenario(int n_ris, RefChoice ref)
        {
            Scenario s;
            const double lambda = s.wavelength();
            s.ris = build_upa_layout(n_ris, n_ris, 0.5 * lambda, Vec3(0.0, 0.0, 3.5), ref);
            // Free-space gain at 1 m.
            s.pathloss.gamma0 = std::pow(lambda / (4.0 * kPi), 2);
            s.pathloss.d0 = 1.0;
            s.pathloss.beta = 2.0;
            return s;
        }
    }

    Scenario outdoor_scenario(RefChoice ref)
    {
        Scenario s = base_scenario(21, ref);
        s.area = ServiceArea{1.0, 100.0, -50.0, 50.0, 1.5};
        s.grid_step = 1.0;
        return s;
    }

    Scenario indoor_scenario(RefChoice ref)
    {
        Scenario s = base_scenario(9, ref);
        s.area = ServiceArea{0.1, 10.0, -5.0, 5.0, 1.5};
        s.grid_step = 0.1;
        return s;
    }

    Scenario nlos_scenario(RefChoice ref)
    {
        Scenario s = outdoor_scenario(ref);
        NlosScene scene;
        scene.blockage = Segment2{Vec2(40.0, -10.0), Vec2(40.0, -30.0)};
        scene.mirror = Segment2{Vec2(30.0, -45.0), Vec2(100.0, -45.0)};
        s.scene = scene;
        return s;
    }

    CVector steering_vector(std::span<const Vec3> elements, const Vec3 &ref, double wavelength, const Vec3 &p)
    {
        const double k = kTwoPi / wavelength;
        const double d_ref = (p - ref).norm();
        CVector a(static_cast<Eigen::Index>(elements.size()));
        for (std::size_t n = 0; n < elements.size(); ++n)
        {
            const double d = (p - elements[n]).norm();
            if (!(d > 0.0))
                throw NumericError("steering_vector: point coincides with an array element");
            a[static_cast<Eigen::Index>(n)] = std::polar(1.0, -k * (d - d_ref));
        }
        return a;
    }

    CVector array_response(const RisLayout &layout, double wavelength, const Vec3 &p)
    {
        return steering_vector(layout.element_positions, layout.ref_position(), wavelength, p);
    }

    std::vector<Vec3> bs_element_positions(const Scenario &scenario)
    {
        const double half = 0.5 * scenario.wavelength();
        const double m0 = 0.5 * (scenario.bs_antennas - 1);
        std::vector<Vec3> out;
        out.reserve(static_cast<std::size_t>(scenario.bs_antennas));
        for (int m = 0; m < scenario.bs_antennas; ++m)
            out.push_back(scenario.bs_position + (m - m0) * half * scenario.bs_axis);
        return out;
    }

    namespace geom2
    {
        double cross(const Vec2 &a, const Vec2 &b) { return a.x() * b.y() - a.y() * b.x(); }

        double side(const Vec2 &a, const Vec2 &b, const Vec2 &p) { return cross(b - a, p - a); }

        namespace
        {
            bool on_segment(const Vec2 &a, const Vec2 &b, const Vec2 &p)
            {
                return std::min(a.x(), b.x()) - 1e-12 <= p.x() && p.x() <= std::max(a.x(), b.x()) + 1e-12 &&
                       std::min(a.y(), b.y()) - 1e-12 <= p.y() && p.y() <= std::max(a.y(), b.y()) + 1e-12;
            }
            int sign(double v, double scale)
            {
                const double eps = 1e-12 * scale;
                return v > eps ? 1 : (v < -eps ? -1 : 0);
            }
        }

        bool segments_intersect(const Vec2 &p1, const Vec2 &p2, const Vec2 &q1, const Vec2 &q2)
        {
            const double scale = std::max({1.0, (p2 - p1).squaredNorm(), (q2 - q1).squaredNorm()});
            const int d1 = sign(side(q1, q2, p1), scale);
            const int d2 = sign(side(q1, q2, p2), scale);
            const int d3 = sign(side(p1, p2, q1), scale);
            const int d4 = sign(side(p1, p2, q2), scale);
            if (d1 * d2 < 0 && d3 * d4 < 0)
                return true;
            return (d1 == 0 && on_segment(q1, q2, p1)) || (d2 == 0 && on_segment(q1, q2, p2)) ||
                   (d3 == 0 && on_segment(p1, p2, q1)) || (d4 == 0 && on_segment(p1, p2, q2));
        }
    }

    namespace
    {
        Vec2 xy(const Vec3 &p) { return p.head<2>(); }

        // Intersection of the segment p1->p2 with the infinite line through a, b. Caller guarantees they cross.
        Vec2 line_crossing(const Vec2 &p1, const Vec2 &p2, const Vec2 &a, const Vec2 &b)
        {
            const Vec2 r = p2 - p1;
            const Vec2 s = b - a;
            const double denom = geom2::cross(r, s);
            const double t = geom2::cross(a - p1, s) / denom;
            return p1 + t * r;
        }
    }

    Vec3 mirror_image(const NlosScene &scene, const Vec3 &u)
    {
        const Vec2 a = scene.mirror.a;
        const Vec2 d = (scene.mirror.b - a).normalized();
        const Vec2 p = xy(u);
        const Vec2 foot = a + (p - a).dot(d) * d;
        const Vec2 img = 2.0 * foot - p;
        return {img.x(), img.y(), u.z()};
    }

    Visibility classify_visibility(const NlosScene &scene, const Vec3 &u, const Vec3 &ris_center)
    {
        const Vec2 p = xy(u);
        const Vec2 r = xy(ris_center);
        const Vec2 &ma = scene.mirror.a, &mb = scene.mirror.b;
        const Vec2 &ba = scene.blockage.a, &bb = scene.blockage.b;

        // Behind the mirror plane as seen from the RIS.
        const double side_ris = geom2::side(ma, mb, r);
        const double side_u = geom2::side(ma, mb, p);
        if (side_ris * side_u < 0.0)
            return Visibility::excluded;

        const bool blocked = geom2::segments_intersect(p, r, ba, bb) || geom2::segments_intersect(p, r, ma, mb);
        if (!blocked)
            return Visibility::los;

        const Vec2 img = xy(mirror_image(scene, u));
        if (!geom2::segments_intersect(img, r, ma, mb))
            return Visibility::excluded;
        if (std::abs(geom2::cross(r - img, mb - ma)) == 0.0)
            return Visibility::excluded;
        const Vec2 bounce = line_crossing(img, r, ma, mb);
        if (geom2::segments_intersect(p, bounce, ba, bb) || geom2::segments_intersect(bounce, r, ba, bb))
            return Visibility::excluded;
        return Visibility::reflected_nlos;
    }

    ChannelModel::ChannelModel(Scenario scenario) : scenario_(std::move(scenario))
    {
        scenario_.validate();
        bs_elements_ = bs_element_positions(scenario_);
        const RisLayout &ris = scenario_.ris;
        const double lambda = scenario_.wavelength();
        const auto n_ris = static_cast<Eigen::Index>(ris.size());
        const auto n_bs = static_cast<Eigen::Index>(bs_elements_.size());
        h_rb_.resize(n_ris, n_bs);
        for (Eigen::Index m = 0; m < n_bs; ++m)
        {
            const Vec3 &pm = bs_elements_[static_cast<std::size_t>(m)];
            const CVector a_r = array_response(ris, lambda, pm);
            for (Eigen::Index n = 0; n < n_ris; ++n)
            {
                const Vec3 &pn = ris.element_positions[static_cast<std::size_t>(n)];
                const CVector a_b = steering_vector(bs_elements_, scenario_.bs_position, lambda, pn);
                h_rb_(n, m) = std::sqrt(path_gain(pn, pm, scenario_.pathloss)) * a_r[n] * std::conj(a_b[m]);
            }
        }
    }

    Visibility ChannelModel::visibility(const Vec3 &u) const
    {
        if (!scenario_.scene)
            return Visibility::los;
        return classify_visibility(*scenario_.scene, u, scenario_.ris.center);
    }

    ChannelSet ChannelModel::channels(const Vec3 &u) const
    {
        UeChannels ue = ue_channels(u);
        return ChannelSet{h_rb_, std::move(ue.h_ru), std::move(ue.h_d)};
    }

    ChannelModel::UeChannels ChannelModel::ue_channels(const Vec3 &u) const
    {
        const RisLayout &ris = scenario_.ris;
        const double lambda = scenario_.wavelength();

        Vec3 ris_side = u;
        switch (visibility(u))
        {
        case Visibility::los:
            break;
        case Visibility::reflected_nlos:
            ris_side = mirror_image(*scenario_.scene, u);
            break;
        case Visibility::excluded:
            throw UnreachablePosition("assemble_channels: position not visible from the RIS");
        }

        UeChannels ch;
        ch.h_ru = array_response(ris, lambda, ris_side);
        for (std::size_t n = 0; n < ris.size(); ++n)
            ch.h_ru[static_cast<Eigen::Index>(n)] *= std::sqrt(path_gain(ris.element_positions[n], ris_side, scenario_.pathloss));

        ch.h_d = steering_vector(bs_elements_, scenario_.bs_position, lambda, u);
        for (std::size_t m = 0; m < bs_elements_.size(); ++m)
            ch.h_d[static_cast<Eigen::Index>(m)] *= std::sqrt(path_gain(bs_elements_[m], u, scenario_.pathloss));
        return ch;
    }

    ChannelSet assemble_channels(const Scenario &scenario, const Vec3 &u)
    {
        return ChannelModel(scenario).channels(u);
    }
}
