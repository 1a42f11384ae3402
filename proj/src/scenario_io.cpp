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

#include "risloc/scenario_io.hpp"
#include "risloc/error.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <vector>

namespace risloc
{
    namespace
    {
        struct Entry
        {
            std::string value;
            std::size_t line;
            bool used = false;
        };

        std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        class Fields
        {
        public:
            explicit Fields(std::istream &in)
            {
                std::string raw;
                std::size_t lineno = 0;
                while (std::getline(in, raw))
                {
                    ++lineno;
                    const std::string line = trim(raw.substr(0, raw.find('#')));
                    if (line.empty())
                        continue;
                    const auto eq = line.find('=');
                    if (eq == std::string::npos)
                        throw ParseError("expected 'key = value'", lineno);
                    const std::string key = trim(line.substr(0, eq));
                    const std::string value = trim(line.substr(eq + 1));
                    if (key.empty() || value.empty())
                        throw ParseError("empty key or value", lineno);
                    if (entries_.count(key))
                        throw ParseError("duplicate key '" + key + "'", lineno);
                    entries_[key] = Entry{value, lineno};
                }
            }

            bool has(const std::string &key) const { return entries_.count(key) != 0; }

            Entry &get(const std::string &key)
            {
                auto it = entries_.find(key);
                if (it == entries_.end())
                    throw ParseError("missing field '" + key + "'");
                it->second.used = true;
                return it->second;
            }

            std::vector<double> numbers(const std::string &key, std::size_t count)
            {
                Entry &e = get(key);
                std::vector<double> out;
                std::stringstream ss(e.value);
                std::string cell;
                while (std::getline(ss, cell, ','))
                    out.push_back(to_double(trim(cell), key, e.line));
                if (out.size() != count)
                    throw ParseError("field '" + key + "' needs " + std::to_string(count) + " values", e.line);
                return out;
            }

            double number(const std::string &key) { return numbers(key, 1)[0]; }

            int integer(const std::string &key)
            {
                const Entry &e = get(key);
                const double v = number(key);
                if (v != std::floor(v) || std::abs(v) > 1e9)
                    throw ParseError("field '" + key + "' must be an integer", e.line);
                return static_cast<int>(v);
            }

            Vec3 vec3(const std::string &key)
            {
                const auto v = numbers(key, 3);
                return {v[0], v[1], v[2]};
            }

            void reject_unknown() const
            {
                for (const auto &[key, e] : entries_)
                    if (!e.used)
                        throw ParseError("unknown field '" + key + "'", e.line);
            }

        private:
            static double to_double(const std::string &s, const std::string &key, std::size_t line)
            {
                try
                {
                    std::size_t used = 0;
                    const double v = std::stod(s, &used);
                    if (used == s.size() && std::isfinite(v))
                        return v;
                }
                catch (const std::exception &)
                {
                }
                throw ParseError("field '" + key + "': bad number '" + s + "'", line);
            }

            std::map<std::string, Entry> entries_;
        };

        Segment2 segment(Fields &f, const std::string &key)
        {
            const auto v = f.numbers(key, 4);
            return Segment2{Vec2(v[0], v[1]), Vec2(v[2], v[3])};
        }
    }

    Scenario parse_scenario(std::istream &in)
    {
        Fields f(in);
        Scenario s;
        s.bs_position = f.vec3("scenario.bs.position");
        s.bs_antennas = f.integer("scenario.bs.antennas");
        s.bs_axis = f.vec3("scenario.bs.axis");
        s.carrier_hz = f.number("scenario.carrier_hz");

        const int n_y = f.integer("scenario.ris.n_y");
        const int n_z = f.integer("scenario.ris.n_z");
        const double spacing = f.number("scenario.ris.spacing");
        const Vec3 center = f.vec3("scenario.ris.center");
        Entry &ref = f.get("scenario.ris.ref");
        RefChoice choice;
        if (ref.value == "center")
            choice = RefChoice::center();
        else if (ref.value == "corner")
            choice = RefChoice::corner();
        else
        {
            try
            {
                std::size_t used = 0;
                const long long i = std::stoll(ref.value, &used);
                if (used != ref.value.size() || i < 0)
                    throw std::invalid_argument(ref.value);
                choice = RefChoice::at(static_cast<std::size_t>(i));
            }
            catch (const std::exception &)
            {
                throw ParseError("field 'scenario.ris.ref' must be center, corner or an element index", ref.line);
            }
        }
        try
        {
            s.ris = build_upa_layout(n_y, n_z, spacing, center, choice);
        }
        catch (const InvalidArgument &e)
        {
            throw ParseError(std::string("ris layout: ") + e.what(), f.get("scenario.ris.n_y").line);
        }

        s.pathloss.gamma0 = f.number("scenario.pathloss.gamma0");
        s.pathloss.d0 = f.number("scenario.pathloss.d0");
        s.pathloss.beta = f.number("scenario.pathloss.beta");
        s.tx_power = f.number("scenario.tx_power");
        s.noise_power = f.number("scenario.noise_power");
        s.phase_noise_sigma = f.number("scenario.phase_noise_sigma");
        s.quantization_bits = f.integer("scenario.quantization_bits");

        s.area.x_min = f.number("scenario.area.x_min");
        s.area.x_max = f.number("scenario.area.x_max");
        s.area.y_min = f.number("scenario.area.y_min");
        s.area.y_max = f.number("scenario.area.y_max");
        s.area.ue_height = f.number("scenario.area.ue_height");
        s.grid_step = f.number("scenario.grid_step");

        const bool has_mirror = f.has("scenario.nlos.mirror");
        const bool has_block = f.has("scenario.nlos.blockage");
        if (has_mirror != has_block)
            throw ParseError(std::string("missing field '") + (has_mirror ? "scenario.nlos.blockage" : "scenario.nlos.mirror") + "'");
        if (has_mirror)
            s.scene = NlosScene{segment(f, "scenario.nlos.mirror"), segment(f, "scenario.nlos.blockage")};
        f.reject_unknown();

        if (!(s.area.x_max >= s.area.x_min) || !(s.area.y_max >= s.area.y_min))
            throw ParseError("scenario.area: max bounds must not be below min bounds");
        try
        {
            s.validate();
        }
        catch (const InvalidArgument &e)
        {
            throw ParseError(e.what());
        }
        return s;
    }

    Scenario parse_scenario_text(const std::string &text)
    {
        std::istringstream in(text);
        return parse_scenario(in);
    }

    Scenario load_scenario(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ParseError("cannot open scenario file " + path);
        return parse_scenario(in);
    }

    void write_scenario(std::ostream &out, const Scenario &s)
    {
        auto vec = [&](const char *key, const Vec3 &v)
        { out << key << " = " << v.x() << ", " << v.y() << ", " << v.z() << '\n'; };
        out << std::setprecision(17);
        vec("scenario.bs.position", s.bs_position);
        out << "scenario.bs.antennas = " << s.bs_antennas << '\n';
        vec("scenario.bs.axis", s.bs_axis);
        out << "scenario.carrier_hz = " << s.carrier_hz << '\n';
        out << "scenario.ris.n_y = " << s.ris.n_y << '\n';
        out << "scenario.ris.n_z = " << s.ris.n_z << '\n';
        out << "scenario.ris.spacing = " << s.ris.spacing << '\n';
        vec("scenario.ris.center", s.ris.center);
        out << "scenario.ris.ref = " << s.ris.ref_index << '\n';
        out << "scenario.pathloss.gamma0 = " << s.pathloss.gamma0 << '\n';
        out << "scenario.pathloss.d0 = " << s.pathloss.d0 << '\n';
        out << "scenario.pathloss.beta = " << s.pathloss.beta << '\n';
        out << "scenario.tx_power = " << s.tx_power << '\n';
        out << "scenario.noise_power = " << s.noise_power << '\n';
        out << "scenario.phase_noise_sigma = " << s.phase_noise_sigma << '\n';
        out << "scenario.quantization_bits = " << s.quantization_bits << '\n';
        out << "scenario.area.x_min = " << s.area.x_min << '\n';
        out << "scenario.area.x_max = " << s.area.x_max << '\n';
        out << "scenario.area.y_min = " << s.area.y_min << '\n';
        out << "scenario.area.y_max = " << s.area.y_max << '\n';
        out << "scenario.area.ue_height = " << s.area.ue_height << '\n';
        out << "scenario.grid_step = " << s.grid_step << '\n';
        if (s.scene)
        {
            auto seg = [&](const char *key, const Segment2 &g)
            { out << key << " = " << g.a.x() << ", " << g.a.y() << ", " << g.b.x() << ", " << g.b.y() << '\n'; };
            seg("scenario.nlos.mirror", s.scene->mirror);
            seg("scenario.nlos.blockage", s.scene->blockage);
        }
    }

    std::string scenario_text(const Scenario &scenario)
    {
        std::ostringstream out;
        write_scenario(out, scenario);
        return out.str();
    }

    std::string fnv1a_hex(const std::string &bytes)
    {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : bytes)
        {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        std::ostringstream out;
        out << std::hex << std::setw(16) << std::setfill('0') << h;
        return out.str();
    }
}
