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

#include "risloc/dataset.hpp"
#include "risloc/error.hpp"
#include "risloc/parallel.hpp"
#include "risloc/rng.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace risloc
{
    FeatureMode feature_mode_for(int q_bits) { return q_bits == 1 ? FeatureMode::binary : FeatureMode::continuous; }

    std::vector<double> encode_features(const RisConfig &config, FeatureMode mode)
    {
        std::vector<double> f(config.size());
        if (mode == FeatureMode::binary)
        {
            if (!config.quantized || config.q_bits != 1)
                throw InvalidArgument("encode_features: binary mode needs a 1-bit configuration");
            for (std::size_t n = 0; n < f.size(); ++n)
                f[n] = config.phases[n] == 0.0 ? 1.0 : -1.0;
            return f;
        }
        for (std::size_t n = 0; n < f.size(); ++n)
            f[n] = wrap_pi(config.phases[n]);
        return f;
    }

    Dataset generate_dataset(const Scenario &scenario, const ServiceArea &area, const DatasetOptions &options)
    {
        if (!(options.grid_step > 0.0))
            throw InvalidArgument("generate_dataset: grid step must be positive");
        if (options.examples_per_point < 1)
            throw InvalidArgument("generate_dataset: examples_per_point must be >= 1");
        if (!(options.sigma_theta >= 0.0))
            throw InvalidArgument("generate_dataset: sigma_theta must be >= 0");
        if (!(area.x_max >= area.x_min) || !(area.y_max >= area.y_min))
            throw InvalidArgument("generate_dataset: empty area");

        const ChannelModel model(scenario);
        const std::vector<Vec3> grid = grid_points(area, options.grid_step);
        const auto ne = static_cast<std::size_t>(options.examples_per_point);
        const std::uint64_t stream = substream_seed(options.seed, "dataset");
        const int q = scenario.quantization_bits;
        const FeatureMode mode = feature_mode_for(q);

        std::vector<std::vector<DatasetRow>> per_point(grid.size());
        parallel_for(grid.size(), [&](std::size_t i)
                     {
            const Visibility vis = model.visibility(grid[i]);
            if (vis == Visibility::excluded)
                return;
            const RisConfig clean = optimal_config(model, grid[i]);
            per_point[i].resize(ne);
            for (std::size_t e = 0; e < ne; ++e)
            {
                RisConfig c = apply_phase_noise(clean, options.sigma_theta, indexed_seed(stream, i * ne + e));
                if (q > 0)
                    c = quantize_config(c, q);
                per_point[i][e] = DatasetRow{grid[i], encode_features(c, mode), vis};
            } });

        Dataset data;
        data.split_seed = substream_seed(options.seed, "split");
        for (auto &rows : per_point)
            for (auto &r : rows)
                data.rows.push_back(std::move(r));
        return data;
    }

    Split split_indices(std::size_t n, double train_fraction, std::uint64_t seed)
    {
        if (!(train_fraction > 0.0 && train_fraction < 1.0))
            throw InvalidArgument("split_indices: train_fraction must be in (0, 1)");
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        Rng rng(seed);
        for (std::size_t i = n; i > 1; --i)
            std::swap(perm[i - 1], perm[rng.below(i)]);
        const auto cut = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
        Split s;
        s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(cut));
        s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(cut), perm.end());
        return s;
    }

    Dataset subset(const Dataset &data, std::span<const std::size_t> rows)
    {
        Dataset out;
        out.split_seed = data.split_seed;
        out.train_fraction = data.train_fraction;
        out.rows.reserve(rows.size());
        for (std::size_t i : rows)
            out.rows.push_back(data.rows.at(i));
        return out;
    }

    Dataset select_features(const Dataset &data, std::span<const std::size_t> columns)
    {
        const std::size_t n = data.feature_count();
        for (std::size_t c : columns)
            if (c >= n)
                throw InvalidArgument("select_features: column out of range");
        Dataset out;
        out.split_seed = data.split_seed;
        out.train_fraction = data.train_fraction;
        out.rows.reserve(data.size());
        for (const DatasetRow &r : data.rows)
        {
            DatasetRow s{r.position, {}, r.visibility};
            s.features.reserve(columns.size());
            for (std::size_t c : columns)
                s.features.push_back(r.features[c]);
            out.rows.push_back(std::move(s));
        }
        return out;
    }

    void write_dataset_csv(std::ostream &out, const Dataset &data)
    {
        out << "ux,uy";
        for (std::size_t n = 0; n < data.feature_count(); ++n)
            out << ",f_" << (n + 1);
        out << '\n'
            << std::setprecision(17);
        for (const DatasetRow &r : data.rows)
        {
            out << r.position.x() << ',' << r.position.y();
            for (double f : r.features)
                out << ',' << f;
            out << '\n';
        }
    }

    void write_dataset_csv(const std::string &path, const Dataset &data)
    {
        std::ofstream out(path);
        if (!out)
            throw InvalidArgument("write_dataset_csv: cannot open " + path);
        write_dataset_csv(out, data);
    }

    Dataset read_dataset_csv(std::istream &in, double ue_height)
    {
        std::string line;
        if (!std::getline(in, line))
            throw ParseError("dataset: missing header", 1);
        std::size_t columns = 1;
        for (char ch : line)
            columns += ch == ',' ? 1 : 0;
        if (line.rfind("ux,uy", 0) != 0 || columns < 3)
            throw ParseError("dataset: header must start with ux,uy followed by feature columns", 1);

        Dataset data;
        std::size_t lineno = 1;
        while (std::getline(in, line))
        {
            ++lineno;
            if (line.empty())
                continue;
            std::istringstream ss(line);
            std::string cell;
            std::vector<double> values;
            while (std::getline(ss, cell, ','))
            {
                try
                {
                    std::size_t used = 0;
                    values.push_back(std::stod(cell, &used));
                    if (used != cell.size())
                        throw std::invalid_argument(cell);
                }
                catch (const std::exception &)
                {
                    throw ParseError("dataset: bad number '" + cell + "'", lineno);
                }
            }
            if (values.size() != columns)
                throw ParseError("dataset: expected " + std::to_string(columns) + " columns", lineno);
            DatasetRow r;
            r.position = Vec3(values[0], values[1], ue_height);
            r.features.assign(values.begin() + 2, values.end());
            data.rows.push_back(std::move(r));
        }
        return data;
    }

    Dataset read_dataset_csv(const std::string &path, double ue_height)
    {
        std::ifstream in(path);
        if (!in)
            throw InvalidArgument("read_dataset_csv: cannot open " + path);
        return read_dataset_csv(in, ue_height);
    }
}
