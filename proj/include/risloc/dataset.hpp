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

#ifndef RISLOC_DATASET_HPP
#define RISLOC_DATASET_HPP

#include "risloc/geometry.hpp"
#include "risloc/ris_control.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace risloc
{
    enum class FeatureMode
    {
        binary,    // Q = 1: {0, pi} -> {+1, -1}
        continuous // wrapped radians in (-pi, pi]
    };

    FeatureMode feature_mode_for(int q_bits);

    // Binary mode requires a 1-bit quantized configuration.
    std::vector<double> encode_features(const RisConfig &config, FeatureMode mode);

    struct DatasetRow
    {
        Vec3 position = Vec3::Zero();
        std::vector<double> features;
        Visibility visibility = Visibility::los;
    };

    struct Dataset
    {
        std::vector<DatasetRow> rows;
        std::uint64_t split_seed = 0;
        double train_fraction = 0.75;

        std::size_t size() const { return rows.size(); }
        std::size_t feature_count() const { return rows.empty() ? 0 : rows.front().features.size(); }
    };

    struct DatasetOptions
    {
        double grid_step = 1.0;
        double sigma_theta = 0.0;
        int examples_per_point = 1;
        std::uint64_t seed = 0;
    };

    // One row per (visible grid point, example): the noiseless configuration, phase noise of
    // sigma_theta, then the scenario's quantization. Each row draws its noise from its own seeded
    // stream, so the output does not depend on the worker count.
    Dataset generate_dataset(const Scenario &scenario, const ServiceArea &area, const DatasetOptions &options);

    struct Split
    {
        std::vector<std::size_t> train;
        std::vector<std::size_t> test;
    };

    // Random permutation of 0..n-1 cut at round(train_fraction * n).
    Split split_indices(std::size_t n, double train_fraction, std::uint64_t seed);

    Dataset subset(const Dataset &data, std::span<const std::size_t> rows);

    // Keeps the feature columns in the given order.
    Dataset select_features(const Dataset &data, std::span<const std::size_t> columns);

    // Header ux,uy,f_1..f_N, 17 significant digits.
    void write_dataset_csv(std::ostream &out, const Dataset &data);
    void write_dataset_csv(const std::string &path, const Dataset &data);
    // Throws ParseError with the offending line.
    Dataset read_dataset_csv(std::istream &in, double ue_height = 1.5);
    Dataset read_dataset_csv(const std::string &path, double ue_height = 1.5);
}

#endif
