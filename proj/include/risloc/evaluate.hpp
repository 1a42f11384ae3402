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

#ifndef RISLOC_EVALUATE_HPP
#define RISLOC_EVALUATE_HPP

#include "risloc/dataset.hpp"
#include "risloc/geometry.hpp"
#include "risloc/mlp.hpp"

#include <span>
#include <string>
#include <vector>

namespace risloc
{
    // One sample per row: features (S x N) and ground-plane targets (S x 2).
    Eigen::MatrixXd feature_matrix(const Dataset &data);
    Eigen::MatrixXd position_matrix(const Dataset &data);

    // Estimated positions at the height of the test rows.
    std::vector<Vec3> predict_positions(const MlpModel &model, const Dataset &data);

    // Errors of one test point in polar coordinates around the RIS (ground plane).
    struct PolarSample
    {
        double distance = 0.0;      // |u - r|
        double radial_error = 0.0;  // | |u_hat - r| - |u - r| |
        double azimuth_error = 0.0; // angdiff of the bearings seen from r
        double radial_median = 0.0;
        double radial_iqr = 0.0;
        double azimuth_median = 0.0;
        double azimuth_iqr = 0.0;
    };

    struct EvalReport
    {
        double mean_error = 0.0;
        double median_error = 0.0;
        std::vector<Vec3> truth;
        std::vector<Vec3> estimate;
        std::vector<double> errors; // |u - u_hat|, in test-row order
        std::vector<PolarSample> polar; // sorted by distance, rolling statistics over `window` samples
        std::size_t window = 100;
    };

    EvalReport evaluate_estimates(std::span<const Vec3> truth, std::span<const Vec3> estimate, const Vec3 &ris_position,
                                  std::size_t window = 100);
    EvalReport evaluate_localization(const MlpModel &model, const Dataset &test, const Vec3 &ris_position,
                                     std::size_t window = 100);

    std::string eval_report_json(const EvalReport &report);

    // Ordinary least-squares slope of y on x.
    double least_squares_slope(std::span<const double> x, std::span<const double> y);

    // Linear-interpolated quantile of unsorted values, q in [0, 1].
    double quantile(std::vector<double> values, double q);

    // Training targets for the localizer: ux, uy of every row.
    TrainResult train_localizer(const Dataset &train, const std::vector<int> &layer_sizes, const TrainParams &params);
}

#endif
