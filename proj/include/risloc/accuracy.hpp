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

#ifndef RISLOC_ACCURACY_HPP
#define RISLOC_ACCURACY_HPP

#include "risloc/dataset.hpp"
#include "risloc/geometry.hpp"
#include "risloc/mlp.hpp"

#include <span>
#include <vector>

namespace risloc
{
    // sqrt(tr((G^T G)^{-1})) for an N x D Jacobian G = d c / d u. +inf when G^T G is rank deficient
    // (condition number above 1e12).
    double jacobian_accuracy(const Eigen::MatrixXd &jacobian);

    // Position -> feature surrogate of the configuration map, trained on (ux, uy) -> features.
    TrainResult train_config_regressor(const Dataset &train, const std::vector<int> &hidden, const TrainParams &params);

    // calibration * jacobian_accuracy of the surrogate's input Jacobian at u_hat.
    double gradient_accuracy_estimate(const MlpModel &surrogate, const Vec3 &u_hat, double calibration);

    // Same with the exact noiseless pipeline: the Jacobian of theta*(u) by central differences of the
    // unwrapped phases. +inf when u_hat is not visible from the RIS.
    double gradient_accuracy_estimate(const ChannelModel &model, const Vec3 &u_hat, double calibration,
                                      double fd_step = 0.01);

    // Scalar c with mean(c * predicted) = mean(actual) over the finite predictions.
    double fit_calibration(std::span<const double> predicted, std::span<const double> actual);

    // Relative bias mean(predicted - actual) / mean(actual) over finite predictions.
    double relative_bias(std::span<const double> predicted, std::span<const double> actual);

    // features -> |error| regressor with a single output.
    TrainResult train_error_predictor(const Eigen::MatrixXd &features, std::span<const double> errors,
                                      const std::vector<int> &hidden, const TrainParams &params);

    // Pearson correlation over the pairs where both values are finite.
    double pearson(std::span<const double> a, std::span<const double> b);
}

#endif
