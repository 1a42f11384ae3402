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

#include "risloc/accuracy.hpp"
#include "risloc/error.hpp"
#include "risloc/fisher.hpp"

#include <cmath>
#include <limits>

namespace risloc
{
    double jacobian_accuracy(const Eigen::MatrixXd &jacobian)
    {
        if (jacobian.cols() == 0 || jacobian.rows() < jacobian.cols())
            return std::numeric_limits<double>::infinity();
        return crb_accuracy(jacobian.transpose() * jacobian);
    }

    TrainResult train_config_regressor(const Dataset &train, const std::vector<int> &hidden, const TrainParams &params)
    {
        if (train.size() == 0)
            throw InvalidArgument("train_config_regressor: empty training set");
        Eigen::MatrixXd x(static_cast<Eigen::Index>(train.size()), 2);
        Eigen::MatrixXd y(static_cast<Eigen::Index>(train.size()), static_cast<Eigen::Index>(train.feature_count()));
        for (std::size_t i = 0; i < train.size(); ++i)
        {
            const auto r = static_cast<Eigen::Index>(i);
            x.row(r) = train.rows[i].position.head<2>().transpose();
            y.row(r) = Eigen::Map<const Eigen::RowVectorXd>(train.rows[i].features.data(), y.cols());
        }
        std::vector<int> layers{2};
        layers.insert(layers.end(), hidden.begin(), hidden.end());
        layers.push_back(static_cast<int>(train.feature_count()));
        return mlp_train(x, y, layers, params);
    }

    double gradient_accuracy_estimate(const MlpModel &surrogate, const Vec3 &u_hat, double calibration)
    {
        if (surrogate.input_size() != 2)
            throw InvalidArgument("gradient_accuracy_estimate: surrogate must take (ux, uy)");
        return calibration * jacobian_accuracy(input_jacobian(surrogate, u_hat.head<2>()));
    }

    double gradient_accuracy_estimate(const ChannelModel &model, const Vec3 &u_hat, double calibration, double fd_step)
    {
        if (model.visibility(u_hat) == Visibility::excluded)
            return std::numeric_limits<double>::infinity();
        FiOptions opt;
        opt.fd_step = fd_step;
        return calibration * jacobian_accuracy(phase_sensitivity(model, u_hat, opt).gradient);
    }

    double fit_calibration(std::span<const double> predicted, std::span<const double> actual)
    {
        if (predicted.size() != actual.size())
            throw InvalidArgument("fit_calibration: size mismatch");
        double sp = 0.0, sa = 0.0;
        for (std::size_t i = 0; i < predicted.size(); ++i)
        {
            if (!std::isfinite(predicted[i]))
                continue;
            sp += predicted[i];
            sa += actual[i];
        }
        if (!(sp > 0.0))
            throw NumericError("fit_calibration: no positive finite predictions");
        return sa / sp;
    }

    double relative_bias(std::span<const double> predicted, std::span<const double> actual)
    {
        if (predicted.size() != actual.size())
            throw InvalidArgument("relative_bias: size mismatch");
        double d = 0.0, sa = 0.0;
        for (std::size_t i = 0; i < predicted.size(); ++i)
        {
            if (!std::isfinite(predicted[i]))
                continue;
            d += predicted[i] - actual[i];
            sa += actual[i];
        }
        if (!(sa > 0.0))
            throw NumericError("relative_bias: actual errors sum to zero");
        return d / sa;
    }

    TrainResult train_error_predictor(const Eigen::MatrixXd &features, std::span<const double> errors,
                                      const std::vector<int> &hidden, const TrainParams &params)
    {
        if (features.rows() == 0 || static_cast<std::size_t>(features.rows()) != errors.size())
            throw InvalidArgument("train_error_predictor: need one error per feature row");
        const Eigen::MatrixXd y = Eigen::Map<const Eigen::VectorXd>(errors.data(), static_cast<Eigen::Index>(errors.size()));
        std::vector<int> layers{static_cast<int>(features.cols())};
        layers.insert(layers.end(), hidden.begin(), hidden.end());
        layers.push_back(1);
        return mlp_train(features, y, layers, params);
    }

    double pearson(std::span<const double> a, std::span<const double> b)
    {
        if (a.size() != b.size())
            throw InvalidArgument("pearson: size mismatch");
        double n = 0.0, ma = 0.0, mb = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (std::isfinite(a[i]) && std::isfinite(b[i]))
            {
                n += 1.0;
                ma += a[i];
                mb += b[i];
            }
        if (n < 2.0)
            throw NumericError("pearson: fewer than two finite pairs");
        ma /= n;
        mb /= n;
        double sab = 0.0, saa = 0.0, sbb = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (std::isfinite(a[i]) && std::isfinite(b[i]))
            {
                sab += (a[i] - ma) * (b[i] - mb);
                saa += (a[i] - ma) * (a[i] - ma);
                sbb += (b[i] - mb) * (b[i] - mb);
            }
        if (!(saa > 0.0) || !(sbb > 0.0))
            throw NumericError("pearson: zero variance");
        return sab / std::sqrt(saa * sbb);
    }
}
