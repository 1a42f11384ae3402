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

#include "risloc/evaluate.hpp"
#include "risloc/error.hpp"
#include "risloc/ris_control.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace risloc
{
    Eigen::MatrixXd feature_matrix(const Dataset &data)
    {
        const auto n = static_cast<Eigen::Index>(data.feature_count());
        Eigen::MatrixXd x(static_cast<Eigen::Index>(data.size()), n);
        for (std::size_t i = 0; i < data.size(); ++i)
        {
            if (data.rows[i].features.size() != static_cast<std::size_t>(n))
                throw InvalidArgument("feature_matrix: ragged feature rows");
            x.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(data.rows[i].features.data(), n);
        }
        return x;
    }

    Eigen::MatrixXd position_matrix(const Dataset &data)
    {
        Eigen::MatrixXd y(static_cast<Eigen::Index>(data.size()), 2);
        for (std::size_t i = 0; i < data.size(); ++i)
            y.row(static_cast<Eigen::Index>(i)) = data.rows[i].position.head<2>().transpose();
        return y;
    }

    std::vector<Vec3> predict_positions(const MlpModel &model, const Dataset &data)
    {
        if (model.output_size() != 2)
            throw InvalidArgument("predict_positions: localizer must have two outputs");
        if (data.size() == 0)
            return {};
        const Eigen::MatrixXd y = mlp_forward_batch(model, feature_matrix(data).transpose());
        std::vector<Vec3> out(data.size());
        for (std::size_t i = 0; i < data.size(); ++i)
            out[i] = Vec3(y(0, static_cast<Eigen::Index>(i)), y(1, static_cast<Eigen::Index>(i)), data.rows[i].position.z());
        return out;
    }

    double quantile(std::vector<double> values, double q)
    {
        if (values.empty())
            throw InvalidArgument("quantile: no values");
        std::sort(values.begin(), values.end());
        const double pos = q * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
    }

    EvalReport evaluate_estimates(std::span<const Vec3> truth, std::span<const Vec3> estimate, const Vec3 &ris_position,
                                  std::size_t window)
    {
        if (truth.size() != estimate.size())
            throw InvalidArgument("evaluate: truth and estimate sizes differ");
        if (window == 0)
            throw InvalidArgument("evaluate: window must be >= 1");
        EvalReport rep;
        rep.window = window;
        rep.truth.assign(truth.begin(), truth.end());
        rep.estimate.assign(estimate.begin(), estimate.end());
        rep.errors.resize(truth.size());
        const Vec2 r = ris_position.head<2>();
        std::vector<PolarSample> polar(truth.size());
        for (std::size_t i = 0; i < truth.size(); ++i)
        {
            rep.errors[i] = (truth[i] - estimate[i]).norm();
            const Vec2 du = truth[i].head<2>() - r;
            const Vec2 de = estimate[i].head<2>() - r;
            polar[i].distance = du.norm();
            polar[i].radial_error = std::abs(de.norm() - du.norm());
            polar[i].azimuth_error = angdiff(std::atan2(de.y(), de.x()), std::atan2(du.y(), du.x()));
        }
        if (truth.empty())
            return rep;
        rep.mean_error = std::accumulate(rep.errors.begin(), rep.errors.end(), 0.0) / static_cast<double>(truth.size());
        rep.median_error = quantile(rep.errors, 0.5);

        std::stable_sort(polar.begin(), polar.end(), [](const PolarSample &a, const PolarSample &b)
                         { return a.distance < b.distance; });
        const std::size_t n = polar.size();
        const std::size_t w = std::min(window, n);
        std::vector<double> rad, az;
        for (std::size_t i = 0; i < n; ++i)
        {
            const std::size_t begin = std::min(i >= w / 2 ? i - w / 2 : 0, n - w);
            rad.clear();
            az.clear();
            for (std::size_t j = begin; j < begin + w; ++j)
            {
                rad.push_back(polar[j].radial_error);
                az.push_back(polar[j].azimuth_error);
            }
            polar[i].radial_median = quantile(rad, 0.5);
            polar[i].radial_iqr = quantile(rad, 0.75) - quantile(rad, 0.25);
            polar[i].azimuth_median = quantile(az, 0.5);
            polar[i].azimuth_iqr = quantile(az, 0.75) - quantile(az, 0.25);
        }
        rep.polar = std::move(polar);
        return rep;
    }

    EvalReport evaluate_localization(const MlpModel &model, const Dataset &test, const Vec3 &ris_position, std::size_t window)
    {
        std::vector<Vec3> truth(test.size());
        for (std::size_t i = 0; i < test.size(); ++i)
            truth[i] = test.rows[i].position;
        const std::vector<Vec3> est = predict_positions(model, test);
        return evaluate_estimates(truth, est, ris_position, window);
    }

    std::string eval_report_json(const EvalReport &report)
    {
        nlohmann::json j;
        j["mean_error_m"] = report.mean_error;
        j["median_error_m"] = report.median_error;
        j["points"] = report.errors.size();
        j["rolling_window"] = report.window;
        nlohmann::json polar = nlohmann::json::array();
        for (const PolarSample &p : report.polar)
            polar.push_back({{"distance", p.distance},
                             {"radial_error", p.radial_error},
                             {"azimuth_error", p.azimuth_error},
                             {"radial_median", p.radial_median},
                             {"radial_iqr", p.radial_iqr},
                             {"azimuth_median", p.azimuth_median},
                             {"azimuth_iqr", p.azimuth_iqr}});
        j["polar"] = std::move(polar);
        return j.dump(2);
    }

    double least_squares_slope(std::span<const double> x, std::span<const double> y)
    {
        if (x.size() != y.size() || x.size() < 2)
            throw InvalidArgument("least_squares_slope: need two or more paired values");
        const double n = static_cast<double>(x.size());
        const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
        const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            sxy += (x[i] - mx) * (y[i] - my);
            sxx += (x[i] - mx) * (x[i] - mx);
        }
        if (!(sxx > 0.0))
            throw NumericError("least_squares_slope: x has no spread");
        return sxy / sxx;
    }

    TrainResult train_localizer(const Dataset &train, const std::vector<int> &layer_sizes, const TrainParams &params)
    {
        if (train.size() == 0)
            throw InvalidArgument("train_localizer: empty training set");
        return mlp_train(feature_matrix(train), position_matrix(train), layer_sizes, params);
    }
}
