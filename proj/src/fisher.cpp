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

#include "risloc/fisher.hpp"
#include "risloc/error.hpp"
#include "risloc/parallel.hpp"
#include "risloc/ris_control.hpp"

#include <cmath>
#include <limits>

namespace risloc
{
    namespace
    {
        void check_options(const FiOptions &options)
        {
            if (options.dims != 2 && options.dims != 3)
                throw InvalidArgument("fisher: dims must be 2 or 3");
            if (!(options.fd_step > 0.0))
                throw InvalidArgument("fisher: fd_step must be positive");
        }
    }

    PhaseSensitivity phase_sensitivity(const ChannelModel &model, const Vec3 &u, const FiOptions &options)
    {
        check_options(options);
        const Visibility center_vis = model.visibility(u);
        if (center_vis == Visibility::excluded)
            throw UnreachablePosition("phase_sensitivity: position not visible from the RIS");

        PhaseSensitivity out;
        out.theta_star = optimal_config(model, u).phases;
        const std::size_t n = out.theta_star.size();
        out.gradient.setZero(static_cast<Eigen::Index>(n), options.dims);
        const double h = options.fd_step;
        for (int d = 0; d < options.dims; ++d)
        {
            Vec3 plus = u, minus = u;
            plus[d] += h;
            minus[d] -= h;
            if (model.visibility(plus) != center_vis || model.visibility(minus) != center_vis)
            {
                out.consistent = false;
                continue;
            }
            const RisConfig cp = optimal_config(model, plus);
            const RisConfig cm = optimal_config(model, minus);
            for (std::size_t k = 0; k < n; ++k)
                out.gradient(static_cast<Eigen::Index>(k), d) = wrap_pi(cp.phases[k] - cm.phases[k]) / (2.0 * h);
        }
        return out;
    }

    LogGradient pmf_log_gradient(const ChannelModel &model, const Vec3 &u, std::size_t element, std::size_t bin,
                                 const FiOptions &options)
    {
        const Scenario &s = model.scenario();
        if (s.quantization_bits < 1)
            throw InvalidArgument("pmf_log_gradient: scenario has continuous phases");
        if (bin >= (std::size_t{1} << s.quantization_bits))
            throw InvalidArgument("pmf_log_gradient: bin out of range");
        if (element >= s.ris.size())
            throw InvalidArgument("pmf_log_gradient: element out of range");
        const PhaseSensitivity ps = phase_sensitivity(model, u, options);
        const double theta = ps.theta_star[element];
        const double p = quantized_element_pmf(theta, s.phase_noise_sigma, s.quantization_bits).probs[bin];
        const double dp = quantized_element_pmf_derivative(theta, s.phase_noise_sigma, s.quantization_bits)[bin];
        LogGradient out;
        const Eigen::VectorXd g = ps.gradient.row(static_cast<Eigen::Index>(element)).transpose();
        if (p < kProbabilityFloor)
        {
            out.gradient = Eigen::VectorXd::Zero(options.dims);
            out.reliable = false;
            return out;
        }
        out.gradient = (dp / p) * g;
        out.reliable = ps.consistent;
        return out;
    }

    LogGradient pmf_log_gradient(const Scenario &scenario, const Vec3 &u, std::size_t element, std::size_t bin,
                                 const FiOptions &options)
    {
        return pmf_log_gradient(ChannelModel(scenario), u, element, bin, options);
    }

    ElementFi element_fi_general(double theta_star, const Eigen::VectorXd &grad_theta, double sigma_theta, int q_bits)
    {
        const auto dims = grad_theta.size();
        ElementFi out;
        out.J = FiMatrix::Zero(dims, dims);
        if (!(sigma_theta > 0.0))
            throw InvalidArgument("element_fi_general: sigma_theta must be > 0");
        if (q_bits == 0)
        {
            out.J = grad_theta * grad_theta.transpose() / (sigma_theta * sigma_theta);
            return out;
        }
        const ElementPmf pmf = quantized_element_pmf(theta_star, sigma_theta, q_bits);
        const std::vector<double> dp = quantized_element_pmf_derivative(theta_star, sigma_theta, q_bits);
        bool any = false;
        for (std::size_t m = 0; m < pmf.probs.size(); ++m)
        {
            const double p = pmf.probs[m];
            if (p < kProbabilityFloor)
            {
                out.reliable = false;
                continue;
            }
            any = true;
            const Eigen::VectorXd score = (dp[m] / p) * grad_theta;
            out.J += p * score * score.transpose();
        }
        if (!any)
            out.J.setZero();
        return out;
    }

    ElementFi element_fi_binary(double theta_star, const Eigen::VectorXd &grad_theta, double sigma_theta)
    {
        const auto dims = grad_theta.size();
        ElementFi out;
        out.J = FiMatrix::Zero(dims, dims);
        if (!(sigma_theta > 0.0))
            throw InvalidArgument("element_fi_binary: sigma_theta must be > 0");
        const ElementPmf pmf = quantized_element_pmf(theta_star, sigma_theta, 1);
        const double p = pmf.probs[1];
        const double q = pmf.probs[0];
        if (p < kProbabilityFloor || q < kProbabilityFloor)
        {
            out.reliable = false;
            return out;
        }
        const double dp = quantized_element_pmf_derivative(theta_star, sigma_theta, 1)[1];
        const Eigen::VectorXd score = (dp / p) * grad_theta;
        out.J = (p / q) * score * score.transpose();
        return out;
    }

    FiMatrix element_fi_general(const ChannelModel &model, const Vec3 &u, std::size_t element, const FiOptions &options)
    {
        const Scenario &s = model.scenario();
        if (element >= s.ris.size())
            throw InvalidArgument("element_fi: element out of range");
        const PhaseSensitivity ps = phase_sensitivity(model, u, options);
        return element_fi_general(ps.theta_star[element], ps.gradient.row(static_cast<Eigen::Index>(element)).transpose(),
                                  s.phase_noise_sigma, s.quantization_bits)
            .J;
    }

    FiMatrix element_fi_binary(const ChannelModel &model, const Vec3 &u, std::size_t element, const FiOptions &options)
    {
        const Scenario &s = model.scenario();
        if (s.quantization_bits != 1)
            throw InvalidArgument("element_fi_binary: requires Q = 1, use element_fi_general");
        if (element >= s.ris.size())
            throw InvalidArgument("element_fi: element out of range");
        const PhaseSensitivity ps = phase_sensitivity(model, u, options);
        return element_fi_binary(ps.theta_star[element], ps.gradient.row(static_cast<Eigen::Index>(element)).transpose(),
                                 s.phase_noise_sigma)
            .J;
    }

    FiPoint total_fi(const ChannelModel &model, const Vec3 &u, const FiOptions &options)
    {
        check_options(options);
        const Scenario &s = model.scenario();
        FiPoint point;
        point.u = u;
        point.visibility = model.visibility(u);
        point.J = FiMatrix::Zero(options.dims, options.dims);
        point.per_element_info.assign(s.ris.size(), 0.0);
        if (point.visibility == Visibility::excluded)
        {
            point.crb = std::numeric_limits<double>::infinity();
            point.reliable = false;
            return point;
        }
        const PhaseSensitivity ps = phase_sensitivity(model, u, options);
        point.reliable = ps.consistent;
        for (std::size_t n = 0; n < s.ris.size(); ++n)
        {
            const Eigen::VectorXd g = ps.gradient.row(static_cast<Eigen::Index>(n)).transpose();
            const ElementFi e = s.quantization_bits == 1 ? element_fi_binary(ps.theta_star[n], g, s.phase_noise_sigma)
                                                         : element_fi_general(ps.theta_star[n], g, s.phase_noise_sigma, s.quantization_bits);
            point.reliable = point.reliable && e.reliable;
            point.J += e.J;
            point.per_element_info[n] = e.J.trace();
        }
        point.crb = crb_accuracy(point.J);
        return point;
    }

    FiMapResult fi_map(const ChannelModel &model, std::span<const Vec3> grid, const FiOptions &options)
    {
        FiMapResult map;
        map.points.resize(grid.size());
        parallel_for(grid.size(), [&](std::size_t i)
                     { map.points[i] = total_fi(model, grid[i], options); });
        return map;
    }

    double crb_accuracy(const FiMatrix &J)
    {
        if (J.rows() != J.cols() || J.rows() == 0)
            throw InvalidArgument("crb_accuracy: J must be square");
        if (!J.allFinite())
            return std::numeric_limits<double>::infinity();
        const Eigen::SelfAdjointEigenSolver<FiMatrix> eig(0.5 * (J + J.transpose()), Eigen::EigenvaluesOnly);
        const Eigen::VectorXd ev = eig.eigenvalues();
        const double lo = ev.minCoeff();
        const double hi = ev.maxCoeff();
        if (!(lo > 0.0) || hi / lo > 1e12)
            return std::numeric_limits<double>::infinity();
        return std::sqrt(ev.cwiseInverse().sum());
    }

    double area_metric(std::span<const double> crb_values, const AreaMetricParams &params)
    {
        if (crb_values.empty())
            throw InvalidArgument("area_metric: empty map");
        if (!(params.sigma_min > 0.0) || !(params.sharpness > 0.0))
            throw InvalidArgument("area_metric: sigma_min and sharpness must be positive");
        double total = 0.0;
        for (double crb : crb_values)
        {
            if (!std::isfinite(crb))
                continue;
            total += 1.0 / (1.0 + std::exp((crb - params.sigma_min) * params.sharpness));
        }
        return total / static_cast<double>(crb_values.size());
    }

    double area_metric(const FiMapResult &map, const AreaMetricParams &params)
    {
        std::vector<double> crb;
        crb.reserve(map.points.size());
        for (const FiPoint &p : map.points)
            crb.push_back(p.crb);
        return area_metric(crb, params);
    }

    std::vector<double> average_element_information(const ChannelModel &model, std::span<const Vec3> grid,
                                                    const FiOptions &options)
    {
        if (grid.empty())
            throw InvalidArgument("average_element_information: empty grid");
        const FiMapResult map = fi_map(model, grid, options);
        std::vector<double> mean(model.scenario().ris.size(), 0.0);
        std::size_t used = 0;
        for (const FiPoint &p : map.points)
        {
            if (!p.reliable)
                continue;
            ++used;
            for (std::size_t n = 0; n < mean.size(); ++n)
                mean[n] += p.per_element_info[n];
        }
        if (used == 0)
            throw NumericError("average_element_information: no reliable grid point");
        for (double &v : mean)
            v /= static_cast<double>(used);
        return mean;
    }
}
