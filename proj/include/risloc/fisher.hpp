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

#ifndef RISLOC_FISHER_HPP
#define RISLOC_FISHER_HPP

#include "risloc/geometry.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace risloc
{
    // Symmetric PSD D x D Fisher information about the UE coordinates (x, y[, z]).
    using FiMatrix = Eigen::MatrixXd;

    struct FiOptions
    {
        double fd_step = 0.01; // meters, central differences of theta*(u)
        int dims = 2;          // 2: (x, y); 3: (x, y, z)
    };

    // Probabilities below this are treated as zero and flag the term as unreliable.
    inline constexpr double kProbabilityFloor = 1e-300;

    // theta*(u) of every element and its spatial gradient. The gradient is the central difference
    // of the unwrapped phase, so it is insensitive to the [0, 2pi) wrap.
    struct PhaseSensitivity
    {
        std::vector<double> theta_star; // N
        Eigen::MatrixXd gradient;       // N x D, rad/m
        bool consistent = true;         // false when a stencil point changes visibility class
    };

    PhaseSensitivity phase_sensitivity(const ChannelModel &model, const Vec3 &u, const FiOptions &options = {});

    struct LogGradient
    {
        Eigen::VectorXd gradient; // D
        bool reliable = true;
    };

    // grad_u ln P(theta_Q,n = Delta*m; u). The pmf is differentiated analytically with respect to
    // theta*_n and chained with the finite-difference gradient of theta*_n(u).
    LogGradient pmf_log_gradient(const ChannelModel &model, const Vec3 &u, std::size_t element, std::size_t bin,
                                 const FiOptions &options = {});
    LogGradient pmf_log_gradient(const Scenario &scenario, const Vec3 &u, std::size_t element, std::size_t bin,
                                 const FiOptions &options = {});

    struct ElementFi
    {
        FiMatrix J;
        bool reliable = true;
    };

    // Per-element FI from theta*_n and its gradient row. For q_bits >= 1 it is the expectation
    // sum_m P_m (grad ln P_m)(grad ln P_m)^T over the quantized pmf; for q_bits == 0 it is the
    // Gaussian-observation FI (grad theta*)(grad theta*)^T / sigma^2.
    ElementFi element_fi_general(double theta_star, const Eigen::VectorXd &grad_theta, double sigma_theta, int q_bits);

    // One-bit closed form. With P = P(theta_Q = pi) the two-atom expectation reduces to
    // (P / (1 - P)) (grad ln P)(grad ln P)^T; only one log-gradient is needed.
    ElementFi element_fi_binary(double theta_star, const Eigen::VectorXd &grad_theta, double sigma_theta);

    // Scenario-level forms; Q and sigma_theta come from the scenario. element_fi_binary throws
    // InvalidArgument unless Q == 1.
    FiMatrix element_fi_general(const ChannelModel &model, const Vec3 &u, std::size_t element, const FiOptions &options = {});
    FiMatrix element_fi_binary(const ChannelModel &model, const Vec3 &u, std::size_t element, const FiOptions &options = {});

    struct FiPoint
    {
        Vec3 u = Vec3::Zero();
        Visibility visibility = Visibility::los;
        FiMatrix J;
        double crb = 0.0;                       // meters, +inf when unlocalizable
        std::vector<double> per_element_info;   // tr(J_n)
        bool reliable = true;
    };

    // J(u) = sum_n J_n(u), together with the per-element traces.
    FiPoint total_fi(const ChannelModel &model, const Vec3 &u, const FiOptions &options = {});

    struct FiMapResult
    {
        std::vector<FiPoint> points;
    };

    // Excluded positions are kept with J = 0, crb = +inf and reliable = false.
    FiMapResult fi_map(const ChannelModel &model, std::span<const Vec3> grid, const FiOptions &options = {});

    // sqrt(tr(J^{-1})). Returns +inf when J is singular or its condition number exceeds 1e12.
    double crb_accuracy(const FiMatrix &J);

    struct AreaMetricParams
    {
        double sigma_min = 1.0; // meters
        double sharpness = 10.0; // 1/m
    };

    // Grid average of 1 / (1 + exp((crb - sigma_min) * sharpness)); unlocalizable points count as 0.
    double area_metric(std::span<const double> crb_values, const AreaMetricParams &params);
    double area_metric(const FiMapResult &map, const AreaMetricParams &params);

    // Mean over reliable grid points of tr(J_n(u)), one value per element.
    std::vector<double> average_element_information(const ChannelModel &model, std::span<const Vec3> grid,
                                                    const FiOptions &options = {});
}

#endif
