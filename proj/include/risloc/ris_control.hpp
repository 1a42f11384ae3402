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

#ifndef RISLOC_RIS_CONTROL_HPP
#define RISLOC_RIS_CONTROL_HPP

#include "risloc/geometry.hpp"
#include "risloc/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace risloc
{
    // Phase-shift vector of the RIS. Continuous phases are kept in [0, 2pi); quantized ones are
    // exact multiples of 2pi / 2^q_bits.
    struct RisConfig
    {
        std::vector<double> phases;
        bool quantized = false;
        int q_bits = 0;

        std::size_t size() const { return phases.size(); }
    };

    struct Precoder
    {
        CVector w; // unit norm
    };

    // Probabilities of the 2^Q quantized phases Delta*m, m = 0..2^Q-1.
    struct ElementPmf
    {
        std::vector<double> probs;
    };

    // Wraps to [0, 2pi).
    double wrap_phase(double x);
    // Wraps to (-pi, pi].
    double wrap_pi(double x);

    // |((a - b + pi) mod 2pi) - pi|, in [0, pi].
    double angdiff(double a, double b);

    // sigma_theta = 1 / sqrt(2 gamma) for linear SNR gamma > 0.
    double sigma_from_snr(double gamma);

    Precoder mrt_precoder(const CVector &h_d);

    struct CoherentConfig
    {
        RisConfig config;
        bool no_direct_path = false; // z_D == 0, phases referenced to 0 instead of angle(z_D)
    };

    // theta_n = angle(z_D) - angle(z_BRU,n) with z_D = w^H h_D and z_BRU,n = h_RU,n conj((H_RB w)_n).
    // Every reflected summand conj((H_RB w)_n) e^{j theta_n} h_RU,n then has phase angle(z_D).
    // Throws NumericError if some z_BRU,n is zero.
    CoherentConfig coherent_config(const ChannelSet &channels, const Precoder &w);

    // Noiseless configuration theta*(u) selected for a UE at u: MRT precoder on the direct path
    // followed by the coherent-paths rule. Continuous phases.
    RisConfig optimal_config(const ChannelModel &model, const Vec3 &u);

    // Adds i.i.d. N(0, sigma^2) to every phase and wraps. Throws InvalidArgument for sigma < 0 or a
    // quantized input.
    RisConfig apply_phase_noise(const RisConfig &config, double sigma_theta, Rng &rng);
    RisConfig apply_phase_noise(const RisConfig &config, double sigma_theta, std::uint64_t seed);

    // q(x) = Delta * floor(x / Delta + 1/2), wrapped into {Delta*m : m = 0..2^Q-1}.
    double quantize_phase(double x, int q_bits);
    RisConfig quantize_config(const RisConfig &config, int q_bits);

    // P(theta_Q = Delta*m) when the continuous phase is N(theta_star, sigma^2), with the 2pi wrap
    // handled by summing over lattice shifts. sigma == 0 puts all mass on q(theta_star).
    ElementPmf quantized_element_pmf(double theta_star, double sigma_theta, int q_bits);

    // dP_m / d theta_star for the pmf above (analytic). Requires sigma > 0.
    std::vector<double> quantized_element_pmf_derivative(double theta_star, double sigma_theta, int q_bits);

    // log2(1 + P_t/sigma^2 |w^H (H_RB^H Theta h_RU + h_D)|^2).
    double achievable_rate(const ChannelSet &channels, const Precoder &w, const RisConfig &config,
                           double tx_power, double noise_power);

    // Nearest candidate to the observed configuration under the Euclidean norm of elementwise angdiff.
    // Candidates get the noiseless pipeline, quantized when the observation is. Ties go to the lowest index.
    std::size_t grid_search_index(const RisConfig &observed, const ChannelModel &model, std::span<const Vec3> candidates);
    Vec3 grid_search_estimator(const RisConfig &observed, const Scenario &scenario, std::span<const Vec3> candidates);
}

#endif
