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

#include "risloc/ris_control.hpp"
#include "risloc/error.hpp"

#include <cmath>
#include <limits>

namespace risloc
{
    double wrap_phase(double x)
    {
        double r = std::fmod(x, kTwoPi);
        if (r < 0.0)
            r += kTwoPi;
        if (r >= kTwoPi)
            r = 0.0;
        return r;
    }

    double wrap_pi(double x)
    {
        double r = wrap_phase(x);
        if (r > kPi)
            r -= kTwoPi;
        return r;
    }

    double angdiff(double a, double b)
    {
        double r = std::fmod(a - b + kPi, kTwoPi);
        if (r < 0.0)
            r += kTwoPi;
        return std::abs(r - kPi);
    }

    double sigma_from_snr(double gamma)
    {
        if (!(gamma > 0.0))
            throw InvalidArgument("sigma_from_snr: SNR must be positive");
        return 1.0 / std::sqrt(2.0 * gamma);
    }

    Precoder mrt_precoder(const CVector &h_d)
    {
        const double norm = h_d.norm();
        if (!(norm > 0.0))
            throw InvalidArgument("mrt_precoder: zero direct channel");
        return Precoder{h_d / norm};
    }

    namespace
    {
        CoherentConfig coherent_from(const CMatrix &h_rb, const CVector &h_ru, const CVector &h_d, const Precoder &w)
        {
            if (h_rb.rows() != h_ru.size() || h_rb.cols() != w.w.size() || h_d.size() != w.w.size())
                throw InvalidArgument("coherent_config: channel dimensions do not match");

            const std::complex<double> z_d = w.w.dot(h_d); // w^H h_D
            const CVector bs_side = h_rb * w.w;

            CoherentConfig out;
            out.no_direct_path = std::abs(z_d) == 0.0;
            const double ref = out.no_direct_path ? 0.0 : std::arg(z_d);
            out.config.phases.resize(static_cast<std::size_t>(h_ru.size()));
            for (Eigen::Index n = 0; n < h_ru.size(); ++n)
            {
                const std::complex<double> z_bru = h_ru[n] * std::conj(bs_side[n]);
                if (std::abs(z_bru) == 0.0)
                    throw NumericError("coherent_config: zero reflected-path component");
                out.config.phases[static_cast<std::size_t>(n)] = wrap_phase(ref - std::arg(z_bru));
            }
            return out;
        }
    }

    CoherentConfig coherent_config(const ChannelSet &channels, const Precoder &w)
    {
        return coherent_from(channels.h_rb, channels.h_ru, channels.h_d, w);
    }

    RisConfig optimal_config(const ChannelModel &model, const Vec3 &u)
    {
        const auto ue = model.ue_channels(u);
        return coherent_from(model.h_rb(), ue.h_ru, ue.h_d, mrt_precoder(ue.h_d)).config;
    }

    RisConfig apply_phase_noise(const RisConfig &config, double sigma_theta, Rng &rng)
    {
        if (!(sigma_theta >= 0.0))
            throw InvalidArgument("apply_phase_noise: sigma must be >= 0");
        if (config.quantized)
            throw InvalidArgument("apply_phase_noise: noise is applied before quantization");
        RisConfig out = config;
        if (sigma_theta == 0.0)
            return out;
        for (double &p : out.phases)
            p = wrap_phase(p + sigma_theta * rng.normal());
        return out;
    }

    RisConfig apply_phase_noise(const RisConfig &config, double sigma_theta, std::uint64_t seed)
    {
        Rng rng(seed);
        return apply_phase_noise(config, sigma_theta, rng);
    }

    namespace
    {
        void check_bits(int q_bits)
        {
            if (q_bits < 1 || q_bits > 16)
                throw InvalidArgument("quantization: q_bits must be in [1, 16]");
        }

        std::size_t bin_index(double x, int q_bits)
        {
            const double delta = kTwoPi / static_cast<double>(1u << q_bits);
            const auto levels = static_cast<long long>(1u << q_bits);
            long long m = static_cast<long long>(std::floor(x / delta + 0.5)) % levels;
            if (m < 0)
                m += levels;
            return static_cast<std::size_t>(m);
        }

        // Standard normal mass on [a, b], computed from whichever tail keeps precision.
        double normal_mass(double a, double b)
        {
            constexpr double inv_sqrt2 = 0.70710678118654752440;
            if (a >= 0.0)
                return 0.5 * (std::erfc(a * inv_sqrt2) - std::erfc(b * inv_sqrt2));
            if (b <= 0.0)
                return 0.5 * (std::erfc(-b * inv_sqrt2) - std::erfc(-a * inv_sqrt2));
            return 1.0 - 0.5 * std::erfc(-a * inv_sqrt2) - 0.5 * std::erfc(b * inv_sqrt2);
        }

        double normal_density(double z)
        {
            constexpr double inv_sqrt_2pi = 0.39894228040143267794;
            return inv_sqrt_2pi * std::exp(-0.5 * z * z);
        }

        // Lattice shifts so that the mass beyond them is below 1e-15.
        int lattice_extent(double sigma) { return static_cast<int>(std::ceil(8.0 * sigma / kTwoPi)) + 1; }
    }

    double quantize_phase(double x, int q_bits)
    {
        check_bits(q_bits);
        const double delta = kTwoPi / static_cast<double>(1u << q_bits);
        return delta * static_cast<double>(bin_index(x, q_bits));
    }

    RisConfig quantize_config(const RisConfig &config, int q_bits)
    {
        check_bits(q_bits);
        RisConfig out;
        out.quantized = true;
        out.q_bits = q_bits;
        out.phases.reserve(config.phases.size());
        for (double p : config.phases)
            out.phases.push_back(quantize_phase(p, q_bits));
        return out;
    }

    ElementPmf quantized_element_pmf(double theta_star, double sigma_theta, int q_bits)
    {
        check_bits(q_bits);
        if (!(sigma_theta >= 0.0))
            throw InvalidArgument("quantized_element_pmf: sigma must be >= 0");
        const std::size_t levels = 1u << q_bits;
        const double delta = kTwoPi / static_cast<double>(levels);
        ElementPmf pmf;
        pmf.probs.assign(levels, 0.0);
        if (sigma_theta == 0.0)
        {
            pmf.probs[bin_index(theta_star, q_bits)] = 1.0;
            return pmf;
        }
        const double mu = wrap_phase(theta_star);
        const int k_max = lattice_extent(sigma_theta);
        for (std::size_t m = 0; m < levels; ++m)
        {
            const double lo = delta * (static_cast<double>(m) - 0.5);
            const double hi = delta * (static_cast<double>(m) + 0.5);
            double p = 0.0;
            for (int k = -k_max; k <= k_max; ++k)
                p += normal_mass((lo + kTwoPi * k - mu) / sigma_theta, (hi + kTwoPi * k - mu) / sigma_theta);
            pmf.probs[m] = p;
        }
        return pmf;
    }

    std::vector<double> quantized_element_pmf_derivative(double theta_star, double sigma_theta, int q_bits)
    {
        check_bits(q_bits);
        if (!(sigma_theta > 0.0))
            throw InvalidArgument("quantized_element_pmf_derivative: sigma must be > 0");
        const std::size_t levels = 1u << q_bits;
        const double delta = kTwoPi / static_cast<double>(levels);
        const double mu = wrap_phase(theta_star);
        const int k_max = lattice_extent(sigma_theta);
        std::vector<double> d(levels, 0.0);
        for (std::size_t m = 0; m < levels; ++m)
        {
            const double lo = delta * (static_cast<double>(m) - 0.5);
            const double hi = delta * (static_cast<double>(m) + 0.5);
            double s = 0.0;
            for (int k = -k_max; k <= k_max; ++k)
                s += normal_density((hi + kTwoPi * k - mu) / sigma_theta) - normal_density((lo + kTwoPi * k - mu) / sigma_theta);
            d[m] = -s / sigma_theta;
        }
        return d;
    }

    double achievable_rate(const ChannelSet &channels, const Precoder &w, const RisConfig &config,
                           double tx_power, double noise_power)
    {
        if (static_cast<std::size_t>(channels.h_ru.size()) != config.size() || channels.h_rb.rows() != channels.h_ru.size() ||
            channels.h_rb.cols() != w.w.size() || channels.h_d.size() != w.w.size())
            throw InvalidArgument("achievable_rate: dimensions do not match");
        std::complex<double> s = w.w.dot(channels.h_d);
        if (channels.h_ru.size() > 0)
        {
            const CVector bs_side = channels.h_rb * w.w;
            for (Eigen::Index n = 0; n < channels.h_ru.size(); ++n)
                s += std::conj(bs_side[n]) * std::polar(1.0, config.phases[static_cast<std::size_t>(n)]) * channels.h_ru[n];
        }
        return std::log2(1.0 + tx_power / noise_power * std::norm(s));
    }

    std::size_t grid_search_index(const RisConfig &observed, const ChannelModel &model, std::span<const Vec3> candidates)
    {
        if (candidates.empty())
            throw InvalidArgument("grid_search_estimator: empty candidate grid");
        std::size_t best = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < candidates.size(); ++i)
        {
            RisConfig guess = optimal_config(model, candidates[i]);
            if (observed.quantized)
                guess = quantize_config(guess, observed.q_bits);
            if (guess.size() != observed.size())
                throw InvalidArgument("grid_search_estimator: configuration length mismatch");
            double cost = 0.0;
            for (std::size_t n = 0; n < guess.size(); ++n)
            {
                const double d = angdiff(guess.phases[n], observed.phases[n]);
                cost += d * d;
            }
            if (cost < best_cost)
            {
                best_cost = cost;
                best = i;
            }
        }
        return best;
    }

    Vec3 grid_search_estimator(const RisConfig &observed, const Scenario &scenario, std::span<const Vec3> candidates)
    {
        const ChannelModel model(scenario);
        return candidates[grid_search_index(observed, model, candidates)];
    }
}
