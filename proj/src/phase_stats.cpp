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

#include "risloc/phase_stats.hpp"
#include "risloc/error.hpp"
#include "risloc/geometry.hpp"
#include "risloc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace risloc::phase_stats
{
    double erf(double x) { return std::erf(x); }

    double marginal_theta_pdf(double theta, const PhaseDistParams &params)
    {
        const double g = params.gamma;
        if (!(g >= 0.0))
            throw InvalidArgument("marginal_theta_pdf: gamma must be >= 0");
        const double c = std::cos(params.mu_theta - theta);
        const double s = std::sin(params.mu_theta - theta);
        const double sg = std::sqrt(g);
        return std::exp(-g) / kTwoPi +
               sg / (2.0 * std::sqrt(kPi)) * c * std::exp(-g * s * s) * std::erfc(-sg * c);
    }

    double gaussian_approx_pdf(double theta, const PhaseDistParams &params)
    {
        const double g = params.gamma;
        if (!(g > 0.0))
            throw InvalidArgument("gaussian_approx_pdf: gamma must be > 0");
        const double d = params.mu_theta - theta;
        return std::sqrt(g / kPi) * std::exp(-g * d * d);
    }

    double rayleigh_pdf(double r) { return r < 0.0 ? 0.0 : r * std::exp(-0.5 * r * r); }

    double rayleigh_cdf(double r) { return r <= 0.0 ? 0.0 : -std::expm1(-0.5 * r * r); }

    std::vector<double> sample_phase(const PhaseDistParams &params, std::size_t n, std::uint64_t seed)
    {
        if (n == 0)
            throw InvalidArgument("sample_phase: n must be >= 1");
        Rng rng(seed);
        const double mu_u = std::sqrt(params.gamma) * std::cos(params.mu_theta);
        const double mu_v = std::sqrt(params.gamma) * std::sin(params.mu_theta);
        const double sd = std::sqrt(0.5);
        std::vector<double> out(n);
        for (double &t : out)
        {
            const double u = mu_u + sd * rng.normal();
            const double v = mu_v + sd * rng.normal();
            t = std::atan2(v, u);
        }
        return out;
    }

    std::vector<double> sample_rayleigh(std::size_t n, std::uint64_t seed)
    {
        Rng rng(seed);
        std::vector<double> out(n);
        for (double &r : out)
        {
            const double x = rng.normal();
            const double y = rng.normal();
            r = std::hypot(x, y);
        }
        return out;
    }

    double ks_distance(std::vector<double> samples, const std::function<double(double)> &cdf)
    {
        if (samples.empty())
            throw InvalidArgument("ks_distance: no samples");
        std::sort(samples.begin(), samples.end());
        const double n = static_cast<double>(samples.size());
        double d = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            const double f = cdf(samples[i]);
            d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(f - static_cast<double>(i) / n)});
        }
        return d;
    }

    MarginalThetaCdf::MarginalThetaCdf(PhaseDistParams params, std::size_t intervals)
        : params_(params), step_(kTwoPi / static_cast<double>(intervals)), cumulative_(intervals + 1, 0.0)
    {
        for (std::size_t i = 0; i < intervals; ++i)
        {
            const double a = -kPi + static_cast<double>(i) * step_;
            const double b = a + step_;
            const double panel = step_ / 6.0 *
                                 (marginal_theta_pdf(a, params_) + 4.0 * marginal_theta_pdf(0.5 * (a + b), params_) +
                                  marginal_theta_pdf(b, params_));
            cumulative_[i + 1] = cumulative_[i] + panel;
        }
    }

    double MarginalThetaCdf::operator()(double theta) const
    {
        if (theta <= -kPi)
            return 0.0;
        if (theta >= kPi)
            return 1.0;
        const double offset = theta + kPi;
        const auto i = std::min(static_cast<std::size_t>(offset / step_), cumulative_.size() - 2);
        const double a = -kPi + static_cast<double>(i) * step_;
        const double partial = (theta - a) / 6.0 *
                               (marginal_theta_pdf(a, params_) + 4.0 * marginal_theta_pdf(0.5 * (a + theta), params_) +
                                marginal_theta_pdf(theta, params_));
        return std::clamp(cumulative_[i] + partial, 0.0, 1.0);
    }

    std::vector<PhaseHistogramRow> phase_histogram(const PhaseDistParams &params, std::size_t samples, std::size_t bins,
                                                   std::uint64_t seed)
    {
        if (bins == 0)
            throw InvalidArgument("phase_histogram: bins must be >= 1");
        const std::vector<double> draws = sample_phase(params, samples, seed);
        std::vector<std::size_t> counts(bins, 0);
        const double width = kTwoPi / static_cast<double>(bins);
        for (double t : draws)
        {
            auto b = static_cast<std::size_t>((t + kPi) / width);
            counts[std::min(b, bins - 1)]++;
        }
        std::vector<PhaseHistogramRow> rows(bins);
        for (std::size_t b = 0; b < bins; ++b)
        {
            const double center = -kPi + (static_cast<double>(b) + 0.5) * width;
            rows[b].theta = center;
            rows[b].exact_pdf = marginal_theta_pdf(center, params);
            rows[b].approx_pdf = params.gamma > 0.0 ? gaussian_approx_pdf(center, params)
                                                    : std::numeric_limits<double>::quiet_NaN();
            rows[b].empirical_pdf = static_cast<double>(counts[b]) / (static_cast<double>(draws.size()) * width);
        }
        return rows;
    }
}
