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

#ifndef RISLOC_PHASE_STATS_HPP
#define RISLOC_PHASE_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace risloc::phase_stats
{
    // Phase of h = u + jv with u ~ N(sqrt(gamma) cos mu, 1/2), v ~ N(sqrt(gamma) sin mu, 1/2).
    struct PhaseDistParams
    {
        double mu_theta = 0.0; // radians, (-pi, pi]
        double gamma = 0.0;    // SNR mu_r^2 / sigma^2
    };

    double erf(double x);

    // Exact marginal density of the phase:
    // f(t) = e^{-g}/(2 pi) + sqrt(g)/(2 sqrt(pi)) cos(mu - t) e^{-g sin^2(mu - t)} [1 + erf(sqrt(g) cos(mu - t))]
    double marginal_theta_pdf(double theta, const PhaseDistParams &params);

    // High-SNR Normal(mu, 1/(2 gamma)) approximation. Throws InvalidArgument for gamma <= 0.
    double gaussian_approx_pdf(double theta, const PhaseDistParams &params);

    // r e^{-r^2/2}, zero for r < 0.
    double rayleigh_pdf(double r);
    double rayleigh_cdf(double r);

    // Angles (atan2, in (-pi, pi]) of n noisy channel samples.
    std::vector<double> sample_phase(const PhaseDistParams &params, std::size_t n, std::uint64_t seed);

    // Magnitudes of n samples with independent N(0, 1) real and imaginary parts.
    std::vector<double> sample_rayleigh(std::size_t n, std::uint64_t seed);

    // sup_x |F_n(x) - cdf(x)| evaluated on both sides of every sorted sample.
    double ks_distance(std::vector<double> samples, const std::function<double(double)> &cdf);

    // CDF of marginal_theta_pdf on (-pi, pi], tabulated with composite Simpson on `intervals` panels
    // and interpolated with the local density.
    class MarginalThetaCdf
    {
    public:
        explicit MarginalThetaCdf(PhaseDistParams params, std::size_t intervals = 1 << 14);
        double operator()(double theta) const;

    private:
        PhaseDistParams params_;
        double step_;
        std::vector<double> cumulative_;
    };

    struct PhaseHistogramRow
    {
        double theta;
        double exact_pdf;
        double approx_pdf;
        double empirical_pdf;
    };

    // Histogram of sampled phases on `bins` equal bins of (-pi, pi], next to the exact and approximate
    // densities at the bin centers. approx_pdf is NaN for gamma == 0.
    std::vector<PhaseHistogramRow> phase_histogram(const PhaseDistParams &params, std::size_t samples, std::size_t bins,
                                                   std::uint64_t seed);
}

#endif
