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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero if any fails.
// Usage: risloc_acceptance [AC-n ...]   (no arguments runs all)

#include "risloc/accuracy.hpp"
#include "risloc/dataset.hpp"
#include "risloc/evaluate.hpp"
#include "risloc/fisher.hpp"
#include "risloc/mlp.hpp"
#include "risloc/phase_stats.hpp"
#include "risloc/ris_control.hpp"
#include "risloc/rng.hpp"
#include "risloc/selection.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

using namespace risloc;

namespace
{
    struct Outcome
    {
        bool pass;
        std::string detail;
    };

    double seconds_since(std::chrono::steady_clock::time_point t0)
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    std::string fmt(const char *f, auto... v)
    {
        char buf[512];
        std::snprintf(buf, sizeof buf, f, v...);
        return buf;
    }

    // Shared large-scenario runs.
    struct LargeRun
    {
        Dataset train, test;
        TrainResult fit;
        EvalReport report;
        double seconds = 0.0;
    };

    LargeRun run_large(const Scenario &s, std::uint64_t seed)
    {
        const auto t0 = std::chrono::steady_clock::now();
        LargeRun r;
        DatasetOptions o;
        o.grid_step = s.grid_step;
        o.sigma_theta = s.phase_noise_sigma;
        o.seed = seed;
        const Dataset d = generate_dataset(s, s.area, o);
        const Split sp = split_indices(d.size(), 0.75, d.split_seed);
        r.train = subset(d, sp.train);
        r.test = subset(d, sp.test);
        TrainParams p;
        p.seed = seed;
        r.fit = train_localizer(r.train, {static_cast<int>(d.feature_count()), 100, 100, 2}, p);
        r.report = evaluate_localization(r.fit.model, r.test, s.ris.center);
        r.seconds = seconds_since(t0);
        return r;
    }

    std::optional<LargeRun> g_large;
    const LargeRun &large()
    {
        if (!g_large)
            g_large = run_large(outdoor_scenario(), 11);
        return *g_large;
    }

    Outcome ac1()
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::ostringstream d;
        bool ok = true;
        for (double g : {1.0, 10.0})
        {
            const phase_stats::PhaseDistParams p{0.7, g};
            const phase_stats::MarginalThetaCdf cdf(p);
            const double ks = phase_stats::ks_distance(phase_stats::sample_phase(p, 100000, 101 + static_cast<int>(g)),
                                                       [&](double t)
                                                       { return cdf(t); });
            ok = ok && ks < 0.01;
            d << fmt("KS(gamma=%g)=%.4f ", g, ks);
        }
        const double secs = seconds_since(t0);
        ok = ok && secs < 10.0;
        const phase_stats::PhaseDistParams p{0.0, 100.0};
        double peak = 0.0, dev = 0.0;
        for (int i = 0; i <= 20000; ++i)
        {
            const double t = -kPi + kTwoPi * i / 20000.0;
            const double e = phase_stats::marginal_theta_pdf(t, p);
            peak = std::max(peak, e);
            dev = std::max(dev, std::abs(phase_stats::gaussian_approx_pdf(t, p) - e));
        }
        ok = ok && dev <= 0.01 * peak;
        d << fmt("gamma=100 max dev %.3g%% of peak, %.2f s", 100.0 * dev / peak, secs);
        return {ok, d.str()};
    }

    Outcome ac2()
    {
        const double ks = phase_stats::ks_distance(phase_stats::sample_rayleigh(100000, 202), phase_stats::rayleigh_cdf);
        return {ks < 0.01, fmt("KS=%.4f", ks)};
    }

    Scenario rotate_scenario(const Scenario &s, double angle)
    {
        const Eigen::Matrix3d r = Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix();
        Scenario out = s;
        for (Vec3 &p : out.ris.element_positions)
            p = r * p;
        out.ris.center = r * out.ris.center;
        out.bs_position = r * out.bs_position;
        out.bs_axis = r * out.bs_axis;
        return out;
    }

    Outcome ac3()
    {
        Rng rng(303);
        double worst_sum = 0.0;
        for (int q = 1; q <= 3; ++q)
            for (int i = 0; i < 1000; ++i)
            {
                const double theta = kTwoPi * rng.uniform();
                const double sigma = 1e-3 + 4.0 * rng.uniform();
                const ElementPmf pmf = quantized_element_pmf(theta, sigma, q);
                double s = 0.0;
                for (double v : pmf.probs)
                    s += v;
                worst_sum = std::max(worst_sum, std::abs(s - 1.0));
            }

        Scenario s = indoor_scenario();
        const ChannelModel model(s);
        const Scenario sr = rotate_scenario(s, kPi / 6.0);
        const ChannelModel rotated(sr);
        const Eigen::Matrix3d rot = Eigen::AngleAxisd(kPi / 6.0, Vec3::UnitZ()).toRotationMatrix();
        FiOptions fine;
        fine.fd_step = 1e-3;
        double worst_equiv = 0.0, min_eig = 0.0, worst_rot = 0.0;
        for (int i = 0; i < 100; ++i)
        {
            const Vec3 u(s.area.x_min + (s.area.x_max - s.area.x_min) * rng.uniform(),
                         s.area.y_min + (s.area.y_max - s.area.y_min) * rng.uniform(), s.area.ue_height);
            const PhaseSensitivity ps = phase_sensitivity(model, u);
            const PhaseSensitivity fs = phase_sensitivity(model, u, fine);
            const PhaseSensitivity fr = phase_sensitivity(rotated, rot * u, fine);
            for (std::size_t n = 0; n < s.ris.size(); ++n)
            {
                const Eigen::VectorXd g = ps.gradient.row(static_cast<Eigen::Index>(n)).transpose();
                const ElementFi b = element_fi_binary(ps.theta_star[n], g, s.phase_noise_sigma);
                const ElementFi a = element_fi_general(ps.theta_star[n], g, s.phase_noise_sigma, 1);
                const double scale = std::max(a.J.norm(), 1e-300);
                worst_equiv = std::max(worst_equiv, (a.J - b.J).norm() / scale);
                const Eigen::SelfAdjointEigenSolver<FiMatrix> eig(a.J, Eigen::EigenvaluesOnly);
                min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());

                const double t0 = element_fi_general(fs.theta_star[n], fs.gradient.row(static_cast<Eigen::Index>(n)).transpose(),
                                                     s.phase_noise_sigma, 1)
                                      .J.trace();
                const double t1 = element_fi_general(fr.theta_star[n], fr.gradient.row(static_cast<Eigen::Index>(n)).transpose(),
                                                     s.phase_noise_sigma, 1)
                                      .J.trace();
                if (t0 > 1e-12)
                    worst_rot = std::max(worst_rot, std::abs(t1 - t0) / t0);
            }
        }
        const bool ok = worst_sum < 1e-9 && worst_equiv < 1e-8 && min_eig >= -1e-10 && worst_rot < 1e-6;
        return {ok, fmt("pmf sum err %.2e, binary vs general %.2e, min eig %.2e, rotation %.2e", worst_sum, worst_equiv,
                        min_eig, worst_rot)};
    }

    Outcome ac4()
    {
        const auto t0 = std::chrono::steady_clock::now();
        const Scenario s = indoor_scenario();
        const ChannelModel model(s);
        const std::vector<Vec3> grid = grid_points(s.area, s.grid_step);
        const FiMapResult map = fi_map(model, grid);
        std::size_t good = 0;
        for (const FiPoint &p : map.points)
            good += p.crb < 1.0 ? 1 : 0;
        const double frac = static_cast<double>(good) / static_cast<double>(grid.size());
        const double secs = seconds_since(t0);
        return {frac >= 0.5 && secs < 300.0, fmt("%.1f%% of %zu points below 1 m, %.1f s", 100.0 * frac, grid.size(), secs)};
    }

    Outcome ac5()
    {
        const auto t0 = std::chrono::steady_clock::now();
        const Scenario s = indoor_scenario();
        DatasetOptions o;
        o.grid_step = 0.1;
        o.sigma_theta = s.phase_noise_sigma;
        o.seed = 5;
        const Dataset d = generate_dataset(s, s.area, o);
        const Split sp = split_indices(d.size(), 0.75, d.split_seed);
        TrainParams p;
        p.seed = 5;
        const TrainResult fit = train_localizer(subset(d, sp.train), {81, 4, 4, 2}, p);
        const EvalReport rep = evaluate_localization(fit.model, subset(d, sp.test), s.ris.center);
        const double secs = seconds_since(t0);
        return {rep.mean_error <= 1.4 && secs < 600.0,
                fmt("mean test error %.3f m (%zu test rows, %d epochs), %.1f s", rep.mean_error, sp.test.size(), fit.epochs, secs)};
    }

    Outcome ac6()
    {
        const LargeRun &r = large();
        return {r.report.mean_error <= 10.0 && r.seconds <= 3600.0,
                fmt("mean test error %.3f m, %zu parameters, %d epochs, %.1f s", r.report.mean_error,
                    r.fit.model.parameter_count(), r.fit.epochs, r.seconds)};
    }

    Outcome ac7()
    {
        const Scenario s = outdoor_scenario();
        const ChannelModel model(s);
        const std::vector<Vec3> grid = grid_points(s.area, s.grid_step);
        const std::vector<double> info = average_element_information(model, grid);
        const auto desc = fi_rank_features(info, RankOrder::descending);
        const auto asc = fi_rank_features(info, RankOrder::ascending);
        const std::size_t k[] = {81};
        int wins = 0;
        std::ostringstream d;
        for (int seed = 0; seed < 10; ++seed)
        {
            DatasetOptions o;
            o.grid_step = s.grid_step;
            o.sigma_theta = s.phase_noise_sigma;
            o.seed = 700 + static_cast<std::uint64_t>(seed);
            const Dataset data = generate_dataset(s, s.area, o);
            const Split sp = split_indices(data.size(), 0.75, data.split_seed);
            const Dataset tr = subset(data, sp.train), te = subset(data, sp.test);
            TrainParams p;
            p.seed = o.seed;
            const double e_desc = select_and_retrain(tr, te, desc, k, {4, 4}, p, s.ris.center)[0].mean_error;
            const double e_asc = select_and_retrain(tr, te, asc, k, {4, 4}, p, s.ris.center)[0].mean_error;
            wins += e_desc < e_asc ? 1 : 0;
            d << fmt("%.1f/%.1f ", e_desc, e_asc);
        }
        const std::size_t params = parameter_count({81, 4, 4, 2});
        return {wins >= 9 && params == 358, fmt("descending wins %d/10 [desc/asc m: %s], params %zu", wins, d.str().c_str(), params)};
    }

    Outcome ac8()
    {
        const Scenario s = outdoor_scenario();
        const ChannelModel model(s);
        Rng rng(808);
        int dominated = 0, cases = 0;
        double residual = 0.0;
        for (int i = 0; i < 20; ++i)
        {
            const Vec3 u(s.area.x_min + (s.area.x_max - s.area.x_min) * rng.uniform(),
                         s.area.y_min + (s.area.y_max - s.area.y_min) * rng.uniform(), s.area.ue_height);
            const ChannelSet ch = model.channels(u);
            const Precoder w = mrt_precoder(ch.h_d);
            const CoherentConfig cc = coherent_config(ch, w);
            const double best = achievable_rate(ch, w, cc.config, s.tx_power, s.noise_power);
            const CVector bs_side = ch.h_rb * w.w;
            const double ref = std::arg(w.w.dot(ch.h_d));
            for (Eigen::Index n = 0; n < ch.h_ru.size(); ++n)
            {
                const std::complex<double> term =
                    std::conj(bs_side[n]) * std::polar(1.0, cc.config.phases[static_cast<std::size_t>(n)]) * ch.h_ru[n];
                residual = std::max(residual, angdiff(std::arg(term), ref));
            }
            for (int j = 0; j < 100; ++j)
            {
                RisConfig r;
                r.phases.resize(s.ris.size());
                for (double &p : r.phases)
                    p = kTwoPi * rng.uniform();
                ++cases;
                dominated += best >= achievable_rate(ch, w, r, s.tx_power, s.noise_power) ? 1 : 0;
            }
        }
        return {dominated == cases && residual < 1e-10, fmt("coherent >= random in %d/%d cases, alignment residual %.2e rad",
                                                            dominated, cases, residual)};
    }

    Outcome ac9()
    {
        Rng rng(909);
        double worst = 0.0;
        bool ops_ok = true;
        for (int t = 0; t < 20; ++t)
        {
            std::vector<int> layers{1 + static_cast<int>(rng.below(8))};
            const int hidden = static_cast<int>(rng.below(3));
            for (int h = 0; h < hidden; ++h)
                layers.push_back(1 + static_cast<int>(rng.below(7)));
            layers.push_back(1 + static_cast<int>(rng.below(3)));
            MlpModel m = init_mlp(layers, 9000 + static_cast<std::uint64_t>(t));
            for (auto &b : m.biases)
                for (Eigen::Index i = 0; i < b.size(); ++i)
                    b[i] = rng.uniform() - 0.5;
            const int batch = 1 + static_cast<int>(rng.below(16));
            Eigen::MatrixXd x(layers.front(), batch), y(layers.back(), batch);
            for (Eigen::Index i = 0; i < x.size(); ++i)
                x.data()[i] = 2.0 * rng.uniform() - 1.0;
            for (Eigen::Index i = 0; i < y.size(); ++i)
                y.data()[i] = 2.0 * rng.uniform() - 1.0;
            MlpGradient g;
            mse_loss(m, x, y, &g);
            const double h = 1e-5;
            auto check = [&](double &param, double analytic)
            {
                const double keep = param;
                param = keep + h;
                const double lp = mse_loss(m, x, y);
                param = keep - h;
                const double lm = mse_loss(m, x, y);
                param = keep;
                const double fd = (lp - lm) / (2.0 * h);
                const double denom = std::max({std::abs(fd), std::abs(analytic), 1e-6});
                worst = std::max(worst, std::abs(fd - analytic) / denom);
            };
            for (std::size_t k = 0; k < m.layer_count(); ++k)
            {
                for (Eigen::Index i = 0; i < m.weights[k].size(); ++i)
                    check(m.weights[k].data()[i], g.weights[k].data()[i]);
                for (Eigen::Index i = 0; i < m.biases[k].size(); ++i)
                    check(m.biases[k].data()[i], g.biases[k].data()[i]);
            }
            OpCount counted;
            instrumented_forward(m, x.col(0), counted);
            ops_ok = ops_ok && counted == op_count(layers);
        }
        return {worst < 1e-5 && ops_ok, fmt("max relative gradient error %.2e, op counts %s", worst, ops_ok ? "match" : "differ")};
    }

    Outcome ac10()
    {
        const EvalReport &rep = large().report;
        const double lo = rep.polar.front().distance, hi = rep.polar.back().distance;
        const double mid = 0.5 * (lo + hi);
        std::vector<double> dist, rad, az;
        for (const PolarSample &p : rep.polar)
            if (p.distance >= mid)
            {
                dist.push_back(p.distance);
                rad.push_back(p.radial_median);
                az.push_back(p.azimuth_median);
            }
        const double s_rad = least_squares_slope(dist, rad);
        const double s_az = least_squares_slope(dist, az);
        return {s_rad > 0.0 && s_az < 0.0,
                fmt("outer half (%zu points, d >= %.1f m): radial median slope %.4g m/m, azimuth median slope %.4g rad/m",
                    dist.size(), mid, s_rad, s_az)};
    }

    Outcome ac11()
    {
        const Scenario s = indoor_scenario();
        const ChannelModel model(s);
        DatasetOptions o;
        o.grid_step = s.grid_step;
        o.sigma_theta = s.phase_noise_sigma;
        o.seed = 1111;
        const Dataset d = generate_dataset(s, s.area, o);
        const Split sp = split_indices(d.size(), 0.43, d.split_seed);
        const Dataset train = subset(d, sp.train);
        const Dataset rest = subset(d, sp.test);
        const Split sp2 = split_indices(rest.size(), 0.75, substream_seed(o.seed, "predictor"));
        const Dataset fit_set = subset(rest, sp2.train);
        const Dataset held = subset(rest, sp2.test);

        TrainParams p;
        p.seed = o.seed;
        const MlpModel loc = train_localizer(train, {81, 4, 4, 2}, p).model;
        const EvalReport fit_rep = evaluate_localization(loc, fit_set, s.ris.center);
        const EvalReport held_rep = evaluate_localization(loc, held, s.ris.center);

        // Gradient paths: exact pipeline and surrogate network, calibrated on fit_set.
        auto raw_analytic = [&](const EvalReport &rep)
        {
            std::vector<double> v;
            for (const Vec3 &u : rep.estimate)
                v.push_back(gradient_accuracy_estimate(model, u, 1.0));
            return v;
        };
        const std::vector<double> a_fit = raw_analytic(fit_rep);
        std::vector<double> a_held = raw_analytic(held_rep);
        const double c_a = fit_calibration(a_fit, fit_rep.errors);
        for (double &v : a_held)
            v *= c_a;

        const MlpModel surrogate = train_config_regressor(train, {64, 64}, p).model;
        auto raw_surrogate = [&](const EvalReport &rep)
        {
            std::vector<double> v;
            for (const Vec3 &u : rep.estimate)
                v.push_back(gradient_accuracy_estimate(surrogate, u, 1.0));
            return v;
        };
        const std::vector<double> s_fit = raw_surrogate(fit_rep);
        std::vector<double> s_held = raw_surrogate(held_rep);
        const double c_s = fit_calibration(s_fit, fit_rep.errors);
        for (double &v : s_held)
            v *= c_s;

        const Eigen::MatrixXd fx = feature_matrix(fit_set);
        const MlpModel predictor = train_error_predictor(fx, fit_rep.errors, {16, 16}, p).model;
        const Eigen::MatrixXd hy = mlp_forward_batch(predictor, feature_matrix(held).transpose());
        std::vector<double> r_held(held.size());
        for (std::size_t i = 0; i < held.size(); ++i)
            r_held[i] = hy(0, static_cast<Eigen::Index>(i));

        const double p_a = pearson(a_held, held_rep.errors);
        const double p_s = pearson(s_held, held_rep.errors);
        const double p_r = pearson(r_held, held_rep.errors);
        const double b_a = relative_bias(a_held, held_rep.errors);
        const bool ok = p_a > 0.5 && p_r > 0.5 && std::abs(b_a) < 0.05;
        return {ok, fmt("Pearson gradient (exact) %.3f [bias %+.1f%%], gradient (surrogate) %.3f, regressor %.3f; "
                        "localizer mean error %.3f m on %zu held-out rows",
                        p_a, 100.0 * b_a, p_s, p_r, held_rep.mean_error, held.size())};
    }

    Outcome ac12()
    {
        const LargeRun r = run_large(nlos_scenario(), 12);
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < r.test.size(); ++i)
            if (r.test.rows[i].visibility == Visibility::reflected_nlos)
            {
                sum += r.report.errors[i];
                ++n;
            }
        if (n == 0)
            return {false, "no reflected test points"};
        const double nlos = sum / static_cast<double>(n);
        return {nlos <= 2.0 * r.report.mean_error,
                fmt("reflected mean %.3f m over %zu points, all-points mean %.3f m, ratio %.2f", nlos, n,
                    r.report.mean_error, nlos / r.report.mean_error)};
    }
}

int main(int argc, char **argv)
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
        {"AC-1", ac1}, {"AC-2", ac2}, {"AC-3", ac3}, {"AC-4", ac4}, {"AC-5", ac5}, {"AC-6", ac6},
        {"AC-7", ac7}, {"AC-8", ac8}, {"AC-9", ac9}, {"AC-10", ac10}, {"AC-11", ac11}, {"AC-12", ac12}};
    std::set<std::string> wanted(argv + 1, argv + argc);
    int failures = 0;
    for (const auto &[name, fn] : checks)
    {
        if (!wanted.empty() && !wanted.count(name))
            continue;
        Outcome o{false, ""};
        try
        {
            o = fn();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %s: %s\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
