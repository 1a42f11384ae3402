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
#include "risloc/aoa.hpp"
#include "risloc/dataset.hpp"
#include "risloc/error.hpp"
#include "risloc/evaluate.hpp"
#include "risloc/fisher.hpp"
#include "risloc/mlp.hpp"
#include "risloc/phase_stats.hpp"
#include "risloc/rng.hpp"
#include "risloc/scenario_io.hpp"
#include "risloc/selection.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace risloc;
using nlohmann::json;

namespace
{
    constexpr int kExitParse = 2;
    constexpr int kExitNumeric = 3;
    constexpr int kExitTraining = 4;

    struct Common
    {
        std::string scenario = "builtin:outdoor";
        std::string out;
        std::uint64_t seed = 1;
    };

    struct LoadedScenario
    {
        Scenario scenario;
        std::string hash;
    };

    LoadedScenario load(const std::string &spec)
    {
        std::string text;
        if (spec == "builtin:outdoor")
            text = scenario_text(outdoor_scenario());
        else if (spec == "builtin:indoor")
            text = scenario_text(indoor_scenario());
        else if (spec == "builtin:nlos")
            text = scenario_text(nlos_scenario());
        else
        {
            std::ifstream in(spec, std::ios::binary);
            if (!in)
                throw ParseError("cannot open scenario file " + spec);
            std::ostringstream ss;
            ss << in.rdbuf();
            text = ss.str();
        }
        return {parse_scenario_text(text), fnv1a_hex(text)};
    }

    std::ofstream open_out(const std::string &path)
    {
        if (path.empty())
            throw InvalidArgument("--out is required");
        std::ofstream out(path);
        if (!out)
            throw InvalidArgument("cannot write " + path);
        out << std::setprecision(17);
        return out;
    }

    void require_positive(double v, const char *name)
    {
        if (!(v > 0.0) || !std::isfinite(v))
            throw InvalidArgument(std::string(name) + " must be positive");
    }

    // Written next to the primary output as <out>.manifest.json.
    class Manifest
    {
    public:
        explicit Manifest(std::string command) : start_(std::chrono::steady_clock::now())
        {
            j_["command"] = std::move(command);
            j_["parameters"] = json::object();
            j_["outputs"] = json::array();
        }

        json &param(const std::string &key) { return j_["parameters"][key]; }
        json &result(const std::string &key) { return j_["results"][key]; }
        void scenario(const LoadedScenario &s, const std::string &source)
        {
            j_["scenario"] = {{"source", source}, {"hash_fnv1a64", s.hash}};
        }
        void seed(const std::string &name, std::uint64_t v) { j_["seeds"][name] = v; }
        void output(const std::string &path) { j_["outputs"].push_back(path); }

        void write(const std::string &out)
        {
            j_["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
            std::ofstream f(out + ".manifest.json");
            f << j_.dump(2) << '\n';
        }

    private:
        json j_;
        std::chrono::steady_clock::time_point start_;
    };

    std::vector<int> parse_int_list(const std::string &text, const char *name)
    {
        std::vector<int> v;
        std::stringstream ss(text);
        std::string cell;
        while (std::getline(ss, cell, ','))
        {
            try
            {
                std::size_t used = 0;
                const int x = std::stoi(cell, &used);
                if (used != cell.size() || x < 1)
                    throw std::invalid_argument(cell);
                v.push_back(x);
            }
            catch (const std::exception &)
            {
                throw InvalidArgument(std::string(name) + ": bad entry '" + cell + "'");
            }
        }
        return v;
    }

    TrainParams train_params(int epochs, double lr, std::uint64_t seed)
    {
        if (epochs < 0)
            throw InvalidArgument("--epochs must be >= 0");
        require_positive(lr, "--lr");
        TrainParams p;
        p.max_epochs = epochs;
        p.lr = lr;
        p.seed = substream_seed(seed, "init");
        return p;
    }

    void write_fi_csv(std::ostream &out, const FiMapResult &map)
    {
        out << "x,y,visibility,tr_J,J_xx,J_yy,J_xy,crb_m,reliable\n";
        for (const FiPoint &p : map.points)
            out << p.u.x() << ',' << p.u.y() << ',' << to_string(p.visibility) << ',' << p.J.trace() << ',' << p.J(0, 0)
                << ',' << p.J(1, 1) << ',' << p.J(0, 1) << ',' << p.crb << ',' << (p.reliable ? 1 : 0) << '\n';
    }

    FiOptions fi_options(double fd_step)
    {
        require_positive(fd_step, "--fd-step");
        FiOptions o;
        o.fd_step = fd_step;
        return o;
    }

    struct Split2
    {
        Dataset train, test;
    };

    Split2 split_dataset(const Dataset &d, double train_fraction, std::uint64_t seed)
    {
        const Split sp = split_indices(d.size(), train_fraction, substream_seed(seed, "split"));
        return {subset(d, sp.train), subset(d, sp.test)};
    }

    Dataset make_dataset(const Scenario &s, double step, double sigma, int examples, std::uint64_t seed)
    {
        require_positive(step, "--step");
        if (!(sigma >= 0.0))
            throw InvalidArgument("--sigma-theta must be >= 0");
        if (examples < 1)
            throw InvalidArgument("--examples must be >= 1");
        DatasetOptions o;
        o.grid_step = step;
        o.sigma_theta = sigma;
        o.examples_per_point = examples;
        o.seed = seed;
        return generate_dataset(s, s.area, o);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"risloc: localization from RIS configurations"};
    app.require_subcommand(1);
    Common c;

    auto add_common = [&](CLI::App *sub, bool scenario)
    {
        if (scenario)
            sub->add_option("--scenario", c.scenario, "Scenario file, or builtin:outdoor | builtin:indoor | builtin:nlos")
                ->capture_default_str();
        sub->add_option("--out", c.out, "Output path; the run manifest goes to <out>.manifest.json")->required();
        sub->add_option("--seed", c.seed, "Root seed")->capture_default_str();
    };

    double step = 0.0, fd_step = 0.01, sigma = -1.0, lr = 1e-3, train_fraction = 0.75, sigma_min = 1.0;
    double gamma = 10.0, mu = 0.0;
    int epochs = 2000, examples = 1, q_bits = -1, bins = 64;
    std::size_t samples = 100000;
    std::string layers = "100,100", k_list = "441", sigma_list, data_path, model_path, order = "descending", preset = "outdoor";
    std::string ris_spec = "builtin:outdoor";

    auto add_scenario_overrides = [&](CLI::App *sub)
    {
        sub->add_option("--step", step, "Grid step in m (default: scenario grid_step)");
        sub->add_option("--sigma-theta", sigma, "Phase noise std in rad (default: scenario value)");
        sub->add_option("--q-bits", q_bits, "Quantization bits, 0 = continuous (default: scenario value)");
    };

    auto *scen = app.add_subcommand("scenario", "Write a built-in scenario as a scenario file");
    scen->add_option("--preset", preset, "outdoor | indoor | nlos")->capture_default_str();
    scen->add_option("--out", c.out, "Scenario file to write")->required();

    auto *fi = app.add_subcommand("fi-map", "Fisher information map. CSV: x,y,visibility,tr_J,J_xx,J_yy,J_xy,crb_m,reliable");
    add_common(fi, true);
    add_scenario_overrides(fi);
    fi->add_option("--fd-step", fd_step, "Finite-difference step in m")->capture_default_str();

    auto *crb = app.add_subcommand("crb-map", "CRB maps, one CSV per sigma: <out>.sigma<i>.csv with the fi-map columns; "
                                              "<out> holds sigma,area_metric");
    add_common(crb, true);
    crb->add_option("--step", step, "Grid step in m (default: scenario grid_step)");
    crb->add_option("--sigma-theta", sigma_list, "Comma-separated sigma list in rad (default: pi/18, pi/6, 2pi/3)");
    crb->add_option("--q-bits", q_bits, "Quantization bits (default: scenario value)");
    crb->add_option("--fd-step", fd_step, "Finite-difference step in m")->capture_default_str();
    crb->add_option("--sigma-min", sigma_min, "Area metric threshold in m")->capture_default_str();

    auto *fie = app.add_subcommand("fi-elements", "Average information per element. CSV: n,row,col,y,z,avg_info");
    add_common(fie, true);
    add_scenario_overrides(fie);
    fie->add_option("--fd-step", fd_step, "Finite-difference step in m")->capture_default_str();

    auto *ds = app.add_subcommand("dataset", "Noisy configuration dataset. CSV: ux,uy,f_1..f_N");
    add_common(ds, true);
    add_scenario_overrides(ds);
    ds->add_option("--examples", examples, "Noisy examples per grid point")->capture_default_str();

    auto *tr = app.add_subcommand("train", "Train the localizer on a dataset CSV. Writes the model file");
    add_common(tr, false);
    tr->add_option("--data", data_path, "Dataset CSV")->required();
    tr->add_option("--layers", layers, "Hidden layer sizes, comma-separated")->capture_default_str();
    tr->add_option("--epochs", epochs, "Maximum epochs (0 writes the initialized model)")->capture_default_str();
    tr->add_option("--lr", lr, "Adam learning rate")->capture_default_str();
    tr->add_option("--train-fraction", train_fraction, "Train share of the seeded split")->capture_default_str();

    auto *ev = app.add_subcommand("eval", "Evaluate a model on the test split. JSON report; <out>.csv: ux,uy,ex,ey,error");
    add_common(ev, false);
    ev->add_option("--data", data_path, "Dataset CSV")->required();
    ev->add_option("--model", model_path, "Model file")->required();
    ev->add_option("--train-fraction", train_fraction, "Train share of the seeded split used for training")->capture_default_str();
    ev->add_option("--ris", ris_spec, "Scenario whose RIS center anchors the polar errors")->capture_default_str();

    auto *red = app.add_subcommand("reduce", "FI-guided input reduction. CSV: k,order,mean_error_m,parameters,multiplications,additions,activations");
    add_common(red, true);
    add_scenario_overrides(red);
    red->add_option("--k-list", k_list, "Comma-separated input counts")->capture_default_str();
    red->add_option("--layers", layers, "Hidden layer sizes of the reduced nets (default 4,4)");
    red->add_option("--order", order, "descending | ascending | random | all")->capture_default_str();
    red->add_option("--epochs", epochs, "Maximum epochs")->capture_default_str();
    red->add_option("--lr", lr, "Adam learning rate")->capture_default_str();
    red->add_option("--fd-step", fd_step, "Finite-difference step in m")->capture_default_str();

    auto *pv = app.add_subcommand("phase-verify", "Phase distribution check. CSV: theta,exact_pdf,approx_pdf,empirical_pdf");
    add_common(pv, false);
    pv->add_option("--gamma", gamma, "Linear SNR")->capture_default_str();
    pv->add_option("--mu", mu, "Mean phase in rad")->capture_default_str();
    pv->add_option("--samples", samples, "Number of samples")->capture_default_str();
    pv->add_option("--bins", bins, "Histogram bins")->capture_default_str();

    auto *aoa = app.add_subcommand("aoa-baseline", "Two-RIS AoA baseline. CSV: x,y,est_x,est_y,hpbw_1,hpbw_2,radius_m,area_m2,error_m");
    add_common(aoa, true);
    aoa->add_option("--step", step, "Grid step in m (default: scenario grid_step)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    try
    {
        if (scen->parsed())
        {
            Scenario s;
            if (preset == "outdoor")
                s = outdoor_scenario();
            else if (preset == "indoor")
                s = indoor_scenario();
            else if (preset == "nlos")
                s = nlos_scenario();
            else
                throw InvalidArgument("--preset must be outdoor, indoor or nlos");
            auto out = open_out(c.out);
            write_scenario(out, s);
            return 0;
        }

        Manifest man(app.get_subcommands().front()->get_name());
        man.seed("root", c.seed);
        man.output(c.out);

        auto scenario_with_overrides = [&](bool use_sigma)
        {
            LoadedScenario ls = load(c.scenario);
            man.scenario(ls, c.scenario);
            if (step != 0.0)
            {
                require_positive(step, "--step");
                ls.scenario.grid_step = step;
            }
            if (use_sigma && sigma >= 0.0)
                ls.scenario.phase_noise_sigma = sigma;
            else if (use_sigma && sigma != -1.0)
                throw InvalidArgument("--sigma-theta must be >= 0");
            if (q_bits != -1)
            {
                if (q_bits < 0 || q_bits > 16)
                    throw InvalidArgument("--q-bits must be in [0, 16]");
                ls.scenario.quantization_bits = q_bits;
            }
            ls.scenario.validate();
            man.param("grid_step") = ls.scenario.grid_step;
            man.param("sigma_theta") = ls.scenario.phase_noise_sigma;
            man.param("q_bits") = ls.scenario.quantization_bits;
            return ls.scenario;
        };

        if (fi->parsed() || fie->parsed())
        {
            const Scenario s = scenario_with_overrides(true);
            const FiOptions opt = fi_options(fd_step);
            man.param("fd_step") = fd_step;
            if (s.quantization_bits >= 1 && !(s.phase_noise_sigma > 0.0))
                throw InvalidArgument("--sigma-theta must be > 0 for information maps");
            const ChannelModel model(s);
            const std::vector<Vec3> grid = grid_points(s.area, s.grid_step);
            auto out = open_out(c.out);
            if (fi->parsed())
                write_fi_csv(out, fi_map(model, grid, opt));
            else
            {
                const std::vector<double> info = average_element_information(model, grid, opt);
                out << "n,row,col,y,z,avg_info\n";
                for (std::size_t n = 0; n < info.size(); ++n)
                {
                    const Vec3 &p = s.ris.element_positions[n];
                    out << n << ',' << s.ris.row(n) << ',' << s.ris.col(n) << ',' << p.y() << ',' << p.z() << ',' << info[n] << '\n';
                }
            }
            man.result("points") = grid.size();
        }
        else if (crb->parsed())
        {
            Scenario s = scenario_with_overrides(false);
            const FiOptions opt = fi_options(fd_step);
            require_positive(sigma_min, "--sigma-min");
            std::vector<double> sigmas;
            if (crb->count("--sigma-theta") == 0)
                sigmas = {kPi / 18.0, kPi / 6.0, 2.0 * kPi / 3.0};
            else
            {
                std::stringstream ss(sigma_list);
                std::string cell;
                while (std::getline(ss, cell, ','))
                {
                    if (cell.empty())
                        continue;
                    double v = 0.0;
                    try
                    {
                        v = std::stod(cell);
                    }
                    catch (const std::exception &)
                    {
                        throw InvalidArgument("--sigma-theta: bad entry '" + cell + "'");
                    }
                    require_positive(v, "--sigma-theta entries");
                    sigmas.push_back(v);
                }
                if (sigmas.empty())
                    throw InvalidArgument("--sigma-theta list is empty");
            }
            man.param("sigma_list") = sigmas;
            man.param("sigma_min") = sigma_min;
            man.param("fd_step") = fd_step;
            const std::vector<Vec3> grid = grid_points(s.area, s.grid_step);
            auto summary = open_out(c.out);
            summary << "sigma,area_metric\n";
            for (std::size_t i = 0; i < sigmas.size(); ++i)
            {
                s.phase_noise_sigma = sigmas[i];
                const FiMapResult map = fi_map(ChannelModel(s), grid, opt);
                const std::string path = c.out + ".sigma" + std::to_string(i) + ".csv";
                auto out = open_out(path);
                write_fi_csv(out, map);
                man.output(path);
                const double metric = area_metric(map, AreaMetricParams{sigma_min, 10.0});
                summary << sigmas[i] << ',' << metric << '\n';
                man.result("area_metric")[std::to_string(i)] = metric;
            }
        }
        else if (ds->parsed())
        {
            const Scenario s = scenario_with_overrides(true);
            man.param("examples_per_point") = examples;
            const Dataset d = make_dataset(s, s.grid_step, s.phase_noise_sigma, examples, substream_seed(c.seed, "dataset"));
            write_dataset_csv(c.out, d);
            man.result("rows") = d.size();
        }
        else if (tr->parsed())
        {
            const std::vector<int> hidden = parse_int_list(layers, "--layers");
            const TrainParams p = train_params(epochs, lr, c.seed);
            const Dataset d = read_dataset_csv(data_path);
            if (d.size() < 2)
                throw InvalidArgument("--data needs at least two rows");
            const Split2 sp = split_dataset(d, train_fraction, c.seed);
            std::vector<int> sizes{static_cast<int>(d.feature_count())};
            sizes.insert(sizes.end(), hidden.begin(), hidden.end());
            sizes.push_back(2);
            man.param("data") = data_path;
            man.param("layer_sizes") = sizes;
            man.param("epochs") = epochs;
            man.param("lr") = lr;
            man.param("train_fraction") = train_fraction;
            const TrainResult fit = train_localizer(sp.train, sizes, p);
            save_model(c.out, fit.model);
            man.result("epochs_run") = fit.epochs;
            man.result("best_epoch") = fit.best_epoch;
            man.result("best_validation_loss") = fit.best_validation_loss;
            man.result("parameters") = fit.model.parameter_count();
        }
        else if (ev->parsed())
        {
            const MlpModel model = load_model(model_path);
            const Dataset d = read_dataset_csv(data_path);
            const Dataset test = train_fraction > 0.0 ? split_dataset(d, train_fraction, c.seed).test : d;
            const LoadedScenario ris = load(ris_spec);
            man.param("data") = data_path;
            man.param("model") = model_path;
            man.param("train_fraction") = train_fraction;
            const EvalReport rep = evaluate_localization(model, test, ris.scenario.ris.center);
            auto out = open_out(c.out);
            out << eval_report_json(rep) << '\n';
            auto rows = open_out(c.out + ".csv");
            rows << "ux,uy,ex,ey,error\n";
            for (std::size_t i = 0; i < rep.truth.size(); ++i)
                rows << rep.truth[i].x() << ',' << rep.truth[i].y() << ',' << rep.estimate[i].x() << ',' << rep.estimate[i].y()
                     << ',' << rep.errors[i] << '\n';
            man.output(c.out + ".csv");
            man.result("mean_error_m") = rep.mean_error;
        }
        else if (red->parsed())
        {
            const Scenario s = scenario_with_overrides(true);
            const std::vector<int> hidden = parse_int_list(red->count("--layers") ? layers : "4,4", "--layers");
            const std::vector<int> ks = parse_int_list(k_list, "--k-list");
            const TrainParams p = train_params(epochs, lr, c.seed);
            const FiOptions opt = fi_options(fd_step);
            std::vector<std::pair<std::string, RankOrder>> orders;
            if (order == "descending" || order == "all")
                orders.emplace_back("descending", RankOrder::descending);
            if (order == "ascending" || order == "all")
                orders.emplace_back("ascending", RankOrder::ascending);
            if (order == "random" || order == "all")
                orders.emplace_back("random", RankOrder::random);
            if (orders.empty())
                throw InvalidArgument("--order must be descending, ascending, random or all");
            for (int k : ks)
                if (static_cast<std::size_t>(k) > s.ris.size())
                    throw InvalidArgument("--k-list entries must not exceed the element count");
            man.param("k_list") = ks;
            man.param("hidden") = hidden;
            man.param("order") = order;

            const ChannelModel model(s);
            const std::vector<double> info = average_element_information(model, grid_points(s.area, s.grid_step), opt);
            const Dataset d = make_dataset(s, s.grid_step, s.phase_noise_sigma, 1, substream_seed(c.seed, "dataset"));
            const Split2 sp = split_dataset(d, 0.75, c.seed);
            const std::vector<std::size_t> kk(ks.begin(), ks.end());
            auto out = open_out(c.out);
            out << "k,order,mean_error_m,parameters,multiplications,additions,activations\n";
            for (const auto &[name, o] : orders)
            {
                const auto ranking = fi_rank_features(info, o, substream_seed(c.seed, "rank"));
                for (const ReductionPoint &r : select_and_retrain(sp.train, sp.test, ranking, kk, hidden, p, s.ris.center))
                    out << r.k << ',' << name << ',' << r.mean_error << ',' << r.parameters << ',' << r.ops.multiplications << ','
                        << r.ops.additions << ',' << r.ops.activations << '\n';
            }
        }
        else if (pv->parsed())
        {
            if (!(gamma >= 0.0) || samples == 0 || bins < 1)
                throw InvalidArgument("phase-verify: need gamma >= 0, samples >= 1 and bins >= 1");
            const phase_stats::PhaseDistParams params{wrap_pi(mu), gamma};
            const std::uint64_t seed = substream_seed(c.seed, "noise");
            man.param("gamma") = gamma;
            man.param("mu") = mu;
            man.param("samples") = samples;
            man.param("bins") = bins;
            auto out = open_out(c.out);
            out << "theta,exact_pdf,approx_pdf,empirical_pdf\n";
            for (const auto &r : phase_stats::phase_histogram(params, samples, static_cast<std::size_t>(bins), seed))
                out << r.theta << ',' << r.exact_pdf << ',' << r.approx_pdf << ',' << r.empirical_pdf << '\n';
            const phase_stats::MarginalThetaCdf cdf(params);
            man.result("ks_distance") = phase_stats::ks_distance(phase_stats::sample_phase(params, samples, seed),
                                                                 [&](double t)
                                                                 { return cdf(t); });
        }
        else if (aoa->parsed())
        {
            const Scenario s = scenario_with_overrides(false);
            const auto devices = default_aoa_devices(s.ris.n_y, s.ris.spacing);
            auto out = open_out(c.out);
            out << "x,y,est_x,est_y,hpbw_1,hpbw_2,radius_m,area_m2,error_m\n";
            std::size_t skipped = 0;
            for (const Vec3 &u : grid_points(s.area, s.grid_step))
            {
                try
                {
                    const AoaResult r = aoa_baseline(devices[0], devices[1], u, s.wavelength());
                    out << u.x() << ',' << u.y() << ',' << r.estimate.x() << ',' << r.estimate.y() << ',' << r.hpbw_pair[0] << ','
                        << r.hpbw_pair[1] << ',' << r.uncertainty_radius << ',' << r.region_area << ','
                        << (r.estimate - u).norm() << '\n';
                }
                catch (const NumericError &)
                {
                    ++skipped;
                }
                catch (const InvalidArgument &)
                {
                    ++skipped;
                }
            }
            man.result("skipped_points") = skipped;
        }
        man.write(c.out);
        return 0;
    }
    catch (const ParseError &e)
    {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    }
    catch (const InvalidArgument &e)
    {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitParse;
    }
    catch (const TrainingError &e)
    {
        std::cerr << "training failure: " << e.what() << '\n';
        return kExitTraining;
    }
    catch (const NumericError &e)
    {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
