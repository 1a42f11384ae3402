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

#include "risloc/mlp.hpp"
#include "risloc/error.hpp"
#include "risloc/rng.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

namespace risloc
{
    namespace
    {
        void check_layers(const std::vector<int> &layer_sizes)
        {
            if (layer_sizes.size() < 2)
                throw InvalidArgument("mlp: at least two layer sizes are needed");
            for (int l : layer_sizes)
                if (l < 1)
                    throw InvalidArgument("mlp: layer sizes must be >= 1");
        }

        Eigen::MatrixXd normalize_inputs(const MlpModel &m, const Eigen::MatrixXd &x)
        {
            return (x.colwise() - m.input_mean).array().colwise() / m.input_scale.array();
        }

        // Forward pass of the raw network keeping every layer's activations.
        void forward_layers(const MlpModel &m, const Eigen::MatrixXd &x, std::vector<Eigen::MatrixXd> &acts)
        {
            acts.resize(m.layer_count() + 1);
            acts[0] = x;
            for (std::size_t k = 0; k < m.layer_count(); ++k)
            {
                acts[k + 1] = (m.weights[k] * acts[k]).colwise() + m.biases[k];
                if (k + 1 < m.layer_count())
                    acts[k + 1] = acts[k + 1].array().tanh();
            }
        }

        Eigen::MatrixXd forward_raw(const MlpModel &m, const Eigen::MatrixXd &x)
        {
            Eigen::MatrixXd a = x;
            for (std::size_t k = 0; k < m.layer_count(); ++k)
            {
                Eigen::MatrixXd z = (m.weights[k] * a).colwise() + m.biases[k];
                a = k + 1 < m.layer_count() ? Eigen::MatrixXd(z.array().tanh()) : z;
            }
            return a;
        }

        bool finite(const MlpModel &m)
        {
            for (std::size_t k = 0; k < m.layer_count(); ++k)
                if (!m.weights[k].allFinite() || !m.biases[k].allFinite())
                    return false;
            return true;
        }
    }

    std::size_t parameter_count(const std::vector<int> &layer_sizes)
    {
        check_layers(layer_sizes);
        std::size_t n = 0;
        for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k)
            n += static_cast<std::size_t>(layer_sizes[k]) * layer_sizes[k + 1] + layer_sizes[k + 1];
        return n;
    }

    std::size_t MlpModel::parameter_count() const { return risloc::parameter_count(layer_sizes); }

    MlpModel make_mlp(const std::vector<int> &layer_sizes)
    {
        check_layers(layer_sizes);
        MlpModel m;
        m.layer_sizes = layer_sizes;
        for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k)
        {
            m.weights.push_back(Eigen::MatrixXd::Zero(layer_sizes[k + 1], layer_sizes[k]));
            m.biases.push_back(Eigen::VectorXd::Zero(layer_sizes[k + 1]));
        }
        m.input_mean = Eigen::VectorXd::Zero(layer_sizes.front());
        m.input_scale = Eigen::VectorXd::Ones(layer_sizes.front());
        m.output_center = Eigen::VectorXd::Zero(layer_sizes.back());
        m.output_half_range = Eigen::VectorXd::Ones(layer_sizes.back());
        return m;
    }

    MlpModel init_mlp(const std::vector<int> &layer_sizes, std::uint64_t seed)
    {
        MlpModel m = make_mlp(layer_sizes);
        Rng rng(seed);
        for (std::size_t k = 0; k < m.layer_count(); ++k)
        {
            const double limit = std::sqrt(6.0 / (layer_sizes[k] + layer_sizes[k + 1]));
            Eigen::MatrixXd &w = m.weights[k];
            for (Eigen::Index r = 0; r < w.rows(); ++r)
                for (Eigen::Index c = 0; c < w.cols(); ++c)
                    w(r, c) = limit * (2.0 * rng.uniform() - 1.0);
        }
        return m;
    }

    Eigen::MatrixXd mlp_forward_batch(const MlpModel &model, const Eigen::MatrixXd &x)
    {
        if (x.rows() != model.input_size())
            throw InvalidArgument("mlp_forward: expected " + std::to_string(model.input_size()) + " inputs, got " +
                                  std::to_string(x.rows()));
        const Eigen::MatrixXd y = forward_raw(model, normalize_inputs(model, x));
        return (y.array().colwise() * model.output_half_range.array()).colwise() + model.output_center.array();
    }

    Eigen::VectorXd mlp_forward(const MlpModel &model, const Eigen::VectorXd &x)
    {
        return mlp_forward_batch(model, x);
    }

    double mse_loss(const MlpModel &model, const Eigen::MatrixXd &x, const Eigen::MatrixXd &t, MlpGradient *grad)
    {
        if (x.rows() != model.input_size() || t.rows() != model.output_size() || x.cols() != t.cols() || x.cols() == 0)
            throw InvalidArgument("mse_loss: batch shape does not match the model");
        std::vector<Eigen::MatrixXd> acts;
        forward_layers(model, x, acts);
        const double b = static_cast<double>(x.cols());
        const Eigen::MatrixXd err = acts.back() - t;
        const double loss = err.squaredNorm() / b;
        if (grad == nullptr)
            return loss;

        const std::size_t layers = model.layer_count();
        grad->weights.resize(layers);
        grad->biases.resize(layers);
        Eigen::MatrixXd delta = (2.0 / b) * err;
        for (std::size_t k = layers; k-- > 0;)
        {
            grad->weights[k] = delta * acts[k].transpose();
            grad->biases[k] = delta.rowwise().sum();
            if (k > 0)
                delta = (model.weights[k].transpose() * delta).array() * (1.0 - acts[k].array().square());
        }
        return loss;
    }

    Eigen::MatrixXd input_jacobian(const MlpModel &model, const Eigen::VectorXd &x)
    {
        if (x.size() != model.input_size())
            throw InvalidArgument("input_jacobian: input size does not match the model");
        std::vector<Eigen::MatrixXd> acts;
        forward_layers(model, normalize_inputs(model, x), acts);
        Eigen::MatrixXd jac = model.input_scale.cwiseInverse().asDiagonal();
        for (std::size_t k = 0; k < model.layer_count(); ++k)
        {
            jac = model.weights[k] * jac;
            if (k + 1 < model.layer_count())
                jac = (1.0 - acts[k + 1].col(0).array().square()).matrix().asDiagonal() * jac;
        }
        return model.output_half_range.asDiagonal() * jac;
    }

    TrainResult mlp_train(const Eigen::MatrixXd &x, const Eigen::MatrixXd &y, const std::vector<int> &layer_sizes,
                          const TrainParams &params)
    {
        check_layers(layer_sizes);
        if (x.rows() == 0 || x.rows() != y.rows())
            throw InvalidArgument("mlp_train: empty or mismatched training data");
        if (x.cols() != layer_sizes.front() || y.cols() != layer_sizes.back())
            throw InvalidArgument("mlp_train: data width does not match the layer sizes");
        if (!(params.lr > 0.0) || params.batch < 1 || params.max_epochs < 0 || params.patience < 1 ||
            !(params.validation_fraction >= 0.0 && params.validation_fraction < 1.0))
            throw InvalidArgument("mlp_train: invalid hyperparameters");

        const auto rows = static_cast<std::size_t>(x.rows());
        std::vector<std::size_t> order(rows);
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng split_rng(substream_seed(params.seed, "split"));
        for (std::size_t i = rows; i > 1; --i)
            std::swap(order[i - 1], order[split_rng.below(i)]);
        std::size_t n_val = static_cast<std::size_t>(std::llround(params.validation_fraction * static_cast<double>(rows)));
        if (rows < 2)
            n_val = 0;
        const std::size_t n_train = rows - n_val;
        std::vector<std::size_t> train_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
        std::vector<std::size_t> val_idx(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
        if (val_idx.empty())
            val_idx = train_idx;

        TrainResult result;
        MlpModel model = init_mlp(layer_sizes, substream_seed(params.seed, "init"));

        // Normalization from the training rows.
        const Eigen::Index d_in = x.cols(), d_out = y.cols();
        for (Eigen::Index c = 0; c < d_in; ++c)
        {
            double mean = 0.0;
            for (std::size_t i : train_idx)
                mean += x(static_cast<Eigen::Index>(i), c);
            mean /= static_cast<double>(n_train);
            double var = 0.0;
            for (std::size_t i : train_idx)
            {
                const double d = x(static_cast<Eigen::Index>(i), c) - mean;
                var += d * d;
            }
            var /= static_cast<double>(n_train);
            model.input_mean[c] = mean;
            model.input_scale[c] = var > 0.0 ? std::sqrt(var) : 1.0;
            // A constant column carries no information; its inputs never reach the network.
            if (!(var > 0.0))
                model.weights[0].col(c).setZero();
        }
        for (Eigen::Index c = 0; c < d_out; ++c)
        {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (std::size_t i : train_idx)
            {
                lo = std::min(lo, y(static_cast<Eigen::Index>(i), c));
                hi = std::max(hi, y(static_cast<Eigen::Index>(i), c));
            }
            model.output_center[c] = 0.5 * (lo + hi);
            model.output_half_range[c] = hi > lo ? 0.5 * (hi - lo) : 1.0;
        }

        auto gather = [&](const std::vector<std::size_t> &idx, std::size_t begin, std::size_t end, Eigen::MatrixXd &xb,
                          Eigen::MatrixXd &tb)
        {
            const auto n = static_cast<Eigen::Index>(end - begin);
            xb.resize(d_in, n);
            tb.resize(d_out, n);
            for (Eigen::Index j = 0; j < n; ++j)
            {
                const auto r = static_cast<Eigen::Index>(idx[begin + static_cast<std::size_t>(j)]);
                xb.col(j) = (x.row(r).transpose() - model.input_mean).cwiseQuotient(model.input_scale);
                tb.col(j) = (y.row(r).transpose() - model.output_center).cwiseQuotient(model.output_half_range);
            }
        };

        Eigen::MatrixXd xv, tv;
        gather(val_idx, 0, val_idx.size(), xv, tv);

        const std::size_t layers = model.layer_count();
        std::vector<Eigen::MatrixXd> mw(layers), vw(layers);
        std::vector<Eigen::VectorXd> mb(layers), vb(layers);
        for (std::size_t k = 0; k < layers; ++k)
        {
            mw[k] = vw[k] = Eigen::MatrixXd::Zero(model.weights[k].rows(), model.weights[k].cols());
            mb[k] = vb[k] = Eigen::VectorXd::Zero(model.biases[k].size());
        }
        constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
        double b1t = 1.0, b2t = 1.0;

        Rng batch_rng(substream_seed(params.seed, "batch"));
        MlpModel best = model;
        double best_loss = mse_loss(model, xv, tv);
        int since_best = 0;
        MlpGradient g;
        Eigen::MatrixXd xb, tb;
        const auto batch = static_cast<std::size_t>(params.batch);
        for (int epoch = 1; epoch <= params.max_epochs; ++epoch)
        {
            for (std::size_t i = n_train; i > 1; --i)
                std::swap(train_idx[i - 1], train_idx[batch_rng.below(i)]);
            for (std::size_t start = 0; start < n_train; start += batch)
            {
                gather(train_idx, start, std::min(start + batch, n_train), xb, tb);
                const double loss = mse_loss(model, xb, tb, &g);
                if (!std::isfinite(loss))
                    throw TrainingError("mlp_train: loss became non-finite at epoch " + std::to_string(epoch) +
                                        " (lr " + std::to_string(params.lr) + ")");
                b1t *= beta1;
                b2t *= beta2;
                const double step = params.lr * std::sqrt(1.0 - b2t) / (1.0 - b1t);
                for (std::size_t k = 0; k < layers; ++k)
                {
                    mw[k] = beta1 * mw[k] + (1.0 - beta1) * g.weights[k];
                    vw[k] = beta2 * vw[k] + (1.0 - beta2) * g.weights[k].cwiseAbs2();
                    model.weights[k].array() -= step * mw[k].array() / (vw[k].array().sqrt() + eps);
                    mb[k] = beta1 * mb[k] + (1.0 - beta1) * g.biases[k];
                    vb[k] = beta2 * vb[k] + (1.0 - beta2) * g.biases[k].cwiseAbs2();
                    model.biases[k].array() -= step * mb[k].array() / (vb[k].array().sqrt() + eps);
                }
            }
            const double val = mse_loss(model, xv, tv);
            if (!std::isfinite(val) || !finite(model))
                throw TrainingError("mlp_train: validation loss became non-finite at epoch " + std::to_string(epoch) +
                                    " (lr " + std::to_string(params.lr) + ")");
            result.validation_history.push_back(val);
            result.epochs = epoch;
            if (val < best_loss * (1.0 - params.min_delta))
            {
                best_loss = val;
                best = model;
                result.best_epoch = epoch;
                since_best = 0;
            }
            else if (++since_best >= params.patience)
                break;
            if (best_loss == 0.0)
                break;
        }
        result.model = std::move(best);
        result.best_validation_loss = best_loss;
        return result;
    }

    OpCount op_count(const std::vector<int> &layer_sizes)
    {
        check_layers(layer_sizes);
        OpCount c;
        for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k)
        {
            const auto prod = static_cast<std::size_t>(layer_sizes[k]) * static_cast<std::size_t>(layer_sizes[k + 1]);
            c.multiplications += prod;
            c.additions += prod;
            if (k + 2 < layer_sizes.size())
                c.activations += static_cast<std::size_t>(layer_sizes[k + 1]);
        }
        return c;
    }

    Eigen::VectorXd instrumented_forward(const MlpModel &model, const Eigen::VectorXd &x, OpCount &count)
    {
        if (x.size() != model.input_size())
            throw InvalidArgument("instrumented_forward: input size does not match the model");
        std::vector<double> a(x.data(), x.data() + x.size());
        for (std::size_t k = 0; k < model.layer_count(); ++k)
        {
            const Eigen::MatrixXd &w = model.weights[k];
            std::vector<double> z(static_cast<std::size_t>(w.rows()));
            for (Eigen::Index r = 0; r < w.rows(); ++r)
            {
                double acc = model.biases[k][r];
                for (Eigen::Index c = 0; c < w.cols(); ++c)
                {
                    const double p = w(r, c) * a[static_cast<std::size_t>(c)];
                    ++count.multiplications;
                    acc += p;
                    ++count.additions;
                }
                if (k + 1 < model.layer_count())
                {
                    acc = std::tanh(acc);
                    ++count.activations;
                }
                z[static_cast<std::size_t>(r)] = acc;
            }
            a = std::move(z);
        }
        return Eigen::Map<Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
    }

    namespace
    {
        void write_vector(std::ostream &out, const char *name, const Eigen::VectorXd &v)
        {
            out << name;
            for (Eigen::Index i = 0; i < v.size(); ++i)
                out << ' ' << v[i];
            out << '\n';
        }

        struct LineReader
        {
            std::istream &in;
            std::size_t line = 0;

            std::istringstream next(const std::string &expect)
            {
                std::string text;
                while (std::getline(in, text))
                {
                    ++line;
                    if (!text.empty())
                    {
                        std::istringstream ss(text);
                        std::string key;
                        ss >> key;
                        if (key != expect)
                            throw ParseError("model: expected '" + expect + "', found '" + key + "'", line);
                        return ss;
                    }
                }
                throw ParseError("model: unexpected end of file, expected '" + expect + "'", line + 1);
            }

            std::vector<double> numbers(std::istringstream &ss, std::size_t n)
            {
                std::vector<double> v(n);
                for (double &d : v)
                    if (!(ss >> d))
                        throw ParseError("model: expected " + std::to_string(n) + " numbers", line);
                std::string extra;
                if (ss >> extra)
                    throw ParseError("model: trailing data '" + extra + "'", line);
                return v;
            }
        };

        Eigen::VectorXd to_vector(const std::vector<double> &v)
        {
            return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
        }
    }

    void save_model(std::ostream &out, const MlpModel &model)
    {
        out << std::setprecision(17);
        out << "risloc-mlp 1\nlayers " << model.layer_sizes.size();
        for (int l : model.layer_sizes)
            out << ' ' << l;
        out << '\n';
        write_vector(out, "input_mean", model.input_mean);
        write_vector(out, "input_scale", model.input_scale);
        write_vector(out, "output_center", model.output_center);
        write_vector(out, "output_half_range", model.output_half_range);
        for (std::size_t k = 0; k < model.layer_count(); ++k)
        {
            const Eigen::MatrixXd &w = model.weights[k];
            for (Eigen::Index r = 0; r < w.rows(); ++r)
            {
                out << "w " << k << ' ' << r;
                for (Eigen::Index c = 0; c < w.cols(); ++c)
                    out << ' ' << w(r, c);
                out << '\n';
            }
            out << "b " << k;
            for (Eigen::Index r = 0; r < model.biases[k].size(); ++r)
                out << ' ' << model.biases[k][r];
            out << '\n';
        }
    }

    void save_model(const std::string &path, const MlpModel &model)
    {
        std::ofstream out(path);
        if (!out)
            throw InvalidArgument("save_model: cannot open " + path);
        save_model(out, model);
    }

    MlpModel load_model(std::istream &in)
    {
        LineReader rd{in};
        {
            auto ss = rd.next("risloc-mlp");
            int version = 0;
            if (!(ss >> version) || version != 1)
                throw ParseError("model: unsupported version", rd.line);
        }
        std::vector<int> sizes;
        {
            auto ss = rd.next("layers");
            std::size_t n = 0;
            if (!(ss >> n) || n < 2 || n > 64)
                throw ParseError("model: bad layer count", rd.line);
            for (double d : rd.numbers(ss, n))
            {
                if (d < 1 || d != std::floor(d))
                    throw ParseError("model: layer sizes must be positive integers", rd.line);
                sizes.push_back(static_cast<int>(d));
            }
        }
        MlpModel m = make_mlp(sizes);
        const auto in0 = static_cast<std::size_t>(sizes.front());
        const auto outk = static_cast<std::size_t>(sizes.back());
        {
            auto ss = rd.next("input_mean");
            m.input_mean = to_vector(rd.numbers(ss, in0));
        }
        {
            auto ss = rd.next("input_scale");
            m.input_scale = to_vector(rd.numbers(ss, in0));
        }
        {
            auto ss = rd.next("output_center");
            m.output_center = to_vector(rd.numbers(ss, outk));
        }
        {
            auto ss = rd.next("output_half_range");
            m.output_half_range = to_vector(rd.numbers(ss, outk));
        }
        for (std::size_t k = 0; k < m.layer_count(); ++k)
        {
            Eigen::MatrixXd &w = m.weights[k];
            for (Eigen::Index r = 0; r < w.rows(); ++r)
            {
                auto ss = rd.next("w");
                std::size_t kk = 0, rr = 0;
                if (!(ss >> kk >> rr) || kk != k || rr != static_cast<std::size_t>(r))
                    throw ParseError("model: weight rows out of order", rd.line);
                w.row(r) = to_vector(rd.numbers(ss, static_cast<std::size_t>(w.cols()))).transpose();
            }
            auto ss = rd.next("b");
            std::size_t kk = 0;
            if (!(ss >> kk) || kk != k)
                throw ParseError("model: bias rows out of order", rd.line);
            m.biases[k] = to_vector(rd.numbers(ss, static_cast<std::size_t>(m.biases[k].size())));
        }
        if (!finite(m) || !m.input_scale.allFinite() || !m.output_half_range.allFinite())
            throw ParseError("model: non-finite parameters");
        return m;
    }

    MlpModel load_model(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw InvalidArgument("load_model: cannot open " + path);
        return load_model(in);
    }
}
