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

#ifndef RISLOC_MLP_HPP
#define RISLOC_MLP_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace risloc
{
    // Dense network with tanh hidden layers and an identity output layer. Inputs are standardized
    // with (x - input_mean) / input_scale and outputs mapped back with output_center +
    // output_half_range * y; all four default to the identity.
    struct MlpModel
    {
        std::vector<int> layer_sizes;
        std::vector<Eigen::MatrixXd> weights; // weights[k] is L_{k+1} x L_k
        std::vector<Eigen::VectorXd> biases;  // biases[k] has L_{k+1} entries
        Eigen::VectorXd input_mean;
        Eigen::VectorXd input_scale;
        Eigen::VectorXd output_center;
        Eigen::VectorXd output_half_range;

        int input_size() const { return layer_sizes.front(); }
        int output_size() const { return layer_sizes.back(); }
        std::size_t layer_count() const { return weights.size(); }
        // sum_k L_k L_{k+1} + L_{k+1}
        std::size_t parameter_count() const;
    };

    std::size_t parameter_count(const std::vector<int> &layer_sizes);

    // All-zero parameters and identity normalization.
    MlpModel make_mlp(const std::vector<int> &layer_sizes);

    // Weights uniform in +-sqrt(6 / (L_k + L_{k+1})), zero biases.
    MlpModel init_mlp(const std::vector<int> &layer_sizes, std::uint64_t seed);

    Eigen::VectorXd mlp_forward(const MlpModel &model, const Eigen::VectorXd &x);

    // One sample per column.
    Eigen::MatrixXd mlp_forward_batch(const MlpModel &model, const Eigen::MatrixXd &x);

    struct MlpGradient
    {
        std::vector<Eigen::MatrixXd> weights;
        std::vector<Eigen::VectorXd> biases;
    };

    // Loss (1/B) sum_b |f(x_b) - t_b|^2 of the raw network (no normalization) on one sample per
    // column, and its gradient by backpropagation when grad is non-null.
    double mse_loss(const MlpModel &model, const Eigen::MatrixXd &x, const Eigen::MatrixXd &t, MlpGradient *grad = nullptr);

    // d output / d input at x, in the model's original units. output_size x input_size.
    Eigen::MatrixXd input_jacobian(const MlpModel &model, const Eigen::VectorXd &x);

    struct TrainParams
    {
        double lr = 1e-3;
        int batch = 64;
        int max_epochs = 2000;
        int patience = 20;
        double min_delta = 1e-4; // relative improvement of the validation loss
        double validation_fraction = 0.1;
        std::uint64_t seed = 0;
    };

    struct TrainResult
    {
        MlpModel model;
        int epochs = 0;
        int best_epoch = 0;
        double best_validation_loss = 0.0;
        std::vector<double> validation_history;
    };

    // Adam on the normalized problem. The last validation_fraction of a seeded permutation of the
    // rows is held out for early stopping, and the best validation weights are returned.
    // x and y hold one sample per row. Throws TrainingError when the loss stops being finite.
    TrainResult mlp_train(const Eigen::MatrixXd &x, const Eigen::MatrixXd &y, const std::vector<int> &layer_sizes,
                          const TrainParams &params);

    struct OpCount
    {
        std::size_t multiplications = 0;
        std::size_t additions = 0;
        std::size_t activations = 0;

        bool operator==(const OpCount &) const = default;
    };

    // Multiplications sum_k L_k L_{k+1}; additions the same count (L_k - 1 accumulations plus the bias
    // per neuron); activations sum over hidden layers of L_k.
    OpCount op_count(const std::vector<int> &layer_sizes);

    // Scalar-loop forward pass of the raw network that counts every arithmetic event it performs.
    Eigen::VectorXd instrumented_forward(const MlpModel &model, const Eigen::VectorXd &x, OpCount &count);

    void save_model(std::ostream &out, const MlpModel &model);
    void save_model(const std::string &path, const MlpModel &model);
    MlpModel load_model(std::istream &in);
    MlpModel load_model(const std::string &path);
}

#endif
