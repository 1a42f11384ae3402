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

#include "risloc/selection.hpp"
#include "risloc/error.hpp"
#include "risloc/evaluate.hpp"
#include "risloc/rng.hpp"

#include <algorithm>
#include <numeric>

namespace risloc
{
    std::vector<std::size_t> fi_rank_features(std::span<const double> avg_info, RankOrder order, std::uint64_t seed)
    {
        std::vector<std::size_t> idx(avg_info.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        switch (order)
        {
        case RankOrder::descending:
            std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b)
                             { return avg_info[a] > avg_info[b]; });
            break;
        case RankOrder::ascending:
            std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b)
                             { return avg_info[a] < avg_info[b]; });
            break;
        case RankOrder::random:
        {
            Rng rng(seed);
            for (std::size_t i = idx.size(); i > 1; --i)
                std::swap(idx[i - 1], idx[rng.below(i)]);
            break;
        }
        }
        return idx;
    }

    std::vector<ReductionPoint> select_and_retrain(const Dataset &train, const Dataset &test,
                                                   std::span<const std::size_t> ranking, std::span<const std::size_t> k_list,
                                                   const std::vector<int> &hidden, const TrainParams &params,
                                                   const Vec3 &ris_position)
    {
        const std::size_t n = train.feature_count();
        if (ranking.size() != n)
            throw InvalidArgument("select_and_retrain: ranking must cover every feature");
        std::vector<ReductionPoint> curve;
        for (std::size_t k : k_list)
        {
            if (k < 1 || k > n)
                throw InvalidArgument("select_and_retrain: k must be in [1, N]");
            const std::span<const std::size_t> cols = ranking.first(k);
            const Dataset tr = select_features(train, cols);
            const Dataset te = select_features(test, cols);
            std::vector<int> layers{static_cast<int>(k)};
            layers.insert(layers.end(), hidden.begin(), hidden.end());
            layers.push_back(2);
            const TrainResult fit = train_localizer(tr, layers, params);
            ReductionPoint p;
            p.k = k;
            p.mean_error = evaluate_localization(fit.model, te, ris_position).mean_error;
            p.parameters = parameter_count(layers);
            p.ops = op_count(layers);
            curve.push_back(p);
        }
        return curve;
    }
}
