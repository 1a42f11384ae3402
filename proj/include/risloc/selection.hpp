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

#ifndef RISLOC_SELECTION_HPP
#define RISLOC_SELECTION_HPP

#include "risloc/dataset.hpp"
#include "risloc/mlp.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace risloc
{
    enum class RankOrder
    {
        descending,
        ascending,
        random
    };

    // Permutation of element indices by average information. Ties keep index order; random ignores
    // the values and shuffles with the seed.
    std::vector<std::size_t> fi_rank_features(std::span<const double> avg_info, RankOrder order, std::uint64_t seed = 0);

    struct ReductionPoint
    {
        std::size_t k = 0;
        double mean_error = 0.0;
        std::size_t parameters = 0;
        OpCount ops;
    };

    // For every k, trains [k, hidden..., 2] on the first k ranked features of train and evaluates it
    // on test. Each k uses the same training seed.
    std::vector<ReductionPoint> select_and_retrain(const Dataset &train, const Dataset &test,
                                                   std::span<const std::size_t> ranking, std::span<const std::size_t> k_list,
                                                   const std::vector<int> &hidden, const TrainParams &params,
                                                   const Vec3 &ris_position);
}

#endif
