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

#ifndef RISLOC_RNG_HPP
#define RISLOC_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace risloc
{
    // Seeded generator with a portable uniform/normal transform, so results only depend on the seed
    // and not on the standard library's distribution implementations.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        // Uniform in [0, 1) with 53 random bits.
        double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

        // Standard normal via Box-Muller; the second variate of each pair is cached.
        double normal();

        std::uint64_t next_u64() { return engine_(); }

        // Uniform integer in [0, n). Rejection sampling keeps it unbiased.
        std::uint64_t below(std::uint64_t n);

    private:
        std::mt19937_64 engine_;
        double cached_ = 0.0;
        bool has_cached_ = false;
    };

    std::uint64_t splitmix64(std::uint64_t x);

    // Independent seed for a named substream ("dataset", "noise", "init", "split") of a root seed.
    std::uint64_t substream_seed(std::uint64_t root, std::string_view name);

    // Independent seed for item `index` of a stream, used for per-grid-point noise.
    std::uint64_t indexed_seed(std::uint64_t stream, std::uint64_t index);
}

#endif
