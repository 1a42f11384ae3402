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

#include "risloc/rng.hpp"
#include "risloc/geometry.hpp"

#include <cmath>

namespace risloc
{
    double Rng::normal()
    {
        if (has_cached_)
        {
            has_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        cached_ = r * std::sin(kTwoPi * u2);
        has_cached_ = true;
        return r * std::cos(kTwoPi * u2);
    }

    std::uint64_t Rng::below(std::uint64_t n)
    {
        const std::uint64_t limit = n == 0 ? 0 : (~std::uint64_t{0} - (~std::uint64_t{0} % n));
        std::uint64_t x = engine_();
        while (x >= limit)
            x = engine_();
        return x % n;
    }

    std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::uint64_t substream_seed(std::uint64_t root, std::string_view name)
    {
        // FNV-1a of the name, mixed with the root.
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (char c : name)
        {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        return splitmix64(root ^ splitmix64(h));
    }

    std::uint64_t indexed_seed(std::uint64_t stream, std::uint64_t index)
    {
        return splitmix64(splitmix64(stream) + index);
    }
}
