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

#ifndef RISLOC_PARALLEL_HPP
#define RISLOC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace risloc
{
    // Number of workers used by parallel_for. Defaults to the hardware concurrency; RISLOC_THREADS overrides it.
    unsigned worker_count();

    // Runs body(i) for i in [0, n). Work is split in contiguous blocks; callers write results by index,
    // so the outcome does not depend on scheduling.
    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);
}

#endif
