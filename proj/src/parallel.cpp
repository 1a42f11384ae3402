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

#include "risloc/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace risloc
{
    unsigned worker_count()
    {
        if (const char *env = std::getenv("RISLOC_THREADS"))
        {
            const int v = std::atoi(env);
            if (v > 0)
                return static_cast<unsigned>(v);
        }
        return std::max(1u, std::thread::hardware_concurrency());
    }

    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body)
    {
        const std::size_t workers = std::min<std::size_t>(worker_count(), n);
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                body(i);
            return;
        }
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t block = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w)
        {
            const std::size_t lo = w * block;
            const std::size_t hi = std::min(n, lo + block);
            pool.emplace_back([&, lo, hi]
                              {
                                  try
                                  {
                                      for (std::size_t i = lo; i < hi; ++i)
                                          body(i);
                                  }
                                  catch (...)
                                  {
                                      std::lock_guard lock(error_mutex);
                                      if (!first_error)
                                          first_error = std::current_exception();
                                  } });
        }
        pool.clear();
        if (first_error)
            std::rethrow_exception(first_error);
    }
}
