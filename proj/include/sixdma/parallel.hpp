// SPDX-License-Identifier: Apache-2.0
//
// sixdma: statistical channel estimation for six-dimensional movable antennas
// Copyright (C) 2026 The sixdma Authors
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

#ifndef SIXDMA_PARALLEL_HPP
#define SIXDMA_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sixdma
{
    // Calls fn(i) for i in [0, n) on up to `threads` workers. Work items are claimed
    // dynamically; the first exception thrown by any item is rethrown after all workers join.
    template <class Fn>
    void parallel_for(std::size_t n, std::size_t threads, Fn &&fn)
    {
        threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
        if (threads == 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        {
            std::vector<std::jthread> workers;
            workers.reserve(threads);
            for (std::size_t t = 0; t < threads; ++t)
                workers.emplace_back([&]
                                     {
                    for (std::size_t i = next++; i < n; i = next++)
                    {
                        try
                        {
                            fn(i);
                        }
                        catch (...)
                        {
                            std::lock_guard lock(error_mutex);
                            if (!error)
                                error = std::current_exception();
                        }
                    } });
        }
        if (error)
            std::rethrow_exception(error);
    }
}

#endif
