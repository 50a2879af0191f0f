// SPDX-License-Identifier: Apache-2.0
//
// rdmud - reduced-dimension multiuser detection toolkit
// Copyright (C) 2026 The rdmud authors
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

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rdmud {

template <class Body>
void parallel_chunks(std::uint64_t begin, std::uint64_t end, unsigned threads, std::uint64_t chunk, Body&& body)
{
    if (end <= begin)
        return;
    chunk = std::max<std::uint64_t>(chunk, 1);
    const std::uint64_t chunks = (end - begin + chunk - 1) / chunk;
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(std::max(threads, 1u), chunks));
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&](unsigned worker) {
        try
        {
            for (std::uint64_t c = next++; c < chunks; c = next++)
            {
                const std::uint64_t first = begin + c * chunk;
                body(first, std::min(end, first + chunk), worker);
            }
        }
        catch (...)
        {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next = chunks;
        }
    };
    if (workers == 1)
    {
        work(0);
    }
    else
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work, w);
    }
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace rdmud
