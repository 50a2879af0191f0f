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

#include <array>
#include <cstdint>

namespace rdmud {

/// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
/// numbers: as easy as 1, 2, 3"). Stateless: output is a pure function of
/// (counter, key).
struct Philox4x32
{
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter counter, Key key) noexcept;
};

/// Stream identifiers. Together with the master seed and a substream index
/// they address disjoint regions of the Philox counter space.
enum class StreamId : std::uint32_t
{
    front_end = 1,
    mf_bank = 2,
    matrix = 3,
    matrix_search = 4,
    trial = 5,
    tuning = 6,
    event = 7,
    column_select = 8,
    spectrum = 9,
    test = 100,
};

/// Sequential draws from Philox4x32-10 keyed by a 64-bit seed.
///
/// Counter word layout: [0] block index, [1..2] substream (e.g. the trial
/// index), [3] stream id. Two streams that differ in any of (seed, stream,
/// substream) never share a counter, so per-trial streams can be consumed in
/// any order or on any thread with identical results.
class RandomStream
{
public:
    RandomStream(std::uint64_t seed, StreamId stream, std::uint64_t substream = 0) noexcept;

    std::uint32_t next_u32() noexcept;
    std::uint64_t next_u64() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal() noexcept;

    /// Uniform integer in [0, bound), unbiased. bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept;

    /// +1 or -1 with probability 1/2.
    int sign() noexcept { return (next_u32() & 1u) ? 1 : -1; }

private:
    Philox4x32::Key key_;
    Philox4x32::Counter counter_;
    Philox4x32::Counter block_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// SplitMix64 finalizer over a combination of words; used to derive child
/// seeds (one per sweep point, per matrix) from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) noexcept;

} // namespace rdmud
