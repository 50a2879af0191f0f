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

#include "rdmud/kerdock.hpp"
#include "rdmud/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <fmt/format.h>

#include "rdmud/error.hpp"
#include "rdmud/matrix_factory.hpp"

namespace rdmud {

namespace {

// Irreducible polynomials over GF(2), bit k = coefficient of x^k.
std::uint32_t field_polynomial(int degree)
{
    switch (degree)
    {
    case 4: return 0x13u;    // x^4 + x + 1
    case 6: return 0x43u;    // x^6 + x + 1
    case 8: return 0x11Du;   // x^8 + x^4 + x^3 + x^2 + 1
    case 10: return 0x409u;  // x^10 + x^3 + 1
    case 12: return 0x1053u; // x^12 + x^6 + x^4 + x + 1
    default: return 0u;
    }
}

int log2_exact(Index M)
{
    if (M <= 0 || (M & (M - 1)) != 0)
        return -1;
    int n = 0;
    while ((Index{1} << n) < M)
        ++n;
    return n;
}

class Gf2n
{
public:
    explicit Gf2n(int degree) : degree_(degree), poly_(field_polynomial(degree)) {}

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept
    {
        std::uint32_t acc = 0;
        while (b != 0)
        {
            if (b & 1u)
                acc ^= a;
            b >>= 1;
            a <<= 1;
            if (a & (1u << degree_))
                a ^= poly_;
        }
        return acc;
    }

    /// Absolute trace z + z^2 + ... + z^(2^(n-1)), an element of GF(2).
    int trace(std::uint32_t z) const noexcept
    {
        std::uint32_t t = z, acc = z;
        for (int i = 1; i < degree_; ++i)
        {
            t = mul(t, t);
            acc ^= t;
        }
        return static_cast<int>(acc & 1u);
    }

    int degree() const noexcept { return degree_; }

private:
    int degree_;
    std::uint32_t poly_;
};

/// Z4 phase table q(x) = x^T S_alpha x mod 4 for all x in GF(2)^n.
std::vector<int> quadratic_phases(const Gf2n& field, std::uint32_t alpha)
{
    const int n = field.degree();
    // S[k][l] = Tr(alpha x^(k+l)).
    std::vector<int> S(static_cast<std::size_t>(n * n));
    std::vector<std::uint32_t> powers(static_cast<std::size_t>(2 * n - 1));
    powers[0] = 1u;
    for (std::size_t i = 1; i < powers.size(); ++i)
        powers[i] = field.mul(powers[i - 1], 2u);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            S[static_cast<std::size_t>(k * n + l)] =
                field.trace(field.mul(alpha, powers[static_cast<std::size_t>(k + l)]));

    const std::size_t size = std::size_t{1} << n;
    std::vector<int> q(size);
    for (std::size_t x = 0; x < size; ++x)
    {
        int acc = 0;
        for (int k = 0; k < n; ++k)
        {
            if (!((x >> k) & 1u))
                continue;
            acc += S[static_cast<std::size_t>(k * n + k)];
            for (int l = k + 1; l < n; ++l)
                if ((x >> l) & 1u)
                    acc += 2 * S[static_cast<std::size_t>(k * n + l)];
        }
        q[x] = acc & 3;
    }
    return q;
}

void require_dimension(Index M)
{
    if (!is_kerdock_dimension(M))
        throw UnsupportedDimensionError(
            fmt::format("Kerdock frames need M = 2^(m+1) with m odd and m >= 3 (16, 64, 256, 1024, 4096), got {}", M));
}

} // namespace

bool is_kerdock_dimension(Index M)
{
    const int n = log2_exact(M);
    return n >= 4 && n % 2 == 0 && field_polynomial(n) != 0u;
}

CMatrix kerdock_columns(Index M, std::span<const Index> columns)
{
    require_dimension(M);
    const Gf2n field(log2_exact(M));
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    const Complex units[4] = {{scale, 0.0}, {0.0, scale}, {-scale, 0.0}, {0.0, -scale}};

    CMatrix out(M, static_cast<Index>(columns.size()));
    std::map<std::uint32_t, std::vector<int>> phase_cache;
    for (std::size_t c = 0; c < columns.size(); ++c)
    {
        const Index j = columns[c];
        if (j < 0 || j >= M * M)
            throw InvalidArgument(fmt::format("Kerdock column {} outside [0, {})", j, M * M));
        const auto alpha = static_cast<std::uint32_t>(j / M);
        const auto b = static_cast<std::uint32_t>(j % M);
        auto it = phase_cache.find(alpha);
        if (it == phase_cache.end())
            it = phase_cache.emplace(alpha, quadratic_phases(field, alpha)).first;
        const std::vector<int>& q = it->second;
        for (Index x = 0; x < M; ++x)
        {
            const int parity = __builtin_parity(b & static_cast<std::uint32_t>(x));
            out(x, static_cast<Index>(c)) = units[(q[static_cast<std::size_t>(x)] + 2 * parity) & 3];
        }
    }
    return out;
}

MeasurementMatrix gen_kerdock(Index M)
{
    require_dimension(M);
    std::vector<Index> all(static_cast<std::size_t>(M * M));
    for (Index j = 0; j < M * M; ++j)
        all[static_cast<std::size_t>(j)] = j;
    CMatrix A = kerdock_columns(M, all);
    if (M <= 64)
        return MeasurementMatrix(std::move(A));
    // Union of M mutually unbiased bases: mu = 1/sqrt(M), A A^H = M I.
    return MeasurementMatrix(std::move(A), {1.0 / std::sqrt(static_cast<double>(M)), static_cast<double>(M)});
}

MeasurementMatrix kerdock_subselect(Index M, Index count, std::uint64_t seed)
{
    require_dimension(M);
    if (count < 1 || count > M * M)
        throw InvalidArgument(fmt::format("cannot select {} of {} Kerdock columns", count, M * M));

    // Rejection sampling of distinct indices avoids materializing M^2 slots.
    std::vector<Index> picked;
    if (count * 4 >= M * M)
    {
        picked = random_subset(M * M, count, seed);
    }
    else
    {
        RandomStream rng(seed, StreamId::column_select);
        std::vector<Index> sorted;
        while (static_cast<Index>(picked.size()) < count)
        {
            const auto j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(M * M)));
            auto pos = std::lower_bound(sorted.begin(), sorted.end(), j);
            if (pos != sorted.end() && *pos == j)
                continue;
            sorted.insert(pos, j);
            picked.push_back(j);
        }
        std::sort(picked.begin(), picked.end());
    }

    CMatrix A = kerdock_columns(M, picked);
    if (count <= 512)
        return MeasurementMatrix(std::move(A));

    // Columns within a basis are orthogonal; across bases |a^H a'|^2 = 1/M.
    std::map<Index, Index> per_basis;
    for (Index j : picked)
        ++per_basis[j / M];
    Index smallest = count;
    for (const auto& [basis, k] : per_basis)
        smallest = std::min(smallest, k);
    MeasurementMatrix::Stats stats;
    stats.coherence = per_basis.size() > 1 ? 1.0 / std::sqrt(static_cast<double>(M)) : 0.0;
    stats.row_energy = 1.0 + static_cast<double>(count - smallest) / static_cast<double>(M);
    return MeasurementMatrix(std::move(A), stats);
}

} // namespace rdmud
