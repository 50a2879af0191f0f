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

#include "rdmud/matrix_factory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "rdmud/error.hpp"
#include "rdmud/kerdock.hpp"
#include "rdmud/matrix_io.hpp"
#include "rdmud/rng.hpp"

namespace rdmud {

namespace {

void check_shape(Index M, Index N)
{
    if (M < 1 || N < 1 || M > N)
        throw InvalidArgument(fmt::format("matrix shape requires 1 <= M <= N, got M = {}, N = {}", M, N));
}

std::vector<Index> draw_subset(Index n, Index count, RandomStream& rng)
{
    // Partial Fisher-Yates: the first `count` slots are a uniform random subset.
    std::vector<Index> pool(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        pool[static_cast<std::size_t>(i)] = i;
    for (Index i = 0; i < count; ++i)
    {
        const Index j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(count));
    std::sort(pool.begin(), pool.end());
    return pool;
}

CMatrix gaussian_candidate(Index M, Index N, RandomStream& rng)
{
    CMatrix raw(M, N);
    // Column-major fill so a column's entries are consecutive draws.
    for (Index n = 0; n < N; ++n)
        for (Index m = 0; m < M; ++m)
            raw(m, n) = Complex(rng.normal(), 0.0);
    return raw;
}

template <class Score>
std::vector<double> score_candidates(Index count, unsigned threads, Score score)
{
    std::vector<double> out(static_cast<std::size_t>(count));
    threads = std::max(1u, threads);
    if (threads == 1 || count < 64)
    {
        for (Index i = 0; i < count; ++i)
            out[static_cast<std::size_t>(i)] = score(i);
        return out;
    }
    std::atomic<Index> next{0};
    auto worker = [&] {
        for (Index i = next++; i < count; i = next++)
            out[static_cast<std::size_t>(i)] = score(i);
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    pool.clear();
    return out;
}

} // namespace

std::string to_string(MatrixKind kind)
{
    switch (kind)
    {
    case MatrixKind::gaussian: return "gaussian";
    case MatrixKind::partial_dft: return "partial-dft";
    case MatrixKind::kerdock: return "kerdock";
    case MatrixKind::file: return "file";
    }
    return "unknown";
}

MatrixKind parse_matrix_kind(const std::string& name)
{
    if (name == "gaussian")
        return MatrixKind::gaussian;
    if (name == "partial-dft")
        return MatrixKind::partial_dft;
    if (name == "kerdock")
        return MatrixKind::kerdock;
    if (name == "file")
        return MatrixKind::file;
    throw InvalidArgument(fmt::format("unknown matrix kind '{}'", name));
}

MeasurementMatrix gen_gaussian(Index M, Index N, std::uint64_t seed)
{
    check_shape(M, N);
    RandomStream rng(seed, StreamId::matrix_search, 0);
    return MeasurementMatrix::normalized(gaussian_candidate(M, N, rng));
}

MeasurementMatrix partial_dft_from_rows(Index N, const std::vector<Index>& rows)
{
    const Index M = static_cast<Index>(rows.size());
    check_shape(M, N);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    CMatrix A(M, N);
    for (Index m = 0; m < M; ++m)
    {
        const Index k = rows[static_cast<std::size_t>(m)];
        if (k < 0 || k >= N)
            throw InvalidArgument(fmt::format("DFT row {} outside [0, {})", k, N));
        for (Index n = 0; n < N; ++n)
        {
            const Index phase = (k * n) % N;
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(N);
            A(m, n) = Complex(scale * std::cos(angle), scale * std::sin(angle));
        }
    }
    // Distinct DFT rows are orthogonal, so A A^H = (N / M) I.
    MeasurementMatrix::Stats stats;
    if (N > 1)
        stats.coherence = partial_dft_coherence(N, rows);
    stats.row_energy = static_cast<double>(N) / static_cast<double>(M);
    return MeasurementMatrix(std::move(A), stats);
}

double partial_dft_coherence(Index N, const std::vector<Index>& rows)
{
    const Index M = static_cast<Index>(rows.size());
    if (N < 2)
        throw InvalidArgument("coherence is undefined for a matrix with a single column");
    if (M == N)
        return 0.0; // the full DFT is unitary
    std::vector<double> cos_table(static_cast<std::size_t>(N)), sin_table(static_cast<std::size_t>(N));
    for (Index j = 0; j < N; ++j)
    {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(N);
        cos_table[static_cast<std::size_t>(j)] = std::cos(angle);
        sin_table[static_cast<std::size_t>(j)] = std::sin(angle);
    }
    double best = 0.0;
    // |sum_m w^{k_m d}| = |sum_m w^{k_m (N-d)}|, so d <= N/2 suffices.
    for (Index d = 1; d <= N / 2; ++d)
    {
        double re = 0.0, im = 0.0;
        for (Index k : rows)
        {
            const auto j = static_cast<std::size_t>((k * d) % N);
            re += cos_table[j];
            im += sin_table[j];
        }
        best = std::max(best, std::hypot(re, im));
    }
    return std::min(best / static_cast<double>(M), 1.0);
}

MeasurementMatrix gen_partial_dft(Index M, Index N, std::uint64_t seed)
{
    check_shape(M, N);
    RandomStream rng(seed, StreamId::matrix_search, 0);
    return partial_dft_from_rows(N, draw_subset(N, M, rng));
}

std::vector<Index> random_subset(Index n, Index count, std::uint64_t seed)
{
    if (count < 0 || count > n)
        throw InvalidArgument(fmt::format("cannot choose {} of {} items", count, n));
    RandomStream rng(seed, StreamId::column_select);
    return draw_subset(n, count, rng);
}

MeasurementMatrix subselect_columns(const MeasurementMatrix& A, Index count, std::uint64_t seed)
{
    const auto columns = random_subset(A.cols(), count, seed);
    return A.select_columns(columns);
}

SearchResult search_min_coherence(const MatrixRecipe& recipe, unsigned threads)
{
    if (recipe.search_count < 1)
        throw InvalidArgument("search count must be at least 1");

    SearchResult result;
    switch (recipe.kind)
    {
    case MatrixKind::partial_dft: {
        check_shape(recipe.rows, recipe.cols);
        auto rows_of = [&](Index i) {
            RandomStream rng(recipe.seed, StreamId::matrix_search, static_cast<std::uint64_t>(i));
            return draw_subset(recipe.cols, recipe.rows, rng);
        };
        if (recipe.cols < 2)
        {
            result.candidate_coherence.assign(static_cast<std::size_t>(recipe.search_count), 0.0);
            result.matrix = partial_dft_from_rows(recipe.cols, rows_of(0));
            return result;
        }
        result.candidate_coherence = score_candidates(
            recipe.search_count, threads, [&](Index i) { return partial_dft_coherence(recipe.cols, rows_of(i)); });
        break;
    }
    case MatrixKind::gaussian: {
        check_shape(recipe.rows, recipe.cols);
        result.candidate_coherence = score_candidates(recipe.search_count, threads, [&](Index i) {
            RandomStream rng(recipe.seed, StreamId::matrix_search, static_cast<std::uint64_t>(i));
            CMatrix raw = gaussian_candidate(recipe.rows, recipe.cols, rng);
            return recipe.cols < 2 ? 0.0 : coherence(MeasurementMatrix::normalized(std::move(raw)).values());
        });
        break;
    }
    case MatrixKind::kerdock:
    case MatrixKind::file:
        result.matrix = generate_matrix(recipe, threads);
        result.candidate_coherence = {result.matrix.has_coherence() ? result.matrix.coherence() : 0.0};
        return result;
    }

    const auto& scores = result.candidate_coherence;
    result.winner = static_cast<Index>(std::min_element(scores.begin(), scores.end()) - scores.begin());

    RandomStream rng(recipe.seed, StreamId::matrix_search, static_cast<std::uint64_t>(result.winner));
    if (recipe.kind == MatrixKind::partial_dft)
        result.matrix = partial_dft_from_rows(recipe.cols, draw_subset(recipe.cols, recipe.rows, rng));
    else
        result.matrix = MeasurementMatrix::normalized(gaussian_candidate(recipe.rows, recipe.cols, rng));
    return result;
}

MeasurementMatrix generate_matrix(const MatrixRecipe& recipe, unsigned threads)
{
    switch (recipe.kind)
    {
    case MatrixKind::gaussian:
    case MatrixKind::partial_dft: return search_min_coherence(recipe, threads).matrix;
    case MatrixKind::kerdock: {
        if (!is_kerdock_dimension(recipe.rows))
            throw UnsupportedDimensionError(
                fmt::format("Kerdock frames need M = 2^(m+1) with m odd and m >= 3 (16, 64, 256, 1024, 4096), got {}",
                            recipe.rows));
        const Index full = recipe.rows * recipe.rows;
        if (recipe.cols == 0 || recipe.cols == full)
            return gen_kerdock(recipe.rows);
        if (recipe.cols < 0 || recipe.cols > full)
            throw InvalidArgument(
                fmt::format("a {}-row Kerdock frame has {} columns, requested {}", recipe.rows, full, recipe.cols));
        return kerdock_subselect(recipe.rows, recipe.cols, recipe.seed);
    }
    case MatrixKind::file: return load_matrix(recipe.path, recipe.normalize);
    }
    throw InvalidArgument("unknown matrix kind");
}

double welch_bound(Index M, Index N)
{
    if (M < 1)
        throw InvalidArgument("Welch bound needs M >= 1");
    if (N <= M)
        return 0.0;
    return std::sqrt(static_cast<double>(N - M) / (static_cast<double>(M) * static_cast<double>(N - 1)));
}

GramMatrix gram_gold(Index N, Index L)
{
    if (N < 1 || L < 1 || N > L + 2)
        throw InvalidArgument(
            fmt::format("Gold codes of length {} support at most {} users, requested {}", L, L + 2, N));
    const double l = static_cast<double>(L);
    RMatrix G = RMatrix::Constant(N, N, -1.0 / l);
    // (L+1)/L - 1/L on the diagonal is exactly one.
    G.diagonal().setOnes();
    return GramMatrix(std::move(G));
}

RMatrix random_orthogonal(Index n, std::uint64_t seed)
{
    RandomStream rng(seed, StreamId::spectrum);
    RMatrix X(n, n);
    for (Index c = 0; c < n; ++c)
        for (Index r = 0; r < n; ++r)
            X(r, c) = rng.normal();
    Eigen::HouseholderQR<RMatrix> qr(X);
    RMatrix Q = qr.householderQ() * RMatrix::Identity(n, n);
    const RMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index c = 0; c < n; ++c)
        if (R(c, c) < 0.0)
            Q.col(c) = -Q.col(c);
    return Q;
}

GramMatrix gram_from_spectrum(const SpectrumSpec& spec)
{
    const Index n = static_cast<Index>(spec.eigenvalues.size());
    if (n == 0)
        throw InvalidArgument("spectrum is empty");
    RVector eigs(n);
    for (Index i = 0; i < n; ++i)
    {
        eigs[i] = spec.eigenvalues[static_cast<std::size_t>(i)];
        if (!(eigs[i] > 0.0) || !std::isfinite(eigs[i]))
            throw InvalidArgument(fmt::format("eigenvalue {} = {} must be positive", i, eigs[i]));
    }
    const RMatrix U = random_orthogonal(n, spec.seed);
    RMatrix G = U * eigs.asDiagonal() * U.transpose();
    G = 0.5 * (G + G.transpose()).eval();
    return GramMatrix(std::move(G));
}

} // namespace rdmud
