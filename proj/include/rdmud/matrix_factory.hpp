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

#include <cstdint>
#include <string>
#include <vector>

#include "rdmud/gram.hpp"
#include "rdmud/linalg.hpp"
#include "rdmud/measurement.hpp"

namespace rdmud {

enum class MatrixKind
{
    gaussian,
    partial_dft,
    kerdock,
    file,
};

std::string to_string(MatrixKind kind);
/// Accepts "gaussian", "partial-dft", "kerdock", "file"; throws InvalidArgument otherwise.
MatrixKind parse_matrix_kind(const std::string& name);

/// How to obtain a measurement matrix.
///
/// For kerdock, `rows` must be a supported Kerdock dimension; `cols` of 0
/// means all rows^2 columns, fewer selects that many columns at random.
/// `search_count` candidates are drawn and the least coherent one is kept.
struct MatrixRecipe
{
    MatrixKind kind = MatrixKind::partial_dft;
    Index rows = 0;
    Index cols = 0;
    std::uint64_t seed = 0;
    Index search_count = 1;
    std::string path;       // kind == file
    bool normalize = false; // kind == file
};

/// I.i.d. N(0, 1) entries, columns scaled to unit norm. Requires 1 <= M <= N.
MeasurementMatrix gen_gaussian(Index M, Index N, std::uint64_t seed);

/// M distinct rows of the N x N DFT [F]_{kn} = exp(i 2 pi k n / N), drawn
/// uniformly without replacement, scaled by 1/sqrt(M).
MeasurementMatrix gen_partial_dft(Index M, Index N, std::uint64_t seed);

/// Builds the partial DFT for an explicit (sorted) row set.
MeasurementMatrix partial_dft_from_rows(Index N, const std::vector<Index>& rows);

/// Coherence of a partial DFT from its row set in O(M N): a_n^H a_l depends
/// only on (l - n) mod N.
double partial_dft_coherence(Index N, const std::vector<Index>& rows);

struct SearchResult
{
    MeasurementMatrix matrix;
    Index winner = 0;                        // index of the chosen candidate
    std::vector<double> candidate_coherence; // in draw order
};

/// Draws recipe.search_count candidates (candidate i from substream i of the
/// matrix_search stream) and keeps the least coherent; ties go to the
/// earliest draw. Candidates may be scored on `threads` workers; the winner
/// does not depend on the thread count.
SearchResult search_min_coherence(const MatrixRecipe& recipe, unsigned threads = 1);

/// Dispatches on the recipe kind (including file loading and Kerdock).
MeasurementMatrix generate_matrix(const MatrixRecipe& recipe, unsigned threads = 1);

/// `count` distinct columns chosen uniformly at random, kept in ascending order.
MeasurementMatrix subselect_columns(const MeasurementMatrix& A, Index count, std::uint64_t seed);
std::vector<Index> random_subset(Index n, Index count, std::uint64_t seed);

/// sqrt((N - M) / (M (N - 1))); zero when N <= M.
double welch_bound(Index M, Index N);

/// Gold-code Gram matrix ((L+1)/L) I - (1/L) 1 1^T restricted to N x N.
/// Requires N <= L + 2.
GramMatrix gram_gold(Index N, Index L);

struct SpectrumSpec
{
    std::vector<double> eigenvalues;
    std::uint64_t seed = 0;
};

/// G = U diag(eigenvalues) U^T for a seeded Haar-random orthogonal U.
GramMatrix gram_from_spectrum(const SpectrumSpec& spec);

/// QR of a Gaussian matrix with the sign of diag(R) folded into Q.
RMatrix random_orthogonal(Index n, std::uint64_t seed);

} // namespace rdmud
