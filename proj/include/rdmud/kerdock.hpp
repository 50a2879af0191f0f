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
#include <span>

#include "rdmud/linalg.hpp"
#include "rdmud/measurement.hpp"

namespace rdmud {

/// M = 2^(m+1) with m odd and m >= 3, i.e. M in {16, 64, 256, 1024, 4096}.
bool is_kerdock_dimension(Index M);

/// Columns of the M x M^2 quaternary Kerdock frame.
///
/// With n = log2(M), the frame is the union of M orthonormal bases indexed by
/// alpha in GF(2^n). Column j = alpha * M + b has entries
///
///   a_j(x) = i^{x^T S_alpha x} (-1)^{b . x} / sqrt(M),   x in GF(2)^n,
///
/// where S_alpha[k][l] = Tr(alpha x^k x^l) in the polynomial basis and the
/// quadratic form is evaluated over Z4. S_alpha + S_beta = S_{alpha+beta} is
/// nonsingular for alpha != beta, which makes any two bases mutually
/// unbiased: |a_j^H a_k| is 0 or 1/sqrt(M).
CMatrix kerdock_columns(Index M, std::span<const Index> columns);

/// Full M x M^2 frame. Throws UnsupportedDimensionError for other M.
MeasurementMatrix gen_kerdock(Index M);

/// `count` distinct Kerdock columns chosen uniformly at random without
/// building the full frame; coherence and row energy come in closed form.
MeasurementMatrix kerdock_subselect(Index M, Index count, std::uint64_t seed);

} // namespace rdmud
