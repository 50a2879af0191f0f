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

#include "rdmud/linalg.hpp"

namespace rdmud {

/// Signature crosscorrelation matrix G: real, symmetric, positive definite.
///
/// Construction validates symmetry (relative 1e-12), positive definiteness and
/// conditioning (condition number at most 1e12), then caches the Cholesky
/// factor G = L L^T and the extreme eigenvalues. G^-1 is never formed; it is
/// applied by triangular solves. Unit diagonal is expected for signature
/// Gram matrices but not enforced, so spectrum-specified stress cases load.
class GramMatrix
{
public:
    static constexpr double max_condition = 1e12;

    explicit GramMatrix(RMatrix values);

    static GramMatrix identity(Index n) { return GramMatrix(RMatrix::Identity(n, n)); }

    Index dim() const noexcept { return values_.rows(); }
    const RMatrix& values() const noexcept { return values_; }

    double lambda_min() const noexcept { return lambda_min_; }
    double lambda_max() const noexcept { return lambda_max_; }
    /// lambda_max(G^-1), computed as 1 / lambda_min(G).
    double lambda_max_inverse() const noexcept { return 1.0 / lambda_min_; }
    double condition() const noexcept { return lambda_max_ / lambda_min_; }

    bool has_unit_diagonal(double tol = 1e-12) const;

    /// G^-1 X via the cached Cholesky factor.
    RMatrix solve(const RMatrix& rhs) const;
    CMatrix solve(const CMatrix& rhs) const;

    /// Lower-triangular L with G = L L^T.
    RMatrix cholesky_factor() const;

    /// C = L^-T, so that C C^T = G^-1. Maps standard normal draws to N(0, G^-1).
    RMatrix inverse_factor() const;

private:
    RMatrix values_;
    Eigen::LLT<RMatrix> llt_;
    double lambda_min_ = 0.0;
    double lambda_max_ = 0.0;
};

} // namespace rdmud
