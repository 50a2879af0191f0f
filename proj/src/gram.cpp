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

#include "rdmud/gram.hpp"

#include <cmath>

#include <fmt/format.h>

#include "rdmud/error.hpp"

namespace rdmud {

GramMatrix::GramMatrix(RMatrix values) : values_(std::move(values))
{
    if (values_.rows() != values_.cols() || values_.rows() == 0)
        throw DimensionError(
            fmt::format("Gram matrix must be square and nonempty, got {}x{}", values_.rows(), values_.cols()));
    if (!values_.allFinite())
        throw SingularGramError("Gram matrix has non-finite entries");

    const double scale = values_.cwiseAbs().maxCoeff();
    const double asym = (values_ - values_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale)
        throw InvalidArgument(fmt::format("Gram matrix is not symmetric (max asymmetry {:.3g})", asym));
    values_ = 0.5 * (values_ + values_.transpose());

    Eigen::SelfAdjointEigenSolver<RMatrix> eig(values_, Eigen::EigenvaluesOnly);
    lambda_min_ = eig.eigenvalues().minCoeff();
    lambda_max_ = eig.eigenvalues().maxCoeff();
    if (!(lambda_min_ > 0.0) || lambda_max_ / lambda_min_ > max_condition)
        throw SingularGramError(fmt::format(
            "Gram matrix is singular or ill-conditioned (eigenvalues in [{:.3g}, {:.3g}])", lambda_min_, lambda_max_));

    llt_.compute(values_);
    if (llt_.info() != Eigen::Success)
        throw SingularGramError("Cholesky factorization of the Gram matrix failed");
}

bool GramMatrix::has_unit_diagonal(double tol) const
{
    return (values_.diagonal().array() - 1.0).abs().maxCoeff() <= tol;
}

RMatrix GramMatrix::solve(const RMatrix& rhs) const
{
    if (rhs.rows() != dim())
        throw DimensionError(fmt::format("cannot apply G^-1 ({}x{}) to {} rows", dim(), dim(), rhs.rows()));
    return llt_.solve(rhs);
}

CMatrix GramMatrix::solve(const CMatrix& rhs) const
{
    if (rhs.rows() != dim())
        throw DimensionError(fmt::format("cannot apply G^-1 ({}x{}) to {} rows", dim(), dim(), rhs.rows()));
    CMatrix out(rhs.rows(), rhs.cols());
    out.real() = llt_.solve(RMatrix(rhs.real()));
    out.imag() = llt_.solve(RMatrix(rhs.imag()));
    return out;
}

RMatrix GramMatrix::cholesky_factor() const
{
    return llt_.matrixL();
}

RMatrix GramMatrix::inverse_factor() const
{
    // L^-T = (L^T)^-1: solve L^T C = I.
    RMatrix identity = RMatrix::Identity(dim(), dim());
    return llt_.matrixU().solve(identity);
}

} // namespace rdmud
