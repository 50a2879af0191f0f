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

#include "rdmud/measurement.hpp"

#include <cmath>

#include <fmt/format.h>

#include "rdmud/error.hpp"

namespace rdmud {

namespace {

MeasurementMatrix::Stats compute_stats(const CMatrix& A)
{
    const CMatrix gram = A.adjoint() * A;
    MeasurementMatrix::Stats stats;
    stats.row_energy = gram.colwise().squaredNorm().maxCoeff();
    if (A.cols() >= 2)
    {
        double mu = 0.0;
        for (Index l = 0; l < gram.cols(); ++l)
            for (Index n = 0; n < l; ++n)
                mu = std::max(mu, std::abs(gram(n, l)));
        stats.coherence = std::min(mu, 1.0);
    }
    return stats;
}

void check_norms(const CMatrix& A)
{
    if (A.rows() == 0 || A.cols() == 0)
        throw DimensionError("measurement matrix must be nonempty");
    for (Index n = 0; n < A.cols(); ++n)
    {
        const double norm = A.col(n).norm();
        if (!(std::abs(norm - 1.0) <= MeasurementMatrix::norm_tolerance))
            throw InvalidArgument(fmt::format("column {} has norm {:.17g}, expected 1", n, norm));
    }
}

} // namespace

MeasurementMatrix::MeasurementMatrix(CMatrix values) : values_(std::move(values))
{
    check_norms(values_);
    stats_ = compute_stats(values_);
}

MeasurementMatrix::MeasurementMatrix(CMatrix values, Stats stats) : values_(std::move(values)), stats_(stats)
{
    check_norms(values_);
}

MeasurementMatrix MeasurementMatrix::normalized(CMatrix raw)
{
    for (Index n = 0; n < raw.cols(); ++n)
    {
        const double norm = raw.col(n).norm();
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw InvalidArgument(fmt::format("column {} cannot be normalized (norm {})", n, norm));
        raw.col(n) /= norm;
    }
    return MeasurementMatrix(std::move(raw));
}

double MeasurementMatrix::coherence() const
{
    if (!stats_.coherence)
        throw InvalidArgument("coherence is undefined for a matrix with a single column");
    return *stats_.coherence;
}

bool MeasurementMatrix::is_real() const
{
    return values_.imag().cwiseAbs().maxCoeff() == 0.0;
}

MeasurementMatrix MeasurementMatrix::select_columns(std::span<const Index> columns) const
{
    CMatrix out(rows(), static_cast<Index>(columns.size()));
    for (std::size_t k = 0; k < columns.size(); ++k)
    {
        if (columns[k] < 0 || columns[k] >= cols())
            throw InvalidArgument(fmt::format("column index {} outside [0, {})", columns[k], cols()));
        out.col(static_cast<Index>(k)) = values_.col(columns[k]);
    }
    return MeasurementMatrix(std::move(out));
}

double coherence(const CMatrix& A)
{
    if (A.cols() < 2)
        throw InvalidArgument("coherence is undefined for a matrix with a single column");
    return *compute_stats(A).coherence;
}

double max_row_energy(const CMatrix& A)
{
    return compute_stats(A).row_energy;
}

double column_norm_deviation(const CMatrix& A)
{
    double worst = 0.0;
    for (Index n = 0; n < A.cols(); ++n)
        worst = std::max(worst, std::abs(A.col(n).norm() - 1.0));
    return worst;
}

} // namespace rdmud
