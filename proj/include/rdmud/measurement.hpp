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

#include <optional>
#include <span>

#include "rdmud/linalg.hpp"

namespace rdmud {

/// Coefficient matrix A (M x N, complex) of the reduced-dimension front-end.
///
/// Every column has unit Euclidean norm (tolerance 1e-12). The coherence
/// mu = max_{n != l} |a_n^H a_l| and the row energy max_n a_n^H A A^H a_n are
/// computed once at construction from the Gram matrix A^H A.
class MeasurementMatrix
{
public:
    static constexpr double norm_tolerance = 1e-12;

    struct Stats
    {
        std::optional<double> coherence; // empty for a single column
        double row_energy = 1.0;
    };

    MeasurementMatrix() = default;

    /// Throws InvalidArgument when a column norm deviates from 1.
    explicit MeasurementMatrix(CMatrix values);

    /// For structured matrices whose statistics are known in closed form
    /// (Kerdock subselections with thousands of columns). Norms are still checked.
    MeasurementMatrix(CMatrix values, Stats stats);

    /// Scales every column to unit norm first. Zero columns are rejected.
    static MeasurementMatrix normalized(CMatrix raw);

    Index rows() const noexcept { return values_.rows(); }
    Index cols() const noexcept { return values_.cols(); }
    const CMatrix& values() const noexcept { return values_; }

    /// Throws InvalidArgument when the matrix has a single column.
    double coherence() const;
    bool has_coherence() const noexcept { return stats_.coherence.has_value(); }
    double row_energy() const noexcept { return stats_.row_energy; }

    /// True when every imaginary part is exactly zero.
    bool is_real() const;

    MeasurementMatrix select_columns(std::span<const Index> columns) const;

private:
    CMatrix values_;
    Stats stats_;
};

/// max over n != l of |a_n^H a_l|. Requires at least two columns.
double coherence(const CMatrix& A);

/// max_n a_n^H A A^H a_n, i.e. the largest squared column norm of A^H A.
double max_row_energy(const CMatrix& A);

/// Returns the largest deviation | ||a_n|| - 1 | over the columns.
double column_norm_deviation(const CMatrix& A);

} // namespace rdmud
