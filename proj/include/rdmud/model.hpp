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

#include "rdmud/gram.hpp"
#include "rdmud/linalg.hpp"
#include "rdmud/measurement.hpp"
#include "rdmud/rng.hpp"
#include "rdmud/symbols.hpp"

namespace rdmud {

/// Front-end noise w ~ N(0, sigma2 A G^-1 A^H).
///
/// The noise is synthesized the way the analog front-end produces it: the
/// biorthogonal projections of white noise form a real vector v with
/// covariance sigma2 G^-1, and w = A v. `factor` is the M x N matrix
/// sigma A L^-T (G = L L^T), so w = factor g with g a real standard normal
/// N-vector and factor factor^H = covariance.
struct NoiseModel
{
    double sigma2 = 0.0;
    CMatrix covariance; // M x M Hermitian PSD
    CMatrix factor;     // M x N
    RMatrix factor_re;  // real and imaginary parts of factor, kept for the sampling kernel
    RMatrix factor_im;

    Index rows() const noexcept { return covariance.rows(); }
    Index source_dim() const noexcept { return factor.cols(); }

    /// One draw of w using N normals from the stream.
    CVector draw(RandomStream& rng) const;
};

/// Throws DimensionError when A.cols() != G.dim() and InvalidArgument for sigma2 < 0.
NoiseModel noise_covariance(const CMatrix& A, const GramMatrix& G, double sigma2);

/// Reproducibility record of a synthesized observation.
struct Provenance
{
    std::uint64_t seed = 0;
    double sigma2 = 0.0;
};

struct FrontEndObservation
{
    CVector y;
    Provenance provenance;
};

/// y = A R b + w with w drawn from the front_end stream of `seed`.
FrontEndObservation sample_front_end(const CMatrix& A, const GramMatrix& G, const AmplitudeProfile& gains,
                                     const SymbolVector& symbols, double sigma2, std::uint64_t seed);

/// Same, reusing a precomputed noise model and an explicit stream.
CVector sample_front_end(const CMatrix& A, const NoiseModel& noise, const AmplitudeProfile& gains,
                         const SymbolVector& symbols, RandomStream& rng);

/// Matched-filter bank output z = G R b + u with u ~ N(0, sigma2 G).
RVector sample_mf_bank(const GramMatrix& G, const AmplitudeProfile& gains, const SymbolVector& symbols, double sigma2,
                       std::uint64_t seed);

/// Noise-whitening transform W = (A G^-1 A^H)^{-1/2} and A_w = W A.
///
/// Computed by Hermitian eigendecomposition. Eigenvalues below
/// 1e-12 * lambda_max raise WhiteningUndefinedError. A_w columns are left
/// unnormalized.
struct Whitening
{
    CMatrix transform; // W, M x M Hermitian
    CMatrix whitened;  // A_w, M x N
};

Whitening whitening_transform(const CMatrix& A, const GramMatrix& G);

} // namespace rdmud
