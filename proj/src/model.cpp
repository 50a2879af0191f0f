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

#include "rdmud/model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "rdmud/error.hpp"

namespace rdmud {

namespace {

void check_columns(const CMatrix& A, const GramMatrix& G)
{
    if (A.cols() != G.dim())
        throw DimensionError(fmt::format("A has {} columns but G is {}x{}", A.cols(), G.dim(), G.dim()));
}

RVector standard_normals(Index n, RandomStream& rng)
{
    RVector g(n);
    for (Index i = 0; i < n; ++i)
        g[i] = rng.normal();
    return g;
}

} // namespace

CVector NoiseModel::draw(RandomStream& rng) const
{
    const RVector g = standard_normals(factor.cols(), rng);
    CVector w(factor.rows());
    w.real() = factor_re * g;
    w.imag() = factor_im * g;
    return w;
}

NoiseModel noise_covariance(const CMatrix& A, const GramMatrix& G, double sigma2)
{
    check_columns(A, G);
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
        throw InvalidArgument(fmt::format("noise variance must be finite and nonnegative, got {}", sigma2));

    NoiseModel model;
    model.sigma2 = sigma2;
    if (sigma2 == 0.0)
    {
        model.covariance = CMatrix::Zero(A.rows(), A.rows());
        model.factor = CMatrix::Zero(A.rows(), A.cols());
        model.factor_re = RMatrix::Zero(A.rows(), A.cols());
        model.factor_im = RMatrix::Zero(A.rows(), A.cols());
        return model;
    }
    const RMatrix inv_factor = G.inverse_factor();
    model.factor = std::sqrt(sigma2) * (A * inv_factor.cast<Complex>());
    model.factor_re = model.factor.real();
    model.factor_im = model.factor.imag();
    CMatrix cov = model.factor * model.factor.adjoint();
    model.covariance = 0.5 * (cov + cov.adjoint());
    return model;
}

CVector sample_front_end(const CMatrix& A, const NoiseModel& noise, const AmplitudeProfile& gains,
                         const SymbolVector& symbols, RandomStream& rng)
{
    if (noise.rows() != A.rows() || noise.source_dim() != A.cols())
        throw DimensionError("noise model does not match the measurement matrix");
    CVector y = noiseless_response(A, gains, symbols);
    if (noise.sigma2 > 0.0)
        y += noise.draw(rng);
    return y;
}

FrontEndObservation sample_front_end(const CMatrix& A, const GramMatrix& G, const AmplitudeProfile& gains,
                                     const SymbolVector& symbols, double sigma2, std::uint64_t seed)
{
    const NoiseModel noise = noise_covariance(A, G, sigma2);
    RandomStream rng(seed, StreamId::front_end);
    return {sample_front_end(A, noise, gains, symbols, rng), Provenance{seed, sigma2}};
}

RVector sample_mf_bank(const GramMatrix& G, const AmplitudeProfile& gains, const SymbolVector& symbols, double sigma2,
                       std::uint64_t seed)
{
    if (symbols.size() != G.dim() || gains.size() != G.dim())
        throw DimensionError("symbol and gain vectors must match the Gram dimension");
    if (!(sigma2 >= 0.0))
        throw InvalidArgument("noise variance must be nonnegative");
    RVector rb = gains.gains().cwiseProduct(symbols.as_real());
    RVector z = G.values() * rb;
    if (sigma2 > 0.0)
    {
        RandomStream rng(seed, StreamId::mf_bank);
        z += std::sqrt(sigma2) * (G.cholesky_factor() * standard_normals(G.dim(), rng));
    }
    return z;
}

Whitening whitening_transform(const CMatrix& A, const GramMatrix& G)
{
    check_columns(A, G);
    CMatrix sigma = A * G.solve(CMatrix(A.adjoint()));
    sigma = 0.5 * (sigma + sigma.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<CMatrix> eig(sigma);
    if (eig.info() != Eigen::Success)
        throw WhiteningUndefinedError("eigendecomposition of A G^-1 A^H failed");
    const RVector& lambda = eig.eigenvalues();
    const double lmax = lambda.maxCoeff();
    const double floor = 1e-12 * lmax;
    if (!(lmax > 0.0) || lambda.minCoeff() < floor)
        throw WhiteningUndefinedError(fmt::format(
            "A G^-1 A^H is rank deficient (smallest eigenvalue {:.3g}, floor {:.3g})", lambda.minCoeff(), floor));

    const CMatrix& V = eig.eigenvectors();
    const RVector inv_sqrt = lambda.cwiseSqrt().cwiseInverse();
    Whitening out;
    out.transform = V * inv_sqrt.cast<Complex>().asDiagonal() * V.adjoint();
    out.transform = 0.5 * (out.transform + out.transform.adjoint()).eval();
    out.whitened = out.transform * A;
    return out;
}

} // namespace rdmud
