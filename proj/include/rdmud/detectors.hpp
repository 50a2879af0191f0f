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
#include <string>
#include <vector>

#include "rdmud/gram.hpp"
#include "rdmud/linalg.hpp"
#include "rdmud/model.hpp"
#include "rdmud/symbols.hpp"

namespace rdmud {

enum class DetectorFamily
{
    rdd,          // K largest |Re a_n^H y|, sign detection
    rddt,         // |Re a_n^H y| > xi, sign detection
    rddf,         // decision-feedback matching pursuit, K iterations
    rddft,        // decision-feedback until max |Re a_n^H v| < eps
    rd_ls,        // rdd support, least-squares symbols
    rd_mmse,      // rdd support, reduced-dimension MMSE symbols
    rd_ml,        // exhaustive search over {-1, 0, 1}^N
    decorrelator, // conventional MF bank + G^-1, all users active
};

enum class SymbolStage
{
    sign,
    ls,
    mmse,
};

std::string to_string(DetectorFamily family);
std::string to_string(SymbolStage stage);
DetectorFamily parse_detector_family(const std::string& name);
SymbolStage parse_symbol_stage(const std::string& name);

struct DetectorSpec
{
    DetectorFamily family = DetectorFamily::rdd;
    std::optional<Index> K;
    std::optional<double> xi;
    std::optional<double> eps;
    bool whiten = false;
    /// Symbol rule. rd_ls / rd_mmse imply ls / mmse; for rddf / rddft a
    /// non-sign stage re-decides all symbols on the current support every
    /// iteration (the "modified" decision-feedback detector).
    SymbolStage symbol_stage = SymbolStage::sign;
    /// Exponential guard for rd_ml.
    Index ml_max_users = 14;

    /// Throws InvalidArgument when a required parameter is missing or invalid.
    void validate() const;

    /// Effective symbol rule after folding in rd_ls / rd_mmse.
    SymbolStage effective_stage() const;

    /// Compact, comma-free name such as "rddf+ls", "rddt[xi=0.84]+white".
    std::string label() const;
};

struct DetectionResult
{
    std::vector<Index> support; // ascending
    std::vector<int> symbols;   // length N, 0 off the support
    Index iterations = 0;       // decision-feedback iterations performed
    Index reselections = 0;     // decision-feedback picks of an index already in the support
    RVector scores;             // Re a_n^H y on the input observation

    SymbolVector symbol_vector() const;
};

/// sgn with sgn(0) = 0.
inline int sgn(double x) noexcept
{
    return (x > 0.0) - (x < 0.0);
}

/// Re[A^H y].
RVector decision_statistics(const CMatrix& A, const CVector& y);

/// Indices of the K largest |scores|, ties to the lower index, returned ascending.
std::vector<Index> top_k_support(const RVector& scores, Index K);

DetectionResult rdd(const CVector& y, const CMatrix& A, const AmplitudeProfile& gains, Index K);
DetectionResult rddt(const CVector& y, const CMatrix& A, const AmplitudeProfile& gains, double xi);

/// Symbol decisions restricted to a support (returned as a length-N vector).
std::vector<int> sign_symbols(const RVector& scores, const AmplitudeProfile& gains, const std::vector<Index>& support);

/// sgn(r_n Re[(A_I^H A_I)^-1 A_I^H y]_n) on the support. Throws
/// LeastSquaresSingularError when A_I does not have full column rank.
std::vector<int> rd_ls_symbols(const CVector& y, const CMatrix& A, const AmplitudeProfile& gains,
                               const std::vector<Index>& support);

/// sgn(r_n Re[(M y)_n]) with M = R_I A_I^H (A_I R_I^2 A_I^H + C)^-1 and
/// C = sigma2 A G^-1 A^H given as `noise_covariance`. Throws
/// LeastSquaresSingularError when the bracket is singular.
std::vector<int> rd_mmse_symbols(const CVector& y, const CMatrix& A, const AmplitudeProfile& gains,
                                 const CMatrix& noise_covariance, const std::vector<Index>& support);
std::vector<int> rd_mmse_symbols(const CVector& y, const CMatrix& A, const GramMatrix& G, const AmplitudeProfile& gains,
                                 double sigma2, const std::vector<Index>& support);

/// Context for the non-sign symbol stages.
struct SymbolStageContext
{
    SymbolStage stage = SymbolStage::sign;
    const CMatrix* noise_covariance = nullptr; // required for mmse
};

DetectionResult rddf(const CVector& y, const CMatrix& A, const AmplitudeProfile& gains, Index K,
                     const SymbolStageContext& stage = {});
/// Stops once max_n |Re a_n^H v| < eps, or after N iterations.
DetectionResult rddft(const CVector& y, const CMatrix& A, const AmplitudeProfile& gains, double eps,
                      const SymbolStageContext& stage = {});

/// Exhaustive maximum-likelihood search over ternary vectors.
///
/// Maximizes 2 Re[y^H S^-1 A R b] - b^H R A^H S^-1 A R b with S = A G^-1 A^H.
/// Without K, all 3^N candidates are scanned in lexicographic order
/// (b_0 most significant, -1 < 0 < 1) and the first maximizer wins; with K
/// only vectors with exactly K nonzeros are scanned.
class MlDetector
{
public:
    MlDetector(const CMatrix& A, const GramMatrix& G, const AmplitudeProfile& gains, Index max_users = 14);

    double objective(const CVector& y, const std::vector<int>& b) const;
    DetectionResult detect(const CVector& y, std::optional<Index> K = std::nullopt) const;

    Index users() const noexcept { return gains_.size(); }

private:
    CMatrix weighted_;  // S^-1 A, M x N
    RMatrix quadratic_; // R Re(A^H S^-1 A) R
    RVector gains_;
    Index max_users_;
};

DetectionResult rd_ml(const CVector& y, const CMatrix& A, const GramMatrix& G, const AmplitudeProfile& gains,
                      std::optional<Index> K = std::nullopt, Index max_users = 14);

/// b_n = sgn(r_n [G^-1 z]_n) for every user.
std::vector<int> conventional_decorrelator(const RVector& z, const GramMatrix& G, const AmplitudeProfile& gains);

/// A detector bound to (A, G, sigma2) with whitening, noise covariance and ML
/// state precomputed. Reentrant: detect() may be called concurrently.
class PreparedDetector
{
public:
    PreparedDetector(DetectorSpec spec, const CMatrix& A, const GramMatrix& G, double sigma2);

    const DetectorSpec& spec() const noexcept { return spec_; }

    /// True for the conventional decorrelator, which consumes MF-bank output.
    bool uses_mf_bank() const noexcept { return spec_.family == DetectorFamily::decorrelator; }

    DetectionResult detect(const CVector& y, const AmplitudeProfile& gains) const;
    DetectionResult detect_mf_bank(const RVector& z, const AmplitudeProfile& gains) const;

private:
    DetectorSpec spec_;
    CMatrix A_; // detection-domain matrix (A_w when whitening)
    GramMatrix G_;
    std::optional<CMatrix> whitening_transform_;
    CMatrix noise_covariance_; // detection-domain covariance (sigma2 I after whitening)
    double sigma2_;
};

/// Runs `spec` on (W y, A_w) where W = (A G^-1 A^H)^{-1/2}.
DetectionResult apply_whitened(DetectorSpec spec, const CVector& y, const CMatrix& A, const GramMatrix& G,
                               const AmplitudeProfile& gains, double sigma2);

} // namespace rdmud
