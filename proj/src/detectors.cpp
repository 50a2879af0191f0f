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

#include "rdmud/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "rdmud/error.hpp"

namespace rdmud {

namespace {

void check_observation(const CVector& y, const CMatrix& A, const AmplitudeProfile& gains)
{
    if (y.size() != A.rows())
        throw DimensionError(fmt::format("observation has length {}, expected {}", y.size(), A.rows()));
    if (gains.size() != A.cols())
        throw DimensionError(fmt::format("amplitude profile has {} entries, expected {}", gains.size(), A.cols()));
}

Index argmax_abs(const RVector& s)
{
    Index best = 0;
    for (Index n = 1; n < s.size(); ++n)
        if (std::abs(s[n]) > std::abs(s[best]))
            best = n;
    return best;
}

std::vector<Index> support_of(const std::vector<int>& symbols)
{
    std::vector<Index> out;
    for (std::size_t n = 0; n < symbols.size(); ++n)
        if (symbols[n] != 0)
            out.push_back(static_cast<Index>(n));
    return out;
}

CMatrix select(const CMatrix& A, const std::vector<Index>& support)
{
    CMatrix out(A.rows(), static_cast<Index>(support.size()));
    for (std::size_t k = 0; k < support.size(); ++k)
        out.col(static_cast<Index>(k)) = A.col(support[k]);
    return out;
}

// Symbols for the current feedback support under a non-sign stage.
std::vector<int> stage_symbols(const CVector& y, const CMatrix& A, const AmplitudeProfile& gains,
                               const std::vector<Index>& support, const SymbolStageContext& ctx)
{
    if (ctx.stage == SymbolStage::ls)
        return rd_ls_symbols(y, A, gains, support);
    if (ctx.noise_covariance == nullptr)
        throw InvalidArgument("mmse symbol stage requires the noise covariance");
    return rd_mmse_symbols(y, A, gains, *ctx.noise_covariance, support);
}

DetectionResult feedback(const CVector& y, const CMatrix& A, const AmplitudeProfile& gains, Index max_iterations,
                         std::optional<double> eps, const SymbolStageContext& ctx)
{
    check_observation(y, A, gains);
    const Index N = A.cols();
    DetectionResult out;
    out.symbols.assign(static_cast<std::size_t>(N), 0);
    out.scores = decision_statistics(A, y);

    std::vector<Index> picked; // feedback support, kept ascending
    CVector v = y;
    RVector stat = out.scores;
    for (Index k = 0; k < max_iterations; ++k)
    {
        const Index n = argmax_abs(stat);
        if (eps && !(std::abs(stat[n]) >= *eps))
            break;
        ++out.iterations;
        auto pos = std::lower_bound(picked.begin(), picked.end(), n);
        if (pos != picked.end() && *pos == n)
            ++out.reselections;
        else
            picked.insert(pos, n);

        if (ctx.stage == SymbolStage::sign)
        {
            out.symbols[static_cast<std::size_t>(n)] = sgn(gains[n] * stat[n]);
        }
        else
        {
            out.symbols = stage_symbols(y, A, gains, picked, ctx);
        }

        v = y;
        for (Index m : picked)
        {
            const int b = out.symbols[static_cast<std::size_t>(m)];
            if (b != 0)
                v.noalias() -= (gains[m] * b) * A.col(m);
        }
        stat = decision_statistics(A, v);
    }
    out.support = picked;
    return out;
}

} // namespace

std::string to_string(DetectorFamily family)
{
    switch (family)
    {
    case DetectorFamily::rdd: return "rdd";
    case DetectorFamily::rddt: return "rddt";
    case DetectorFamily::rddf: return "rddf";
    case DetectorFamily::rddft: return "rddft";
    case DetectorFamily::rd_ls: return "rd-ls";
    case DetectorFamily::rd_mmse: return "rd-mmse";
    case DetectorFamily::rd_ml: return "rd-ml";
    case DetectorFamily::decorrelator: return "decorrelator";
    }
    return "?";
}

std::string to_string(SymbolStage stage)
{
    switch (stage)
    {
    case SymbolStage::sign: return "sign";
    case SymbolStage::ls: return "ls";
    case SymbolStage::mmse: return "mmse";
    }
    return "?";
}

DetectorFamily parse_detector_family(const std::string& name)
{
    for (auto f : {DetectorFamily::rdd, DetectorFamily::rddt, DetectorFamily::rddf, DetectorFamily::rddft,
                   DetectorFamily::rd_ls, DetectorFamily::rd_mmse, DetectorFamily::rd_ml, DetectorFamily::decorrelator})
        if (to_string(f) == name)
            return f;
    throw InvalidArgument(fmt::format("unknown detector '{}' (expected rdd, rddt, rddf, rddft, rd-ls, rd-mmse, "
                                      "rd-ml or decorrelator)",
                                      name));
}

SymbolStage parse_symbol_stage(const std::string& name)
{
    for (auto s : {SymbolStage::sign, SymbolStage::ls, SymbolStage::mmse})
        if (to_string(s) == name)
            return s;
    throw InvalidArgument(fmt::format("unknown symbol stage '{}' (expected sign, ls or mmse)", name));
}

void DetectorSpec::validate() const
{
    auto need_k = [&] {
        if (!K)
            throw InvalidArgument(fmt::format("detector {} requires K", to_string(family)));
        if (*K < 1)
            throw InvalidArgument(fmt::format("detector {} requires K >= 1, got {}", to_string(family), *K));
    };
    switch (family)
    {
    case DetectorFamily::rdd:
    case DetectorFamily::rd_ls:
    case DetectorFamily::rd_mmse:
    case DetectorFamily::rddf: need_k(); break;
    case DetectorFamily::rddt:
        if (!xi || !std::isfinite(*xi) || *xi < 0.0)
            throw InvalidArgument("detector rddt requires a finite threshold xi >= 0");
        break;
    case DetectorFamily::rddft:
        if (!eps || !std::isfinite(*eps) || *eps < 0.0)
            throw InvalidArgument("detector rddft requires a finite threshold eps >= 0");
        break;
    case DetectorFamily::rd_ml:
        if (K && *K < 0)
            throw InvalidArgument(fmt::format("detector rd-ml requires K >= 0, got {}", *K));
        if (ml_max_users < 1)
            throw InvalidArgument("ml_max_users must be positive");
        break;
    case DetectorFamily::decorrelator: break;
    }
    if (symbol_stage != SymbolStage::sign && family != DetectorFamily::rddf && family != DetectorFamily::rddft &&
        family != DetectorFamily::rdd)
        throw InvalidArgument(
            fmt::format("symbol stage {} is not available for {}", to_string(symbol_stage), to_string(family)));
}

SymbolStage DetectorSpec::effective_stage() const
{
    if (family == DetectorFamily::rd_ls)
        return SymbolStage::ls;
    if (family == DetectorFamily::rd_mmse)
        return SymbolStage::mmse;
    return symbol_stage;
}

std::string DetectorSpec::label() const
{
    std::string out = to_string(family);
    if (family == DetectorFamily::rddt && xi)
        out += fmt::format("[xi={}]", *xi);
    if (family == DetectorFamily::rddft && eps)
        out += fmt::format("[eps={}]", *eps);
    if (family == DetectorFamily::rd_ml && K)
        out += fmt::format("[K={}]", *K);
    if (symbol_stage != SymbolStage::sign && family != DetectorFamily::rd_ls && family != DetectorFamily::rd_mmse)
        out += "+" + to_string(symbol_stage);
    if (whiten)
        out += "+white";
    return out;
}

SymbolVector DetectionResult::symbol_vector() const
{
    return SymbolVector(symbols);
}

RVector decision_statistics(const CMatrix& A, const CVector& y)
{
    return (A.adjoint() * y).real();
}

std::vector<Index> top_k_support(const RVector& scores, Index K)
{
    if (K < 0 || K > scores.size())
        throw InvalidArgument(fmt::format("K = {} is outside [0, {}]", K, scores.size()));
    std::vector<Index> idx(static_cast<std::size_t>(scores.size()));
    std::iota(idx.begin(), idx.end(), Index{0});
    std::partial_sort(idx.begin(), idx.begin() + K, idx.end(), [&](Index a, Index b) {
        const double fa = std::abs(scores[a]), fb = std::abs(scores[b]);
        return fa > fb || (fa == fb && a < b);
    });
    idx.resize(static_cast<std::size_t>(K));
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::vector<int> sign_symbols(const RVector& scores, const AmplitudeProfile& gains, const std::vector<Index>& support)
{
    std::vector<int> out(static_cast<std::size_t>(scores.size()), 0);
    for (Index n : support)
        out[static_cast<std::size_t>(n)] = sgn(gains[n] * scores[n]);
    return out;
}

DetectionResult rdd(const CVector& y, const CMatrix& A, const AmplitudeProfile& gains, Index K)
{
    check_observation(y, A, gains);
    DetectionResult out;
    out.scores = decision_statistics(A, y);
    out.support = top_k_support(out.scores, K);
    out.symbols = sign_symbols(out.scores, gains, out.support);
    return out;
}

DetectionResult rddt(const CVector& y, const CMatrix& A, const AmplitudeProfile& gains, double xi)
{
    check_observation(y, A, gains);
    DetectionResult out;
    out.scores = decision_statistics(A, y);
    for (Index n = 0; n < out.scores.size(); ++n)
        if (std::abs(out.scores[n]) > xi)
            out.support.push_back(n);
    out.symbols = sign_symbols(out.scores, gains, out.support);
    return out;
}

std::vector<int> rd_ls_symbols(const CVector& y, const CMatrix& A, const AmplitudeProfile& gains,
                               const std::vector<Index>& support)
{
    check_observation(y, A, gains);
    std::vector<int> out(static_cast<std::size_t>(A.cols()), 0);
    if (support.empty())
        return out;
    const auto k = static_cast<Index>(support.size());
    if (k > A.rows())
        throw LeastSquaresSingularError(
            fmt::format("least squares needs at most {} columns, support has {}", A.rows(), k));
    const CMatrix AI = select(A, support);
    Eigen::ColPivHouseholderQR<CMatrix> qr(AI);
    qr.setThreshold(1e-10);
    if (qr.rank() < k)
        throw LeastSquaresSingularError(
            fmt::format("selected columns are rank deficient (rank {} < {})", qr.rank(), k));
    const CVector x = qr.solve(y);
    for (Index j = 0; j < k; ++j)
    {
        const Index n = support[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(n)] = sgn(gains[n] * x[j].real());
    }
    return out;
}

std::vector<int> rd_mmse_symbols(const CVector& y, const CMatrix& A, const AmplitudeProfile& gains,
                                 const CMatrix& noise_covariance, const std::vector<Index>& support)
{
    check_observation(y, A, gains);
    if (noise_covariance.rows() != A.rows() || noise_covariance.cols() != A.rows())
        throw DimensionError("noise covariance must be M x M");
    std::vector<int> out(static_cast<std::size_t>(A.cols()), 0);
    if (support.empty())
        return out;
    CMatrix W = noise_covariance;
    for (Index n : support)
        W.noalias() += (gains[n] * gains[n]) * A.col(n) * A.col(n).adjoint();
    Eigen::LDLT<CMatrix> ldlt(W);
    const double scale = W.cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(scale > 0.0) || ldlt.rcond() < 1e-13)
        throw LeastSquaresSingularError("MMSE filter matrix is singular");
    const CVector u = ldlt.solve(y);
    for (Index n : support)
    {
        const double stat = gains[n] * (A.col(n).adjoint() * u).value().real();
        out[static_cast<std::size_t>(n)] = sgn(gains[n] * stat);
    }
    return out;
}

std::vector<int> rd_mmse_symbols(const CVector& y, const CMatrix& A, const GramMatrix& G, const AmplitudeProfile& gains,
                                 double sigma2, const std::vector<Index>& support)
{
    return rd_mmse_symbols(y, A, gains, noise_covariance(A, G, sigma2).covariance, support);
}

DetectionResult rddf(const CVector& y, const CMatrix& A, const AmplitudeProfile& gains, Index K,
                     const SymbolStageContext& stage)
{
    if (K < 0)
        throw InvalidArgument(fmt::format("K must be nonnegative, got {}", K));
    return feedback(y, A, gains, K, std::nullopt, stage);
}

DetectionResult rddft(const CVector& y, const CMatrix& A, const AmplitudeProfile& gains, double eps,
                      const SymbolStageContext& stage)
{
    if (!(eps >= 0.0))
        throw InvalidArgument("eps must be nonnegative");
    return feedback(y, A, gains, A.cols(), eps, stage);
}

MlDetector::MlDetector(const CMatrix& A, const GramMatrix& G, const AmplitudeProfile& gains, Index max_users)
    : gains_(gains.gains()), max_users_(max_users)
{
    if (A.cols() != G.dim() || gains.size() != A.cols())
        throw DimensionError("ML detector: A, G and the amplitudes disagree on N");
    const CMatrix S = A * G.solve(CMatrix(A.adjoint()));
    Eigen::LDLT<CMatrix> ldlt(S);
    if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-13)
        throw WhiteningUndefinedError("A G^-1 A^H is singular; the ML metric is undefined");
    weighted_ = ldlt.solve(A);
    quadratic_ = (A.adjoint() * weighted_).real();
    quadratic_ = 0.5 * (quadratic_ + quadratic_.transpose()).eval();
    quadratic_ = gains_.asDiagonal() * quadratic_ * gains_.asDiagonal();
}

double MlDetector::objective(const CVector& y, const std::vector<int>& b) const
{
    if (static_cast<Index>(b.size()) != gains_.size())
        throw DimensionError("symbol vector length mismatch");
    RVector x(gains_.size());
    for (Index n = 0; n < x.size(); ++n)
        x[n] = b[static_cast<std::size_t>(n)];
    const RVector c = gains_.cwiseProduct((weighted_.adjoint() * y).real());
    return 2.0 * c.dot(x) - x.dot(quadratic_ * x);
}

DetectionResult MlDetector::detect(const CVector& y, std::optional<Index> K) const
{
    const Index N = gains_.size();
    if (y.size() != weighted_.rows())
        throw DimensionError(fmt::format("observation has length {}, expected {}", y.size(), weighted_.rows()));
    if (N > max_users_)
        throw InvalidArgument(fmt::format("exhaustive ML over {} users exceeds the limit of {}", N, max_users_));
    const RVector c = gains_.cwiseProduct((weighted_.adjoint() * y).real());
    const RMatrix& H = quadratic_;

    std::vector<int> best;
    double best_value = -std::numeric_limits<double>::infinity();
    auto consider = [&](const std::vector<int>& b, double value) {
        if (best.empty() || value > best_value + 1e-12 * (1.0 + std::abs(best_value)))
        {
            best_value = value;
            best = b;
        }
    };

    if (!K)
    {
        // Odometer over {-1, 0, 1}^N with incremental objective updates.
        std::vector<int> b(static_cast<std::size_t>(N), -1);
        RVector x = RVector::Constant(N, -1.0);
        RVector Hx = H * x;
        double f = 2.0 * c.dot(x) - x.dot(Hx);
        consider(b, f);
        for (;;)
        {
            Index j = N - 1;
            while (j >= 0 && b[static_cast<std::size_t>(j)] == 1)
                --j;
            if (j < 0)
                break;
            auto step = [&](Index i, double delta) {
                f += 2.0 * c[i] * delta - 2.0 * delta * Hx[i] - H(i, i) * delta * delta;
                Hx.noalias() += delta * H.col(i);
                x[i] += delta;
                b[static_cast<std::size_t>(i)] += static_cast<int>(delta);
            };
            step(j, 1.0);
            for (Index i = j + 1; i < N; ++i)
                step(i, -2.0);
            consider(b, f);
        }
    }
    else
    {
        const Index k = *K;
        if (k < 0 || k > N)
            throw InvalidArgument(fmt::format("K = {} is outside [0, {}]", k, N));
        std::vector<Index> idx(static_cast<std::size_t>(k));
        std::iota(idx.begin(), idx.end(), Index{0});
        std::vector<int> b(static_cast<std::size_t>(N), 0);
        for (;;)
        {
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask)
            {
                std::fill(b.begin(), b.end(), 0);
                // Within a support, sign patterns run from all -1 upward so the scan stays lexicographic.
                for (Index t = 0; t < k; ++t)
                    b[static_cast<std::size_t>(idx[static_cast<std::size_t>(t)])] =
                        ((mask >> (k - 1 - t)) & 1U) ? 1 : -1;
                double f = 0.0;
                for (Index s = 0; s < k; ++s)
                {
                    const Index i = idx[static_cast<std::size_t>(s)];
                    const double bi = b[static_cast<std::size_t>(i)];
                    f += 2.0 * c[i] * bi;
                    for (Index t = 0; t < k; ++t)
                    {
                        const Index l = idx[static_cast<std::size_t>(t)];
                        f -= bi * H(i, l) * b[static_cast<std::size_t>(l)];
                    }
                }
                consider(b, f);
            }
            Index t = k - 1;
            while (t >= 0 && idx[static_cast<std::size_t>(t)] == N - k + t)
                --t;
            if (t < 0)
                break;
            ++idx[static_cast<std::size_t>(t)];
            for (Index s = t + 1; s < k; ++s)
                idx[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(s - 1)] + 1;
        }
    }

    DetectionResult out;
    out.symbols = best;
    out.support = support_of(best);
    out.scores = (weighted_.adjoint() * y).real();
    return out;
}

DetectionResult rd_ml(const CVector& y, const CMatrix& A, const GramMatrix& G, const AmplitudeProfile& gains,
                      std::optional<Index> K, Index max_users)
{
    return MlDetector(A, G, gains, max_users).detect(y, K);
}

std::vector<int> conventional_decorrelator(const RVector& z, const GramMatrix& G, const AmplitudeProfile& gains)
{
    if (z.size() != G.dim() || gains.size() != G.dim())
        throw DimensionError("decorrelator: z, G and the amplitudes disagree on N");
    const RVector x = G.solve(RMatrix(z)).col(0);
    std::vector<int> out(static_cast<std::size_t>(z.size()));
    for (Index n = 0; n < z.size(); ++n)
        out[static_cast<std::size_t>(n)] = sgn(gains[n] * x[n]);
    return out;
}

PreparedDetector::PreparedDetector(DetectorSpec spec, const CMatrix& A, const GramMatrix& G, double sigma2)
    : spec_(std::move(spec)), A_(A), G_(G), sigma2_(sigma2)
{
    spec_.validate();
    if (A.cols() != G.dim())
        throw DimensionError(fmt::format("A has {} columns but G is {} x {}", A.cols(), G.dim(), G.dim()));
    if (spec_.family == DetectorFamily::decorrelator)
        return;
    if (spec_.whiten)
    {
        Whitening w = whitening_transform(A, G);
        whitening_transform_ = std::move(w.transform);
        A_ = std::move(w.whitened);
        noise_covariance_ = sigma2 * CMatrix::Identity(A.rows(), A.rows());
    }
    else if (spec_.effective_stage() == SymbolStage::mmse)
    {
        noise_covariance_ = noise_covariance(A, G, sigma2).covariance;
    }
}

DetectionResult PreparedDetector::detect(const CVector& y_in, const AmplitudeProfile& gains) const
{
    if (spec_.family == DetectorFamily::decorrelator)
        throw InvalidArgument("the decorrelator consumes matched-filter output; use detect_mf_bank");
    if (y_in.size() != (whitening_transform_ ? whitening_transform_->cols() : A_.rows()))
        throw DimensionError(fmt::format("observation has length {}, expected {}", y_in.size(), A_.rows()));
    const CVector y = whitening_transform_ ? CVector(*whitening_transform_ * y_in) : y_in;
    const SymbolStageContext ctx{spec_.effective_stage(), &noise_covariance_};

    switch (spec_.family)
    {
    case DetectorFamily::rdd:
    case DetectorFamily::rd_ls:
    case DetectorFamily::rd_mmse: {
        DetectionResult out = rdd(y, A_, gains, *spec_.K);
        if (ctx.stage != SymbolStage::sign)
            out.symbols = stage_symbols(y, A_, gains, out.support, ctx);
        return out;
    }
    case DetectorFamily::rddt: return rddt(y, A_, gains, *spec_.xi);
    case DetectorFamily::rddf: return rddf(y, A_, gains, *spec_.K, ctx);
    case DetectorFamily::rddft: return rddft(y, A_, gains, *spec_.eps, ctx);
    case DetectorFamily::rd_ml: return MlDetector(A_, G_, gains, spec_.ml_max_users).detect(y, spec_.K);
    case DetectorFamily::decorrelator: break;
    }
    throw InvalidArgument("unsupported detector");
}

DetectionResult PreparedDetector::detect_mf_bank(const RVector& z, const AmplitudeProfile& gains) const
{
    if (spec_.family != DetectorFamily::decorrelator)
        throw InvalidArgument(fmt::format("{} does not consume matched-filter output", spec_.label()));
    DetectionResult out;
    out.symbols = conventional_decorrelator(z, G_, gains);
    out.support = support_of(out.symbols);
    out.scores = z;
    return out;
}

DetectionResult apply_whitened(DetectorSpec spec, const CVector& y, const CMatrix& A, const GramMatrix& G,
                               const AmplitudeProfile& gains, double sigma2)
{
    spec.whiten = true;
    return PreparedDetector(std::move(spec), A, G, sigma2).detect(y, gains);
}

} // namespace rdmud
