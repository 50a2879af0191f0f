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

#include "rdmud/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "rdmud/error.hpp"

namespace rdmud {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

} // namespace

double BoundParams::r_min() const
{
    return sorted_gains.empty() ? 0.0 : sorted_gains.back();
}
double BoundParams::r_max() const
{
    return sorted_gains.empty() ? 0.0 : sorted_gains.front();
}

void BoundParams::validate() const
{
    if (!(alpha > 0.0))
        throw InvalidArgument(fmt::format("alpha must be positive, got {}", alpha));
    if (N < 2)
        throw InvalidArgument(fmt::format("N must be at least 2, got {}", N));
    if (K < 1 || K > N)
        throw InvalidArgument(fmt::format("K = {} is outside [1, {}]", K, N));
    if (!(mu >= 0.0 && mu <= 1.0))
        throw InvalidArgument(fmt::format("coherence {} is outside [0, 1]", mu));
    if (!(sigma2 >= 0.0))
        throw InvalidArgument("sigma2 must be nonnegative");
    if (sorted_gains.empty())
        throw InvalidArgument("at least one gain is required");
}

BoundParams make_bound_params(const MeasurementMatrix& A, const GramMatrix& G, const AmplitudeProfile& gains, Index K,
                              double sigma2, double alpha)
{
    if (A.cols() != G.dim() || gains.size() != G.dim())
        throw DimensionError("A, G and the amplitudes disagree on N");
    BoundParams p;
    p.alpha = alpha;
    p.N = A.cols();
    p.K = K;
    p.sigma2 = sigma2;
    p.mu = A.has_coherence() ? A.coherence() : 0.0;
    p.sorted_gains = gains.sorted_magnitudes();
    p.lambda_max_ginv = G.lambda_max_inverse();
    p.row_energy = A.row_energy();
    p.validate();
    return p;
}

double implied_pe_bound(double alpha, Index N)
{
    const double logN = std::log(static_cast<double>(N));
    return std::pow(static_cast<double>(N), -alpha) / std::sqrt(std::numbers::pi * (1.0 + alpha) * logN);
}

double tau(const BoundParams& p)
{
    if (!(p.alpha > 0.0) || p.N < 2)
        throw InvalidArgument("tau requires alpha > 0 and N >= 2");
    const double logN = std::log(static_cast<double>(p.N));
    return std::sqrt(p.sigma2) * std::sqrt(2.0 * (1.0 + p.alpha) * logN) * std::sqrt(p.lambda_max_ginv) *
           std::sqrt(p.row_energy);
}

ConditionReport check_rdd_condition(const BoundParams& p)
{
    p.validate();
    ConditionReport r;
    r.tau = tau(p);
    r.lhs = p.r_min() - static_cast<double>(2 * p.K - 1) * p.mu * p.r_max();
    r.rhs = 2.0 * r.tau;
    r.holds = r.lhs >= r.rhs;
    r.implied_pe_bound = implied_pe_bound(p.alpha, p.N);
    return r;
}

ConditionReport check_rddf_condition(const BoundParams& p)
{
    p.validate();
    ConditionReport r;
    r.tau = tau(p);
    r.lhs = p.r_min() - static_cast<double>(2 * p.K - 1) * p.mu * p.r_min();
    r.rhs = 2.0 * r.tau;
    r.holds = r.lhs >= r.rhs;
    r.implied_pe_bound = implied_pe_bound(p.alpha, p.N);
    return r;
}

std::optional<ThresholdRange> xi_range(const BoundParams& p)
{
    p.validate();
    const double t = tau(p);
    const double k = static_cast<double>(p.K);
    ThresholdRange r{k * p.mu * p.r_max() + t, p.r_min() - (k - 1.0) * p.mu * p.r_max() - t};
    if (r.lower >= r.upper)
        return std::nullopt;
    return r;
}

std::optional<ThresholdRange> eps_range(const BoundParams& p)
{
    p.validate();
    const double t = tau(p);
    const auto count = std::min<std::size_t>(p.sorted_gains.size(), static_cast<std::size_t>(p.K));
    double upper = inf;
    for (std::size_t i = 0; i < count; ++i)
    {
        const double k = static_cast<double>(i + 1);
        upper = std::min(upper, p.sorted_gains[i] * (1.0 - (static_cast<double>(p.K) - k) * p.mu) - t);
    }
    if (!(t < upper))
        return std::nullopt;
    return ThresholdRange{t, upper};
}

double snr_min(const BoundParams& p)
{
    if (p.sigma2 == 0.0)
        return inf;
    const double r = p.r_min();
    return r * r / (p.sigma2 * p.lambda_max_ginv);
}

std::optional<double> beta_rdd(const BoundParams& p)
{
    p.validate();
    const double bracket = 1.0 - static_cast<double>(2 * p.K - 1) * p.mu * p.r_max() / p.r_min();
    if (bracket < 0.0)
        return std::nullopt;
    return bracket * bracket / p.row_energy;
}

std::optional<double> beta_rddf(const BoundParams& p)
{
    p.validate();
    const double bracket = 1.0 - static_cast<double>(2 * p.K - 1) * p.mu;
    if (!(bracket > 0.0))
        return std::nullopt;
    return bracket * bracket / p.row_energy;
}

double pe_bound_from_beta(double snr, double beta, Index N)
{
    const double x = snr * beta / 2.0;
    if (!(x > 0.0))
        return inf;
    if (std::isinf(x))
        return 0.0;
    return 2.0 * static_cast<double>(N) / std::sqrt(std::numbers::pi) / std::sqrt(x) * std::exp(-x / 4.0);
}

double pe_bound_rdd(const BoundParams& p)
{
    const auto beta = beta_rdd(p);
    return beta ? pe_bound_from_beta(snr_min(p), *beta, p.N) : inf;
}

double pe_bound_rddf(const BoundParams& p)
{
    const auto beta = beta_rddf(p);
    return beta ? pe_bound_from_beta(snr_min(p), *beta, p.N) : inf;
}

double pe_bound_decorrelator(double snr, Index N)
{
    if (!(snr > 0.0))
        return inf;
    if (std::isinf(snr))
        return 0.0;
    const double x = snr / 2.0;
    return static_cast<double>(N) / (2.0 * std::sqrt(std::numbers::pi)) / std::sqrt(x) * std::exp(-x);
}

CoherenceBound dft_coherence_bound(Index M, Index N, double c)
{
    if (M < 1 || N < 2)
        throw InvalidArgument("dft_coherence_bound requires M >= 1 and N >= 2");
    const double logN = std::log(static_cast<double>(N));
    return {std::sqrt(4.0 * (2.0 * logN + c) / static_cast<double>(M)), std::max(0.0, 1.0 - 2.0 * std::exp(-c))};
}

double snr_requirement(Index N)
{
    if (N < 1)
        throw InvalidArgument("N must be positive");
    return 8.0 * std::log(static_cast<double>(N));
}

double q_function(double x)
{
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

} // namespace rdmud
