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
#include <vector>

#include "rdmud/gram.hpp"
#include "rdmud/linalg.hpp"
#include "rdmud/measurement.hpp"
#include "rdmud/symbols.hpp"

namespace rdmud {

/// Inputs to the closed-form performance guarantees. Logarithms are natural.
struct BoundParams
{
    double alpha = 1.0;
    Index N = 0;
    Index K = 0;
    double sigma2 = 0.0;
    double mu = 0.0;
    /// |r^(1)| >= |r^(2)| >= ... over the K active users.
    std::vector<double> sorted_gains;
    double lambda_max_ginv = 1.0;
    double row_energy = 1.0;

    double r_min() const;
    double r_max() const;

    /// Throws InvalidArgument on alpha <= 0, N < 2, K outside [1, N],
    /// mu outside [0, 1], a negative sigma2 or an empty gain list.
    void validate() const;
};

/// Measures mu, row energy and lambda_max(G^-1) from the instance. `gains`
/// supplies the K magnitudes used for r_min / r_max (all N users when their
/// count differs from K, i.e. the worst case over supports).
BoundParams make_bound_params(const MeasurementMatrix& A, const GramMatrix& G, const AmplitudeProfile& gains, Index K,
                              double sigma2, double alpha);

struct ConditionReport
{
    double tau = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    double implied_pe_bound = 0.0;
};

struct ThresholdRange
{
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double x) const noexcept { return lower < x && x < upper; }
};

struct CoherenceBound
{
    double bound = 0.0;
    double probability_floor = 0.0;
};

/// sigma sqrt(2 (1 + alpha) ln N) sqrt(lambda_max(G^-1)) sqrt(row energy).
double tau(const BoundParams& p);

/// N^-alpha [pi (1 + alpha) ln N]^-1/2.
double implied_pe_bound(double alpha, Index N);

/// |r_min| - (2K - 1) mu |r_max| >= 2 tau.
ConditionReport check_rdd_condition(const BoundParams& p);

/// |r_min| - (2K - 1) mu |r_min| >= 2 tau.
ConditionReport check_rddf_condition(const BoundParams& p);

/// Admissible RDDt thresholds (K mu |r_max| + tau, |r_min| - (K - 1) mu |r_max| - tau),
/// with K read as the sparsity upper bound. Empty when lower >= upper.
std::optional<ThresholdRange> xi_range(const BoundParams& p);

/// Admissible RDDFt thresholds (tau, min_k |r^(k)| (1 - (K - k) mu) - tau).
std::optional<ThresholdRange> eps_range(const BoundParams& p);

/// |r_min|^2 / (sigma2 lambda_max(G^-1)); +inf for sigma2 = 0.
double snr_min(const BoundParams& p);

/// [1 - (2K - 1) mu |r_max| / |r_min|]^2 / row energy, or nullopt when the bracket is negative.
std::optional<double> beta_rdd(const BoundParams& p);

/// [1 - (2K - 1) mu]^2 / row energy, or nullopt unless the bracket is positive.
std::optional<double> beta_rddf(const BoundParams& p);

/// (2N / sqrt(pi)) [snr beta / 2]^-1/2 exp(-snr beta / 8).
double pe_bound_from_beta(double snr, double beta, Index N);

/// Closed-form bounds in terms of SNR_min; +inf when the beta precondition fails.
double pe_bound_rdd(const BoundParams& p);
double pe_bound_rddf(const BoundParams& p);

/// (N / (2 sqrt(pi))) (snr / 2)^-1/2 exp(-snr / 2).
double pe_bound_decorrelator(double snr, Index N);

/// sqrt(4 (2 ln N + c) / M) and the floor max(0, 1 - 2 e^-c).
CoherenceBound dft_coherence_bound(Index M, Index N, double c);

/// 8 ln N.
double snr_requirement(Index N);

/// Gaussian tail Q(x).
double q_function(double x);

} // namespace rdmud
