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
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rdmud/bounds.hpp"
#include "rdmud/config.hpp"
#include "rdmud/monte_carlo.hpp"

namespace rdmud {

/// A run with one sweep value substituted.
struct ScenarioPoint
{
    std::string sweep_var;
    std::string sweep_value;
    RunConfig run; // N, K, M, sigma2 and detectors reflect the sweep value
};

std::vector<ScenarioPoint> expand_points(const RunConfig& run);

GramMatrix build_gram(const GramConfig& cfg, Index N, std::uint64_t master_seed);
std::string gram_label(const GramConfig& cfg);

/// Matrix for (M, N); search seeds derive from the master seed unless the config fixes one.
MeasurementMatrix build_matrix(const MatrixConfig& cfg, Index M, Index N, std::uint64_t master_seed, unsigned threads);

/// Master seed of the per-trial streams. Shared by all points so sweeps use common random numbers.
std::uint64_t trial_seed(std::uint64_t master_seed);

struct ResultRow
{
    std::string sweep_var;
    std::string sweep_value;
    std::string detector;
    Index N = 0;
    Index M = 0;
    Index K = 0;
    double sigma2 = 0.0;
    std::string gram;
    std::string matrix_kind;
    std::optional<double> mu;
    PeEstimate estimate;
    std::uint64_t master_seed = 0;
};

struct ExperimentOptions
{
    unsigned threads = 0;
    std::optional<std::uint64_t> trials; // overrides every run's trial count
    std::function<void(const std::string&)> log;
};

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, const ExperimentOptions& options = {});

/// Shortest round-trip decimal form.
std::string format_number(double x);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const ResultRow& row);
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

struct BoundsRow
{
    std::string sweep_var;
    std::string sweep_value;
    Index N = 0;
    Index M = 0;
    Index K = 0;
    double sigma2 = 0.0;
    BoundParams params;
    double tau = 0.0;
    double snr_min = 0.0;
    double snr_requirement = 0.0;
    ConditionReport rdd;
    ConditionReport rddf;
    std::optional<ThresholdRange> xi;
    std::optional<ThresholdRange> eps;
    std::optional<double> beta_rdd;
    std::optional<double> beta_rddf;
    double pe_bound_rdd = 0.0;
    double pe_bound_rddf = 0.0;
    double pe_bound_decorrelator = 0.0;
};

/// Bound parameters for a scenario. Uniform amplitudes enter as the worst
/// case: r_max = hi and every other active gain at lo.
BoundParams scenario_bound_params(const MeasurementMatrix& A, const GramMatrix& G, const AmplitudeRule& amplitudes,
                                  Index K, double sigma2, double alpha);
BoundsRow evaluate_bounds(const BoundParams& params);

std::vector<BoundsRow> evaluate_bounds(const ExperimentConfig& cfg, unsigned threads = 0);

/// "key value" table for humans.
void write_bounds_table(std::ostream& out, const BoundsRow& row);
void write_bounds_csv(std::ostream& out, const std::vector<BoundsRow>& rows);

/// Formats a bound, printing "+inf (no guarantee)" for the sentinel.
std::string format_bound(double x);

} // namespace rdmud
