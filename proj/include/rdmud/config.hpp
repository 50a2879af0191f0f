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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rdmud/detectors.hpp"
#include "rdmud/matrix_factory.hpp"
#include "rdmud/monte_carlo.hpp"

namespace rdmud {

struct MatrixConfig
{
    MatrixKind kind = MatrixKind::partial_dft;
    std::optional<Index> rows;
    std::optional<std::uint64_t> seed; // derived from the master seed when absent
    Index search = 10000;
    std::string path;
    bool normalize = false;
};

enum class GramKind
{
    identity,
    gold,
    spectrum,
    file,
};

struct GramConfig
{
    GramKind kind = GramKind::identity;
    Index gold_length = 1023;
    /// Explicit eigenvalues, or N evenly spaced values over `linspace`.
    std::vector<double> eigenvalues;
    std::optional<std::pair<double, double>> linspace;
    std::optional<std::uint64_t> seed;
    std::string path;
};

struct DetectorConfig
{
    DetectorSpec spec;
    bool tune = false;       // xi or eps chosen per sweep point by grid search
    bool explicit_k = false; // otherwise K follows the scenario
};

enum class SweepVariable
{
    none,
    M,
    K,
    N,
    sigma2,
    detector,
};

std::string to_string(SweepVariable v);

struct SweepConfig
{
    SweepVariable variable = SweepVariable::none;
    std::vector<double> values;         // numeric sweeps
    std::vector<std::string> detectors; // detector sweep: family names
};

struct TuneConfig
{
    std::vector<double> xi_grid;
    std::vector<double> eps_grid;
    std::uint64_t trials = 5000;
};

/// One fully resolved experiment: a base scenario with an optional sweep.
struct RunConfig
{
    std::string label;
    Index N = 100;
    Index K = 2;
    std::optional<Index> M; // defaults to matrix.rows
    double sigma2 = 0.005;
    double alpha = 1.0;
    MatrixConfig matrix;
    GramConfig gram;
    AmplitudeRule amplitudes;
    std::vector<DetectorConfig> detectors;
    std::uint64_t trials = 10000;
    SweepConfig sweep;
    TuneConfig tune;
};

struct ExperimentConfig
{
    std::string name;
    std::string notes;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string output;
    std::vector<RunConfig> runs;
};

/// Validates and resolves a configuration document. Each element of "runs"
/// is merged (JSON merge patch) onto the document without "runs". All schema
/// violations are collected and reported together in one ConfigError, one
/// per line, each prefixed with its JSON path.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(const std::string& text, const std::string& source);
ExperimentConfig load_config(const std::string& path);

/// Replaces the master seed with RDMUD_SEED when that variable is set.
/// Throws ConfigError when it is not an unsigned integer.
void apply_seed_override(ExperimentConfig& cfg);

} // namespace rdmud
