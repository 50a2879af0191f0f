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

#include "rdmud/detectors.hpp"
#include "rdmud/gram.hpp"
#include "rdmud/linalg.hpp"
#include "rdmud/measurement.hpp"
#include "rdmud/symbols.hpp"

namespace rdmud {

/// Received amplitudes per trial: a constant, or i.i.d. uniform[lo, hi]
/// redrawn every trial for every user (inactive users' gains are drawn too,
/// since the detectors see the whole R).
struct AmplitudeRule
{
    enum class Kind
    {
        constant,
        uniform,
    };
    Kind kind = Kind::constant;
    double value = 1.0;
    double lo = 1.0;
    double hi = 1.5;

    static AmplitudeRule constant(double r) { return {Kind::constant, r, r, r}; }
    static AmplitudeRule uniform(double lo, double hi) { return {Kind::uniform, 1.0, lo, hi}; }

    void validate() const;
    /// Smallest magnitude the rule can produce (used by the bounds).
    double min_magnitude() const;
    double max_magnitude() const;
    std::string label() const;
};

/// A fixed measurement setup over which trials are drawn.
struct Scenario
{
    MeasurementMatrix A;
    GramMatrix G = GramMatrix::identity(1);
    Index K = 1;
    AmplitudeRule amplitudes;
    double sigma2 = 0.0;
    std::uint64_t master_seed = 0;
    /// Debug mode: the same active set on every trial.
    std::optional<std::vector<Index>> fixed_support;

    Index users() const noexcept { return A.cols(); }
    void validate() const;
};

/// Everything drawn for one trial.
///
/// Draw order on the trial stream (substream = trial index): the active set
/// by partial Fisher-Yates, K symbols, N amplitudes (uniform rule only), then
/// N standard normals g. With v = sigma L^-T g ~ N(0, sigma2 G^-1) and
/// x = R b + v, the front-end output is y = A x and the MF-bank output is
/// z = G x, so both observation models share the same noise realization.
struct TrialDraw
{
    SymbolVector truth;
    AmplitudeProfile gains;
    CVector y;
    RVector z;
};

struct TrialOutcome
{
    bool support_correct = false;
    bool symbols_correct = false;
    bool detector_failed = false;
    Index reselections = 0;

    bool joint_error() const noexcept { return !(support_correct && symbols_correct); }
};

struct PeEstimate
{
    std::uint64_t trials = 0;
    std::uint64_t support_errors = 0;
    std::uint64_t joint_errors = 0;
    std::uint64_t detector_failures = 0;
    std::uint64_t reselections = 0;

    double pe() const;
    /// 1.96 sqrt(p (1 - p) / n).
    double ci_halfwidth() const;
    /// Support-correct trials with a symbol error, over support-correct trials.
    std::optional<double> conditional_symbol_error() const;
    /// sqrt(q (1 - q) / m) for the conditional estimate over m support-correct trials.
    std::optional<double> conditional_standard_error() const;
    std::uint64_t symbol_errors_given_support() const { return joint_errors - support_errors; }

    void add(const TrialOutcome& o);
    PeEstimate& operator+=(const PeEstimate& other);
};

/// Exact two-sided Clopper-Pearson interval for k successes in n trials.
std::pair<double, double> clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence = 0.95);

/// Monte Carlo engine for one scenario. Precomputes the noise factor once;
/// draws are pure functions of (master seed, trial index).
class MonteCarlo
{
public:
    explicit MonteCarlo(Scenario scenario);

    const Scenario& scenario() const noexcept { return scenario_; }

    TrialDraw draw(std::uint64_t trial_index) const;

    TrialOutcome run_trial(const PreparedDetector& detector, const TrialDraw& draw) const;
    TrialOutcome run_trial(const DetectorSpec& spec, std::uint64_t trial_index) const;

    /// Runs every detector on the same trials 0 .. trials-1 (common random
    /// numbers). The result does not depend on `threads`.
    std::vector<PeEstimate> estimate_pe(const std::vector<DetectorSpec>& detectors, std::uint64_t trials,
                                        unsigned threads = 0) const;
    PeEstimate estimate_pe(const DetectorSpec& detector, std::uint64_t trials, unsigned threads = 0) const;

    /// Sums over trials [first, last); used to check chunking invariance.
    std::vector<PeEstimate> estimate_range(const std::vector<DetectorSpec>& detectors, std::uint64_t first,
                                           std::uint64_t last, unsigned threads = 0) const;

private:
    Scenario scenario_;
    RMatrix A_re_;
    RMatrix A_im_;
    RMatrix noise_factor_; // sigma L^-T
};

struct TuneResult
{
    double threshold = 0.0;
    PeEstimate estimate;
    std::vector<double> grid;               // ascending
    std::vector<PeEstimate> grid_estimates; // aligned with grid
};

/// Grid search for the rddt (xi) or rddft (eps) threshold with common random
/// numbers; the argmin is returned, ties to the smaller threshold. `base`
/// supplies the family and any other settings. Throws InvalidArgument on an
/// empty grid or a non-threshold family.
TuneResult tune_threshold(const MonteCarlo& mc, const DetectorSpec& base, std::vector<double> grid,
                          std::uint64_t trials, unsigned threads = 0);

struct EventEstimate
{
    std::uint64_t trials = 0;
    std::uint64_t violations = 0;
    double tau = 0.0;

    double rate() const { return trials ? static_cast<double>(violations) / static_cast<double>(trials) : 0.0; }
    double standard_error() const;
};

/// Noise-only draws of w ~ N(0, sigma2 A G^-1 A^H); counts max_n |a_n^H w| >= tau.
EventEstimate estimate_event_g(const MeasurementMatrix& A, const GramMatrix& G, double sigma2, double alpha,
                               std::uint64_t trials, std::uint64_t seed, unsigned threads = 0);

/// Resolves 0 to the hardware concurrency.
unsigned resolve_threads(unsigned threads);

/// Runs body(first, last, worker) over [begin, end) in fixed-size chunks on
/// up to `threads` workers.
template <class Body>
void parallel_chunks(std::uint64_t begin, std::uint64_t end, unsigned threads, std::uint64_t chunk, Body&& body);

} // namespace rdmud

#include "rdmud/detail/parallel.hpp"
