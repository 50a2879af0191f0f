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

#include "rdmud/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/beta.hpp>
#include <fmt/format.h>

#include "rdmud/bounds.hpp"
#include "rdmud/error.hpp"

namespace rdmud {

namespace {

constexpr std::uint64_t trial_chunk = 256;

} // namespace

void AmplitudeRule::validate() const
{
    if (kind == Kind::constant)
    {
        if (!std::isfinite(value) || value == 0.0)
            throw InvalidArgument(fmt::format("constant amplitude must be finite and nonzero, got {}", value));
    }
    else if (!(lo > 0.0 && lo <= hi && std::isfinite(hi)))
    {
        throw InvalidArgument(fmt::format("uniform amplitudes need 0 < lo <= hi, got [{}, {}]", lo, hi));
    }
}

double AmplitudeRule::min_magnitude() const
{
    return kind == Kind::constant ? std::abs(value) : lo;
}
double AmplitudeRule::max_magnitude() const
{
    return kind == Kind::constant ? std::abs(value) : hi;
}

std::string AmplitudeRule::label() const
{
    return kind == Kind::constant ? fmt::format("{}", value) : fmt::format("uniform[{};{}]", lo, hi);
}

void Scenario::validate() const
{
    if (A.cols() != G.dim())
        throw DimensionError(fmt::format("A has {} columns but G is {} x {}", A.cols(), G.dim(), G.dim()));
    if (K < 1 || K > A.cols())
        throw InvalidArgument(fmt::format("K = {} is outside [1, {}]", K, A.cols()));
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
        throw InvalidArgument(fmt::format("sigma2 must be finite and nonnegative, got {}", sigma2));
    amplitudes.validate();
    if (fixed_support)
    {
        if (static_cast<Index>(fixed_support->size()) != K)
            throw InvalidArgument("fixed support must have K entries");
        std::vector<Index> s = *fixed_support;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end() || s.front() < 0 || s.back() >= A.cols())
            throw InvalidArgument("fixed support must hold distinct indices below N");
    }
}

double PeEstimate::pe() const
{
    return trials ? static_cast<double>(joint_errors) / static_cast<double>(trials) : 0.0;
}

double PeEstimate::ci_halfwidth() const
{
    if (trials == 0)
        return 0.0;
    const double p = pe();
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

std::optional<double> PeEstimate::conditional_symbol_error() const
{
    const std::uint64_t m = trials - support_errors;
    if (m == 0)
        return std::nullopt;
    return static_cast<double>(symbol_errors_given_support()) / static_cast<double>(m);
}

std::optional<double> PeEstimate::conditional_standard_error() const
{
    const auto q = conditional_symbol_error();
    if (!q)
        return std::nullopt;
    return std::sqrt(*q * (1.0 - *q) / static_cast<double>(trials - support_errors));
}

void PeEstimate::add(const TrialOutcome& o)
{
    ++trials;
    support_errors += o.support_correct ? 0 : 1;
    joint_errors += o.joint_error() ? 1 : 0;
    detector_failures += o.detector_failed ? 1 : 0;
    reselections += static_cast<std::uint64_t>(o.reselections);
}

PeEstimate& PeEstimate::operator+=(const PeEstimate& other)
{
    trials += other.trials;
    support_errors += other.support_errors;
    joint_errors += other.joint_errors;
    detector_failures += other.detector_failures;
    reselections += other.reselections;
    return *this;
}

std::pair<double, double> clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence)
{
    if (n == 0 || k > n || !(confidence > 0.0 && confidence < 1.0))
        throw InvalidArgument("clopper_pearson needs 0 <= k <= n, n > 0 and confidence in (0, 1)");
    const double a = (1.0 - confidence) / 2.0;
    const auto kd = static_cast<double>(k);
    const auto nd = static_cast<double>(n);
    const double lower = k == 0 ? 0.0 : boost::math::quantile(boost::math::beta_distribution<>(kd, nd - kd + 1.0), a);
    const double upper =
        k == n ? 1.0 : boost::math::quantile(boost::math::beta_distribution<>(kd + 1.0, nd - kd), 1.0 - a);
    return {lower, upper};
}

unsigned resolve_threads(unsigned threads)
{
    if (threads != 0)
        return threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

MonteCarlo::MonteCarlo(Scenario scenario) : scenario_(std::move(scenario))
{
    scenario_.validate();
    A_re_ = scenario_.A.values().real();
    A_im_ = scenario_.A.values().imag();
    noise_factor_ = std::sqrt(scenario_.sigma2) * scenario_.G.inverse_factor();
}

TrialDraw MonteCarlo::draw(std::uint64_t trial_index) const
{
    const Index N = scenario_.users();
    const Index K = scenario_.K;
    RandomStream rng(scenario_.master_seed, StreamId::trial, trial_index);

    std::vector<Index> support;
    if (scenario_.fixed_support)
    {
        support = *scenario_.fixed_support;
    }
    else
    {
        std::vector<Index> pool(static_cast<std::size_t>(N));
        std::iota(pool.begin(), pool.end(), Index{0});
        for (Index i = 0; i < K; ++i)
        {
            const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(N - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
        }
        support.assign(pool.begin(), pool.begin() + K);
    }
    std::vector<int> entries(static_cast<std::size_t>(N), 0);
    for (Index n : support)
        entries[static_cast<std::size_t>(n)] = rng.sign();

    RVector r(N);
    if (scenario_.amplitudes.kind == AmplitudeRule::Kind::constant)
    {
        r.setConstant(scenario_.amplitudes.value);
    }
    else
    {
        for (Index n = 0; n < N; ++n)
            r[n] = rng.uniform(scenario_.amplitudes.lo, scenario_.amplitudes.hi);
    }

    RVector g(N);
    for (Index n = 0; n < N; ++n)
        g[n] = rng.normal();

    RVector x = noise_factor_ * g;
    for (Index n = 0; n < N; ++n)
        x[n] += r[n] * entries[static_cast<std::size_t>(n)];

    TrialDraw out{SymbolVector(std::move(entries)), AmplitudeProfile(std::move(r)), CVector(scenario_.A.rows()),
                  RVector()};
    out.y.real() = A_re_ * x;
    out.y.imag() = A_im_ * x;
    out.z = scenario_.G.values() * x;
    return out;
}

TrialOutcome MonteCarlo::run_trial(const PreparedDetector& detector, const TrialDraw& draw) const
{
    TrialOutcome o;
    try
    {
        const DetectionResult r =
            detector.uses_mf_bank() ? detector.detect_mf_bank(draw.z, draw.gains) : detector.detect(draw.y, draw.gains);
        o.support_correct = r.support == draw.truth.support();
        o.symbols_correct = r.symbols == draw.truth.entries();
        o.reselections = r.reselections;
    }
    catch (const LeastSquaresSingularError&)
    {
        o.detector_failed = true;
    }
    return o;
}

TrialOutcome MonteCarlo::run_trial(const DetectorSpec& spec, std::uint64_t trial_index) const
{
    const PreparedDetector detector(spec, scenario_.A.values(), scenario_.G, scenario_.sigma2);
    return run_trial(detector, draw(trial_index));
}

std::vector<PeEstimate> MonteCarlo::estimate_range(const std::vector<DetectorSpec>& detectors, std::uint64_t first,
                                                   std::uint64_t last, unsigned threads) const
{
    std::vector<PreparedDetector> prepared;
    prepared.reserve(detectors.size());
    for (const auto& spec : detectors)
        prepared.emplace_back(spec, scenario_.A.values(), scenario_.G, scenario_.sigma2);

    threads = resolve_threads(threads);
    std::vector<std::vector<PeEstimate>> partial(threads, std::vector<PeEstimate>(detectors.size()));
    parallel_chunks(first, last, threads, trial_chunk, [&](std::uint64_t a, std::uint64_t b, unsigned worker) {
        auto& acc = partial[worker];
        for (std::uint64_t t = a; t < b; ++t)
        {
            const TrialDraw d = draw(t);
            for (std::size_t i = 0; i < prepared.size(); ++i)
                acc[i].add(run_trial(prepared[i], d));
        }
    });
    std::vector<PeEstimate> out(detectors.size());
    for (const auto& acc : partial)
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += acc[i];
    return out;
}

std::vector<PeEstimate> MonteCarlo::estimate_pe(const std::vector<DetectorSpec>& detectors, std::uint64_t trials,
                                                unsigned threads) const
{
    if (trials == 0)
        throw InvalidArgument("at least one trial is required");
    return estimate_range(detectors, 0, trials, threads);
}

PeEstimate MonteCarlo::estimate_pe(const DetectorSpec& detector, std::uint64_t trials, unsigned threads) const
{
    return estimate_pe(std::vector<DetectorSpec>{detector}, trials, threads).front();
}

TuneResult tune_threshold(const MonteCarlo& mc, const DetectorSpec& base, std::vector<double> grid,
                          std::uint64_t trials, unsigned threads)
{
    if (grid.empty())
        throw InvalidArgument("threshold grid is empty");
    if (base.family != DetectorFamily::rddt && base.family != DetectorFamily::rddft)
        throw InvalidArgument(fmt::format("{} has no threshold to tune", to_string(base.family)));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<DetectorSpec> specs;
    for (double t : grid)
    {
        DetectorSpec s = base;
        (base.family == DetectorFamily::rddt ? s.xi : s.eps) = t;
        specs.push_back(s);
    }
    TuneResult out;
    out.grid = grid;
    out.grid_estimates = mc.estimate_pe(specs, trials, threads);
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (out.grid_estimates[i].joint_errors < out.grid_estimates[best].joint_errors)
            best = i;
    out.threshold = grid[best];
    out.estimate = out.grid_estimates[best];
    return out;
}

double EventEstimate::standard_error() const
{
    if (trials == 0)
        return 0.0;
    const double p = rate();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

EventEstimate estimate_event_g(const MeasurementMatrix& A, const GramMatrix& G, double sigma2, double alpha,
                               std::uint64_t trials, std::uint64_t seed, unsigned threads)
{
    if (A.cols() != G.dim())
        throw DimensionError("A and G disagree on N");
    BoundParams p;
    p.alpha = alpha;
    p.N = A.cols();
    p.sigma2 = sigma2;
    p.lambda_max_ginv = G.lambda_max_inverse();
    p.row_energy = A.row_energy();

    EventEstimate out;
    out.trials = trials;
    out.tau = tau(p);
    if (sigma2 == 0.0)
        return out;

    const Index N = A.cols();
    const RMatrix factor = std::sqrt(sigma2) * G.inverse_factor();
    const RMatrix A_re = A.values().real();
    const RMatrix A_im = A.values().imag();
    const CMatrix AH = A.values().adjoint();
    threads = resolve_threads(threads);
    std::vector<std::uint64_t> counts(threads, 0);
    parallel_chunks(0, trials, threads, trial_chunk, [&](std::uint64_t a, std::uint64_t b, unsigned worker) {
        RVector g(N);
        CVector w(A.rows());
        for (std::uint64_t t = a; t < b; ++t)
        {
            RandomStream rng(seed, StreamId::event, t);
            for (Index n = 0; n < N; ++n)
                g[n] = rng.normal();
            const RVector v = factor * g;
            w.real() = A_re * v;
            w.imag() = A_im * v;
            if ((AH * w).cwiseAbs().maxCoeff() >= out.tau)
                ++counts[worker];
        }
    });
    out.violations = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    return out;
}

} // namespace rdmud
