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

#include "rdmud/experiment.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <tuple>

#include <fmt/format.h>

#include "rdmud/error.hpp"
#include "rdmud/matrix_io.hpp"

namespace rdmud {

namespace {

std::string detector_label(const DetectorConfig& d)
{
    if (!d.tune)
        return d.spec.label();
    DetectorSpec s = d.spec;
    s.xi.reset();
    s.eps.reset();
    const std::string family = to_string(s.family);
    return family + (s.family == DetectorFamily::rddt ? "[xi=tuned]" : "[eps=tuned]") + s.label().substr(family.size());
}

std::string format_optional(const std::optional<double>& x)
{
    return x ? format_number(*x) : "NA";
}

} // namespace

std::string format_number(double x)
{
    if (std::isnan(x))
        return "NA";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    return fmt::format("{}", x);
}

std::string format_bound(double x)
{
    return std::isinf(x) ? "+inf (no guarantee)" : fmt::format("{:.6g}", x);
}

std::uint64_t trial_seed(std::uint64_t master_seed)
{
    return derive_seed(master_seed, 2);
}

std::vector<ScenarioPoint> expand_points(const RunConfig& run)
{
    std::vector<ScenarioPoint> out;
    const std::string var = run.sweep.variable == SweepVariable::none ? "none" : to_string(run.sweep.variable);
    if (run.sweep.variable == SweepVariable::none)
    {
        out.push_back({var, "NA", run});
        return out;
    }
    if (run.sweep.variable == SweepVariable::detector)
    {
        for (const auto& name : run.sweep.detectors)
        {
            ScenarioPoint p{var, name, run};
            DetectorConfig d;
            d.spec.family = parse_detector_family(name);
            p.run.detectors = {d};
            out.push_back(std::move(p));
        }
        return out;
    }
    for (double v : run.sweep.values)
    {
        ScenarioPoint p{var, format_number(v), run};
        switch (run.sweep.variable)
        {
        case SweepVariable::M: p.run.M = static_cast<Index>(v); break;
        case SweepVariable::K: p.run.K = static_cast<Index>(v); break;
        case SweepVariable::N: p.run.N = static_cast<Index>(v); break;
        case SweepVariable::sigma2: p.run.sigma2 = v; break;
        default: break;
        }
        out.push_back(std::move(p));
    }
    return out;
}

GramMatrix build_gram(const GramConfig& cfg, Index N, std::uint64_t master_seed)
{
    switch (cfg.kind)
    {
    case GramKind::identity: return GramMatrix::identity(N);
    case GramKind::gold: return gram_gold(N, cfg.gold_length);
    case GramKind::spectrum: {
        SpectrumSpec spec;
        spec.seed = cfg.seed.value_or(derive_seed(master_seed, 4, static_cast<std::uint64_t>(N)));
        if (cfg.linspace)
        {
            const auto [lo, hi] = *cfg.linspace;
            for (Index i = 0; i < N; ++i)
                spec.eigenvalues.push_back(
                    N == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(N - 1));
        }
        else
        {
            spec.eigenvalues = cfg.eigenvalues;
        }
        if (static_cast<Index>(spec.eigenvalues.size()) != N)
            throw ConfigError(fmt::format("spectrum has {} eigenvalues but N = {}", spec.eigenvalues.size(), N));
        return gram_from_spectrum(spec);
    }
    case GramKind::file: {
        GramMatrix G = load_gram(cfg.path);
        if (G.dim() != N)
            throw ConfigError(fmt::format("{} holds a {} x {} Gram matrix but N = {}", cfg.path, G.dim(), G.dim(), N));
        return G;
    }
    }
    throw ConfigError("unknown Gram kind");
}

std::string gram_label(const GramConfig& cfg)
{
    switch (cfg.kind)
    {
    case GramKind::identity: return "identity";
    case GramKind::gold: return fmt::format("gold:{}", cfg.gold_length);
    case GramKind::spectrum: return "spectrum";
    case GramKind::file: return "file";
    }
    return "?";
}

MeasurementMatrix build_matrix(const MatrixConfig& cfg, Index M, Index N, std::uint64_t master_seed, unsigned threads)
{
    MatrixRecipe r;
    r.kind = cfg.kind;
    r.rows = M;
    r.cols = N;
    r.seed = cfg.seed.value_or(
        derive_seed(master_seed, 1, (static_cast<std::uint64_t>(M) << 32) ^ static_cast<std::uint64_t>(N)));
    r.search_count = cfg.kind == MatrixKind::kerdock ? 1 : cfg.search;
    r.path = cfg.path;
    r.normalize = cfg.normalize;
    MeasurementMatrix A = generate_matrix(r, threads);
    if (A.cols() != N)
        throw ConfigError(fmt::format("matrix has {} columns but N = {}", A.cols(), N));
    return A;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, const ExperimentOptions& options)
{
    std::vector<ResultRow> rows;
    auto log = [&](const std::string& msg) {
        if (options.log)
            options.log(msg);
    };
    for (std::size_t ri = 0; ri < cfg.runs.size(); ++ri)
    {
        std::map<std::tuple<Index, Index>, MeasurementMatrix> matrices;
        for (ScenarioPoint& point : expand_points(cfg.runs[ri]))
        {
            RunConfig& run = point.run;
            const Index M = run.M.value_or(0);
            auto key = std::tuple{M, run.N};
            auto it = matrices.find(key);
            if (it == matrices.end())
                it = matrices.emplace(key, build_matrix(run.matrix, M, run.N, cfg.seed, options.threads)).first;
            const MeasurementMatrix& A = it->second;

            Scenario sc;
            sc.A = A;
            sc.G = build_gram(run.gram, run.N, cfg.seed);
            sc.K = run.K;
            sc.amplitudes = run.amplitudes;
            sc.sigma2 = run.sigma2;
            sc.master_seed = trial_seed(cfg.seed);
            const MonteCarlo mc(sc);

            std::vector<DetectorSpec> specs;
            std::vector<std::string> labels;
            for (const DetectorConfig& d : run.detectors)
            {
                DetectorSpec spec = d.spec;
                if (!d.explicit_k && spec.family != DetectorFamily::rd_ml)
                    spec.K = run.K;
                if (d.tune)
                {
                    Scenario tuning = sc;
                    tuning.master_seed = derive_seed(cfg.seed, 3);
                    const bool xi = spec.family == DetectorFamily::rddt;
                    const TuneResult t =
                        tune_threshold(MonteCarlo(tuning), spec, xi ? run.tune.xi_grid : run.tune.eps_grid,
                                       run.tune.trials, options.threads);
                    (xi ? spec.xi : spec.eps) = t.threshold;
                    log(fmt::format("{}={} {}: tuned {} = {}", point.sweep_var, point.sweep_value, spec.label(),
                                    xi ? "xi" : "eps", t.threshold));
                }
                specs.push_back(spec);
                labels.push_back(detector_label(d));
            }

            const std::uint64_t trials = options.trials.value_or(run.trials);
            const std::vector<PeEstimate> est = mc.estimate_pe(specs, trials, options.threads);
            for (std::size_t i = 0; i < specs.size(); ++i)
            {
                ResultRow row;
                row.sweep_var = point.sweep_var;
                row.sweep_value = point.sweep_value;
                row.detector = labels[i];
                row.N = run.N;
                row.M = A.rows();
                row.K = run.K;
                row.sigma2 = run.sigma2;
                row.gram = gram_label(run.gram);
                row.matrix_kind = to_string(run.matrix.kind);
                if (A.has_coherence())
                    row.mu = A.coherence();
                row.estimate = est[i];
                row.master_seed = cfg.seed;
                rows.push_back(std::move(row));
                log(fmt::format("{}={} {}: pe={} ({} trials)", point.sweep_var, point.sweep_value, labels[i],
                                format_number(est[i].pe()), est[i].trials));
            }
        }
    }
    return rows;
}

void write_csv_header(std::ostream& out)
{
    out << "sweep_var,sweep_value,detector,N,M,K,sigma2,gram,matrix_kind,mu,trials,support_errors,joint_errors,pe,"
           "ci_halfwidth,cond_symbol_err,master_seed\n";
}

void write_csv_row(std::ostream& out, const ResultRow& r)
{
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.sweep_var, r.sweep_value, r.detector,
                       r.N, r.M, r.K, format_number(r.sigma2), r.gram, r.matrix_kind, format_optional(r.mu),
                       r.estimate.trials, r.estimate.support_errors, r.estimate.joint_errors,
                       format_number(r.estimate.pe()), format_number(r.estimate.ci_halfwidth()),
                       format_optional(r.estimate.conditional_symbol_error()), r.master_seed);
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows)
{
    write_csv_header(out);
    for (const auto& r : rows)
        write_csv_row(out, r);
}

BoundParams scenario_bound_params(const MeasurementMatrix& A, const GramMatrix& G, const AmplitudeRule& amplitudes,
                                  Index K, double sigma2, double alpha)
{
    BoundParams p;
    p.alpha = alpha;
    p.N = A.cols();
    p.K = K;
    p.sigma2 = sigma2;
    p.mu = A.has_coherence() ? A.coherence() : 0.0;
    p.lambda_max_ginv = G.lambda_max_inverse();
    p.row_energy = A.row_energy();
    if (K <= 1)
        p.sorted_gains = {amplitudes.min_magnitude()};
    else
    {
        p.sorted_gains.assign(static_cast<std::size_t>(K), amplitudes.min_magnitude());
        p.sorted_gains.front() = amplitudes.max_magnitude();
    }
    p.validate();
    return p;
}

BoundsRow evaluate_bounds(const BoundParams& p)
{
    BoundsRow b;
    b.N = p.N;
    b.K = p.K;
    b.sigma2 = p.sigma2;
    b.params = p;
    b.tau = tau(p);
    b.snr_min = snr_min(p);
    b.snr_requirement = snr_requirement(p.N);
    b.rdd = check_rdd_condition(p);
    b.rddf = check_rddf_condition(p);
    b.xi = xi_range(p);
    b.eps = eps_range(p);
    b.beta_rdd = beta_rdd(p);
    b.beta_rddf = beta_rddf(p);
    b.pe_bound_rdd = pe_bound_rdd(p);
    b.pe_bound_rddf = pe_bound_rddf(p);
    b.pe_bound_decorrelator = pe_bound_decorrelator(b.snr_min, p.N);
    return b;
}

std::vector<BoundsRow> evaluate_bounds(const ExperimentConfig& cfg, unsigned threads)
{
    std::vector<BoundsRow> out;
    for (const RunConfig& base : cfg.runs)
    {
        for (const ScenarioPoint& point : expand_points(base))
        {
            const RunConfig& run = point.run;
            const MeasurementMatrix A = build_matrix(run.matrix, run.M.value_or(0), run.N, cfg.seed, threads);
            const GramMatrix G = build_gram(run.gram, run.N, cfg.seed);
            BoundsRow row = evaluate_bounds(scenario_bound_params(A, G, run.amplitudes, run.K, run.sigma2, run.alpha));
            row.sweep_var = point.sweep_var;
            row.sweep_value = point.sweep_value;
            row.M = A.rows();
            out.push_back(std::move(row));
        }
    }
    return out;
}

void write_bounds_table(std::ostream& out, const BoundsRow& b)
{
    auto range = [](const std::optional<ThresholdRange>& r) {
        return r ? fmt::format("({:.6g}, {:.6g})", r->lower, r->upper) : std::string("empty");
    };
    auto beta = [](const std::optional<double>& x) {
        return x ? fmt::format("{:.6g}", *x) : std::string("undefined (precondition fails)");
    };
    const double db = 10.0 * std::log10(b.snr_min);
    out << fmt::format("sweep                 {}={}\n", b.sweep_var, b.sweep_value);
    out << fmt::format("N M K                 {} {} {}\n", b.N, b.M, b.K);
    out << fmt::format("sigma2                {}\n", format_number(b.sigma2));
    out << fmt::format("alpha                 {}\n", format_number(b.params.alpha));
    out << fmt::format("mu                    {:.6g}\n", b.params.mu);
    out << fmt::format("row_energy            {:.6g}\n", b.params.row_energy);
    out << fmt::format("lambda_max(G^-1)      {:.6g}\n", b.params.lambda_max_ginv);
    out << fmt::format("tau                   {:.6g}\n", b.tau);
    out << fmt::format("snr_min               {:.6g} ({:.2f} dB)\n", b.snr_min, db);
    out << fmt::format("snr_requirement       {:.6g}\n", b.snr_requirement);
    out << fmt::format("rdd_condition         {} (lhs {:.6g}, rhs {:.6g})\n", b.rdd.holds ? "holds" : "fails",
                       b.rdd.lhs, b.rdd.rhs);
    out << fmt::format("rddf_condition        {} (lhs {:.6g}, rhs {:.6g})\n", b.rddf.holds ? "holds" : "fails",
                       b.rddf.lhs, b.rddf.rhs);
    out << fmt::format("implied_pe_bound      {:.6g}\n", b.rdd.implied_pe_bound);
    out << fmt::format("xi_range              {}\n", range(b.xi));
    out << fmt::format("eps_range             {}\n", range(b.eps));
    out << fmt::format("beta_rdd              {}\n", beta(b.beta_rdd));
    out << fmt::format("beta_rddf             {}\n", beta(b.beta_rddf));
    out << fmt::format("pe_bound_rdd          {}\n", format_bound(b.pe_bound_rdd));
    out << fmt::format("pe_bound_rddf         {}\n", format_bound(b.pe_bound_rddf));
    out << fmt::format("pe_bound_decorrelator {}\n", format_bound(b.pe_bound_decorrelator));
}

void write_bounds_csv(std::ostream& out, const std::vector<BoundsRow>& rows)
{
    out << "sweep_var,sweep_value,N,M,K,sigma2,alpha,mu,row_energy,lambda_max_ginv,tau,snr_min,rdd_holds,rddf_holds,"
           "implied_pe_bound,xi_lo,xi_hi,eps_lo,eps_hi,pe_bound_rdd,pe_bound_rddf,pe_bound_decorrelator\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& b : rows)
    {
        out << fmt::format(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", b.sweep_var, b.sweep_value, b.N, b.M,
            b.K, format_number(b.sigma2), format_number(b.params.alpha), format_number(b.params.mu),
            format_number(b.params.row_energy), format_number(b.params.lambda_max_ginv), format_number(b.tau),
            format_number(b.snr_min), b.rdd.holds ? 1 : 0, b.rddf.holds ? 1 : 0, format_number(b.rdd.implied_pe_bound),
            format_number(b.xi ? b.xi->lower : nan), format_number(b.xi ? b.xi->upper : nan),
            format_number(b.eps ? b.eps->lower : nan), format_number(b.eps ? b.eps->upper : nan),
            format_number(b.pe_bound_rdd), format_number(b.pe_bound_rddf), format_number(b.pe_bound_decorrelator));
    }
}

} // namespace rdmud
