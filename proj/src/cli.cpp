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

#include "rdmud/cli.hpp"

#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rdmud/detectors.hpp"
#include "rdmud/error.hpp"
#include "rdmud/experiment.hpp"
#include "rdmud/matrix_factory.hpp"
#include "rdmud/matrix_io.hpp"
#include "rdmud/presets.hpp"

namespace rdmud {

namespace {

struct UsageError : Error
{
    using Error::Error;
};

void print_matrix_stats(std::ostream& out, const MeasurementMatrix& A)
{
    out << fmt::format("rows {}\ncols {}\n", A.rows(), A.cols());
    if (A.has_coherence())
        out << fmt::format("mu {}\n", format_number(A.coherence()));
    else
        out << "mu NA\n";
    out << fmt::format("welch_bound {}\n", format_number(welch_bound(A.rows(), A.cols())));
    out << fmt::format("row_energy {}\n", format_number(A.row_energy()));
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream f(path);
    if (!f)
        throw Error(fmt::format("cannot write {}", path));
    return f;
}

std::vector<double> parse_grid(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        try
        {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        }
        catch (const std::exception&)
        {
            throw UsageError(fmt::format("--grid: '{}' is not a number", item));
        }
    }
    if (out.empty())
        throw UsageError("--grid is empty");
    return out;
}

struct GenMatrixArgs
{
    std::string kind;
    Index rows = 0;
    Index cols = 0;
    std::uint64_t seed = 1;
    Index search = 1;
    std::string out;
    unsigned threads = 0;
};

struct DetectArgs
{
    std::string y;
    std::string a;
    std::string gram;
    std::string detector = "rdd";
    std::optional<Index> k;
    std::optional<double> xi;
    std::optional<double> eps;
    bool whiten = false;
    std::string symbols = "sign";
    double sigma2 = 0.0;
    double gain = 1.0;
    bool normalize = false;
};

struct RunArgs
{
    std::string config;
    std::string out;
    unsigned threads = 0;
    std::optional<std::uint64_t> trials;
    bool quiet = false;
};

struct TuneArgs
{
    std::string config;
    std::string family = "rddt";
    std::string grid;
    std::optional<std::uint64_t> trials;
    unsigned threads = 0;
};

struct ReproduceArgs
{
    std::string preset;
    std::string out;
    unsigned threads = 0;
    std::optional<std::uint64_t> trials;
    bool list = false;
    bool print_config = false;
    bool quiet = false;
};

int cmd_gen_matrix(const GenMatrixArgs& a, std::ostream& out)
{
    MatrixRecipe r;
    r.kind = parse_matrix_kind(a.kind);
    if (r.kind == MatrixKind::file)
        throw UsageError("gen-matrix cannot generate kind 'file'");
    r.rows = a.rows;
    r.cols = a.cols != 0 ? a.cols : (r.kind == MatrixKind::kerdock ? 0 : a.rows);
    r.seed = a.seed;
    r.search_count = a.search;
    const MeasurementMatrix A = generate_matrix(r, a.threads);
    if (!a.out.empty())
        save_matrix(a.out, A);
    print_matrix_stats(out, A);
    return 0;
}

int cmd_coherence(const std::string& path, bool normalize, std::ostream& out)
{
    const MeasurementMatrix A = load_matrix(path, normalize);
    print_matrix_stats(out, A);
    return 0;
}

int cmd_detect(const DetectArgs& a, std::ostream& out)
{
    DetectorSpec spec;
    spec.family = parse_detector_family(a.detector);
    spec.K = a.k;
    spec.xi = a.xi;
    spec.eps = a.eps;
    spec.whiten = a.whiten;
    spec.symbol_stage = parse_symbol_stage(a.symbols);
    try
    {
        spec.validate();
    }
    catch (const InvalidArgument& e)
    {
        throw UsageError(e.what());
    }

    const MatrixFile yf = read_matrix_file(a.y);
    if (yf.values.cols() != 1)
        throw DimensionError(fmt::format("{}: expected a single column, found {}", a.y, yf.values.cols()));
    const CVector y = yf.values.col(0);

    const bool mf = spec.family == DetectorFamily::decorrelator;
    std::optional<GramMatrix> G;
    if (!a.gram.empty())
        G = load_gram(a.gram);

    DetectionResult r;
    if (mf)
    {
        if (!G)
            G = GramMatrix::identity(y.size());
        if (!y.imag().isZero(0.0))
            throw InvalidArgument("decorrelator input must be real");
        const AmplitudeProfile gains = AmplitudeProfile::constant(G->dim(), a.gain);
        PreparedDetector det(spec, CMatrix::Identity(G->dim(), G->dim()), *G, a.sigma2);
        r = det.detect_mf_bank(y.real(), gains);
    }
    else
    {
        if (a.a.empty())
            throw UsageError("detect: --a is required for reduced-dimension detectors");
        const MeasurementMatrix A = load_matrix(a.a, a.normalize);
        if (!G)
            G = GramMatrix::identity(A.cols());
        const AmplitudeProfile gains = AmplitudeProfile::constant(A.cols(), a.gain);
        PreparedDetector det(spec, A.values(), *G, a.sigma2);
        r = det.detect(y, gains);
    }

    out << "support";
    for (Index n : r.support)
        out << ' ' << n;
    out << "\nsymbols";
    for (Index n : r.support)
        out << ' ' << r.symbols[static_cast<std::size_t>(n)];
    out << fmt::format("\niterations {}\nreselections {}\n", r.iterations, r.reselections);
    return 0;
}

int run_and_write(ExperimentConfig cfg, const std::string& out_path, unsigned threads,
                  std::optional<std::uint64_t> trials, bool quiet, std::ostream& out, std::ostream& err)
{
    apply_seed_override(cfg);
    ExperimentOptions opts;
    opts.threads = threads != 0 ? threads : cfg.threads;
    opts.trials = trials;
    if (!quiet)
        opts.log = [&err](const std::string& msg) { err << "# " << msg << '\n'; };

    const auto start = std::chrono::steady_clock::now();
    const std::vector<ResultRow> rows = run_experiment(cfg, opts);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string path = !out_path.empty() ? out_path : cfg.output;
    if (path.empty() || path == "-")
    {
        write_csv(out, rows);
    }
    else
    {
        std::ofstream f = open_output(path);
        write_csv(f, rows);
        if (!f)
            throw Error(fmt::format("error while writing {}", path));
    }
    std::uint64_t total = 0;
    for (const auto& r : rows)
        total += r.estimate.trials;
    err << fmt::format("# {} rows, {} detector-trials, wall time {:.2f} s\n", rows.size(), total, wall);
    return 0;
}

int cmd_bounds(const std::string& config, unsigned threads, std::ostream& out)
{
    ExperimentConfig cfg = load_config(config);
    apply_seed_override(cfg);
    const std::vector<BoundsRow> rows = evaluate_bounds(cfg, threads);
    for (const auto& b : rows)
    {
        write_bounds_table(out, b);
        out << '\n';
    }
    write_bounds_csv(out, rows);
    return 0;
}

int cmd_tune(const TuneArgs& a, std::ostream& out)
{
    ExperimentConfig cfg = load_config(a.config);
    apply_seed_override(cfg);
    const DetectorFamily family = parse_detector_family(a.family);
    if (family != DetectorFamily::rddt && family != DetectorFamily::rddft)
        throw UsageError("--family must be rddt or rddft");
    out << "sweep_var,sweep_value,family,threshold,pe,trials\n";
    for (const RunConfig& run : cfg.runs)
    {
        std::vector<double> grid = !a.grid.empty()
                                       ? parse_grid(a.grid)
                                       : (family == DetectorFamily::rddt ? run.tune.xi_grid : run.tune.eps_grid);
        if (grid.empty())
            throw UsageError("no threshold grid: pass --grid or set tune.xi_grid / tune.eps_grid");
        for (const ScenarioPoint& point : expand_points(run))
        {
            const RunConfig& r = point.run;
            Scenario sc;
            sc.A = build_matrix(r.matrix, r.M.value_or(0), r.N, cfg.seed, a.threads);
            sc.G = build_gram(r.gram, r.N, cfg.seed);
            sc.K = r.K;
            sc.amplitudes = r.amplitudes;
            sc.sigma2 = r.sigma2;
            sc.master_seed = derive_seed(cfg.seed, 3);
            DetectorSpec base;
            base.family = family;
            const TuneResult t =
                tune_threshold(MonteCarlo(sc), base, grid, a.trials.value_or(r.tune.trials), a.threads);
            out << fmt::format("{},{},{},{},{},{}\n", point.sweep_var, point.sweep_value, a.family,
                               format_number(t.threshold), format_number(t.estimate.pe()), t.estimate.trials);
        }
    }
    return 0;
}

int cmd_reproduce(const ReproduceArgs& a, std::ostream& out, std::ostream& err)
{
    if (a.list)
    {
        for (const auto& name : preset_names())
            out << name << '\n';
        return 0;
    }
    if (a.preset.empty())
        throw UsageError("reproduce: a preset name is required (see --list)");
    if (a.print_config)
    {
        out << preset_text(a.preset) << '\n';
        return 0;
    }
    return run_and_write(load_preset(a.preset), a.out, a.threads, a.trials, a.quiet, out, err);
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Reduced-dimension multiuser detection toolkit", "rdmud"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "rdmud 0.1.0");

    GenMatrixArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-matrix", "Generate a measurement matrix and report its coherence");
    gen_cmd->add_option("--kind", gen.kind, "gaussian, partial-dft or kerdock")->required();
    gen_cmd->add_option("--rows", gen.rows, "Number of rows M")
        ->required()
        ->check(CLI::Range(Index{1}, Index{1} << 24));
    gen_cmd->add_option("--cols", gen.cols, "Number of columns N (default: M, or M^2 for kerdock)")
        ->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--seed", gen.seed, "Seed");
    gen_cmd->add_option("--search", gen.search, "Candidates drawn; the least coherent is kept")
        ->check(CLI::PositiveNumber);
    gen_cmd->add_option("--out", gen.out, "Output matrix file");
    gen_cmd->add_option("--threads", gen.threads, "Worker threads (0: all cores)");

    std::string coh_path;
    bool coh_normalize = false;
    auto* coh_cmd = app.add_subcommand("coherence", "Report coherence, Welch bound and row energy of a matrix file");
    coh_cmd->add_option("file", coh_path, "Matrix file")->required();
    coh_cmd->add_flag("--normalize", coh_normalize, "Scale columns to unit norm first");

    DetectArgs det;
    auto* det_cmd = app.add_subcommand("detect", "Run one detector on an observation file");
    det_cmd->add_option("--y", det.y, "Observation (M x 1); MF-bank output (N x 1) for the decorrelator")->required();
    det_cmd->add_option("--a", det.a, "Measurement matrix file");
    det_cmd->add_option("--gram", det.gram, "Gram matrix file (default: identity)");
    det_cmd->add_option("--detector", det.detector, "rdd, rddt, rddf, rddft, rd-ls, rd-mmse, rd-ml or decorrelator");
    det_cmd->add_option("--k", det.k, "Number of active users")->check(CLI::NonNegativeNumber);
    det_cmd->add_option("--xi", det.xi, "RDDt threshold")->check(CLI::NonNegativeNumber);
    det_cmd->add_option("--eps", det.eps, "RDDFt threshold")->check(CLI::NonNegativeNumber);
    det_cmd->add_flag("--whiten", det.whiten, "Apply the noise-whitening transform");
    det_cmd->add_option("--symbols", det.symbols, "Symbol stage for decision feedback: sign, ls or mmse");
    det_cmd->add_option("--sigma2", det.sigma2, "Noise variance (MMSE stage)")->check(CLI::NonNegativeNumber);
    det_cmd->add_option("--gain", det.gain, "Common received amplitude");
    det_cmd->add_flag("--normalize", det.normalize, "Scale the columns of A to unit norm");

    RunArgs sweep;
    auto* sweep_cmd = app.add_subcommand("pe-sweep", "Monte Carlo Pe estimates for a configuration, as CSV");
    sweep_cmd->add_option("config", sweep.config, "JSON configuration")->required();
    sweep_cmd->add_option("--out", sweep.out, "CSV output (default: the config's output, else stdout)");
    sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (0: config or all cores)");
    sweep_cmd->add_option("--trials", sweep.trials, "Override the trial count")->check(CLI::PositiveNumber);
    sweep_cmd->add_flag("--quiet", sweep.quiet, "Suppress progress lines");

    std::string bounds_config;
    unsigned bounds_threads = 0;
    auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate the closed-form conditions and bounds");
    bounds_cmd->add_option("config", bounds_config, "JSON configuration")->required();
    bounds_cmd->add_option("--threads", bounds_threads, "Worker threads for the matrix search");

    TuneArgs tune;
    auto* tune_cmd = app.add_subcommand("tune", "Grid search for the RDDt or RDDFt threshold");
    tune_cmd->add_option("config", tune.config, "JSON configuration")->required();
    tune_cmd->add_option("--family", tune.family, "rddt or rddft");
    tune_cmd->add_option("--grid", tune.grid, "Comma-separated thresholds (default: the config's tune grid)");
    tune_cmd->add_option("--trials", tune.trials, "Trials per grid point")->check(CLI::PositiveNumber);
    tune_cmd->add_option("--threads", tune.threads, "Worker threads");

    ReproduceArgs rep;
    auto* rep_cmd = app.add_subcommand("reproduce", "Run a built-in experiment preset");
    rep_cmd->add_option("preset", rep.preset, "Preset name");
    rep_cmd->add_option("--out", rep.out, "CSV output (default: stdout)");
    rep_cmd->add_option("--threads", rep.threads, "Worker threads");
    rep_cmd->add_option("--trials", rep.trials, "Override the trial count")->check(CLI::PositiveNumber);
    rep_cmd->add_flag("--list", rep.list, "List presets");
    rep_cmd->add_flag("--print-config", rep.print_config, "Print the preset configuration and exit");
    rep_cmd->add_flag("--quiet", rep.quiet, "Suppress progress lines");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        // Help and version requests come through here with exit code 0.
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try
    {
        if (gen_cmd->parsed())
            return cmd_gen_matrix(gen, out);
        if (coh_cmd->parsed())
            return cmd_coherence(coh_path, coh_normalize, out);
        if (det_cmd->parsed())
            return cmd_detect(det, out);
        if (sweep_cmd->parsed())
            return run_and_write(load_config(sweep.config), sweep.out, sweep.threads, sweep.trials, sweep.quiet, out,
                                 err);
        if (bounds_cmd->parsed())
            return cmd_bounds(bounds_config, bounds_threads, out);
        if (tune_cmd->parsed())
            return cmd_tune(tune, out);
        if (rep_cmd->parsed())
            return cmd_reproduce(rep, out, err);
    }
    catch (const UsageError& e)
    {
        err << "rdmud: " << e.what() << '\n';
        return 2;
    }
    catch (const ConfigError& e)
    {
        err << "rdmud: " << e.what() << '\n';
        return 2;
    }
    catch (const InvalidArgument& e)
    {
        err << "rdmud: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception& e)
    {
        err << "rdmud: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace rdmud
