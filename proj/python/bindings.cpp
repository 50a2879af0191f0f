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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "rdmud/bounds.hpp"
#include "rdmud/config.hpp"
#include "rdmud/detectors.hpp"
#include "rdmud/error.hpp"
#include "rdmud/experiment.hpp"
#include "rdmud/matrix_factory.hpp"
#include "rdmud/measurement.hpp"
#include "rdmud/model.hpp"
#include "rdmud/presets.hpp"

namespace py = pybind11;
using namespace rdmud;

namespace {

GramMatrix gram_or_identity(const std::optional<RMatrix>& G, Index N)
{
    return G ? GramMatrix(*G) : GramMatrix::identity(N);
}

AmplitudeProfile gains_or_unit(const std::optional<RVector>& gains, Index N)
{
    return gains ? AmplitudeProfile(*gains) : AmplitudeProfile::constant(N, 1.0);
}

py::dict to_dict(const DetectionResult& d)
{
    py::dict out;
    out["support"] = d.support;
    out["symbols"] = d.symbols;
    out["iterations"] = d.iterations;
    out["reselections"] = d.reselections;
    return out;
}

py::dict to_dict(const PeEstimate& e)
{
    py::dict out;
    out["trials"] = e.trials;
    out["pe"] = e.pe();
    out["ci_halfwidth"] = e.ci_halfwidth();
    out["support_errors"] = e.support_errors;
    out["joint_errors"] = e.joint_errors;
    out["detector_failures"] = e.detector_failures;
    out["conditional_symbol_error"] = e.conditional_symbol_error();
    return out;
}

py::object optional_range(const std::optional<ThresholdRange>& r)
{
    if (!r)
        return py::none();
    return py::make_tuple(r->lower, r->upper);
}

} // namespace

PYBIND11_MODULE(_rdmud, m)
{
    m.doc() = "Reduced-dimension multiuser detection";

    static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const InvalidArgument& e)
        {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
        catch (const ConfigError& e)
        {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
        catch (const ParseError& e)
        {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
        catch (const Error& e)
        {
            py::set_error(error, e.what());
        }
    });

    m.def(
        "generate_matrix",
        [](const std::string& kind, Index rows, Index cols, std::uint64_t seed, Index search, unsigned threads) {
            MatrixRecipe r;
            r.kind = parse_matrix_kind(kind);
            r.rows = rows;
            r.cols = cols;
            r.seed = seed;
            r.search_count = search;
            return generate_matrix(r, threads).values();
        },
        py::arg("kind"), py::arg("rows"), py::arg("cols"), py::arg("seed") = 0, py::arg("search") = 1,
        py::arg("threads") = 1, "Measurement matrix with unit-norm columns (gaussian, partial-dft or kerdock).");

    m.def("coherence", &coherence, py::arg("A"), "Largest |a_n^H a_l| over distinct columns.");
    m.def("welch_bound", &welch_bound, py::arg("M"), py::arg("N"));
    m.def(
        "gram_gold", [](Index N, Index L) { return gram_gold(N, L).values(); }, py::arg("N"), py::arg("L") = 1023,
        "Gram matrix of N Gold-like codes of length L.");

    m.def(
        "noise_covariance",
        [](const CMatrix& A, const std::optional<RMatrix>& G, double sigma2) {
            return noise_covariance(A, gram_or_identity(G, A.cols()), sigma2).covariance;
        },
        py::arg("A"), py::arg("G") = py::none(), py::arg("sigma2") = 1.0);

    m.def(
        "whitening_transform",
        [](const CMatrix& A, const std::optional<RMatrix>& G) {
            const Whitening w = whitening_transform(A, gram_or_identity(G, A.cols()));
            return py::make_tuple(w.transform, w.whitened);
        },
        py::arg("A"), py::arg("G") = py::none(), "Returns (W, W A).");

    m.def(
        "sample_front_end",
        [](const CMatrix& A, const std::vector<int>& symbols, double sigma2, std::uint64_t seed,
           const std::optional<RMatrix>& G, const std::optional<RVector>& gains) {
            const Index N = A.cols();
            return sample_front_end(A, gram_or_identity(G, N), gains_or_unit(gains, N), SymbolVector(symbols), sigma2,
                                    seed)
                .y;
        },
        py::arg("A"), py::arg("symbols"), py::arg("sigma2"), py::arg("seed"), py::arg("G") = py::none(),
        py::arg("gains") = py::none(), "Correlator outputs y = A (R b + v) with v ~ N(0, sigma2 G^-1).");

    m.def(
        "detect",
        [](const std::string& detector, const CVector& y, const CMatrix& A, std::optional<Index> K,
           std::optional<double> xi, std::optional<double> eps, const std::optional<RMatrix>& G,
           const std::optional<RVector>& gains, double sigma2, bool whiten, const std::string& stage) {
            DetectorSpec spec;
            spec.family = parse_detector_family(detector);
            spec.K = K;
            spec.xi = xi;
            spec.eps = eps;
            spec.whiten = whiten;
            spec.symbol_stage = parse_symbol_stage(stage);
            if (spec.family == DetectorFamily::decorrelator)
                throw InvalidArgument("the decorrelator consumes MF-bank output; use decorrelate()");
            const Index N = A.cols();
            const PreparedDetector prepared(spec, A, gram_or_identity(G, N), sigma2);
            return to_dict(prepared.detect(y, gains_or_unit(gains, N)));
        },
        py::arg("detector"), py::arg("y"), py::arg("A"), py::arg("K") = py::none(), py::arg("xi") = py::none(),
        py::arg("eps") = py::none(), py::arg("G") = py::none(), py::arg("gains") = py::none(), py::arg("sigma2") = 0.0,
        py::arg("whiten") = false, py::arg("stage") = "sign",
        "Runs one reduced-dimension detector and returns support, symbols, iterations and reselections.");

    m.def(
        "decorrelate",
        [](const RVector& z, const std::optional<RMatrix>& G, const std::optional<RVector>& gains) {
            const Index N = z.size();
            return conventional_decorrelator(z, gram_or_identity(G, N), gains_or_unit(gains, N));
        },
        py::arg("z"), py::arg("G") = py::none(), py::arg("gains") = py::none());

    m.def(
        "ml_objective",
        [](const CVector& y, const CMatrix& A, const std::vector<int>& b, const std::optional<RMatrix>& G,
           const std::optional<RVector>& gains) {
            const Index N = A.cols();
            return MlDetector(A, gram_or_identity(G, N), gains_or_unit(gains, N)).objective(y, b);
        },
        py::arg("y"), py::arg("A"), py::arg("b"), py::arg("G") = py::none(), py::arg("gains") = py::none());

    m.def(
        "bounds",
        [](const CMatrix& A, Index K, double sigma2, double alpha, const std::optional<RMatrix>& G,
           const std::optional<RVector>& gains) {
            const Index N = A.cols();
            const BoundsRow row = evaluate_bounds(make_bound_params(MeasurementMatrix(A), gram_or_identity(G, N),
                                                                    gains_or_unit(gains, N), K, sigma2, alpha));
            py::dict out;
            out["tau"] = row.tau;
            out["snr_min"] = row.snr_min;
            out["rdd_condition"] = row.rdd.holds;
            out["rddf_condition"] = row.rddf.holds;
            out["xi_range"] = optional_range(row.xi);
            out["eps_range"] = optional_range(row.eps);
            out["pe_bound_rdd"] = row.pe_bound_rdd;
            out["pe_bound_rddf"] = row.pe_bound_rddf;
            out["pe_bound_decorrelator"] = row.pe_bound_decorrelator;
            return out;
        },
        py::arg("A"), py::arg("K"), py::arg("sigma2"), py::arg("alpha") = 1.0, py::arg("G") = py::none(),
        py::arg("gains") = py::none(),
        "Noise-level conditions and error-probability bounds; +inf when a condition fails.");

    m.def("q_function", &q_function, py::arg("x"));

    m.def(
        "estimate_pe",
        [](const CMatrix& A, const std::vector<std::string>& detectors, Index K, double sigma2, std::uint64_t trials,
           std::uint64_t seed, const std::optional<RMatrix>& G, double amplitude, unsigned threads) {
            Scenario s;
            s.A = MeasurementMatrix(A);
            s.G = gram_or_identity(G, A.cols());
            s.K = K;
            s.amplitudes = AmplitudeRule::constant(amplitude);
            s.sigma2 = sigma2;
            s.master_seed = seed;
            std::vector<DetectorSpec> specs;
            for (const std::string& name : detectors)
            {
                DetectorSpec d;
                d.family = parse_detector_family(name);
                if (d.family != DetectorFamily::rddt && d.family != DetectorFamily::rddft &&
                    d.family != DetectorFamily::decorrelator)
                    d.K = K;
                specs.push_back(d);
            }
            const MonteCarlo mc(std::move(s));
            std::vector<PeEstimate> est;
            {
                py::gil_scoped_release release;
                est = mc.estimate_pe(specs, trials, threads);
            }
            py::dict out;
            for (std::size_t i = 0; i < specs.size(); ++i)
                out[py::str(detectors[i])] = to_dict(est[i]);
            return out;
        },
        py::arg("A"), py::arg("detectors"), py::arg("K"), py::arg("sigma2"), py::arg("trials"), py::arg("seed") = 1,
        py::arg("G") = py::none(), py::arg("amplitude") = 1.0, py::arg("threads") = 0,
        "Monte Carlo error probability with common random numbers across detectors.");

    m.def("preset_names", &preset_names);
    m.def("preset_text", &preset_text, py::arg("name"));

    m.def(
        "run_config",
        [](const std::string& text, std::optional<std::uint64_t> trials, unsigned threads) {
            ExperimentConfig cfg = parse_config_text(text, "<string>");
            ExperimentOptions opt;
            opt.threads = threads;
            opt.trials = trials;
            std::vector<ResultRow> rows;
            {
                py::gil_scoped_release release;
                rows = run_experiment(cfg, opt);
            }
            py::list out;
            for (const ResultRow& r : rows)
            {
                py::dict d = to_dict(r.estimate);
                d["sweep_var"] = r.sweep_var;
                d["sweep_value"] = r.sweep_value;
                d["detector"] = r.detector;
                d["N"] = r.N;
                d["M"] = r.M;
                d["K"] = r.K;
                d["sigma2"] = r.sigma2;
                d["gram"] = r.gram;
                d["matrix"] = r.matrix_kind;
                d["mu"] = r.mu;
                out.append(d);
            }
            return out;
        },
        py::arg("text"), py::arg("trials") = py::none(), py::arg("threads") = 0,
        "Runs a JSON experiment description and returns one dict per (point, detector).");
}
