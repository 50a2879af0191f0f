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

#include "rdmud/presets.hpp"

#include <map>

#include <fmt/format.h>

#include "rdmud/error.hpp"

namespace rdmud {

namespace {

const std::map<std::string, std::string>& presets()
{
    static const std::map<std::string, std::string> table = {
        {"fig3", R"json({
  "name": "fig3",
  "notes": "Pe versus M for K = 2 and several N. Fixed: K = 2, r = 1, sigma2 = 0.005, G = I (SNR_min 23 dB), min-coherence partial DFT, thresholds tuned per point. Reconstructed: N values, M grid, seeds, 1e4 search candidates, threshold grids, 2e4 trials per point.",
  "seed": 20111,
  "K": 2,
  "sigma2": 0.005,
  "amplitudes": 1.0,
  "gram": {"kind": "identity"},
  "matrix": {"kind": "partial-dft", "search": 10000},
  "trials": 20000,
  "tune": {"xi_grid": [0.6, 0.64, 0.68, 0.72, 0.76, 0.78, 0.8, 0.82, 0.84, 0.86, 0.88, 0.9, 0.92, 0.96, 1.0],
           "eps_grid": [0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9],
           "trials": 5000},
  "detectors": ["rdd", {"family": "rddt", "xi": "tune"}, "rddf", {"family": "rddft", "eps": "tune"}],
  "runs": [
    {"label": "N100", "N": 100, "sweep": {"variable": "M", "values": [5, 8, 12, 18, 27, 40, 60, 100]}},
    {"label": "N200", "N": 200, "sweep": {"variable": "M", "values": [8, 12, 18, 27, 40, 60, 90, 135, 200]}},
    {"label": "N400", "N": 400, "sweep": {"variable": "M", "values": [12, 18, 27, 40, 60, 90, 135, 200, 300]}}
  ]
})json"},
        {"fig4", R"json({
  "name": "fig4",
  "notes": "Pe versus M for N = 100 and several K. Fixed: N = 100, r = 1, sigma2 = 0.005, G = I, min-coherence partial DFT, thresholds tuned per point. Reconstructed: K values, M grid, seeds, search count, threshold grids, trial count.",
  "seed": 20112,
  "N": 100,
  "sigma2": 0.005,
  "amplitudes": 1.0,
  "gram": {"kind": "identity"},
  "matrix": {"kind": "partial-dft", "search": 10000},
  "trials": 20000,
  "tune": {"xi_grid": [0.5, 0.55, 0.6, 0.64, 0.68, 0.72, 0.76, 0.8, 0.84, 0.88, 0.92],
           "eps_grid": [0.2, 0.25, 0.32, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8],
           "trials": 5000},
  "detectors": ["rdd", {"family": "rddt", "xi": "tune"}, "rddf", {"family": "rddft", "eps": "tune"}],
  "runs": [
    {"label": "K2", "K": 2, "sweep": {"variable": "M", "values": [5, 8, 12, 18, 27, 40, 60, 100]}},
    {"label": "K4", "K": 4, "sweep": {"variable": "M", "values": [8, 12, 18, 27, 40, 60, 100]}},
    {"label": "K6", "K": 6, "sweep": {"variable": "M", "values": [12, 18, 27, 40, 60, 100]}},
    {"label": "K8", "K": 8, "sweep": {"variable": "M", "values": [12, 18, 27, 40, 60, 100]}}
  ]
})json"},
        {"fig5a", R"json({
  "name": "fig5a",
  "notes": "Partial DFT versus Gaussian A, Pe versus M. Fixed: N = 100, K = 6, r = 1, sigma2 = 0.005, G = I. Reconstructed: M grid, seeds, search count (the Gaussian matrix is also the least coherent of its candidates), trial count.",
  "seed": 20113,
  "N": 100,
  "K": 6,
  "sigma2": 0.005,
  "amplitudes": 1.0,
  "gram": {"kind": "identity"},
  "trials": 20000,
  "detectors": ["rdd", "rddf"],
  "sweep": {"variable": "M", "values": [20, 30, 40, 50, 60, 70, 80, 90, 100]},
  "runs": [
    {"label": "dft", "matrix": {"kind": "partial-dft", "search": 10000}},
    {"label": "gaussian", "matrix": {"kind": "gaussian", "search": 100}}
  ]
})json"},
        {"fig5b", R"json({
  "name": "fig5b",
  "notes": "Gaussian versus partial DFT versus Kerdock A, Pe versus K. Fixed: N = 32, M = 16, 32 columns drawn from the 16 x 256 Kerdock frame, r = 1, sigma2 = 0.005, G = I. Reconstructed: K grid, column draw, seeds, search count, trial count.",
  "seed": 20114,
  "N": 32,
  "M": 16,
  "sigma2": 0.005,
  "amplitudes": 1.0,
  "gram": {"kind": "identity"},
  "trials": 20000,
  "detectors": ["rdd", "rddf"],
  "sweep": {"variable": "K", "values": [1, 2, 3, 4, 5, 6, 7, 8]},
  "runs": [
    {"label": "gaussian", "matrix": {"kind": "gaussian", "search": 1000}},
    {"label": "dft", "matrix": {"kind": "partial-dft", "search": 10000}},
    {"label": "kerdock", "matrix": {"kind": "kerdock"}}
  ]
})json"},
        {"fig6", R"json({
  "name": "fig6",
  "notes": "Kerdock A with M = 1024, Pe versus K for several N. Fixed: M = 1024, amplitudes uniform in [1, 1.5], sigma2 = 0.005, G = I. Reconstructed: N values, K grid, column draws, seeds, trial count (kept small; each trial costs O(M N K)).",
  "seed": 20115,
  "M": 1024,
  "sigma2": 0.005,
  "amplitudes": {"kind": "uniform", "lo": 1.0, "hi": 1.5},
  "gram": {"kind": "identity"},
  "matrix": {"kind": "kerdock"},
  "trials": 500,
  "detectors": ["rdd", "rddf"],
  "sweep": {"variable": "K", "values": [8, 16, 32, 48, 64]},
  "runs": [
    {"label": "N2048", "N": 2048},
    {"label": "N4096", "N": 4096}
  ]
})json"},
        {"fig7", R"json({
  "name": "fig7",
  "notes": "Pe versus M at several noise levels, with the conventional decorrelator (M = N front end) as reference. Fixed: N = 100, K = 2, r = 1, G = I, min-coherence partial DFT. Reconstructed: noise levels (SNR 23, 20, 17, 13, 10 dB), M grid, seeds, search count, trial count.",
  "seed": 20116,
  "N": 100,
  "K": 2,
  "amplitudes": 1.0,
  "gram": {"kind": "identity"},
  "matrix": {"kind": "partial-dft", "search": 10000},
  "trials": 20000,
  "detectors": ["rdd", "rddf", "decorrelator"],
  "sweep": {"variable": "M", "values": [10, 15, 20, 30, 40, 60, 80, 100]},
  "runs": [
    {"label": "snr23", "sigma2": 0.005},
    {"label": "snr20", "sigma2": 0.01},
    {"label": "snr17", "sigma2": 0.02},
    {"label": "snr13", "sigma2": 0.05},
    {"label": "snr10", "sigma2": 0.1}
  ]
})json"},
        {"fig8", R"json({
  "name": "fig8",
  "notes": "Near-far amplitudes, RDD versus RDDF, Pe versus M. Fixed: N = 100, K = 2, amplitudes uniform in [1, 1.5] redrawn each trial, sigma2 = 0.005, G = I. Reconstructed: M grid, seeds, search count, trial count.",
  "seed": 20117,
  "N": 100,
  "K": 2,
  "sigma2": 0.005,
  "amplitudes": {"kind": "uniform", "lo": 1.0, "hi": 1.5},
  "gram": {"kind": "identity"},
  "matrix": {"kind": "partial-dft", "search": 10000},
  "trials": 20000,
  "detectors": ["rdd", "rddf"],
  "sweep": {"variable": "M", "values": [5, 8, 12, 18, 27, 40, 60, 100]}
})json"},
        {"fig10a", R"json({
  "name": "fig10a",
  "notes": "Whitening with Gold-code signatures. Fixed: N = 100, K = 2, amplitudes uniform in [1, 1.5], Gold-code Gram matrix with L = 1023, sigma2 = 0.005. Reconstructed: M grid, seeds, search count, trial count. The Gram formula at N = 100 gives lambda_max(G^-1) = 1.107.",
  "seed": 20118,
  "N": 100,
  "K": 2,
  "sigma2": 0.005,
  "amplitudes": {"kind": "uniform", "lo": 1.0, "hi": 1.5},
  "gram": {"kind": "gold", "L": 1023},
  "matrix": {"kind": "partial-dft", "search": 10000},
  "trials": 20000,
  "detectors": ["rdd", "rddf", {"family": "rdd", "whiten": true}, {"family": "rddf", "whiten": true}],
  "sweep": {"variable": "M", "values": [10, 20, 30, 40, 60, 80, 100]}
})json"},
        {"fig10b", R"json({
  "name": "fig10b",
  "notes": "As fig10a with sigma2 = 0.01. Fixed: N = 100, K = 2, amplitudes uniform in [1, 1.5], Gold-code Gram matrix with L = 1023. Reconstructed: M grid, seeds, search count, trial count.",
  "seed": 20119,
  "N": 100,
  "K": 2,
  "sigma2": 0.01,
  "amplitudes": {"kind": "uniform", "lo": 1.0, "hi": 1.5},
  "gram": {"kind": "gold", "L": 1023},
  "matrix": {"kind": "partial-dft", "search": 10000},
  "trials": 20000,
  "detectors": ["rdd", "rddf", {"family": "rdd", "whiten": true}, {"family": "rddf", "whiten": true}],
  "sweep": {"variable": "M", "values": [10, 20, 30, 40, 60, 80, 100]}
})json"},
        {"fig10c", R"json({
  "name": "fig10c",
  "notes": "Whitening with an ill-conditioned Gram matrix. Fixed: N = 100, K = 2, amplitudes uniform in [1, 1.5], G = U diag(1/400, ..., 100/400) U^T so lambda_max(G^-1) = 400, sigma2 = 0.005. Reconstructed: the random orthogonal U, M grid, seeds, search count, trial count.",
  "seed": 20120,
  "N": 100,
  "K": 2,
  "sigma2": 0.005,
  "amplitudes": {"kind": "uniform", "lo": 1.0, "hi": 1.5},
  "gram": {"kind": "spectrum", "linspace": [0.0025, 0.25]},
  "matrix": {"kind": "partial-dft", "search": 10000},
  "trials": 20000,
  "detectors": ["rdd", "rddf", {"family": "rdd", "whiten": true}, {"family": "rddf", "whiten": true}],
  "sweep": {"variable": "M", "values": [10, 20, 30, 40, 60, 80, 100]}
})json"},
        {"fig10d", R"json({
  "name": "fig10d",
  "notes": "As fig10c with sigma2 = 0.01. Fixed: N = 100, K = 2, amplitudes uniform in [1, 1.5], lambda_max(G^-1) = 400. Reconstructed: the random orthogonal U, M grid, seeds, search count, trial count.",
  "seed": 20121,
  "N": 100,
  "K": 2,
  "sigma2": 0.01,
  "amplitudes": {"kind": "uniform", "lo": 1.0, "hi": 1.5},
  "gram": {"kind": "spectrum", "linspace": [0.0025, 0.25]},
  "matrix": {"kind": "partial-dft", "search": 10000},
  "trials": 20000,
  "detectors": ["rdd", "rddf", {"family": "rdd", "whiten": true}, {"family": "rddf", "whiten": true}],
  "sweep": {"variable": "M", "values": [10, 20, 30, 40, 60, 80, 100]}
})json"},
        {"table1", R"json({
  "name": "table1",
  "notes": "One-step versus iterative detectors with sign, least-squares and MMSE symbol stages; cond_symbol_err is P(b_hat != b | support correct). Fixed: N = 100, K = 2, r = 1, sigma2 = 0.005, Gold-code Gram matrix with L = 1023, M in {5, 9, 18, 37}, min-coherence partial DFT. Reconstructed: seeds, 1e4 search candidates, 1e5 trials per point.",
  "seed": 20122,
  "N": 100,
  "K": 2,
  "sigma2": 0.005,
  "amplitudes": 1.0,
  "gram": {"kind": "gold", "L": 1023},
  "matrix": {"kind": "partial-dft", "search": 10000},
  "trials": 100000,
  "detectors": ["rdd", "rd-ls", "rd-mmse", "rddf",
                {"family": "rddf", "symbols": "ls"}, {"family": "rddf", "symbols": "mmse"}],
  "sweep": {"variable": "M", "values": [5, 9, 18, 37]}
})json"},
    };
    return table;
}

} // namespace

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names = {"fig3", "fig4",   "fig5a",  "fig5b",  "fig6",   "fig7",
                                                   "fig8", "fig10a", "fig10b", "fig10c", "fig10d", "table1"};
    return names;
}

const std::string& preset_text(const std::string& name)
{
    const auto& t = presets();
    auto it = t.find(name);
    if (it == t.end())
        throw InvalidArgument(fmt::format("unknown preset '{}' (try --list)", name));
    return it->second;
}

ExperimentConfig load_preset(const std::string& name)
{
    return parse_config_text(preset_text(name), name);
}

} // namespace rdmud
