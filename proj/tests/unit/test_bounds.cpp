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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rdmud/bounds.hpp"
#include "rdmud/error.hpp"
#include "rdmud/matrix_factory.hpp"
#include "rdmud/rng.hpp"

using namespace rdmud;

namespace {

BoundParams params(double sigma, double mu, Index K, std::vector<double> gains, Index N = 100)
{
    BoundParams p;
    p.alpha = 1.0;
    p.N = N;
    p.K = K;
    p.sigma2 = sigma * sigma;
    p.mu = mu;
    p.sorted_gains = std::move(gains);
    return p;
}

// sigma2 giving a prescribed tau with every other factor equal to one.
double sigma_for_tau(double t, const BoundParams& p)
{
    return t / std::sqrt(2.0 * (1.0 + p.alpha) * std::log(double(p.N)));
}

} // namespace

TEST_CASE("tau")
{
    BoundParams p = params(1.0, 0.1, 2, {1.0, 1.0});
    CHECK(tau(p) == doctest::Approx(4.29193).epsilon(1e-5));
    CHECK(tau(p) == doctest::Approx(std::sqrt(4.0 * std::log(100.0))));
    p.sigma2 = 4.0;
    CHECK(tau(p) == doctest::Approx(2.0 * std::sqrt(4.0 * std::log(100.0))));
    p.sigma2 = 0.0;
    CHECK(tau(p) == 0.0);
    p.sigma2 = 1.0;
    p.lambda_max_ginv = 4.0;
    p.row_energy = 2.25;
    CHECK(tau(p) == doctest::Approx(3.0 * std::sqrt(4.0 * std::log(100.0))));
    p.alpha = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("tau is nondecreasing in every argument")
{
    RandomStream rng(1, StreamId::test);
    for (int t = 0; t < 500; ++t)
    {
        BoundParams p = params(rng.uniform(0, 2), 0.1, 1, {1.0}, 2 + static_cast<Index>(rng.below(500)));
        p.alpha = rng.uniform(0.1, 3);
        p.lambda_max_ginv = rng.uniform(1, 100);
        p.row_energy = rng.uniform(1, 10);
        const double base = tau(p);
        BoundParams q = p;
        q.sigma2 *= 1.5;
        CHECK(tau(q) >= base);
        q = p;
        q.alpha += 0.5;
        CHECK(tau(q) >= base);
        q = p;
        q.N += 7;
        CHECK(tau(q) >= base);
        q = p;
        q.lambda_max_ginv *= 2;
        CHECK(tau(q) >= base);
        q = p;
        q.row_energy += 1;
        CHECK(tau(q) >= base);
    }
}

TEST_CASE("implied error bound")
{
    CHECK(implied_pe_bound(1.0, 100) == doctest::Approx(0.01 / std::sqrt(2.0 * std::numbers::pi * std::log(100.0))));
    CHECK(implied_pe_bound(1.0, 100) == doctest::Approx(1.859e-3).epsilon(1e-3));
}

TEST_CASE("coherence conditions")
{
    BoundParams p = params(0.0, 0.1, 2, {1.0, 1.0});
    p.sigma2 = std::pow(sigma_for_tau(0.2, p), 2);
    const ConditionReport c = check_rdd_condition(p);
    CHECK(c.tau == doctest::Approx(0.2));
    CHECK(c.lhs == doctest::Approx(0.7));
    CHECK(c.rhs == doctest::Approx(0.4));
    CHECK(c.holds);
    CHECK(c.implied_pe_bound == doctest::Approx(implied_pe_bound(1.0, 100)));
    const ConditionReport f = check_rddf_condition(p);
    CHECK(f.holds == c.holds);
    CHECK(f.lhs == doctest::Approx(c.lhs));

    // Near-far: r_max = 10, r_min = 1, mu = 0.05, K = 3, tau = 0.1.
    BoundParams nf = params(0.0, 0.05, 3, {10.0, 5.0, 1.0});
    nf.sigma2 = std::pow(sigma_for_tau(0.1, nf), 2);
    CHECK_FALSE(check_rdd_condition(nf).holds);
    CHECK(check_rddf_condition(nf).holds);
    CHECK(check_rddf_condition(nf).lhs == doctest::Approx(0.75));
    CHECK(check_rdd_condition(nf).lhs == doctest::Approx(1.0 - 2.5));

    // Simplified regime: tau = 0.
    BoundParams zero = params(0.0, 0.3, 2, {1.0, 1.0});
    CHECK(check_rdd_condition(zero).holds);
    zero.mu = 1.0 / 3.0 + 1e-9;
    CHECK_FALSE(check_rdd_condition(zero).holds);
    CHECK_FALSE(check_rddf_condition(zero).holds);
}

TEST_CASE("condition properties on sampled grids")
{
    RandomStream rng(2, StreamId::test);
    for (int t = 0; t < 2000; ++t)
    {
        const Index K = 1 + static_cast<Index>(rng.below(6));
        std::vector<double> g(static_cast<std::size_t>(K));
        for (auto& x : g)
            x = rng.uniform(0.1, 5.0);
        std::sort(g.begin(), g.end(), std::greater<>());
        BoundParams p = params(rng.uniform(0, 0.3), rng.uniform(0, 0.5), K, g);
        p.row_energy = rng.uniform(1, 3);
        const ConditionReport rdd = check_rdd_condition(p);
        const ConditionReport rddf = check_rddf_condition(p);
        CHECK(rdd.holds == (rdd.lhs >= rdd.rhs));
        // The RDDF condition is implied by the RDD condition.
        if (rdd.holds)
        {
            CHECK(rddf.holds);
            CHECK(xi_range(p).has_value());
            // Weaker symbol condition.
            CHECK(p.r_min() - (K - 1) * p.mu * p.r_max() >= tau(p));
        }
        if (p.mu >= 1.0 / (2 * K - 1))
        {
            CHECK_FALSE(rdd.holds);
            CHECK_FALSE(rddf.holds);
        }
        // Empty xi range exactly when the inequality fails strictly.
        const auto xr = xi_range(p);
        CHECK(xr.has_value() == (rdd.lhs > rdd.rhs));
    }
}

TEST_CASE("threshold ranges")
{
    const BoundParams p = params(0.0, 0.0, 2, {1.5, 1.0});
    const auto xr = xi_range(p);
    REQUIRE(xr);
    CHECK(xr->lower == 0.0);
    CHECK(xr->upper == doctest::Approx(1.0));
    CHECK(xr->contains(0.5));
    CHECK_FALSE(xr->contains(1.0));

    BoundParams k1 = params(0.0, 0.2, 1, {2.0});
    k1.sigma2 = std::pow(sigma_for_tau(0.3, k1), 2);
    const auto er = eps_range(k1);
    REQUIRE(er);
    CHECK(er->lower == doctest::Approx(0.3));
    CHECK(er->upper == doctest::Approx(1.7));

    BoundParams eq = params(0.0, 0.0, 3, {0.8, 0.8, 0.8});
    eq.sigma2 = std::pow(sigma_for_tau(0.1, eq), 2);
    const auto ee = eps_range(eq);
    REQUIRE(ee);
    CHECK(ee->lower == doctest::Approx(0.1));
    CHECK(ee->upper == doctest::Approx(0.7));

    // min_k r^(k) (1 - (K - k) mu) - tau with distinct gains.
    BoundParams d = params(0.0, 0.1, 3, {2.0, 1.0, 0.9});
    const auto ed = eps_range(d);
    REQUIRE(ed);
    CHECK(ed->upper == doctest::Approx(std::min({2.0 * 0.8, 1.0 * 0.9, 0.9})));

    const BoundParams bad = params(0.0, 0.5, 2, {1.0, 1.0});
    CHECK_FALSE(xi_range(bad).has_value());
}

TEST_CASE("error probability bounds")
{
    BoundParams p = params(std::sqrt(0.005), 0.0, 2, {1.0, 1.0});
    CHECK(snr_min(p) == doctest::Approx(200.0));
    CHECK(10.0 * std::log10(snr_min(p)) == doctest::Approx(23.01).epsilon(1e-3));
    CHECK(beta_rdd(p).value() == doctest::Approx(1.0));
    const double expected = (200.0 / std::sqrt(std::numbers::pi)) / std::sqrt(100.0) * std::exp(-25.0);
    CHECK(pe_bound_rdd(p) == doctest::Approx(expected));
    CHECK(pe_bound_rddf(p) == doctest::Approx(expected));

    // K = N, beta = 1: larger than the decorrelator bound.
    CHECK(pe_bound_from_beta(200.0, 1.0, 100) > pe_bound_decorrelator(200.0, 100));

    // Hand evaluation: (100 / (2 sqrt(pi))) * 100^-1/2 * e^-100 = 1.049e-43.
    CHECK(pe_bound_decorrelator(200.0, 100) == doctest::Approx(1.049e-43).epsilon(1e-3));
    CHECK(pe_bound_decorrelator(50.0, 200) == doctest::Approx(2.0 * pe_bound_decorrelator(50.0, 100)));

    // At the SNR where Q(sqrt(snr)) = 1e-3 the union bound covers N Q(sqrt(snr)).
    const double snr = std::pow(3.090232306, 2);
    CHECK(oracle::q_function(std::sqrt(snr)) == doctest::Approx(1e-3).epsilon(1e-6));
    CHECK(pe_bound_decorrelator(snr, 100) >= 100 * 1e-3);

    BoundParams bad = params(0.1, 0.5, 2, {1.0, 1.0});
    CHECK_FALSE(beta_rdd(bad).has_value());
    CHECK_FALSE(beta_rddf(bad).has_value());
    CHECK(std::isinf(pe_bound_rdd(bad)));
    CHECK(std::isinf(pe_bound_rddf(bad)));

    p.sigma2 = 0.0;
    CHECK(std::isinf(snr_min(p)));

    // Monotone decreasing in SNR once snr beta / 2 > 2.
    double prev = pe_bound_from_beta(4.5, 1.0, 100);
    for (double s = 5.0; s < 400.0; s *= 1.2)
    {
        const double cur = pe_bound_from_beta(s, 1.0, 100);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("partial DFT coherence bound")
{
    const CoherenceBound b = dft_coherence_bound(64, 100, 2.0);
    CHECK(b.bound == doctest::Approx(std::sqrt(4.0 * (2.0 * std::log(100.0) + 2.0) / 64.0)));
    CHECK(b.bound == doctest::Approx(0.8370).epsilon(1e-4));
    CHECK(b.probability_floor == doctest::Approx(1.0 - 2.0 * std::exp(-2.0)));
    CHECK(dft_coherence_bound(64, 100, std::log(2.0)).probability_floor == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(dft_coherence_bound(10, 100, 0.1).probability_floor == 0.0);
    const double c = 1.0;
    const double m = 4.0 * (2.0 * std::log(50.0) + c);
    CHECK(std::sqrt(4.0 * (2.0 * std::log(50.0) + c) / m) == doctest::Approx(1.0));

    int violations = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed)
        violations += partial_dft_coherence(100, random_subset(100, 64, seed)) >= b.bound;
    CHECK(violations / 1000.0 <= 2.0 * std::exp(-2.0));
}

TEST_CASE("SNR requirement and Q function")
{
    CHECK(snr_requirement(100) == doctest::Approx(36.84).epsilon(1e-3));
    CHECK(snr_requirement(1) == 0.0);
    CHECK(snr_requirement(101) > snr_requirement(100));
    CHECK(q_function(0.0) == 0.5);
    CHECK(q_function(1.0) == doctest::Approx(0.158655254));
}

TEST_CASE("bound parameters measured from an instance")
{
    const MeasurementMatrix A = gen_partial_dft(10, 40, 2);
    const GramMatrix G = gram_gold(40, 127);
    RVector g(40);
    for (Index n = 0; n < 40; ++n)
        g[n] = 1.0 + 0.01 * n;
    const BoundParams p = make_bound_params(A, G, AmplitudeProfile(g), 2, 0.01, 1.0);
    CHECK(p.mu == doctest::Approx(oracle::coherence(A.values())));
    CHECK(p.row_energy == doctest::Approx(oracle::row_energy(A.values())));
    CHECK(p.row_energy >= 1.0);
    CHECK(p.row_energy <= 1.0 + 39 * p.mu * p.mu + 1e-12);
    CHECK(p.lambda_max_ginv ==
          doctest::Approx(1.0 / G.values().selfadjointView<Eigen::Lower>().eigenvalues().minCoeff()));
    CHECK(p.r_max() == doctest::Approx(1.39));
    CHECK(p.r_min() == doctest::Approx(1.0));
}
