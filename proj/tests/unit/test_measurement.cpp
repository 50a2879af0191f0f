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

#include "oracles.hpp"
#include "rdmud/error.hpp"
#include "rdmud/matrix_factory.hpp"
#include "rdmud/measurement.hpp"

using namespace rdmud;

TEST_CASE("coherence and row energy agree with the brute-force oracles")
{
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const MeasurementMatrix A = gen_gaussian(6, 15, seed);
        CHECK(A.coherence() == doctest::Approx(oracle::coherence(A.values())).epsilon(1e-12));
        CHECK(A.row_energy() == doctest::Approx(oracle::row_energy(A.values())).epsilon(1e-12));
        CHECK(coherence(A.values()) == doctest::Approx(A.coherence()));
    }
}

TEST_CASE("row energy lies in [1, 1 + (N-1) mu^2]")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const MeasurementMatrix A = seed % 2 ? gen_gaussian(8, 30, seed) : gen_partial_dft(8, 30, seed);
        const double mu = A.coherence();
        CHECK(A.row_energy() >= 1.0 - 1e-12);
        CHECK(A.row_energy() <= 1.0 + 29.0 * mu * mu + 1e-12);
    }
}

TEST_CASE("column norms are validated")
{
    CMatrix raw(2, 2);
    raw << 1.0, 3.0, 0.0, 4.0;
    CHECK_THROWS_AS(MeasurementMatrix{raw}, InvalidArgument);
    const MeasurementMatrix A = MeasurementMatrix::normalized(raw);
    CHECK(A.values().col(1).norm() == doctest::Approx(1.0));
    CHECK(A.coherence() == doctest::Approx(0.6));
    CHECK(A.is_real());
    CMatrix zero = CMatrix::Zero(2, 2);
    CHECK_THROWS_AS(MeasurementMatrix::normalized(zero), InvalidArgument);
}

TEST_CASE("single-column coherence is undefined")
{
    const MeasurementMatrix A(CMatrix::Identity(3, 1));
    CHECK_FALSE(A.has_coherence());
    CHECK_THROWS_AS(A.coherence(), InvalidArgument);
}

TEST_CASE("column selection keeps stats consistent")
{
    const MeasurementMatrix A = gen_gaussian(5, 12, 4);
    const std::vector<Index> cols{1, 4, 7, 9};
    const MeasurementMatrix S = A.select_columns(cols);
    CHECK(S.cols() == 4);
    CHECK(S.values().col(2) == A.values().col(7));
    CHECK(S.coherence() <= A.coherence() + 1e-15);
    CHECK(S.coherence() == doctest::Approx(oracle::coherence(S.values())));
}

TEST_CASE("welch bound")
{
    CHECK(welch_bound(16, 256) == doctest::Approx(std::sqrt(240.0 / (16.0 * 255.0))));
    CHECK(welch_bound(10, 10) == 0.0);
    // Large N approaches 1/sqrt(M).
    CHECK(welch_bound(64, 1000000) == doctest::Approx(0.125).epsilon(1e-4));
    for (std::uint64_t seed = 0; seed < 5; ++seed)
        CHECK(gen_gaussian(6, 20, seed).coherence() >= welch_bound(6, 20));
}
