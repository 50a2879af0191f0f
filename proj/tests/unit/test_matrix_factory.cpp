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
#include <set>

#include "oracles.hpp"
#include "rdmud/error.hpp"
#include "rdmud/kerdock.hpp"
#include "rdmud/matrix_factory.hpp"

using namespace rdmud;

TEST_CASE("matrix kind names")
{
    CHECK(parse_matrix_kind("partial-dft") == MatrixKind::partial_dft);
    CHECK(to_string(MatrixKind::kerdock) == "kerdock");
    CHECK_THROWS_AS(parse_matrix_kind("hadamard"), InvalidArgument);
}

TEST_CASE("gaussian matrices have unit-norm columns and are seeded")
{
    const MeasurementMatrix A = gen_gaussian(7, 20, 11);
    for (Index n = 0; n < A.cols(); ++n)
        CHECK(A.values().col(n).norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(A.is_real());
    CHECK(gen_gaussian(7, 20, 11).values() == A.values());
    CHECK(gen_gaussian(7, 20, 12).values() != A.values());
    CHECK_THROWS_AS(gen_gaussian(0, 5, 1), InvalidArgument);
    CHECK_THROWS_AS(gen_gaussian(6, 5, 1), InvalidArgument);
}

TEST_CASE("partial DFT entries, tight frame and fast coherence")
{
    const MeasurementMatrix A = gen_partial_dft(9, 40, 5);
    for (Index m = 0; m < 9; ++m)
        for (Index n = 0; n < 40; ++n)
            CHECK(std::abs(A.values()(m, n)) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    const CMatrix AAH = A.values() * A.values().adjoint();
    CHECK((AAH - (40.0 / 9.0) * CMatrix::Identity(9, 9)).norm() < 1e-12);
    CHECK(A.coherence() == doctest::Approx(oracle::coherence(A.values())).epsilon(1e-12));
    CHECK(A.row_energy() == doctest::Approx(oracle::row_energy(A.values())).epsilon(1e-12));

    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const auto rows = random_subset(30, 6, seed);
        const MeasurementMatrix B = partial_dft_from_rows(30, rows);
        CHECK(partial_dft_coherence(30, rows) == doctest::Approx(oracle::coherence(B.values())).epsilon(1e-12));
    }
    CHECK(gen_partial_dft(16, 16, 1).coherence() == 0.0);
}

TEST_CASE("random subsets are sorted, distinct and seeded")
{
    const auto s = random_subset(50, 10, 3);
    CHECK(s.size() == 10);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(std::set<Index>(s.begin(), s.end()).size() == 10);
    CHECK(random_subset(50, 10, 3) == s);
    CHECK(random_subset(5, 5, 1) == std::vector<Index>{0, 1, 2, 3, 4});
    CHECK_THROWS_AS(random_subset(5, 6, 1), InvalidArgument);
}

TEST_CASE("min-coherence search keeps the least coherent candidate, independent of threads")
{
    MatrixRecipe r;
    r.kind = MatrixKind::partial_dft;
    r.rows = 8;
    r.cols = 64;
    r.seed = 21;
    r.search_count = 300;
    const SearchResult one = search_min_coherence(r, 1);
    const SearchResult four = search_min_coherence(r, 4);
    CHECK(one.winner == four.winner);
    CHECK(one.candidate_coherence == four.candidate_coherence);
    CHECK(one.matrix.values() == four.matrix.values());
    const double best = *std::min_element(one.candidate_coherence.begin(), one.candidate_coherence.end());
    CHECK(one.matrix.coherence() == best);
    CHECK(one.candidate_coherence[static_cast<std::size_t>(one.winner)] == best);
    // Candidate 0 is the plain draw.
    CHECK(one.candidate_coherence[0] == doctest::Approx(gen_partial_dft(8, 64, 21).coherence()));

    r.kind = MatrixKind::gaussian;
    r.search_count = 20;
    const SearchResult g = search_min_coherence(r, 2);
    CHECK(g.matrix.coherence() == *std::min_element(g.candidate_coherence.begin(), g.candidate_coherence.end()));
}

TEST_CASE("kerdock frames")
{
    CHECK(is_kerdock_dimension(16));
    CHECK(is_kerdock_dimension(1024));
    CHECK_FALSE(is_kerdock_dimension(32));
    CHECK_FALSE(is_kerdock_dimension(4));

    const MeasurementMatrix K16 = gen_kerdock(16);
    CHECK(K16.rows() == 16);
    CHECK(K16.cols() == 256);
    CHECK(oracle::coherence(K16.values()) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK((K16.values() * K16.values().adjoint() - 16.0 * CMatrix::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-10);
    for (Index n = 0; n < 256; ++n)
        CHECK(K16.values().col(n).norm() == doctest::Approx(1.0).epsilon(1e-14));

    const MeasurementMatrix K64 = gen_kerdock(64);
    CHECK(K64.coherence() == doctest::Approx(0.125).epsilon(1e-12));

    const std::vector<Index> cols{0, 17, 255};
    const CMatrix part = kerdock_columns(16, cols);
    CHECK((part.col(1) - K16.values().col(17)).norm() == 0.0);

    MatrixRecipe r;
    r.kind = MatrixKind::kerdock;
    r.rows = 16;
    r.cols = 32;
    r.seed = 2;
    const MeasurementMatrix sub = generate_matrix(r);
    CHECK(sub.cols() == 32);
    CHECK(sub.coherence() <= 0.25 + 1e-12);
    CHECK(sub.coherence() == doctest::Approx(oracle::coherence(sub.values())).epsilon(1e-12));
    r.rows = 32;
    CHECK_THROWS_AS(generate_matrix(r), UnsupportedDimensionError);
}

TEST_CASE("large kerdock subselection uses closed-form statistics")
{
    const MeasurementMatrix A = kerdock_subselect(1024, 2048, 7);
    CHECK(A.rows() == 1024);
    CHECK(A.cols() == 2048);
    CHECK(A.coherence() == doctest::Approx(1.0 / 32.0));
    // Spot-check the closed-form coherence on a few column pairs.
    for (Index n = 0; n < 40; ++n)
    {
        const double ip = std::abs(A.values().col(n).dot(A.values().col(2047 - n)));
        CHECK(ip <= 1.0 / 32.0 + 1e-12);
    }
}
