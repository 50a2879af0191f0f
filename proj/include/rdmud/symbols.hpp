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

#include <span>
#include <vector>

#include "rdmud/linalg.hpp"

namespace rdmud {

/// Ternary symbol vector b in {-1, 0, +1}^N. Nonzero entries are the active
/// users; their sign is the transmitted BPSK symbol. Indices are 0-based.
class SymbolVector
{
public:
    SymbolVector() = default;

    /// Throws InvalidArgument if any entry is outside {-1, 0, 1}.
    explicit SymbolVector(std::vector<int> entries);

    static SymbolVector zeros(Index n) { return SymbolVector(std::vector<int>(static_cast<std::size_t>(n), 0)); }

    /// Active set with given symbols; support indices must be distinct and < n.
    static SymbolVector from_support(Index n, std::span<const Index> support, std::span<const int> symbols);

    Index size() const noexcept { return static_cast<Index>(entries_.size()); }
    int operator[](Index n) const { return entries_[static_cast<std::size_t>(n)]; }
    const std::vector<int>& entries() const noexcept { return entries_; }

    /// Sorted indices of the nonzero entries.
    const std::vector<Index>& support() const noexcept { return support_; }
    Index sparsity() const noexcept { return static_cast<Index>(support_.size()); }

    RVector as_real() const;

    friend bool operator==(const SymbolVector&, const SymbolVector&) = default;

private:
    std::vector<int> entries_;
    std::vector<Index> support_;
};

/// Known received amplitudes r_n (the diagonal of R). Entries may be
/// negative but never zero.
class AmplitudeProfile
{
public:
    AmplitudeProfile() = default;

    /// Throws InvalidArgument on a zero or non-finite gain.
    explicit AmplitudeProfile(RVector gains);

    static AmplitudeProfile constant(Index n, double value);

    Index size() const noexcept { return gains_.size(); }
    double operator[](Index n) const { return gains_[n]; }
    const RVector& gains() const noexcept { return gains_; }

    /// max |r_n| over the given support (over all users when empty).
    double max_magnitude(std::span<const Index> support = {}) const;
    double min_magnitude(std::span<const Index> support = {}) const;

    /// |r^(1)| >= |r^(2)| >= ... over the support.
    std::vector<double> sorted_magnitudes(std::span<const Index> support = {}) const;

private:
    RVector gains_;
};

/// A R b for the given columns: sum over the support of r_n b_n a_n.
CVector noiseless_response(const CMatrix& A, const AmplitudeProfile& gains, const SymbolVector& symbols);

} // namespace rdmud
