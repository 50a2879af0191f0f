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

#include "rdmud/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "rdmud/error.hpp"

namespace rdmud {

SymbolVector::SymbolVector(std::vector<int> entries) : entries_(std::move(entries))
{
    for (std::size_t n = 0; n < entries_.size(); ++n)
    {
        const int v = entries_[n];
        if (v < -1 || v > 1)
            throw InvalidArgument(fmt::format("symbol entry {} has value {}, expected -1, 0 or 1", n, v));
        if (v != 0)
            support_.push_back(static_cast<Index>(n));
    }
}

SymbolVector SymbolVector::from_support(Index n, std::span<const Index> support, std::span<const int> symbols)
{
    if (support.size() != symbols.size())
        throw DimensionError("support and symbol lists differ in length");
    std::vector<int> entries(static_cast<std::size_t>(n), 0);
    for (std::size_t k = 0; k < support.size(); ++k)
    {
        const Index idx = support[k];
        if (idx < 0 || idx >= n)
            throw InvalidArgument(fmt::format("support index {} outside [0, {})", idx, n));
        if (entries[static_cast<std::size_t>(idx)] != 0)
            throw InvalidArgument(fmt::format("support index {} repeated", idx));
        if (symbols[k] != 1 && symbols[k] != -1)
            throw InvalidArgument("active symbols must be +1 or -1");
        entries[static_cast<std::size_t>(idx)] = symbols[k];
    }
    return SymbolVector(std::move(entries));
}

RVector SymbolVector::as_real() const
{
    RVector out(size());
    for (Index n = 0; n < size(); ++n)
        out[n] = entries_[static_cast<std::size_t>(n)];
    return out;
}

AmplitudeProfile::AmplitudeProfile(RVector gains) : gains_(std::move(gains))
{
    for (Index n = 0; n < gains_.size(); ++n)
        if (!std::isfinite(gains_[n]) || gains_[n] == 0.0)
            throw InvalidArgument(fmt::format("amplitude r_{} = {} must be finite and nonzero", n, gains_[n]));
}

AmplitudeProfile AmplitudeProfile::constant(Index n, double value)
{
    return AmplitudeProfile(RVector::Constant(n, value));
}

namespace {

template <class Reduce>
double reduce_magnitude(const RVector& gains, std::span<const Index> support, double init, Reduce reduce)
{
    double acc = init;
    if (support.empty())
    {
        for (Index n = 0; n < gains.size(); ++n)
            acc = reduce(acc, std::abs(gains[n]));
    }
    else
    {
        for (Index n : support)
            acc = reduce(acc, std::abs(gains[n]));
    }
    return acc;
}

} // namespace

double AmplitudeProfile::max_magnitude(std::span<const Index> support) const
{
    return reduce_magnitude(gains_, support, 0.0, [](double a, double b) { return std::max(a, b); });
}

double AmplitudeProfile::min_magnitude(std::span<const Index> support) const
{
    return reduce_magnitude(gains_, support, HUGE_VAL, [](double a, double b) { return std::min(a, b); });
}

std::vector<double> AmplitudeProfile::sorted_magnitudes(std::span<const Index> support) const
{
    std::vector<double> out;
    if (support.empty())
        for (Index n = 0; n < gains_.size(); ++n)
            out.push_back(std::abs(gains_[n]));
    else
        for (Index n : support)
            out.push_back(std::abs(gains_[n]));
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

CVector noiseless_response(const CMatrix& A, const AmplitudeProfile& gains, const SymbolVector& symbols)
{
    if (A.cols() != symbols.size() || gains.size() != symbols.size())
        throw DimensionError(
            fmt::format("A has {} columns, b has {} entries, r has {}", A.cols(), symbols.size(), gains.size()));
    CVector y = CVector::Zero(A.rows());
    for (Index n : symbols.support())
        y += (gains[n] * symbols[n]) * A.col(n);
    return y;
}

} // namespace rdmud
