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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rdmud {

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Precondition violated by an argument value (K > N, nonpositive threshold, ...).
class InvalidArgument : public Error
{
public:
    using Error::Error;
};

class DimensionError : public Error
{
public:
    using Error::Error;
};

/// Gram matrix not symmetric positive definite, or condition number above 1e12.
class SingularGramError : public Error
{
public:
    using Error::Error;
};

/// A G^-1 A^H has eigenvalues below the floor, so its inverse square root is undefined.
class WhiteningUndefinedError : public Error
{
public:
    using Error::Error;
};

/// Selected columns are rank deficient (least squares or MMSE symbol stage).
class LeastSquaresSingularError : public Error
{
public:
    using Error::Error;
};

class UnsupportedDimensionError : public Error
{
public:
    using Error::Error;
};

/// Malformed matrix file. Carries the 1-based line number of the offending line.
class ParseError : public Error
{
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line)
    {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Experiment configuration failed schema validation.
class ConfigError : public Error
{
public:
    using Error::Error;
};

} // namespace rdmud
