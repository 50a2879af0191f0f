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

#include <iosfwd>
#include <string>

#include "rdmud/gram.hpp"
#include "rdmud/linalg.hpp"
#include "rdmud/measurement.hpp"

namespace rdmud {

/// RDMUD-MAT v1 text format:
///
///   RDMUD-MAT v1 <M> <N> <real|complex>
///   <M rows of N whitespace-separated entries; complex entries as re,im>
///
/// Values are written with 17 significant digits so a write/read round trip
/// is bit-exact. Blank lines and trailing whitespace are ignored.
struct MatrixFile
{
    CMatrix values;
    bool complex = true;
};

MatrixFile read_matrix(std::istream& in, const std::string& source = "<stream>");
MatrixFile read_matrix_file(const std::string& path);

void write_matrix(std::ostream& out, const CMatrix& values, bool complex);
void write_matrix_file(const std::string& path, const CMatrix& values, bool complex);
void write_matrix_file(const std::string& path, const RMatrix& values);

/// Measurement matrix from file; columns are rescaled only when `normalize`.
MeasurementMatrix load_matrix(const std::string& path, bool normalize = false);
void save_matrix(const std::string& path, const MeasurementMatrix& A);

/// Real symmetric Gram matrix from file (imaginary parts must be zero).
GramMatrix load_gram(const std::string& path);

} // namespace rdmud
