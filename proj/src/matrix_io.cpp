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

#include "rdmud/matrix_io.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "rdmud/error.hpp"

namespace rdmud {

namespace {

std::vector<std::string_view> split_whitespace(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size())
    {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos])))
            ++pos;
        std::size_t end = pos;
        while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end])))
            ++end;
        if (end > pos)
            out.push_back(line.substr(pos, end - pos));
        pos = end;
    }
    return out;
}

bool parse_double(std::string_view text, double& value)
{
    // strtod handles inf/nan spellings and hex floats consistently.
    std::string buffer(text);
    char* end = nullptr;
    value = std::strtod(buffer.c_str(), &end);
    return !buffer.empty() && end == buffer.c_str() + buffer.size();
}

bool parse_index(std::string_view text, long long& value)
{
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc() && ptr == text.data() + text.size();
}

bool blank(std::string_view line)
{
    for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c)))
            return false;
    return true;
}

} // namespace

MatrixFile read_matrix(std::istream& in, const std::string& source)
{
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line))
    {
        ++line_no;
        if (!blank(line))
            break;
    }
    if (line_no == 0 || blank(line))
        throw ParseError(source, line_no == 0 ? 1 : line_no, "missing RDMUD-MAT header");

    const auto header = split_whitespace(line);
    long long rows = 0, cols = 0;
    if (header.size() != 5 || header[0] != "RDMUD-MAT" || header[1] != "v1" || !parse_index(header[2], rows) ||
        !parse_index(header[3], cols) || rows <= 0 || cols <= 0 || (header[4] != "real" && header[4] != "complex"))
        throw ParseError(source, line_no, "malformed header, expected 'RDMUD-MAT v1 <M> <N> <real|complex>'");

    MatrixFile file;
    file.complex = header[4] == "complex";
    file.values.resize(rows, cols);

    long long row = 0;
    while (row < rows && std::getline(in, line))
    {
        ++line_no;
        if (blank(line))
            continue;
        const auto fields = split_whitespace(line);
        if (static_cast<long long>(fields.size()) != cols)
            throw ParseError(source, line_no,
                             fmt::format("row {} has {} fields, expected {}", row + 1, fields.size(), cols));
        for (long long c = 0; c < cols; ++c)
        {
            const std::string_view field = fields[static_cast<std::size_t>(c)];
            double re = 0.0, im = 0.0;
            bool ok = false;
            if (file.complex)
            {
                const auto comma = field.find(',');
                ok = comma != std::string_view::npos && parse_double(field.substr(0, comma), re) &&
                     parse_double(field.substr(comma + 1), im);
            }
            else
            {
                ok = parse_double(field, re);
            }
            if (!ok)
                throw ParseError(source, line_no, fmt::format("non-numeric entry '{}' in column {}", field, c + 1));
            file.values(row, c) = Complex(re, im);
        }
        ++row;
    }
    if (row < rows)
        throw ParseError(source, line_no + 1, fmt::format("file ends after {} of {} rows", row, rows));

    while (std::getline(in, line))
    {
        ++line_no;
        if (!blank(line))
            throw ParseError(source, line_no, "unexpected content after the last matrix row");
    }
    return file;
}

MatrixFile read_matrix_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(fmt::format("cannot open '{}'", path));
    return read_matrix(in, path);
}

void write_matrix(std::ostream& out, const CMatrix& values, bool complex)
{
    out << fmt::format("RDMUD-MAT v1 {} {} {}\n", values.rows(), values.cols(), complex ? "complex" : "real");
    for (Index r = 0; r < values.rows(); ++r)
    {
        std::string line;
        for (Index c = 0; c < values.cols(); ++c)
        {
            if (c > 0)
                line += ' ';
            if (complex)
                line += fmt::format("{:.17g},{:.17g}", values(r, c).real(), values(r, c).imag());
            else
                line += fmt::format("{:.17g}", values(r, c).real());
        }
        out << line << '\n';
    }
}

void write_matrix_file(const std::string& path, const CMatrix& values, bool complex)
{
    std::ofstream out(path);
    if (!out)
        throw Error(fmt::format("cannot write '{}'", path));
    write_matrix(out, values, complex);
    if (!out)
        throw Error(fmt::format("write to '{}' failed", path));
}

void write_matrix_file(const std::string& path, const RMatrix& values)
{
    write_matrix_file(path, CMatrix(values.cast<Complex>()), false);
}

MeasurementMatrix load_matrix(const std::string& path, bool normalize)
{
    MatrixFile file = read_matrix_file(path);
    if (normalize)
        return MeasurementMatrix::normalized(std::move(file.values));
    return MeasurementMatrix(std::move(file.values));
}

void save_matrix(const std::string& path, const MeasurementMatrix& A)
{
    write_matrix_file(path, A.values(), !A.is_real());
}

GramMatrix load_gram(const std::string& path)
{
    const MatrixFile file = read_matrix_file(path);
    if (file.values.imag().cwiseAbs().maxCoeff() != 0.0)
        throw InvalidArgument(fmt::format("Gram matrix in '{}' must be real", path));
    return GramMatrix(file.values.real());
}

} // namespace rdmud
