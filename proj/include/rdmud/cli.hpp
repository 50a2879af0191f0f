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

namespace rdmud {

/// Entry point of the rdmud command-line tool.
///
/// Exit codes: 0 on success or --help, 2 for usage errors (bad flags,
/// invalid configuration), 1 for runtime failures (missing files, numerical
/// errors).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace rdmud
