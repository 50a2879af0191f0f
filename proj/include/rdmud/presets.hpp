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

#include <string>
#include <vector>

#include "rdmud/config.hpp"

namespace rdmud {

/// Names of the built-in experiment presets, in display order.
const std::vector<std::string>& preset_names();

/// JSON text of a preset. Throws InvalidArgument for an unknown name.
const std::string& preset_text(const std::string& name);

ExperimentConfig load_preset(const std::string& name);

} // namespace rdmud
