# SPDX-License-Identifier: Apache-2.0
#
# rdmud - reduced-dimension multiuser detection toolkit
# Copyright (C) 2026 The rdmud authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

"""Reduced-dimension multiuser detection."""

from ._rdmud import (
    Error,
    bounds,
    coherence,
    decorrelate,
    detect,
    estimate_pe,
    generate_matrix,
    gram_gold,
    ml_objective,
    noise_covariance,
    preset_names,
    preset_text,
    q_function,
    run_config,
    sample_front_end,
    welch_bound,
    whitening_transform,
)

__version__ = "0.1.0"

__all__ = [
    "Error",
    "bounds",
    "coherence",
    "decorrelate",
    "detect",
    "estimate_pe",
    "generate_matrix",
    "gram_gold",
    "ml_objective",
    "noise_covariance",
    "preset_names",
    "preset_text",
    "q_function",
    "run_config",
    "sample_front_end",
    "welch_bound",
    "whitening_transform",
]
