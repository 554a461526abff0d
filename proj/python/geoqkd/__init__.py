# Copyright 2026 The geoqkd Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Finite-key feasibility for geostationary QKD downlinks."""

import json

from ._core import (
    DataError,
    InputError,
    airy_half_angle,
    binomial_bounds,
    encircled_energy,
    fiber_bound,
    poisson_binomial_bounds,
    repeater_bound,
    slant_range,
    validate_data,
)
from . import _core

__all__ = [
    "DataError",
    "InputError",
    "airy_half_angle",
    "binomial_bounds",
    "default_config",
    "encircled_energy",
    "evaluate",
    "fiber_bound",
    "optimize",
    "poisson_binomial_bounds",
    "repeater_bound",
    "slant_range",
    "validate_data",
]


def default_config():
    """Canonical scenario with every default filled in."""
    return json.loads(_core.default_config_json())


def evaluate(config=None, data_dir=""):
    """Key length and link budget for one scenario given as a dict."""
    return json.loads(_core.evaluate_json(json.dumps(config or {}), data_dir))


def optimize(config=None, data_dir="", seed=1, grid_points=3, restarts=0):
    """Best protocol parameters for a scenario given as a dict."""
    text = _core.optimize_json(json.dumps(config or {}), data_dir, seed, grid_points, restarts)
    return json.loads(text)
