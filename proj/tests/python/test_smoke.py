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

import math

import pytest

import geoqkd


def test_fiber_bounds():
    assert geoqkd.repeater_bound(0.5, 0) == 1.0
    assert math.isinf(geoqkd.fiber_bound(0.0, 0, 0.2))
    assert geoqkd.fiber_bound(1000.0, 5, 0.2) == pytest.approx(6.6979517692861743e-4, rel=1e-12)


def test_geometry_and_optics():
    assert geoqkd.slant_range(0.0) == 35786.0
    gamma = geoqkd.airy_half_angle(1.5, 854.445)
    assert abs(geoqkd.encircled_energy(gamma, 1.5, 854.445) - 0.838) < 1e-3


def test_bounds_bracket_the_estimate():
    lo, hi = geoqkd.binomial_bounds(100, 0.3, 1e-3)
    assert lo < 0.3 < hi
    lo, hi = geoqkd.poisson_binomial_bounds(1e6, 0.01, 1e-10)
    assert lo < 0.01 < hi


def test_abstract_evaluation():
    config = {"abstract": {"loss_db": 30.0, "p_noise": 1e-8},
              "protocol": {"architecture": "active_asym"}}
    result = geoqkd.evaluate(config)
    assert result["key"]["ell"] > 0
    assert result["key"]["ell_per_N"] == pytest.approx(result["key"]["ell"] / 1e12)
    assert result["loss_budget_db"]["total"] == 30.0


def test_physical_evaluation_uses_shipped_tables():
    result = geoqkd.evaluate({"link": {"zenith_deg": 60}})
    budget = result["loss_budget_db"]
    parts = sum(v for k, v in budget.items() if k != "total")
    assert parts == pytest.approx(budget["total"], rel=1e-9)
    assert result["key"]["status"] == "ok"


def test_optimizer_is_deterministic():
    config = {"abstract": {"loss_db": 35.0, "p_noise": 1e-7},
              "protocol": {"architecture": "active_asym"}}
    a = geoqkd.optimize(config, grid_points=2)
    b = geoqkd.optimize(config, grid_points=2)
    assert a["key"]["ell"] == b["key"]["ell"] > 0
    assert a["search"]["unit_point"] == b["search"]["unit_point"]


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError, match="optics.bogus"):
        geoqkd.evaluate({"optics": {"bogus": 1}})
    with pytest.raises(RuntimeError):
        geoqkd.validate_data("/nonexistent")


def test_default_config_round_trip():
    config = geoqkd.default_config()
    assert config["protocol"]["architecture"] == "passive_asym"
    assert geoqkd.validate_data()["cloud_cells"] > 0
