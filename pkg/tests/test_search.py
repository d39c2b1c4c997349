"""
The MIT License (MIT)

Copyright (c) 2024-present besovkit developers

Permission is hereby granted, free of charge, to any person obtaining a
copy of this software and associated documentation files (the "Software"),
to deal in the Software without restriction, including without limitation
the rights to use, copy, modify, merge, publish, distribute, sublicense,
and/or sell copies of the Software, and to permit persons to whom the
Software is furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in
all copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS
OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER
DEALINGS IN THE SOFTWARE.
"""

from __future__ import annotations

import numpy as np
import pytest

import besovkit
from besovkit import DecodeError, QuadratureSettings, SearchSpace, minimize, minimize_async, objective
from besovkit.config import (
    DEFAULT_SEED,
    SEARCH_REGRESSION_FLOORS,
    SEARCH_RESTARTS,
    SEARCH_SEPARATION_RADIUS,
    TOLERANCES,
)

COARSE = QuadratureSettings(radial_nodes=16, angular_nodes=32)
BASIS = {"z": besovkit.monomial(1), "z^2": besovkit.monomial(2)}


def test_search_space_dimensions():
    assert SearchSpace.blaschke(1).dimension == 1
    assert SearchSpace.blaschke(3).dimension == 5
    assert SearchSpace.series(2).dimension == 4
    with pytest.raises(ValueError):
        SearchSpace("entire", 2)
    with pytest.raises(ValueError):
        SearchSpace.blaschke(0)


def test_blaschke_decoding_fixes_origin():
    space = SearchSpace.blaschke(3, max_radius=0.9)
    params = np.array([0.3, 5.0, 1.0, -2.0, -0.5])
    phi = space.decode(params)
    assert phi.degree == 3
    assert phi.fixes_origin
    zeros = space.zeros(params)
    assert np.all(np.abs(zeros) < 0.9)
    assert np.angle(zeros[0]) == pytest.approx(1.0)
    assert space.penalty(params) == 0


def test_decode_rejects_bad_vectors():
    space = SearchSpace.blaschke(2)
    with pytest.raises(DecodeError):
        space.decode([0.1, 0.2])
    with pytest.raises(DecodeError):
        space.decode([0.1, np.nan, 0.2])


def test_series_penalty_and_feasible_map():
    space = SearchSpace.series(1)
    assert space.penalty([0.5, 0.0]) == 0
    assert space.penalty([2.0, 0.0]) == pytest.approx(1e6, rel=1e-6)
    phi = space.feasible([2.0, 0.0])
    assert phi.validate_self_map()
    assert abs(phi.value(0.5)) < 0.5


def test_objective_of_rotation():
    space = SearchSpace.blaschke(1)
    assert objective(space, [0.4], 3.0, basis=BASIS, settings=COARSE) <= 1e-10


def test_objective_penalises_leaving_the_disk():
    space = SearchSpace.series(1)
    assert objective(space, [1.5, 0.0], 1.5, basis=BASIS, settings=COARSE) > 1e5


def test_search_recovers_rotations():
    result = minimize(SearchSpace.blaschke(1), 3.0, basis=BASIS, restarts=2, seed=5, settings=COARSE)
    assert result.best_defect <= 1e-8
    assert result.best_map.degree == 1
    assert len(result.restarts) == 2


def test_search_keeps_degree_two_away_from_isometry():
    space = SearchSpace.blaschke(2, max_radius=0.9)
    result = minimize(space, 1.5, basis=BASIS, restarts=2, seed=5, settings=COARSE)
    assert result.best_defect > 1e-3
    assert result.best.best_defect == result.best_defect
    assert all(trace.best_defect >= result.best_defect for trace in result.restarts)


def test_search_is_reproducible():
    space = SearchSpace.blaschke(2, max_radius=0.9)
    first = minimize(space, 3.0, basis=BASIS, restarts=2, seed=9, settings=COARSE)
    second = minimize(space, 3.0, basis=BASIS, restarts=2, seed=9, settings=COARSE)
    assert [t.trace for t in first.restarts] == [t.trace for t in second.restarts]
    np.testing.assert_array_equal(first.best_params, second.best_params)


def test_single_restart_replays_the_first():
    space = SearchSpace.blaschke(2, max_radius=0.9)
    full = minimize(space, 1.5, basis=BASIS, restarts=3, seed=9, settings=COARSE)
    replay = minimize(space, 1.5, basis=BASIS, restarts=1, seed=9, settings=COARSE)
    assert replay.restarts[0].trace == full.restarts[0].trace
    np.testing.assert_array_equal(replay.restarts[0].best_params, full.restarts[0].best_params)


def test_degree_two_search_stays_above_regression_floor():
    assert set(SEARCH_REGRESSION_FLOORS) == {1.5, 3.0}
    assert min(SEARCH_REGRESSION_FLOORS.values()) > TOLERANCES["search_separation"]

    # same search as the verify row, default basis and rule
    space = SearchSpace.blaschke(2, max_radius=SEARCH_SEPARATION_RADIUS)
    result = minimize(space, 3.0, restarts=SEARCH_RESTARTS, seed=DEFAULT_SEED)
    assert result.best_defect > SEARCH_REGRESSION_FLOORS[3.0]


def test_search_traces_are_monotone():
    result = minimize(SearchSpace.series(1), 1.5, basis=BASIS, restarts=1, seed=2, settings=COARSE)
    trace = result.restarts[0].trace
    assert len(trace) == result.restarts[0].evaluations <= 220
    assert all(later <= earlier for earlier, later in zip(trace, trace[1:]))


def test_search_arguments():
    with pytest.raises(ValueError):
        minimize(SearchSpace.blaschke(1), 3.0, restarts=0)
    with pytest.raises(ValueError):
        minimize(SearchSpace.blaschke(1), 3.0, budget=50)


def test_search_result_to_dict():
    result = minimize(SearchSpace.blaschke(1), 3.0, basis=BASIS, restarts=1, seed=1, settings=COARSE)
    data = result.to_dict()
    assert data["best_map"]["kind"] == "blaschke"
    assert data["restarts"][0]["restart"] == 0
    assert data["space"] == {"family": "blaschke", "degree": 1, "max_radius": 0.999}


@pytest.mark.asyncio
async def test_minimize_async():
    result = await minimize_async(SearchSpace.blaschke(1), 1.5, basis=BASIS, restarts=3, seed=4, settings=COARSE)
    assert [trace.restart for trace in result.restarts] == [0, 1, 2]
    assert result.best_defect <= 1e-8


@pytest.mark.asyncio
async def test_minimize_needs_its_own_loop():
    with pytest.raises(RuntimeError):
        minimize(SearchSpace.blaschke(1), 1.5, basis=BASIS, restarts=1, settings=COARSE)
