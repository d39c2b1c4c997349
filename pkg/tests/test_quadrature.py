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
from besovkit import Cache, NonFiniteIntegrandError, build_rule, caching_function, closed_form_moment, integrate, integrate_mc
from besovkit.config import RULE_CACHE_SIZE
from besovkit.quadrature import rule_cache

ALPHAS = (-0.5, -0.25, 0.0, 1.0, 4.0)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_constant_moment(alpha):
    rule = build_rule(alpha)
    assert rule.total_weight * (alpha + 1) == pytest.approx(1.0, rel=1e-12)
    value = integrate(rule, lambda z: 1.0)
    assert value.real * (alpha + 1) == pytest.approx(1.0, rel=1e-12)
    assert value.imag == 0


@pytest.mark.parametrize("alpha", ALPHAS)
def test_radial_moments(alpha):
    rule = build_rule(alpha)
    for m in (1, 3, 7):
        value = integrate(rule, lambda z: np.abs(z) ** (2 * m)).real
        assert value == pytest.approx(closed_form_moment(alpha, m), rel=1e-12)


def test_angular_moments_vanish():
    rule = build_rule(0.0)
    assert abs(integrate(rule, lambda z: z**3)) < 1e-13
    assert abs(integrate(rule, lambda z: z * np.conj(z) ** 2)) < 1e-13


def test_rules_are_cached():
    assert build_rule(0.5, 32, 64) is build_rule(0.5, 32, 64)
    assert build_rule(0.5, 32, 64) is not build_rule(0.5, 32, 128)


def test_rule_layout():
    rule = build_rule(-0.5, 16, 32)
    assert rule.alpha == -0.5
    assert np.all(np.diff(rule.radii_squared) > 0)
    assert np.all((rule.radii_squared > 0) & (rule.radii_squared < 1))
    assert np.all(rule.ring_sizes % 32 == 0)
    assert rule.ring_sizes[-1] > rule.ring_sizes[0]
    assert rule.node_count == int(np.sum(rule.ring_sizes))
    assert np.all(np.abs(rule.points) < 1)
    assert rule.to_dict()["node_count"] == rule.node_count


def test_invalid_rules():
    with pytest.raises(ValueError):
        build_rule(-1.0)
    with pytest.raises(ValueError):
        build_rule(0.0, radial_nodes=2)
    with pytest.raises(ValueError):
        build_rule(0.0, angular_nodes=10_000)
    with pytest.raises(ValueError):
        build_rule(0.0, radius=1.5)


@pytest.mark.parametrize("alpha", (-0.5, 0.0, 1.0))
def test_restricted_disk(alpha):
    r = 0.6
    rule = build_rule(alpha, radius=r)
    expected = (1 - (1 - r**2) ** (alpha + 1)) / (alpha + 1)
    assert integrate(rule, lambda z: 1.0).real == pytest.approx(expected, rel=1e-12)
    assert np.all(np.abs(rule.points) < r)


def test_non_finite_integrand():
    rule = build_rule(0.0, 16, 32)
    with pytest.raises(NonFiniteIntegrandError) as info:
        integrate(rule, lambda z: np.where(np.abs(z) > 0.5, np.nan, 1.0))
    assert abs(info.value.node) > 0.5


def test_radial_rule_converges():
    def g(z):
        return 1.0 / np.abs(1.25 - z) ** 2

    coarse = integrate(build_rule(-0.5, 64, 256), g).real
    fine = integrate(build_rule(-0.5, 128, 256), g).real
    assert abs(coarse - fine) / fine < 1e-10

    rough = integrate(build_rule(-0.5, 4, 256), g).real
    assert abs(rough - fine) / fine > 1e-10


def test_monte_carlo_constant():
    estimate = integrate_mc(1.0, lambda z: 1.0, samples=10_000)
    assert estimate.estimate == pytest.approx(0.5)
    assert estimate.standard_error == 0


@pytest.mark.parametrize("alpha", (-0.5, 0.0, 2.0))
def test_monte_carlo_moment(alpha):
    estimate, standard_error = integrate_mc(alpha, lambda z: np.abs(z) ** 2, samples=200_000, seed=7)
    assert isinstance(estimate, float)
    assert abs(estimate - closed_form_moment(alpha, 1)) < 5 * standard_error


def test_monte_carlo_is_seeded():
    first = besovkit.sample_points(0.0, 1000, seed=3)
    second = besovkit.sample_points(0.0, 1000, seed=3)
    np.testing.assert_array_equal(first, second)
    assert np.all(np.abs(first) < 1)
    assert not np.array_equal(first, besovkit.sample_points(0.0, 1000, seed=4))


def test_monte_carlo_needs_samples():
    with pytest.raises(ValueError):
        integrate_mc(0.0, lambda z: 1.0, samples=100)


@pytest.mark.parametrize("alpha", (-0.5, 0.0, 2.0))
def test_quadrature_agrees_with_monte_carlo(alpha):
    rng = np.random.default_rng(int(10 * alpha) + 100)
    rule = build_rule(alpha, 32, 64)
    for k in range(7):
        # Re sum c_jk z^j conj(z)^k with j, k <= 2
        coeffs = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))

        def g(z, coeffs=coeffs):
            powers = np.stack([np.ones_like(z), z, z * z])
            return np.einsum("jk,j...,k...->...", coeffs, powers, np.conj(powers)).real

        exact = integrate(rule, g).real
        estimate, standard_error = integrate_mc(alpha, g, samples=100_000, seed=1000 + k)
        assert abs(estimate - exact) <= 4 * standard_error


def test_cache_evicts_least_recently_used():
    cache = Cache(2)
    calls = []

    @caching_function(cache)
    def square(x):
        calls.append(x)
        return x * x

    for x in (1, 2, 1, 3, 1, 2):
        square(x)
    assert calls == [1, 2, 3, 2]
    assert len(cache) == 2

    with pytest.raises(ValueError):
        Cache(0)


def test_rule_cache_is_bounded():
    for r in np.linspace(0.1, 0.9, RULE_CACHE_SIZE + 5):
        build_rule(0.0, 8, 8, radius=float(r))
    assert len(rule_cache) <= RULE_CACHE_SIZE
    rule_cache.clear()
    assert len(rule_cache) == 0
