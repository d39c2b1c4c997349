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
from besovkit import (
    BlaschkeProduct,
    CompositionNode,
    DiskAutomorphism,
    DomainError,
    PowerSeries,
    TruncationError,
    UnsupportedSymbolError,
)

POINTS = np.array([0.0, 0.3, -0.2 + 0.5j, 0.7j, -0.6 - 0.6j])


def _numeric_derivative(m, z, h=1e-6):
    return (m.value(z + h) - m.value(z - h)) / (2 * h)


def test_power_series_value_and_derivative():
    f = besovkit.series([0, 1, 0.5])
    assert f.degree == 2
    np.testing.assert_allclose(f.value(POINTS), POINTS + POINTS**2 / 2, rtol=0, atol=1e-15)
    np.testing.assert_allclose(f.derivative_value(POINTS), 1 + POINTS, rtol=0, atol=1e-15)
    assert isinstance(f(0.5), complex)
    assert f(0.5) == pytest.approx(0.625)


def test_power_series_exact_derivative():
    f = besovkit.series([1, 2, 3, 4])
    np.testing.assert_array_equal(f.derivative().coefficients, [2, 6, 12])
    np.testing.assert_array_equal(f.derivative(2).coefficients, [6, 24])
    np.testing.assert_array_equal(f.derivative(5).coefficients, [0])
    assert f.nth_derivative_at_zero(3) == 24
    assert f.nth_derivative_at_zero(7) == 0


def test_evaluation_outside_the_disk():
    f = besovkit.monomial(2)
    with pytest.raises(DomainError):
        f.value(1.0)
    with pytest.raises(DomainError):
        f.derivative_value(np.array([0.1, 1.5j]))


def test_rotation():
    phi = besovkit.rotation(0.7)
    assert isinstance(phi, DiskAutomorphism)
    assert phi.is_rotation
    assert phi.rotation_angle == pytest.approx(0.7)
    np.testing.assert_allclose(phi.value(POINTS), np.exp(0.7j) * POINTS, atol=1e-15)
    assert phi.to_dict() == {"kind": "rotation", "theta": pytest.approx(0.7)}


def test_automorphism_exchanges_origin_and_center():
    a = 0.3 - 0.4j
    phi = besovkit.involution(a)
    assert phi.value(0j) == pytest.approx(a)
    assert abs(phi.value(a)) < 1e-15
    np.testing.assert_allclose(phi.value(phi.value(POINTS)), POINTS, atol=1e-14)


def test_automorphism_taylor_coefficients():
    phi = besovkit.automorphism(0.0, 0.5)
    np.testing.assert_allclose(phi.taylor_coefficients(3), [0.5, -0.75, -0.375, -0.1875], atol=1e-15)


def test_blaschke_product():
    b = besovkit.blaschke(0.0, [0, 0.4])
    assert isinstance(b, BlaschkeProduct)
    assert b.degree == 2
    assert b.fixes_origin
    assert abs(b.value(0.4)) < 1e-15
    circle = 0.9999 * np.exp(1j * np.linspace(0, 2 * np.pi, 50))
    assert np.all(np.abs(b.value(circle)) < 1)


def test_blaschke_derivative_matches_difference_quotient():
    b = besovkit.blaschke(1.2, [0.1j, -0.5, 0.3 + 0.3j])
    for z in POINTS:
        assert b.derivative_value(z) == pytest.approx(_numeric_derivative(b, z), abs=1e-7)
    # at a zero the log-derivative is undefined
    assert b.derivative_value(-0.5) == pytest.approx(_numeric_derivative(b, -0.5), abs=1e-7)


def test_blaschke_taylor_series_sums_to_value():
    b = besovkit.blaschke(0.4, [0, 0.4, -0.3j])
    truncated = b.taylor_truncate(64)
    for z in (0.3, -0.2 + 0.25j):
        assert truncated.value(z) == pytest.approx(b.value(z), abs=1e-14)


def test_blaschke_preimage_polynomial_roots():
    b = besovkit.blaschke(0.5, [0, 0.4])
    z0 = 0.2 + 0.1j
    poly = b.preimage_polynomial([b.value(z0)])[0]
    roots = np.polynomial.polynomial.polyroots(poly)
    assert np.min(np.abs(roots - z0)) < 1e-10


def test_composition_chain_rule():
    outer = besovkit.series([0, 1, 0.5])
    inner = besovkit.blaschke(0.0, [0, 0.4])
    h = besovkit.compose_maps(outer, inner)
    assert isinstance(h, CompositionNode)
    for z in POINTS:
        assert h.value(z) == pytest.approx(outer.value(inner.value(z)), abs=1e-15)
        expected = outer.derivative_value(inner.value(z)) * inner.derivative_value(z)
        assert h.derivative_value(z) == pytest.approx(expected, abs=1e-14)


def test_composition_taylor_coefficients():
    h = besovkit.compose_maps(besovkit.monomial(2), besovkit.series([0, 1, 1]))
    # (z + z^2)^2 = z^2 + 2 z^3 + z^4
    np.testing.assert_allclose(h.taylor_coefficients(6), [0, 0, 1, 2, 1, 0, 0], atol=1e-15)


def test_composition_taylor_series_with_moved_origin():
    # the inner map sends 0 to 0.9, so every outer term feeds c_0
    h = besovkit.compose_maps(besovkit.blaschke(0.0, [0.95]), besovkit.automorphism(0.0, 0.9))
    truncated = h.taylor_truncate(64)
    for z in (0.1, -0.2j, 0.15 + 0.1j):
        assert abs(truncated.value(z) - h.value(z)) <= 1e-10

    nested = besovkit.compose_maps(
        besovkit.series([0.1, 0.5, 0.2]),
        besovkit.compose_maps(besovkit.blaschke(0.3, [0.2, -0.5j]), besovkit.automorphism(0.4, 0.6)),
    )
    assert abs(nested.taylor_truncate(64).value(0.2) - nested.value(0.2)) <= 1e-10
    assert nested.nth_derivative_at_zero(1) == pytest.approx(nested.derivative_value(0j), abs=1e-12)


def test_composition_has_no_preimage_polynomial():
    h = besovkit.compose_maps(besovkit.monomial(2), besovkit.rotation(0.3))
    with pytest.raises(UnsupportedSymbolError):
        h.preimage_polynomial([0.1])


def test_nth_derivative_at_zero():
    phi = besovkit.automorphism(0.0, 0.5)
    assert besovkit.nth_derivative_at_zero(phi, 0) == pytest.approx(0.5)
    assert besovkit.nth_derivative_at_zero(phi, 2, order=8) == pytest.approx(2 * -0.375)
    with pytest.raises(TruncationError) as info:
        phi.nth_derivative_at_zero(5, order=3)
    assert info.value.required_order == 5


def test_derivative_map_of_truncation():
    phi = besovkit.blaschke(0.0, [0, 0.4])
    second = besovkit.derivative_map(phi, 2, order=64)
    assert isinstance(second, PowerSeries)
    assert second.value(0.2) == pytest.approx(
        (phi.derivative_value(0.2 + 1e-4) - phi.derivative_value(0.2 - 1e-4)) / 2e-4, abs=1e-6
    )
    with pytest.raises(TruncationError):
        phi.derivative_map(3, order=2)


def test_validate_self_map():
    assert besovkit.validate_self_map(besovkit.monomial(2))
    assert besovkit.validate_self_map(besovkit.series([0, 0.5]))

    check = besovkit.validate_self_map(besovkit.series([0, 2]))
    assert not check
    assert check.max_modulus == pytest.approx(2 * (1 - 1e-4))
    assert abs(check.witness) == pytest.approx(1 - 1e-4)

    with pytest.raises(ValueError):
        besovkit.validate_self_map(besovkit.monomial(2), grid_density=4)


def test_composition_validates_inner_map_first():
    h = besovkit.compose_maps(besovkit.series([0, 0.1]), besovkit.series([0, 3]))
    assert not h.validate_self_map()


def test_invalid_constructors():
    with pytest.raises(ValueError):
        DiskAutomorphism(2.0, 0j)
    with pytest.raises(ValueError):
        besovkit.automorphism(0.0, 1.0)
    with pytest.raises(ValueError):
        besovkit.blaschke(0.0, [])
    with pytest.raises(ValueError):
        besovkit.series([])


def test_map_from_dict():
    data = {
        "kind": "compose",
        "outer": {"kind": "blaschke", "lambda_theta": 0.3, "zeros": [[0, 0], [0.4, 0.1]]},
        "inner": {"kind": "automorphism", "lambda_theta": 1.0, "a": [0.2, -0.1]},
    }
    h = besovkit.map_from_dict(data)
    expected = besovkit.compose_maps(
        besovkit.blaschke(0.3, [0, 0.4 + 0.1j]),
        besovkit.automorphism(1.0, 0.2 - 0.1j),
    )
    np.testing.assert_allclose(h.value(POINTS), expected.value(POINTS), atol=1e-15)
    assert h.to_dict()["outer"]["zeros"][1] == [pytest.approx(0.4), pytest.approx(0.1)]


def test_maps_are_read_only():
    f = besovkit.monomial(3)
    with pytest.raises(AttributeError):
        f.coefficients = np.zeros(2)
    with pytest.raises(ValueError):
        f.coefficients[0] = 1
