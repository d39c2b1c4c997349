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
from scipy.special import beta

import besovkit
from besovkit import (
    NormKind,
    RuleMismatchError,
    TruncationError,
    besov_norm,
    besov_seminorm,
    bergman_norm,
    build_rule,
    equivalent_norm,
    evaluate_norm,
    monomial_seminorm_oracle,
    rule_for,
)

P_VALUES = (1.25, 1.5, 3.0, 5.0)


@pytest.mark.parametrize("p", P_VALUES)
@pytest.mark.parametrize("m", (1, 2, 3))
def test_monomial_seminorm(m, p):
    rule = build_rule(p - 2)
    value = besov_seminorm(besovkit.monomial(m), p, rule)
    assert value**p == pytest.approx(monomial_seminorm_oracle(m, p) ** p, rel=1e-8)


def test_monomial_oracle():
    assert monomial_seminorm_oracle(0, 1.5) == 0
    # z at p = 2 is the Dirichlet seminorm, 1
    assert monomial_seminorm_oracle(1, 2.0) == pytest.approx(1.0)
    assert monomial_seminorm_oracle(2, 3.0) ** 3 == pytest.approx(8 * beta(2.5, 2.0))


@pytest.mark.parametrize("p", P_VALUES)
def test_seminorm_is_bergman_norm_of_derivative(p):
    rng = np.random.default_rng(11)
    rule = build_rule(p - 2)
    for _ in range(10):
        f = besovkit.series(rng.normal(size=5) + 1j * rng.normal(size=5))
        expected = bergman_norm(f.derivative(), p, p - 2, rule)
        assert besov_seminorm(f, p, rule) == pytest.approx(expected, rel=1e-12)


def test_full_norm_adds_value_at_origin():
    rule = build_rule(-0.5)
    f = besovkit.series([0.3 - 0.4j, 1, 0.5])
    assert besov_norm(f, 1.5, rule) == pytest.approx(0.5 + besov_seminorm(f, 1.5, rule))


@pytest.mark.parametrize("alpha", (-0.5, 0.0, 2.0))
def test_bergman_norm_of_constant(alpha):
    rule = build_rule(alpha)
    assert bergman_norm(besovkit.series([1]), 2.5, alpha, rule) == pytest.approx((1 / (alpha + 1)) ** (1 / 2.5))


@pytest.mark.parametrize("p", (1.5, 3.0))
def test_equivalent_norm_of_square(p):
    rule = build_rule(2 * p - 2)
    # f'' = 2, so the norm is 2 (2p - 1)^(-1/p)
    value = equivalent_norm(besovkit.monomial(2), p, 2, rule)
    assert value == pytest.approx(2 * (2 * p - 1) ** (-1 / p), rel=1e-10)


def test_equivalent_norm_head():
    p = 1.5
    rule = build_rule(3 * p - 2)
    f = besovkit.series([0.5, -1, 0.25])
    # f''' = 0 and the head is |f(0)| + |f'(0)| + |f''(0)|
    assert equivalent_norm(f, p, 3, rule) == pytest.approx(0.5 + 1 + 0.5)


def test_equivalent_norm_of_blaschke_truncates():
    p = 1.5
    rule = build_rule(2 * p - 2)
    b = besovkit.blaschke(0.0, [0, 0.4])
    assert equivalent_norm(b, p, 2, rule) == pytest.approx(equivalent_norm(b, p, 2, rule, order=80), rel=1e-12)
    with pytest.raises(TruncationError):
        equivalent_norm(b, p, 2, rule, order=1)


def test_rule_mismatch():
    rule = build_rule(0.0)
    with pytest.raises(RuleMismatchError):
        besov_seminorm(besovkit.monomial(1), 1.5, rule)
    with pytest.raises(RuleMismatchError):
        equivalent_norm(besovkit.monomial(1), 1.5, 2, rule)


def test_invalid_exponents():
    rule = build_rule(-1.0 + 1e-3)
    with pytest.raises(ValueError):
        besov_seminorm(besovkit.monomial(1), 1.0, rule)
    with pytest.raises(ValueError):
        bergman_norm(besovkit.monomial(1), 1.5, -1.0, rule)


def test_norm_kind():
    assert NormKind.besov_norm().weight_exponent(1.5) == pytest.approx(-0.5)
    assert NormKind.bergman(0.25).weight_exponent(3.0) == 0.25
    assert NormKind.equivalent(3).weight_exponent(1.5) == pytest.approx(2.5)
    assert NormKind.equivalent(2).label == "equivalent(2)"
    assert NormKind.bergman(0.0) == NormKind("bergman", alpha=0)
    assert len({NormKind.besov_norm(), NormKind.besov_norm(), NormKind.besov_seminorm()}) == 2

    with pytest.raises(ValueError):
        NormKind.bergman(-1.0)
    with pytest.raises(ValueError):
        NormKind.equivalent(1)
    with pytest.raises(ValueError):
        NormKind("sobolev")


def test_evaluate_norm_dispatch():
    f = besovkit.series([0.1, 1, 0.5])
    p = 3.0
    for kind in (NormKind.besov_seminorm(), NormKind.besov_norm(), NormKind.bergman(1.0), NormKind.equivalent(2)):
        rule = rule_for(kind, p)
        assert rule.alpha == pytest.approx(kind.weight_exponent(p))
        assert evaluate_norm(f, p, kind, rule) > 0

    assert evaluate_norm(f, p, NormKind.besov_norm(), rule_for(NormKind.besov_norm(), p)) == pytest.approx(
        besov_norm(f, p, build_rule(1.0))
    )


KINDS = (NormKind.besov_seminorm(), NormKind.besov_norm(), NormKind.bergman(1.0), NormKind.equivalent(2))


@pytest.mark.parametrize("kind", KINDS, ids=lambda kind: kind.label)
@pytest.mark.parametrize("p", (1.5, 3.0))
def test_norms_are_rotation_invariant(kind, p):
    rule = rule_for(kind, p)
    for m in (1, 2, 3):
        f = besovkit.monomial(m)
        rotated = besovkit.series(np.r_[np.zeros(m), np.exp(0.7j * m)])
        assert evaluate_norm(rotated, p, kind, rule) == pytest.approx(evaluate_norm(f, p, kind, rule), rel=1e-10)


@pytest.mark.parametrize("kind", KINDS, ids=lambda kind: kind.label)
@pytest.mark.parametrize("p", (1.5, 3.0))
def test_norms_are_homogeneous(kind, p):
    rule = rule_for(kind, p)
    coeffs = np.array([0.3, 1, -0.5j, 0.25])
    c = 0.7 - 2.1j
    value = evaluate_norm(besovkit.series(coeffs), p, kind, rule)
    scaled = evaluate_norm(besovkit.series(c * coeffs), p, kind, rule)
    assert scaled == pytest.approx(abs(c) * value, rel=1e-13)
