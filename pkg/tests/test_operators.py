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
    DiskRegion,
    InvalidSelfMapError,
    NormKind,
    UnsupportedSymbolError,
    WeightedSymbol,
)


@pytest.mark.parametrize("p", (1.5, 3.0))
@pytest.mark.parametrize("kind", (NormKind.besov_norm(), NormKind.besov_seminorm(), NormKind.equivalent(2)))
def test_rotation_is_isometric(p, kind):
    report = besovkit.isometry_defect(besovkit.rotation(1.0), p, kind)
    assert [row.function_id for row in report.rows] == sorted(besovkit.default_basis())
    assert report.max_defect <= 1e-7
    assert report.phi_at_zero == 0


def test_rotation_defect_on_monomials():
    basis = {"z": besovkit.monomial(1), "z^3": besovkit.monomial(3)}
    report = besovkit.isometry_defect(besovkit.rotation(2.5), 1.5, basis=basis)
    assert report.max_defect <= 1e-9


def test_automorphism_moves_full_norm_of_z():
    report = besovkit.isometry_defect(besovkit.automorphism(0.0, 0.5), 1.5)
    assert report.row("z").defect == pytest.approx(0.5, abs=1e-6)
    assert report.phi_at_zero == pytest.approx(0.5)


@pytest.mark.parametrize(
    "phi",
    (besovkit.monomial(2), besovkit.series([0, 0.5]), besovkit.blaschke(0.0, [0, 0.4])),
)
def test_non_rotations_are_not_isometric(phi):
    for p in (1.5, 3.0):
        assert besovkit.isometry_defect(phi, p).max_defect > 1e-3


def test_defect_needs_a_self_map():
    with pytest.raises(InvalidSelfMapError) as info:
        besovkit.isometry_defect(besovkit.series([0, 2]), 1.5)
    assert abs(info.value.witness) == pytest.approx(1 - 1e-4)


def test_defect_report_to_dict():
    data = besovkit.isometry_defect(besovkit.rotation(0.3), 3.0).to_dict()
    assert data["symbol"] == {"kind": "rotation", "theta": pytest.approx(0.3)}
    assert data["kind"]["selector"] == "besov_norm"
    assert len(data["rows"]) == 6


def test_seminorm_preserved_by_automorphisms():
    for a in (0.5, -0.2 + 0.4j):
        assert besovkit.seminorm_preservation_check(besovkit.automorphism(0.8, a), 1.5) <= 1e-7


def test_schwarz_pick_residual():
    half = besovkit.schwarz_pick_residual(besovkit.series([0, 0.5]))
    # 1/2 (1 - |z|^2) - (1 - |z|^2/4) peaks at the origin
    assert half.max_residual == pytest.approx(-0.5)
    assert half.argmax == 0
    assert half.field.shape == half.grid.shape

    for phi in (besovkit.rotation(0.4), besovkit.automorphism(0.7, -0.3 + 0.2j)):
        assert besovkit.schwarz_pick_residual(phi).max_abs_residual <= 1e-12

    for phi in (besovkit.monomial(2), besovkit.blaschke(0.0, [0, 0.4])):
        assert besovkit.schwarz_pick_residual(phi, grid_density=24).max_residual <= 1e-12


def test_count_preimages():
    counts, flagged = besovkit.count_preimages(besovkit.monomial(2), [0.25, -0.5j, 0.0])
    assert counts.tolist() == [2, 2, 1]
    assert not flagged.any()

    half = besovkit.series([0, 0.5])
    assert besovkit.counting_function(half, 0.2) == 1
    assert besovkit.counting_function(half, 0.7) == 0

    b = besovkit.blaschke(0.3, [0, 0.4, -0.3j])
    counts, _ = besovkit.count_preimages(b, besovkit.sample_points(0.0, 500, seed=1))
    assert np.all(counts == 3)


def test_count_preimages_flags_boundary_roots():
    counts, flagged = besovkit.count_preimages(besovkit.monomial(2), [(1 - 1e-7) ** 2])
    assert counts.tolist() == [0]
    assert flagged.tolist() == [True]


def test_counting_needs_a_rational_map():
    h = besovkit.compose_maps(besovkit.monomial(2), besovkit.rotation(0.3))
    with pytest.raises(UnsupportedSymbolError):
        besovkit.counting_function(h, 0.1)


def test_change_of_variable():
    exact = besovkit.change_of_variable_check(besovkit.monomial(2), lambda w: 1.0)
    assert exact.lhs == pytest.approx(2.0, rel=1e-10)
    assert exact.relative_difference <= 1e-8

    weighted = besovkit.change_of_variable_check(besovkit.monomial(3), lambda w: np.abs(w) ** 2)
    assert weighted.relative_difference <= 1e-6

    # n_phi is the indicator of |w| < 1/2 here
    half = besovkit.change_of_variable_check(besovkit.series([0, 0.5]), lambda w: 1.0)
    assert half.lhs == pytest.approx(0.25)
    assert half.rhs == pytest.approx(0.25, abs=1e-2)


def test_disk_region():
    region = DiskRegion.annulus(0.3, 0.6)
    assert region.contains([0.0, 0.5, 0.7j]).tolist() == [False, True, False]
    assert region.weighted_area(0.0) == pytest.approx(0.36 - 0.09)
    assert DiskRegion.disk(0.5).weighted_area(-0.5) == pytest.approx((1 - 0.75**0.5) / 0.5)
    assert region.to_dict() == [0.3, 0.6]
    with pytest.raises(ValueError):
        DiskRegion(0.6, 0.3)


def test_borel_equality_for_rotations():
    ws = WeightedSymbol.with_derivative(besovkit.rotation(2.0))
    for region in (DiskRegion.disk(0.5), DiskRegion.annulus(0.3, 0.6)):
        check = besovkit.borel_equality_check(ws, 1.5, -0.5, region)
        assert check.method == "mc"
        assert check.sigmas <= 4

    check = besovkit.borel_equality_check(ws, 1.5, 0.0, DiskRegion.disk(0.5), method="quadrature")
    assert check.standard_error is None
    assert check.lhs == pytest.approx(0.25, abs=1e-2)


def test_borel_equality_fails_for_squares():
    ws = WeightedSymbol.with_derivative(besovkit.monomial(2))
    check = besovkit.borel_equality_check(ws, 1.5, -0.5, DiskRegion.disk(0.5))
    assert check.sigmas > 4


def test_fullness():
    for phi in (besovkit.rotation(0.4), besovkit.blaschke(0.0, [0, 0.4])):
        assert besovkit.fullness_defect(phi, 20_000).omitted_area <= 1e-3

    report = besovkit.fullness_defect(besovkit.series([0, 0.5]), 100_000, seed=5)
    assert report.omitted_area == pytest.approx(0.75, abs=1e-2)
    assert report.max_count == 1
    assert report.to_dict()["count_histogram"].keys() == {"0", "1"}

    assert besovkit.fullness_defect(besovkit.monomial(2), 20_000).univalent_fraction <= 1e-3


def test_local_isometry_check_above_two():
    report = besovkit.local_isometry_check(besovkit.monomial(2), 3.0, 0.5)
    assert report.i1 == pytest.approx(8 * (0.25**2.5 / 2.5 - 0.25**3.5 / 3.5), rel=1e-9)
    assert report.i2 == pytest.approx(4 * (0.25**2 / 2 - 0.25**4 / 4), rel=1e-9)
    assert report.relation == "<"
    assert report.expected_relation == "<"
    assert not report.hypothesis_holds


def test_local_isometry_check_below_two():
    report = besovkit.local_isometry_check(besovkit.monomial(2), 1.5, 0.5)
    assert report.relation == ">"
    assert report.expected_relation == ">"


def test_local_isometry_check_for_rotations():
    report = besovkit.local_isometry_check(besovkit.rotation(0.9), 3.0, 0.5)
    assert report.hypothesis_holds
    assert report.relation == "="


def test_local_hypothesis_unsupported_map():
    h = besovkit.compose_maps(besovkit.rotation(0.1), besovkit.rotation(0.2))
    assert not besovkit.local_isometry_check(h, 3.0, 0.5).hypothesis_holds


def test_proof_chain_for_square():
    report = besovkit.proof_chain_check(besovkit.monomial(2), 1.5)
    assert report.lhs == pytest.approx(2**1.5 * beta(1.75, 0.5), rel=1e-8)
    assert report.rhs == pytest.approx(4.0, rel=1e-8)
    assert report.margin > 0


def test_proof_chain_for_blaschke():
    report = besovkit.proof_chain_check(besovkit.blaschke(0.0, [0, 0.4]), 1.5)
    assert report.margin > 0
    assert report.middle > 0


def test_weighted_isometry_check():
    p = 1.5
    ws = WeightedSymbol(besovkit.series([0, 2]), besovkit.monomial(2))
    defect = besovkit.weighted_isometry_check(ws, p, basis={"1": besovkit.series([1])})
    expected = abs((2**p * beta(p / 2 + 1, p - 1)) ** (1 / p) - (1 / (p - 1)) ** (1 / p))
    assert defect == pytest.approx(expected, rel=1e-8)

    rotated = WeightedSymbol.with_derivative(besovkit.rotation(0.6))
    assert besovkit.weighted_isometry_check(rotated, p) <= 1e-7


def test_monomial_images():
    report = besovkit.monomial_image_check(besovkit.rotation(0.7), 1.5, 3)
    assert report.is_permutation
    assert [image.image_degree for image in report.images] == [0, 1, 2]
    assert abs(report.images[1].factor - np.exp(0.7j)) < 1e-12

    squared = besovkit.monomial_image_check(besovkit.monomial(2), 1.5, 2)
    assert not squared.is_permutation
    assert squared.images[1].image_degree is None


def test_factorial_obstruction():
    holds = besovkit.factorial_obstruction(12)
    assert holds[1]
    assert not any(holds[k] for k in range(2, 13))
    assert besovkit.factorial_identity(0) is False


def test_origin_involution():
    moved = besovkit.origin_involution_check(besovkit.automorphism(0.0, 0.5), 1.5)
    assert moved.a == pytest.approx(0.5)
    assert moved.gap == pytest.approx(0.5, abs=1e-6)

    fixed = besovkit.origin_involution_check(besovkit.rotation(1.1), 1.5)
    assert fixed.gap <= 1e-9
