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

from typing import Literal, Optional, TypedDict

from .analytic_map import AnalyticMap, ComplexPair
from .settings import WeightedDiskRule


NormLabel = Literal["besov_seminorm", "besov_norm", "bergman", "equivalent"]


class NormKind(TypedDict):
    selector: NormLabel
    alpha: Optional[float]
    n: Optional[int]


class NormRecord(TypedDict):
    kind: NormKind
    p: float
    value: float
    rule_params: WeightedDiskRule


class DefectRow(TypedDict):
    function_id: str
    norm: float
    image_norm: float
    defect: float


class DefectReport(TypedDict):
    symbol: AnalyticMap
    p: float
    kind: NormKind
    rows: list[DefectRow]
    max_defect: float
    phi_at_zero: ComplexPair


class ResidualReport(TypedDict):
    max_residual: float
    max_abs_residual: float
    argmax: ComplexPair
    grid_density: int


class CoverageReport(TypedDict):
    samples: int
    epsilon: float
    omitted_area: float
    max_count: int
    univalent_fraction: float
    flagged: int
    count_histogram: dict[str, int]


class IdentityCheck(TypedDict):
    lhs: float
    rhs: float
    difference: float


class BorelCheck(TypedDict):
    lhs: float
    rhs: float
    difference: float
    standard_error: Optional[float]
    method: Literal["quadrature", "mc"]
    region: list[float]


class LocalIsometryReport(TypedDict):
    p: float
    radius: float
    i1: float
    i2: float
    hypothesis_holds: bool
    relation: Literal["<", "=", ">"]


class ProofChainReport(TypedDict):
    p: float
    lhs: float
    middle: float
    rhs: float
    margin: float


class MonomialImage(TypedDict):
    k: int
    image_degree: Optional[int]
    factor: ComplexPair
    residual: float
    norm: float


class MonomialImageReport(TypedDict):
    n: int
    p: float
    images: list[MonomialImage]
    is_permutation: bool


class InvolutionCheck(TypedDict):
    a: ComplexPair
    involution_norm: float
    composed_norm: float
