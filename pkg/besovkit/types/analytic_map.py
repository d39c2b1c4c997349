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

from typing import Literal, Optional, TypedDict, Union

from typing_extensions import NotRequired


MapKind = Literal[
    "rotation",
    "automorphism",
    "blaschke",
    "series",
    "compose",
]
MapRole = Literal["symbol", "function"]
ComplexPair = list[float]


class _MapBase(TypedDict):
    role: NotRequired[MapRole]


class Rotation(_MapBase):
    kind: Literal["rotation"]
    theta: float


class Automorphism(_MapBase):
    kind: Literal["automorphism"]
    lambda_theta: float
    a: ComplexPair


class Blaschke(_MapBase):
    kind: Literal["blaschke"]
    lambda_theta: float
    zeros: list[ComplexPair]


class Series(_MapBase):
    kind: Literal["series"]
    coeffs: list[ComplexPair]


class Compose(_MapBase):
    kind: Literal["compose"]
    outer: AnalyticMap
    inner: AnalyticMap


AnalyticMap = Union[Rotation, Automorphism, Blaschke, Series, Compose]


class SelfMapCheck(TypedDict):
    valid: bool
    max_modulus: float
    witness: Optional[ComplexPair]
