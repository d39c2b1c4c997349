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

from typing import Optional

__all__ = (
    "BesovKitError",
    "DomainError",
    "InvalidSelfMapError",
    "TruncationError",
    "RuleMismatchError",
    "NonFiniteIntegrandError",
    "RootSolveError",
    "UnsupportedSymbolError",
    "DecodeError",
    "MapSchemaError",
)


class BesovKitError(Exception):
    """Base exception class for besovkit.

    Every error raised on purpose by this library derives from it.
    """

    pass


class DomainError(BesovKitError, ValueError):
    """Raised when a map is evaluated at a point outside the open unit disk.

    Attributes
    ----------
    point: complex
        The first offending point.
    """

    def __init__(self, point: complex) -> None:
        self.point = complex(point)
        super().__init__(f"point {self.point!r} is outside the open unit disk (|z| = {abs(self.point)!r})")


class InvalidSelfMapError(BesovKitError):
    """Raised when a symbol does not map the disk into itself.

    Attributes
    ----------
    witness: complex
        A grid point where the modulus bound fails.
    modulus: float
        The modulus found at ``witness``.
    """

    def __init__(self, witness: complex, modulus: float) -> None:
        self.witness = complex(witness)
        self.modulus = float(modulus)
        super().__init__(
            f"not a self-map of the disk: |phi({self.witness!r})| = {self.modulus!r} > 1"
        )


class TruncationError(BesovKitError):
    """Raised when a Taylor truncation is too short for the requested derivative.

    Attributes
    ----------
    required_order: int
        The smallest truncation order that would have worked.
    """

    def __init__(self, required_order: int, available_order: int) -> None:
        self.required_order = required_order
        self.available_order = available_order
        super().__init__(
            f"truncation order {available_order} is too short, order >= {required_order} is required"
        )


class RuleMismatchError(BesovKitError):
    """Raised when a quadrature rule was built for another weight exponent."""

    def __init__(self, expected: float, actual: float) -> None:
        self.expected = expected
        self.actual = actual
        super().__init__(f"rule built for alpha={actual!r}, but alpha={expected!r} is required")


class NonFiniteIntegrandError(BesovKitError):
    """Raised when an integrand is not finite at a quadrature node.

    Attributes
    ----------
    node: complex
        The first node with a non-finite value.
    """

    def __init__(self, node: complex) -> None:
        self.node = complex(node)
        super().__init__(f"integrand is not finite at node {self.node!r}")


class RootSolveError(BesovKitError):
    """Raised when the companion-matrix eigenvalue solve fails."""

    pass


class UnsupportedSymbolError(BesovKitError):
    """Raised when a diagnostic needs a rational or polynomial symbol."""

    pass


class DecodeError(BesovKitError):
    """Raised when search parameters cannot be decoded into a map."""

    pass


class MapSchemaError(BesovKitError):
    """Raised when a map description violates the JSON schema.

    Attributes
    ----------
    path: str
        JSON path of the offending value, e.g. ``$.outer.zeros[1]``.
    """

    def __init__(self, path: str, message: str, witness: Optional[complex] = None) -> None:
        self.path = path
        self.witness = witness
        super().__init__(f"{path}: {message}")
