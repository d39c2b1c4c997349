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

import math
from typing import (
    Any,
    ClassVar,
    Optional,
    Sequence,
    TYPE_CHECKING,
    Union,
)

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import solve_triangular, toeplitz

from .config import (
    DEFAULT_TRUNCATION_ORDER,
    LOG_DERIVATIVE_FLOOR,
    MIN_GRID_DENSITY,
    SELF_MAP_RADIUS,
    SELF_MAP_TOL,
    UNIMODULAR_TOL,
)
from .errors import DomainError, TruncationError, UnsupportedSymbolError
from .utils import _DictBased, as_points, frozen_array, from_pair, to_pair

__all__ = (
    "AnalyticMap",
    "PowerSeries",
    "DiskAutomorphism",
    "BlaschkeProduct",
    "CompositionNode",
    "SelfMapCheck",
    "value",
    "derivative_value",
    "nth_derivative_at_zero",
    "taylor_truncate",
    "derivative_map",
    "validate_self_map",
    "map_from_dict",
    "identity",
    "monomial",
    "series",
    "rotation",
    "automorphism",
    "involution",
    "blaschke",
    "compose_maps",
)

if TYPE_CHECKING:
    from .types.analytic_map import (
        AnalyticMap as AnalyticMapPayload,
        Automorphism as AutomorphismPayload,
        Blaschke as BlaschkePayload,
        Compose as ComposePayload,
        Rotation as RotationPayload,
        SelfMapCheck as SelfMapCheckPayload,
        Series as SeriesPayload,
    )

Points = Union[complex, ArrayLike]


def _check_domain(points: NDArray[np.complex128]) -> None:
    outside = np.abs(points) >= 1.0
    if np.any(outside):
        raise DomainError(points[outside].flat[0])


def _finish(result: NDArray[np.complex128], scalar: bool) -> Union[complex, NDArray[np.complex128]]:
    return complex(result) if scalar else result


def _truncated_product(left: NDArray, right: NDArray, order: int) -> NDArray:
    return np.convolve(left, right)[: order + 1]


def _mobius_coefficients(center: complex, order: int) -> NDArray[np.complex128]:
    """Taylor coefficients of (a - z)/(1 - conj(a) z) through degree ``order``.

    (a - z) * sum(conj(a)^k z^k) gives c_0 = a and
    c_k = conj(a)^(k-1) (|a|^2 - 1) for k >= 1.
    """

    coeffs = np.empty(order + 1, dtype=complex)
    coeffs[0] = center
    if order > 0:
        powers = np.power(np.conj(complex(center)), np.arange(order))
        coeffs[1:] = powers * (abs(center) ** 2 - 1.0)
    return coeffs


def _series_divide(numerator: NDArray, denominator: NDArray, order: int) -> NDArray[np.complex128]:
    """Quotient of two series through degree ``order``; needs denominator[0] != 0."""
    first_row = np.zeros(order + 1, dtype=complex)
    first_row[0] = denominator[0]
    matrix = toeplitz(denominator[: order + 1], first_row)
    return solve_triangular(matrix, numerator[: order + 1], lower=True)


def _mobius_of_series(center: complex, g: NDArray, order: int) -> NDArray[np.complex128]:
    """Coefficients of (a - g)/(1 - conj(a) g) for a series g with |g(0)| < 1."""
    numerator = -np.asarray(g, dtype=complex)
    numerator[0] += center
    denominator = -np.conj(center) * np.asarray(g, dtype=complex)
    denominator[0] += 1.0
    return _series_divide(numerator, denominator, order)


class SelfMapCheck(_DictBased):
    """Outcome of :func:`validate_self_map`.

    .. container:: operations

        .. describe:: bool(x)

            Whether the map passed the check.

    Attributes
    ----------
    valid: bool
        Whether max |value| on the grid stays within 1 + 1e-12.
    max_modulus: float
        The largest modulus seen on the grid.
    witness: Optional[complex]
        The grid point attaining ``max_modulus`` when the check fails.
    """

    __slots__ = (
        "valid",
        "max_modulus",
        "witness",
    )

    if TYPE_CHECKING:
        valid: bool
        max_modulus: float
        witness: Optional[complex]

    def __init__(self, valid: bool, max_modulus: float, witness: Optional[complex] = None) -> None:
        self.valid = bool(valid)
        self.max_modulus = float(max_modulus)
        self.witness = witness

    def __bool__(self) -> bool:
        return self.valid

    def to_dict(self) -> SelfMapCheckPayload:
        return {
            "valid": self.valid,
            "max_modulus": self.max_modulus,
            "witness": to_pair(self.witness) if self.witness is not None else None,
        }


class AnalyticMap(_DictBased):
    """Base class of analytic functions on the unit disk.

    Every variant evaluates values and first derivatives in closed form and
    exposes its Taylor expansion at the origin. Instances are immutable.

    .. container:: operations

        .. describe:: x(z)

            Same as ``x.value(z)``.
    """

    __slots__ = ()

    kind: ClassVar[str]

    def _evaluate(self, points: NDArray[np.complex128]) -> NDArray[np.complex128]:
        raise NotImplementedError

    def _differentiate(self, points: NDArray[np.complex128]) -> NDArray[np.complex128]:
        raise NotImplementedError

    def taylor_coefficients(self, order: int) -> NDArray[np.complex128]:
        """Taylor coefficients c_0..c_order at the origin.

        Parameters
        ----------
        order : int
            The truncation degree N.

        Returns
        -------
        NDArray[np.complex128]
            An array of length N + 1.
        """

        raise NotImplementedError

    def _compose_series(self, g: NDArray[np.complex128], order: int) -> NDArray[np.complex128]:
        """Taylor coefficients of self o g through degree ``order``, g given to the same degree.

        Raises
        ------
        TruncationError
            g(0) != 0 and this map has no closed form to compose through;
            the truncated Horner sum would drop outer terms of degree > order.
        """

        g0 = abs(complex(g[0]))
        if g0 != 0:
            # outer terms of degree k contribute about |g(0)|^k to c_0
            required = math.ceil(math.log(UNIMODULAR_TOL) / math.log(g0)) if g0 < 1 else order + 1
            raise TruncationError(max(required, order + 1), order)

        outer = self.taylor_coefficients(order)
        result = np.zeros(order + 1, dtype=complex)
        result[0] = outer[-1]
        for b in outer[-2::-1]:
            result = _truncated_product(result, g, order)
            result[0] += b
        return result

    def preimage_polynomial(self, w: ArrayLike) -> NDArray[np.complex128]:
        """Coefficients (low to high) of the polynomial whose roots solve phi(z) = w.

        Parameters
        ----------
        w : ArrayLike
            Target values, shape ``(n,)``.

        Returns
        -------
        NDArray[np.complex128]
            Shape ``(n, d + 1)``, one polynomial per target.

        Raises
        ------
        UnsupportedSymbolError
            The map is neither rational nor polynomial.
        """

        raise UnsupportedSymbolError(f"{self.kind} maps have no preimage polynomial")

    def value(self, z: Points) -> Union[complex, NDArray[np.complex128]]:
        """Evaluates the map at ``z``.

        Parameters
        ----------
        z : complex or ArrayLike
            Point(s) of the open unit disk.

        Returns
        -------
        complex or NDArray[np.complex128]
            The value(s), with the shape of ``z``.

        Raises
        ------
        DomainError
            Some point has modulus >= 1.
        """

        points = as_points(z)
        _check_domain(points)
        return _finish(self._evaluate(points), points.ndim == 0)

    def derivative_value(self, z: Points) -> Union[complex, NDArray[np.complex128]]:
        """Evaluates the first derivative at ``z``.

        Parameters
        ----------
        z : complex or ArrayLike
            Point(s) of the open unit disk.

        Returns
        -------
        complex or NDArray[np.complex128]
            The derivative value(s).

        Raises
        ------
        DomainError
            Some point has modulus >= 1.
        """

        points = as_points(z)
        _check_domain(points)
        return _finish(self._differentiate(points), points.ndim == 0)

    def __call__(self, z: Points) -> Union[complex, NDArray[np.complex128]]:
        return self.value(z)

    def taylor_truncate(self, order: int = DEFAULT_TRUNCATION_ORDER) -> PowerSeries:
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        return PowerSeries(self.taylor_coefficients(order))

    def nth_derivative_at_zero(self, k: int, order: int = DEFAULT_TRUNCATION_ORDER) -> complex:
        if k < 0:
            raise ValueError("derivative order must be nonnegative")
        if k > order:
            raise TruncationError(k, order)
        return math.factorial(k) * complex(self.taylor_coefficients(order)[k])

    def derivative_map(self, n: int, order: int = DEFAULT_TRUNCATION_ORDER) -> AnalyticMap:
        if n > order:
            raise TruncationError(n, order)
        return self.taylor_truncate(order).derivative(n)

    @property
    def fixes_origin(self) -> bool:
        return abs(self.value(0j)) <= UNIMODULAR_TOL

    def validate_self_map(self, grid_density: int = MIN_GRID_DENSITY) -> SelfMapCheck:
        if grid_density < MIN_GRID_DENSITY:
            raise ValueError(f"grid_density must be at least {MIN_GRID_DENSITY}")

        # maximum modulus: the circle of radius 1 - 1e-4 bounds the inside
        angles = np.linspace(0.0, 2.0 * np.pi, 64 * grid_density, endpoint=False)
        grid = SELF_MAP_RADIUS * np.exp(1j * angles)
        moduli = np.abs(self._evaluate(grid))
        index = int(np.argmax(moduli))
        max_modulus = float(moduli[index])

        if max_modulus <= 1.0 + SELF_MAP_TOL:
            return SelfMapCheck(True, max_modulus)
        return SelfMapCheck(False, max_modulus, complex(grid[index]))


class PowerSeries(AnalyticMap):
    """A polynomial sum c_k z^k, also used for truncated Taylor series.

    Attributes
    ----------
    coefficients: NDArray[np.complex128]
        c_0..c_N, read-only.
    """

    __slots__ = ("coefficients",)

    kind = "series"

    if TYPE_CHECKING:
        coefficients: NDArray[np.complex128]

    def __init__(self, coefficients: ArrayLike) -> None:
        coeffs = np.atleast_1d(np.asarray(coefficients, dtype=complex))
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise ValueError("coefficients must be a nonempty one-dimensional sequence")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        self.coefficients = frozen_array(coeffs)

    @property
    def degree(self) -> int:
        return self.coefficients.size - 1

    def _evaluate(self, points: NDArray[np.complex128]) -> NDArray[np.complex128]:
        # Horner, highest coefficient first
        result = np.full(points.shape, self.coefficients[-1], dtype=complex)
        for c in self.coefficients[-2::-1]:
            result = result * points + c
        return result

    def _differentiate(self, points: NDArray[np.complex128]) -> NDArray[np.complex128]:
        return self.derivative()._evaluate(points)

    def derivative(self, n: int = 1) -> PowerSeries:
        """The nth derivative as a power series (exact coefficient shift)."""
        coeffs = np.asarray(self.coefficients)
        for _ in range(n):
            if coeffs.size == 1:
                return PowerSeries([0j])
            coeffs = coeffs[1:] * np.arange(1, coeffs.size)
        return PowerSeries(coeffs)

    def derivative_map(self, n: int, order: int = DEFAULT_TRUNCATION_ORDER) -> PowerSeries:
        return self.derivative(n)

    def nth_derivative_at_zero(self, k: int, order: int = DEFAULT_TRUNCATION_ORDER) -> complex:
        if k < 0:
            raise ValueError("derivative order must be nonnegative")
        if k > self.degree:
            return 0j
        return math.factorial(k) * complex(self.coefficients[k])

    def taylor_coefficients(self, order: int) -> NDArray[np.complex128]:
        coeffs = np.zeros(order + 1, dtype=complex)
        keep = min(order, self.degree) + 1
        coeffs[:keep] = self.coefficients[:keep]
        return coeffs

    def _compose_series(self, g: NDArray[np.complex128], order: int) -> NDArray[np.complex128]:
        # every coefficient takes part, so nothing past ``order`` is lost
        result = np.zeros(order + 1, dtype=complex)
        result[0] = self.coefficients[-1]
        for c in self.coefficients[-2::-1]:
            result = _truncated_product(result, g, order)
            result[0] += c
        return result

    def preimage_polynomial(self, w: ArrayLike) -> NDArray[np.complex128]:
        targets = np.atleast_1d(np.asarray(w, dtype=complex))
        polys = np.tile(np.asarray(self.coefficients), (targets.size, 1))
        polys[:, 0] -= targets
        return polys

    def to_dict(self) -> SeriesPayload:
        return {
            "kind": "series",
            "coeffs": [to_pair(c) for c in self.coefficients],
        }


class DiskAutomorphism(AnalyticMap):
    """The automorphism z -> lambda (a - z)/(1 - conj(a) z).

    With ``lambda = 1`` the map is the involution exchanging 0 and ``a``.
    Use :func:`rotation` for z -> e^{i theta} z, which stores
    ``lambda = -e^{i theta}`` and ``a = 0``.

    Attributes
    ----------
    phase: complex
        The unimodular factor lambda.
    center: complex
        The point a sent to 0, |a| < 1.
    """

    __slots__ = (
        "phase",
        "center",
    )

    kind = "automorphism"

    if TYPE_CHECKING:
        phase: complex
        center: complex

    def __init__(self, phase: complex, center: complex = 0j) -> None:
        phase, center = complex(phase), complex(center)
        if abs(abs(phase) - 1.0) > UNIMODULAR_TOL:
            raise ValueError(f"phase must be unimodular, got |lambda| = {abs(phase)!r}")
        if abs(center) >= 1.0:
            raise ValueError(f"center must lie in the open disk, got |a| = {abs(center)!r}")
        self.phase = phase
        self.center = center

    @property
    def is_rotation(self) -> bool:
        return self.center == 0

    @property
    def rotation_angle(self) -> float:
        """theta with value(z) = e^{i theta} z; meaningful for rotations only."""
        return float(np.angle(-self.phase))

    def _evaluate(self, points: NDArray[np.complex128]) -> NDArray[np.complex128]:
        a = self.center
        return self.phase * (a - points) / (1.0 - np.conj(a) * points)

    def _differentiate(self, points: NDArray[np.complex128]) -> NDArray[np.complex128]:
        a = self.center
        return self.phase * (abs(a) ** 2 - 1.0) / (1.0 - np.conj(a) * points) ** 2

    def taylor_coefficients(self, order: int) -> NDArray[np.complex128]:
        return self.phase * _mobius_coefficients(self.center, order)

    def _compose_series(self, g: NDArray[np.complex128], order: int) -> NDArray[np.complex128]:
        return self.phase * _mobius_of_series(self.center, g, order)

    def preimage_polynomial(self, w: ArrayLike) -> NDArray[np.complex128]:
        targets = np.atleast_1d(np.asarray(w, dtype=complex))
        a = self.center
        polys = np.empty((targets.size, 2), dtype=complex)
        polys[:, 0] = self.phase * a - targets
        polys[:, 1] = -self.phase + targets * np.conj(a)
        return polys

    def validate_self_map(self, grid_density: int = MIN_GRID_DENSITY) -> SelfMapCheck:
        return SelfMapCheck(True, 1.0)

    def to_dict(self) -> Union[RotationPayload, AutomorphismPayload]:
        if self.is_rotation:
            return {"kind": "rotation", "theta": self.rotation_angle}
        return {
            "kind": "automorphism",
            "lambda_theta": float(np.angle(self.phase)),
            "a": to_pair(self.center),
        }


class BlaschkeProduct(AnalyticMap):
    """A finite Blaschke product lambda * prod (a_j - z)/(1 - conj(a_j) z).

    Attributes
    ----------
    phase: complex
        The unimodular factor lambda.
    zeros: NDArray[np.complex128]
        a_1..a_d, each in the open disk.
    """

    __slots__ = (
        "phase",
        "zeros",
    )

    kind = "blaschke"

    if TYPE_CHECKING:
        phase: complex
        zeros: NDArray[np.complex128]

    def __init__(self, phase: complex, zeros: Sequence[complex]) -> None:
        phase = complex(phase)
        zeros_array = np.atleast_1d(np.asarray(zeros, dtype=complex))
        if abs(abs(phase) - 1.0) > UNIMODULAR_TOL:
            raise ValueError(f"phase must be unimodular, got |lambda| = {abs(phase)!r}")
        if zeros_array.size == 0:
            raise ValueError("a Blaschke product needs at least one zero")
        if np.any(np.abs(zeros_array) >= 1.0):
            raise ValueError("every zero must lie in the open disk")
        self.phase = phase
        self.zeros = frozen_array(zeros_array)

    @property
    def degree(self) -> int:
        return self.zeros.size

    @property
    def fixes_origin(self) -> bool:
        return bool(np.any(np.abs(self.zeros) <= UNIMODULAR_TOL))

    def _factors(self, points: NDArray[np.complex128]) -> NDArray[np.complex128]:
        a = self.zeros.reshape((-1,) + (1,) * points.ndim)
        return (a - points) / (1.0 - np.conj(a) * points)

    def _evaluate(self, points: NDArray[np.complex128]) -> NDArray[np.complex128]:
        result = np.full(points.shape, self.phase, dtype=complex)
        for a in self.zeros:
            result = result * ((a - points) / (1.0 - np.conj(a) * points))
        return result

    def _differentiate(self, points: NDArray[np.complex128]) -> NDArray[np.complex128]:
        values = self._evaluate(points)
        result = np.empty_like(values)

        regular = np.abs(values) >= LOG_DERIVATIVE_FLOOR
        if np.any(regular):
            z = points[regular]
            log_derivative = np.zeros(z.shape, dtype=complex)
            for a in self.zeros:
                log_derivative += -1.0 / (a - z) + np.conj(a) / (1.0 - np.conj(a) * z)
            result[regular] = values[regular] * log_derivative

        # removable 0/0 near the zeros: product rule instead
        if not np.all(regular):
            z = points[~regular]
            factors = self._factors(z)
            a = self.zeros.reshape((-1,) + (1,) * z.ndim)
            factor_derivatives = (np.abs(a) ** 2 - 1.0) / (1.0 - np.conj(a) * z) ** 2
            total = np.zeros(z.shape, dtype=complex)
            for j in range(self.degree):
                others = np.prod(np.delete(factors, j, axis=0), axis=0)
                total += factor_derivatives[j] * others
            result[~regular] = self.phase * total
        return result

    def taylor_coefficients(self, order: int) -> NDArray[np.complex128]:
        coeffs = np.zeros(order + 1, dtype=complex)
        coeffs[0] = self.phase
        for a in self.zeros:
            coeffs = _truncated_product(coeffs, _mobius_coefficients(a, order), order)
        return coeffs

    def _compose_series(self, g: NDArray[np.complex128], order: int) -> NDArray[np.complex128]:
        coeffs = np.zeros(order + 1, dtype=complex)
        coeffs[0] = self.phase
        for a in self.zeros:
            coeffs = _truncated_product(coeffs, _mobius_of_series(a, g, order), order)
        return coeffs

    def preimage_polynomial(self, w: ArrayLike) -> NDArray[np.complex128]:
        targets = np.atleast_1d(np.asarray(w, dtype=complex))
        numerator = np.array([1.0 + 0j])
        denominator = np.array([1.0 + 0j])
        for a in self.zeros:
            numerator = np.convolve(numerator, [a, -1.0])
            denominator = np.convolve(denominator, [1.0, -np.conj(a)])
        return self.phase * numerator[None, :] - targets[:, None] * denominator[None, :]

    def validate_self_map(self, grid_density: int = MIN_GRID_DENSITY) -> SelfMapCheck:
        return SelfMapCheck(True, 1.0)

    def to_dict(self) -> BlaschkePayload:
        return {
            "kind": "blaschke",
            "lambda_theta": float(np.angle(self.phase)),
            "zeros": [to_pair(a) for a in self.zeros],
        }


class CompositionNode(AnalyticMap):
    """The composition outer o inner.

    Attributes
    ----------
    outer: AnalyticMap
        Applied second.
    inner: AnalyticMap
        Applied first; must map the disk into itself.
    """

    __slots__ = (
        "outer",
        "inner",
    )

    kind = "compose"

    if TYPE_CHECKING:
        outer: AnalyticMap
        inner: AnalyticMap

    def __init__(self, outer: AnalyticMap, inner: AnalyticMap) -> None:
        self.outer = outer
        self.inner = inner

    def _evaluate(self, points: NDArray[np.complex128]) -> NDArray[np.complex128]:
        return as_points(self.outer.value(self.inner._evaluate(points)))

    def _differentiate(self, points: NDArray[np.complex128]) -> NDArray[np.complex128]:
        inner_values = self.inner._evaluate(points)
        return as_points(self.outer.derivative_value(inner_values)) * self.inner._differentiate(points)

    def taylor_coefficients(self, order: int) -> NDArray[np.complex128]:
        return self.outer._compose_series(self.inner.taylor_coefficients(order), order)

    def _compose_series(self, g: NDArray[np.complex128], order: int) -> NDArray[np.complex128]:
        return self.outer._compose_series(self.inner._compose_series(g, order), order)

    def validate_self_map(self, grid_density: int = MIN_GRID_DENSITY) -> SelfMapCheck:
        check = self.inner.validate_self_map(grid_density)
        if not check:
            return check
        if isinstance(self.outer, (DiskAutomorphism, BlaschkeProduct)):
            return SelfMapCheck(True, 1.0)
        return super().validate_self_map(grid_density)

    def to_dict(self) -> ComposePayload:
        return {
            "kind": "compose",
            "outer": self.outer.to_dict(),
            "inner": self.inner.to_dict(),
        }


def value(m: AnalyticMap, z: Points) -> Union[complex, NDArray[np.complex128]]:
    """Evaluates ``m`` at ``z``; see :meth:`AnalyticMap.value`."""
    return m.value(z)


def derivative_value(m: AnalyticMap, z: Points) -> Union[complex, NDArray[np.complex128]]:
    """Evaluates ``m'`` at ``z``; see :meth:`AnalyticMap.derivative_value`."""
    return m.derivative_value(z)


def nth_derivative_at_zero(m: AnalyticMap, k: int, order: int = DEFAULT_TRUNCATION_ORDER) -> complex:
    """Computes the kth derivative of ``m`` at the origin.

    Parameters
    ----------
    m : AnalyticMap
        The map.
    k : int
        The derivative order.
    order : int, optional
        Taylor truncation order for non-polynomial maps, by default 64.

    Returns
    -------
    complex
        k! times the kth Taylor coefficient.

    Raises
    ------
    TruncationError
        ``k`` exceeds ``order`` for a map that needs truncation.
    """

    return m.nth_derivative_at_zero(k, order)


def taylor_truncate(m: AnalyticMap, order: int = DEFAULT_TRUNCATION_ORDER) -> PowerSeries:
    """Truncates the Taylor expansion of ``m`` at the origin to degree ``order``."""
    return m.taylor_truncate(order)


def derivative_map(m: AnalyticMap, n: int, order: int = DEFAULT_TRUNCATION_ORDER) -> AnalyticMap:
    """The nth derivative of ``m`` as a map (exact for power series)."""
    return m.derivative_map(n, order)


def validate_self_map(m: AnalyticMap, grid_density: int = MIN_GRID_DENSITY) -> SelfMapCheck:
    """Checks that ``m`` maps the disk into itself.

    Automorphisms and Blaschke products pass by construction; other maps
    are sampled on the circle of radius 1 - 1e-4.

    Parameters
    ----------
    m : AnalyticMap
        The candidate symbol.
    grid_density : int, optional
        Grid refinement, at least 16, by default 16.

    Returns
    -------
    SelfMapCheck
        The outcome, carrying a witness point when it fails.
    """

    return m.validate_self_map(grid_density)


def identity() -> PowerSeries:
    return PowerSeries([0j, 1.0])


def monomial(k: int, scale: complex = 1.0) -> PowerSeries:
    """The map scale * z^k."""
    coeffs = np.zeros(k + 1, dtype=complex)
    coeffs[k] = scale
    return PowerSeries(coeffs)


def series(coeffs: Sequence[complex]) -> PowerSeries:
    return PowerSeries(coeffs)


def rotation(theta: float) -> DiskAutomorphism:
    """The rotation z -> e^{i theta} z."""
    return DiskAutomorphism(-np.exp(1j * theta), 0j)


def automorphism(lambda_theta: float, a: complex) -> DiskAutomorphism:
    return DiskAutomorphism(np.exp(1j * lambda_theta), a)


def involution(a: complex) -> DiskAutomorphism:
    """The automorphism exchanging 0 and ``a``."""
    return DiskAutomorphism(1.0, a)


def blaschke(lambda_theta: float, zeros: Sequence[complex]) -> BlaschkeProduct:
    return BlaschkeProduct(np.exp(1j * lambda_theta), zeros)


def compose_maps(outer: AnalyticMap, inner: AnalyticMap) -> CompositionNode:
    return CompositionNode(outer, inner)


def map_from_dict(data: AnalyticMapPayload) -> AnalyticMap:
    """Builds a map from its JSON description.

    The payload is assumed to be schema-valid; :mod:`besovkit.cli` checks
    files before calling this.

    Parameters
    ----------
    data : AnalyticMapPayload
        The description, dispatched on ``data["kind"]``.

    Returns
    -------
    AnalyticMap
        The map.
    """

    kind: Any = data["kind"]
    if kind == "rotation":
        return rotation(data["theta"])
    elif kind == "automorphism":
        return automorphism(data["lambda_theta"], from_pair(data["a"]))
    elif kind == "blaschke":
        return blaschke(data["lambda_theta"], [from_pair(a) for a in data["zeros"]])
    elif kind == "series":
        return PowerSeries([from_pair(c) for c in data["coeffs"]])
    elif kind == "compose":
        return CompositionNode(map_from_dict(data["outer"]), map_from_dict(data["inner"]))
    else:
        raise ValueError(f"unknown map kind {kind!r}")
