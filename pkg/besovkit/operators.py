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

import logging
import math
from typing import (
    Callable,
    Literal,
    Mapping,
    Optional,
    TYPE_CHECKING,
)

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .analytic_map import (
    AnalyticMap,
    CompositionNode,
    PowerSeries,
    involution,
    monomial,
)
from .config import (
    COVERAGE_SAMPLES,
    DEFAULT_ROOT_EPSILON,
    LOCAL_HYPOTHESIS_RADIUS,
    MIN_GRID_DENSITY,
    ROOT_MERGE_TOL,
    SELF_MAP_RADIUS,
    TOLERANCES,
    QuadratureSettings,
)
from .errors import InvalidSelfMapError, RootSolveError, UnsupportedSymbolError
from .norms import (
    NormKind,
    besov_norm,
    bergman_norm,
    equivalent_norm,
    evaluate_norm,
    lp_norm,
    rule_for,
)
from .quadrature import build_rule, integrate, integrate_mc, sample_points
from .utils import _DictBased, to_pair

__all__ = (
    "DiskRegion",
    "WeightedSymbol",
    "DefectRow",
    "DefectReport",
    "ResidualReport",
    "CoverageReport",
    "IdentityCheck",
    "BorelCheck",
    "LocalIsometryReport",
    "ProofChainReport",
    "MonomialImage",
    "MonomialImageReport",
    "InvolutionCheck",
    "default_basis",
    "default_bergman_basis",
    "basis_norms",
    "compose",
    "isometry_defect",
    "seminorm_preservation_check",
    "schwarz_pick_residual",
    "count_preimages",
    "counting_function",
    "change_of_variable_check",
    "borel_equality_check",
    "fullness_defect",
    "local_hypothesis_check",
    "local_isometry_check",
    "proof_chain_check",
    "weighted_isometry_check",
    "monomial_image_check",
    "factorial_identity",
    "factorial_obstruction",
    "origin_involution_check",
)

_log = logging.getLogger(__name__)

if TYPE_CHECKING:
    from .types.operators import (
        BorelCheck as BorelCheckPayload,
        CoverageReport as CoverageReportPayload,
        DefectReport as DefectReportPayload,
        DefectRow as DefectRowPayload,
        IdentityCheck as IdentityCheckPayload,
        InvolutionCheck as InvolutionCheckPayload,
        LocalIsometryReport as LocalIsometryReportPayload,
        MonomialImage as MonomialImagePayload,
        MonomialImageReport as MonomialImageReportPayload,
        ProofChainReport as ProofChainReportPayload,
        ResidualReport as ResidualReportPayload,
    )

Basis = Mapping[str, AnalyticMap]
TestFunction = Callable[[NDArray[np.complex128]], ArrayLike]

# relative gap below which two integrals are reported as equal
_EQUALITY_TOL = 1e-9
# leading coefficients below this fraction of the largest are dropped
_LEADING_TOL = 1e-14


def default_basis() -> dict[str, PowerSeries]:
    """The fixed test functions of :func:`isometry_defect`, keyed by id."""
    return {
        "z": PowerSeries([0, 1]),
        "z+z^2/2": PowerSeries([0, 1, 0.5]),
        "z^2": PowerSeries([0, 0, 1]),
        "z^2-0.3z": PowerSeries([0, -0.3, 1]),
        "z^3": PowerSeries([0, 0, 0, 1]),
        "z^4": PowerSeries([0, 0, 0, 0, 1]),
    }


def default_bergman_basis() -> dict[str, PowerSeries]:
    """Derivatives of :func:`default_basis`, used on A^p_{p-2}."""
    return {
        "1": PowerSeries([1]),
        "1+z": PowerSeries([1, 1]),
        "2z": PowerSeries([0, 2]),
        "2z-0.3": PowerSeries([-0.3, 2]),
        "3z^2": PowerSeries([0, 0, 3]),
        "4z^3": PowerSeries([0, 0, 0, 4]),
    }


def _require_self_map(phi: AnalyticMap) -> None:
    check = phi.validate_self_map()
    if not check:
        raise InvalidSelfMapError(check.witness, check.max_modulus)


def compose(phi: AnalyticMap, f: AnalyticMap) -> CompositionNode:
    """The image C_phi f = f o phi.

    Raises
    ------
    InvalidSelfMapError
        ``phi`` does not map the disk into itself.
    """

    _require_self_map(phi)
    return CompositionNode(f, phi)


class DiskRegion(_DictBased):
    """A centred disk D(0, outer) or annulus inner <= |w| < outer.

    Attributes
    ----------
    inner: float
        Inner radius, 0 for a disk.
    outer: float
        Outer radius, at most 1.
    """

    __slots__ = (
        "inner",
        "outer",
    )

    if TYPE_CHECKING:
        inner: float
        outer: float

    def __init__(self, inner: float, outer: float) -> None:
        if not 0.0 <= inner < outer <= 1.0:
            raise ValueError(f"need 0 <= inner < outer <= 1, got {inner!r}, {outer!r}")
        self.inner = float(inner)
        self.outer = float(outer)

    @classmethod
    def disk(cls, radius: float) -> DiskRegion:
        return cls(0.0, radius)

    @classmethod
    def annulus(cls, inner: float, outer: float) -> DiskRegion:
        return cls(inner, outer)

    def contains(self, w: ArrayLike) -> NDArray[np.bool_]:
        modulus = np.abs(w)
        return (modulus >= self.inner) & (modulus < self.outer)

    def weighted_area(self, alpha: float) -> float:
        """Integral of (1 - |w|^2)^alpha over the region, in closed form."""

        def primitive(rho: float) -> float:
            return (1.0 - (1.0 - rho**2) ** (alpha + 1.0)) / (alpha + 1.0)

        return primitive(self.outer) - primitive(self.inner)

    def to_dict(self) -> list[float]:
        return [self.inner, self.outer]


class WeightedSymbol(_DictBased):
    """The pair (psi, phi) of the weighted composition f -> psi * (f o phi).

    Attributes
    ----------
    weight: Optional[AnalyticMap]
        The weight psi; ``None`` stands for psi = phi', evaluated exactly.
    symbol: AnalyticMap
        The self-map phi.
    """

    __slots__ = (
        "weight",
        "symbol",
    )

    if TYPE_CHECKING:
        weight: Optional[AnalyticMap]
        symbol: AnalyticMap

    def __init__(self, weight: Optional[AnalyticMap], symbol: AnalyticMap) -> None:
        _require_self_map(symbol)
        self.weight = weight
        self.symbol = symbol

    @classmethod
    def with_derivative(cls, symbol: AnalyticMap) -> WeightedSymbol:
        """The pair (phi', phi)."""
        return cls(None, symbol)

    def weight_value(self, z: ArrayLike) -> NDArray[np.complex128]:
        if self.weight is None:
            return np.asarray(self.symbol.derivative_value(z))
        return np.asarray(self.weight.value(z))

    def apply(self, g: AnalyticMap) -> TestFunction:
        """psi * (g o phi) as a pointwise callable."""
        return lambda z: self.weight_value(z) * np.asarray(g.value(self.symbol.value(z)))

    def to_dict(self) -> dict:
        return {
            "weight": "derivative" if self.weight is None else self.weight.to_dict(),
            "symbol": self.symbol.to_dict(),
        }


class DefectRow(_DictBased):

    __slots__ = (
        "function_id",
        "norm",
        "image_norm",
        "defect",
    )

    if TYPE_CHECKING:
        function_id: str
        norm: float
        image_norm: float
        defect: float

    def __init__(self, data: DefectRowPayload) -> None:
        self._update(data)

    def _update(self, data: DefectRowPayload) -> None:
        self.function_id = data["function_id"]
        self.norm = data["norm"]
        self.image_norm = data["image_norm"]
        self.defect = data["defect"]

    def to_dict(self) -> DefectRowPayload:
        return {attr: getattr(self, attr) for attr in self.__slots__}


class DefectReport(_DictBased):
    """Norms of a test basis before and after composing with a symbol.

    A small ``max_defect`` means the operator is consistent with being an
    isometry on this basis, nothing more.

    Attributes
    ----------
    symbol: AnalyticMap
        The symbol phi.
    p: float
        The exponent.
    kind: NormKind
        The norm used.
    rows: list[DefectRow]
        One row per test function, sorted by id.
    max_defect: float
        The largest row defect.
    phi_at_zero: complex
        phi(0).
    """

    __slots__ = (
        "symbol",
        "p",
        "kind",
        "rows",
        "max_defect",
        "phi_at_zero",
    )

    if TYPE_CHECKING:
        symbol: AnalyticMap
        p: float
        kind: NormKind
        rows: list[DefectRow]
        max_defect: float
        phi_at_zero: complex

    def __init__(self, symbol: AnalyticMap, p: float, kind: NormKind, rows: list[DefectRow]) -> None:
        self.symbol = symbol
        self.p = p
        self.kind = kind
        self.rows = sorted(rows, key=lambda row: row.function_id)
        self.max_defect = max(row.defect for row in self.rows)
        self.phi_at_zero = complex(symbol.value(0j))

    def row(self, function_id: str) -> DefectRow:
        for row in self.rows:
            if row.function_id == function_id:
                return row
        raise KeyError(function_id)

    def to_dict(self) -> DefectReportPayload:
        return {
            "symbol": self.symbol.to_dict(),
            "p": self.p,
            "kind": self.kind.to_dict(),
            "rows": [row.to_dict() for row in self.rows],
            "max_defect": self.max_defect,
            "phi_at_zero": to_pair(self.phi_at_zero),
        }


def basis_norms(basis: Basis, p: float, kind: NormKind, settings: QuadratureSettings) -> dict[str, float]:
    """||f|| for every test function, keyed by id."""
    rule = rule_for(kind, p, settings)
    return {
        function_id: evaluate_norm(f, p, kind, rule, settings.truncation_order)
        for function_id, f in basis.items()
    }


def isometry_defect(
    phi: AnalyticMap,
    p: float,
    kind: Optional[NormKind] = None,
    basis: Optional[Basis] = None,
    settings: Optional[QuadratureSettings] = None,
    *,
    reference_norms: Optional[Mapping[str, float]] = None,
) -> DefectReport:
    """Compares ||f|| with ||f o phi|| over a test basis.

    Parameters
    ----------
    phi : AnalyticMap
        The symbol.
    p : float
        The exponent.
    kind : Optional[NormKind], optional
        The norm, by default the full Besov norm.
    basis : Optional[Basis], optional
        Test functions keyed by id, by default :func:`default_basis`.
    settings : Optional[QuadratureSettings], optional
        Quadrature sizes, by default :class:`QuadratureSettings`.
    reference_norms : Optional[Mapping[str, float]], optional
        Precomputed ||f|| per id, reused across symbols by the search.

    Returns
    -------
    DefectReport
        One row per test function.

    Raises
    ------
    InvalidSelfMapError
        ``phi`` is not a self-map.
    """

    kind = kind or NormKind.besov_norm()
    basis = basis if basis is not None else default_basis()
    settings = settings or QuadratureSettings()
    if not basis:
        raise ValueError("the test basis must not be empty")

    _require_self_map(phi)
    rule = rule_for(kind, p, settings)
    if reference_norms is None:
        reference_norms = basis_norms(basis, p, kind, settings)

    rows = []
    for function_id, f in basis.items():
        norm = reference_norms[function_id]
        image_norm = evaluate_norm(CompositionNode(f, phi), p, kind, rule, settings.truncation_order)
        rows.append(
            DefectRow(
                {
                    "function_id": function_id,
                    "norm": norm,
                    "image_norm": image_norm,
                    "defect": abs(image_norm - norm),
                }
            )
        )
    return DefectReport(phi, p, kind, rows)


def seminorm_preservation_check(
    phi: AnalyticMap,
    p: float,
    basis: Optional[Basis] = None,
    settings: Optional[QuadratureSettings] = None,
) -> float:
    """Largest relative change of the Besov seminorm under f -> f o phi."""
    report = isometry_defect(phi, p, NormKind.besov_seminorm(), basis, settings)
    return max(row.defect / max(row.norm, 1e-15) for row in report.rows)


class ResidualReport(_DictBased):
    """The Schwarz-Pick residual |phi'|(1 - |z|^2) - (1 - |phi|^2) on a polar grid.

    Attributes
    ----------
    max_residual: float
        The largest residual, <= 0 up to rounding for any self-map.
    max_abs_residual: float
        The largest absolute residual, ~0 exactly for automorphisms.
    argmax: complex
        Where ``max_residual`` is attained.
    grid: NDArray[np.complex128]
        The grid points.
    field: NDArray[np.float64]
        The residual at each grid point.
    """

    __slots__ = (
        "max_residual",
        "max_abs_residual",
        "argmax",
        "grid_density",
        "grid",
        "field",
    )

    if TYPE_CHECKING:
        max_residual: float
        max_abs_residual: float
        argmax: complex
        grid_density: int
        grid: NDArray[np.complex128]
        field: NDArray[np.float64]

    def to_dict(self) -> ResidualReportPayload:
        return {
            "max_residual": self.max_residual,
            "max_abs_residual": self.max_abs_residual,
            "argmax": to_pair(self.argmax),
            "grid_density": self.grid_density,
        }


def _polar_grid(radius: float, density: int, include_origin: bool = True) -> NDArray[np.complex128]:
    start = 0 if include_origin else 1
    radii = radius * np.arange(start, density + 1) / density
    angles = 2.0 * np.pi * np.arange(8 * density) / (8 * density)
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


def schwarz_pick_residual(phi: AnalyticMap, grid_density: int = MIN_GRID_DENSITY) -> ResidualReport:
    """Evaluates the Schwarz-Pick residual of ``phi``.

    The grid has ``grid_density + 1`` radii up to 1 - 1e-4 (the origin
    included) and ``8 * grid_density`` angles.

    Parameters
    ----------
    phi : AnalyticMap
        A self-map.
    grid_density : int, optional
        At least 16, by default 16.

    Returns
    -------
    ResidualReport
        The residual field and its extremes.
    """

    if grid_density < MIN_GRID_DENSITY:
        raise ValueError(f"grid_density must be at least {MIN_GRID_DENSITY}")
    _require_self_map(phi)

    grid = _polar_grid(SELF_MAP_RADIUS, grid_density)
    values = np.asarray(phi.value(grid))
    derivatives = np.asarray(phi.derivative_value(grid))
    field = np.abs(derivatives) * (1.0 - np.abs(grid) ** 2) - (1.0 - np.abs(values) ** 2)

    index = int(np.argmax(field))
    return ResidualReport._create(
        max_residual=float(field[index]),
        max_abs_residual=float(np.max(np.abs(field))),
        argmax=complex(grid[index]),
        grid_density=grid_density,
        grid=grid,
        field=field,
    )


def _companion_roots(polys: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Roots of monic-normalized polynomials of one degree d >= 1, shape (n, d)."""
    degree = polys.shape[1] - 1
    monic = polys[:, :degree] / polys[:, degree : degree + 1]
    companion = np.zeros((polys.shape[0], degree, degree), dtype=complex)
    companion[:, 1:, :-1] = np.eye(degree - 1)
    companion[:, :, -1] = -monic
    try:
        roots = np.linalg.eigvals(companion)
    except np.linalg.LinAlgError as e:
        raise RootSolveError(f"eigenvalue solve failed: {e}") from e
    if not np.all(np.isfinite(roots)):
        raise RootSolveError("eigenvalue solve returned non-finite roots")
    return roots


def _count_inside(roots: NDArray[np.complex128], epsilon: float) -> tuple[NDArray[np.int64], NDArray[np.bool_]]:
    modulus = np.abs(roots)
    inside = modulus < 1.0 - epsilon
    flagged = np.any((modulus >= 1.0 - epsilon) & (modulus < 1.0), axis=1)

    # a root duplicates an earlier one within ROOT_MERGE_TOL
    gaps = np.abs(roots[:, :, None] - roots[:, None, :])
    earlier = np.tril(np.ones(gaps.shape[1:], dtype=bool), k=-1)
    duplicate = np.any((gaps < ROOT_MERGE_TOL) & earlier[None, :, :] & inside[:, None, :], axis=2)
    counts = np.sum(inside & ~duplicate, axis=1)
    return counts.astype(np.int64), flagged


def count_preimages(
    phi: AnalyticMap,
    ws: ArrayLike,
    epsilon: float = DEFAULT_ROOT_EPSILON,
) -> tuple[NDArray[np.int64], NDArray[np.bool_]]:
    """Counts the solutions of phi(z) = w inside the disk for every ``w`` in ``ws``.

    Solutions are the eigenvalues of companion matrices of the numerator
    of phi(z) - w. Roots with 1 - epsilon <= |z| < 1 are flagged instead of
    counted.

    Parameters
    ----------
    phi : AnalyticMap
        A Blaschke product, automorphism or polynomial.
    ws : ArrayLike
        Target values in the disk.
    epsilon : float, optional
        Boundary tolerance in (0, 0.01), by default 1e-6.

    Returns
    -------
    tuple[NDArray[np.int64], NDArray[np.bool_]]
        Counts and flags, both shaped like ``ws``.

    Raises
    ------
    UnsupportedSymbolError
        ``phi`` is neither rational nor polynomial.
    RootSolveError
        The eigenvalue solve failed.
    """

    if not 0.0 < epsilon < 0.01:
        raise ValueError(f"epsilon must lie in (0, 0.01), got {epsilon!r}")
    targets = np.asarray(ws, dtype=complex)
    flat = targets.ravel()
    polys = phi.preimage_polynomial(flat)

    counts = np.zeros(flat.size, dtype=np.int64)
    flagged = np.zeros(flat.size, dtype=bool)

    # effective degree per target, degenerate leading terms dropped
    scale = np.max(np.abs(polys), axis=1, keepdims=True)
    significant = np.abs(polys) > _LEADING_TOL * np.where(scale > 0, scale, 1.0)
    degrees = polys.shape[1] - 1 - np.argmax(significant[:, ::-1], axis=1)
    degrees[~np.any(significant, axis=1)] = 0

    for degree in np.unique(degrees):
        if degree == 0:
            continue
        rows = degrees == degree
        roots = _companion_roots(polys[rows, : degree + 1])
        counts[rows], flagged[rows] = _count_inside(roots, epsilon)

    if np.any(flagged):
        _log.warning(
            "%d of %d targets have preimages within %g of the unit circle; they are not counted",
            int(np.sum(flagged)),
            flat.size,
            epsilon,
        )
    return counts.reshape(targets.shape), flagged.reshape(targets.shape)


def counting_function(phi: AnalyticMap, w: complex, epsilon: float = DEFAULT_ROOT_EPSILON) -> int:
    """n_phi(w), the number of preimages of ``w`` in the disk; see :func:`count_preimages`."""
    counts, _ = count_preimages(phi, [w], epsilon)
    return int(counts[0])


class IdentityCheck(_DictBased):

    __slots__ = (
        "lhs",
        "rhs",
        "difference",
    )

    if TYPE_CHECKING:
        lhs: float
        rhs: float
        difference: float

    def __init__(self, lhs: float, rhs: float) -> None:
        self.lhs = float(lhs)
        self.rhs = float(rhs)
        self.difference = abs(self.lhs - self.rhs)

    @property
    def relative_difference(self) -> float:
        return self.difference / max(abs(self.rhs), 1e-15)

    def to_dict(self) -> IdentityCheckPayload:
        return {attr: getattr(self, attr) for attr in self.__slots__}


def change_of_variable_check(
    phi: AnalyticMap,
    g: TestFunction,
    settings: Optional[QuadratureSettings] = None,
    epsilon: float = DEFAULT_ROOT_EPSILON,
) -> IdentityCheck:
    """Both sides of the substitution w = phi(z) for a smooth ``g``.

    lhs integrates g(phi(z)) |phi'(z)|^2 over z, rhs integrates
    g(w) n_phi(w) over w. Both use the unweighted rule.
    """

    settings = settings or QuadratureSettings()
    _require_self_map(phi)
    rule = build_rule(0.0, settings.radial_nodes, settings.angular_nodes)

    lhs = integrate(rule, lambda z: np.asarray(g(phi.value(z))) * np.abs(phi.derivative_value(z)) ** 2)
    rhs = integrate(rule, lambda w: np.asarray(g(w)) * count_preimages(phi, w, epsilon)[0])
    return IdentityCheck(lhs.real, rhs.real)


class BorelCheck(_DictBased):
    """Both sides of the weighted pull-back identity over a centred region.

    Attributes
    ----------
    lhs: float
        Integral of |psi|^p (1 - |z|^2)^alpha over phi^{-1}(region).
    rhs: float
        Integral of (1 - |w|^2)^alpha over the region, in closed form.
    standard_error: Optional[float]
        Monte Carlo standard error of ``lhs``, ``None`` for quadrature.
    """

    __slots__ = (
        "lhs",
        "rhs",
        "difference",
        "standard_error",
        "method",
        "region",
    )

    if TYPE_CHECKING:
        lhs: float
        rhs: float
        difference: float
        standard_error: Optional[float]
        method: Literal["quadrature", "mc"]
        region: DiskRegion

    @property
    def sigmas(self) -> float:
        """The gap in units of the standard error, inf for exact gaps under quadrature."""
        if not self.standard_error:
            return 0.0 if self.difference == 0.0 else math.inf
        return self.difference / self.standard_error

    def to_dict(self) -> BorelCheckPayload:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "difference": self.difference,
            "standard_error": self.standard_error,
            "method": self.method,
            "region": self.region.to_dict(),
        }


def borel_equality_check(
    ws: WeightedSymbol,
    p: float,
    alpha: float,
    region: DiskRegion,
    method: Literal["quadrature", "mc"] = "mc",
    settings: Optional[QuadratureSettings] = None,
) -> BorelCheck:
    """Compares the |psi|^p-weighted measure of phi^{-1}(region) with the region's own.

    Both sides agree for every region when W_{psi, phi} is an isometry of
    A^p_alpha. Values are recorded as they are; nothing is asserted.

    Parameters
    ----------
    ws : WeightedSymbol
        The pair (psi, phi).
    p : float
        The exponent on |psi|.
    alpha : float
        The weight exponent, > -1.
    region : DiskRegion
        A centred disk or annulus.
    method : Literal["quadrature", "mc"], optional
        Monte Carlo by default; the indicator is discontinuous.
    settings : Optional[QuadratureSettings], optional
        Sample count, seed and quadrature sizes.

    Returns
    -------
    BorelCheck
        Both sides and the Monte Carlo error if any.
    """

    settings = settings or QuadratureSettings()

    def integrand(z: NDArray[np.complex128]) -> NDArray[np.float64]:
        inside = region.contains(ws.symbol.value(z))
        return np.where(inside, np.abs(ws.weight_value(z)) ** p, 0.0)

    if method == "mc":
        lhs, standard_error = integrate_mc(alpha, integrand, settings.mc_samples, settings.seed)
    elif method == "quadrature":
        rule = build_rule(alpha, settings.radial_nodes, settings.angular_nodes)
        lhs, standard_error = integrate(rule, integrand).real, None
    else:
        raise ValueError(f"unknown method {method!r}")

    rhs = region.weighted_area(alpha)
    return BorelCheck._create(
        lhs=float(np.real(lhs)),
        rhs=rhs,
        difference=abs(float(np.real(lhs)) - rhs),
        standard_error=standard_error,
        method=method,
        region=region,
    )


class CoverageReport(_DictBased):
    """Preimage counts on area-uniform samples of the disk.

    Attributes
    ----------
    samples: int
        Number of sampled targets w.
    epsilon: float
        Boundary tolerance used for root acceptance.
    omitted_area: float
        Fraction of samples with n_phi(w) = 0, an estimate of A[D \\ phi(D)].
    max_count: int
        Largest n_phi(w) seen.
    univalent_fraction: float
        Fraction of samples with n_phi(w) <= 1.
    flagged: int
        Samples with preimages too close to the circle to count.
    counts: NDArray[np.int64]
        n_phi at every sample.
    """

    __slots__ = (
        "samples",
        "epsilon",
        "omitted_area",
        "max_count",
        "univalent_fraction",
        "flagged",
        "counts",
    )

    if TYPE_CHECKING:
        samples: int
        epsilon: float
        omitted_area: float
        max_count: int
        univalent_fraction: float
        flagged: int
        counts: NDArray[np.int64]

    def to_dict(self) -> CoverageReportPayload:
        values, frequencies = np.unique(self.counts, return_counts=True)
        return {
            "samples": self.samples,
            "epsilon": self.epsilon,
            "omitted_area": self.omitted_area,
            "max_count": self.max_count,
            "univalent_fraction": self.univalent_fraction,
            "flagged": self.flagged,
            "count_histogram": {str(v): int(c) for v, c in zip(values, frequencies)},
        }


def fullness_defect(
    phi: AnalyticMap,
    samples: int = COVERAGE_SAMPLES,
    epsilon: float = DEFAULT_ROOT_EPSILON,
    seed: Optional[int] = None,
) -> CoverageReport:
    """Estimates the area of the disk that ``phi`` omits.

    Parameters
    ----------
    phi : AnalyticMap
        A Blaschke product, automorphism or polynomial.
    samples : int, optional
        Number of area-uniform targets, by default 100 000.
    epsilon : float, optional
        Boundary tolerance, by default 1e-6.
    seed : Optional[int], optional
        Seed of the sampler, by default the package seed.

    Returns
    -------
    CoverageReport
        The report.
    """

    seed = QuadratureSettings().seed if seed is None else seed
    ws = sample_points(0.0, samples, seed)
    counts, flagged = count_preimages(phi, ws, epsilon)
    return CoverageReport._create(
        samples=int(samples),
        epsilon=float(epsilon),
        omitted_area=float(np.mean(counts == 0)),
        max_count=int(np.max(counts)),
        univalent_fraction=float(np.mean(counts <= 1)),
        flagged=int(np.sum(flagged)),
        counts=counts,
    )


def local_hypothesis_check(
    phi: AnalyticMap,
    radius: float = LOCAL_HYPOTHESIS_RADIUS,
    grid_density: int = MIN_GRID_DENSITY,
) -> bool:
    """Whether n_phi(w) = 1 on a polar grid of D(0, radius) without the origin."""
    grid = _polar_grid(radius, grid_density, include_origin=False)
    counts, _ = count_preimages(phi, grid)
    return bool(np.all(counts == 1))


def _relation(i1: float, i2: float) -> Literal["<", "=", ">"]:
    if abs(i1 - i2) <= _EQUALITY_TOL * max(abs(i1), abs(i2), 1e-300):
        return "="
    return "<" if i1 < i2 else ">"


def _pullback_integrals(phi: AnalyticMap, p: float, rule_radius: float, settings: QuadratureSettings) -> tuple[float, float]:
    """Integrals of |phi'|^p (1-|z|^2)^(p-2) and |phi'|^2 (1-|phi|^2)^(p-2) over D(0, rule_radius)."""
    rule = build_rule(p - 2.0, settings.radial_nodes, settings.angular_nodes, rule_radius)

    def first(z: NDArray[np.complex128]) -> NDArray[np.float64]:
        return np.abs(phi.derivative_value(z)) ** p

    # (1 - |phi|^2)^(p-2) = ratio^(p-2) (1 - |z|^2)^(p-2) keeps the rule's weight
    def second(z: NDArray[np.complex128]) -> NDArray[np.float64]:
        ratio = (1.0 - np.abs(phi.value(z)) ** 2) / (1.0 - np.abs(z) ** 2)
        return np.abs(phi.derivative_value(z)) ** 2 * ratio ** (p - 2.0)

    return integrate(rule, first).real, integrate(rule, second).real


class LocalIsometryReport(_DictBased):

    __slots__ = (
        "p",
        "radius",
        "i1",
        "i2",
        "hypothesis_holds",
        "relation",
    )

    if TYPE_CHECKING:
        p: float
        radius: float
        i1: float
        i2: float
        hypothesis_holds: bool
        relation: Literal["<", "=", ">"]

    def __init__(self, data: LocalIsometryReportPayload) -> None:
        self._update(data)

    def _update(self, data: LocalIsometryReportPayload) -> None:
        self.p = data["p"]
        self.radius = data["radius"]
        self.i1 = data["i1"]
        self.i2 = data["i2"]
        self.hypothesis_holds = data["hypothesis_holds"]
        self.relation = data["relation"]

    @property
    def expected_relation(self) -> Literal["<", ">"]:
        """Direction forced by Schwarz-Pick: I1 <= I2 for p > 2, I1 >= I2 for p < 2."""
        return "<" if self.p > 2.0 else ">"

    def to_dict(self) -> LocalIsometryReportPayload:
        return {attr: getattr(self, attr) for attr in self.__slots__}


def local_isometry_check(
    phi: AnalyticMap,
    p: float,
    radius: float,
    settings: Optional[QuadratureSettings] = None,
) -> LocalIsometryReport:
    """Compares I1 and I2 on D(0, radius).

    I1 integrates |phi'|^p (1 - |z|^2)^(p-2) and I2 integrates
    |phi'|^2 (1 - |phi|^2)^(p-2). The report also says whether
    n_phi = 1 near the origin.
    """

    if not p > 1.0:
        raise ValueError(f"p must be > 1, got {p!r}")
    if not 0.0 < radius < 1.0:
        raise ValueError(f"radius must lie in (0, 1), got {radius!r}")
    settings = settings or QuadratureSettings()
    _require_self_map(phi)

    try:
        hypothesis = local_hypothesis_check(phi)
    except UnsupportedSymbolError:
        _log.warning("cannot count preimages of a %s map; local hypothesis reported as failing", phi.kind)
        hypothesis = False

    i1, i2 = _pullback_integrals(phi, p, radius, settings)
    return LocalIsometryReport(
        {
            "p": p,
            "radius": radius,
            "i1": i1,
            "i2": i2,
            "hypothesis_holds": hypothesis,
            "relation": _relation(i1, i2),
        }
    )


class ProofChainReport(_DictBased):
    """lhs, middle and rhs of the chain comparing a symbol with its pull-back.

    ``margin`` is positive when the chain runs in the direction
    Schwarz-Pick forces: lhs - rhs for p < 2 and middle - lhs for p > 2.
    """

    __slots__ = (
        "p",
        "lhs",
        "middle",
        "rhs",
        "margin",
    )

    if TYPE_CHECKING:
        p: float
        lhs: float
        middle: float
        rhs: float
        margin: float

    def to_dict(self) -> ProofChainReportPayload:
        return {attr: getattr(self, attr) for attr in self.__slots__}


def proof_chain_check(
    phi: AnalyticMap,
    p: float,
    settings: Optional[QuadratureSettings] = None,
    epsilon: float = DEFAULT_ROOT_EPSILON,
) -> ProofChainReport:
    """Evaluates the three integrals of the chain on the whole disk.

    lhs is the integral of |phi'|^p (1-|z|^2)^(p-2), middle of
    |phi'|^2 (1-|phi|^2)^(p-2) and rhs of n_phi(w) (1-|w|^2)^(p-2).
    middle and rhs are computed along independent paths.
    """

    settings = settings or QuadratureSettings()
    _require_self_map(phi)
    lhs, middle = _pullback_integrals(phi, p, 1.0, settings)

    rule = build_rule(p - 2.0, settings.radial_nodes, settings.angular_nodes)
    rhs = integrate(rule, lambda w: count_preimages(phi, w, epsilon)[0].astype(float)).real

    return ProofChainReport._create(
        p=p,
        lhs=lhs,
        middle=middle,
        rhs=rhs,
        margin=lhs - rhs if p < 2.0 else middle - lhs,
    )


def weighted_isometry_check(
    ws: WeightedSymbol,
    p: float,
    basis: Optional[Basis] = None,
    settings: Optional[QuadratureSettings] = None,
) -> float:
    """Largest |  ||psi (g o phi)|| - ||g||  | over a basis of A^p_{p-2}.

    The basis defaults to :func:`default_bergman_basis`.
    """

    basis = basis if basis is not None else default_bergman_basis()
    settings = settings or QuadratureSettings()
    alpha = p - 2.0
    rule = build_rule(alpha, settings.radial_nodes, settings.angular_nodes)

    defects = []
    for function_id in sorted(basis):
        g = basis[function_id]
        norm = bergman_norm(g, p, alpha, rule)
        image_norm = lp_norm(ws.apply(g), p, rule)
        defects.append(abs(image_norm - norm))
    return max(defects)


class MonomialImage(_DictBased):
    """The image of z^k/k! written as factor * z^j / j! plus a residual.

    Attributes
    ----------
    k: int
        The monomial degree.
    image_degree: Optional[int]
        j, the dominant degree below n, ``None`` if the image vanishes there.
    factor: complex
        The dominant scaled coefficient lambda_k.
    residual: float
        Largest remaining coefficient, scaled by j! below n.
    norm: float
        The equivalent norm of the image.
    """

    __slots__ = (
        "k",
        "image_degree",
        "factor",
        "residual",
        "norm",
    )

    if TYPE_CHECKING:
        k: int
        image_degree: Optional[int]
        factor: complex
        residual: float
        norm: float

    def to_dict(self) -> MonomialImagePayload:
        return {
            "k": self.k,
            "image_degree": self.image_degree,
            "factor": to_pair(self.factor),
            "residual": self.residual,
            "norm": self.norm,
        }


class MonomialImageReport(_DictBased):

    __slots__ = (
        "n",
        "p",
        "images",
        "is_permutation",
    )

    if TYPE_CHECKING:
        n: int
        p: float
        images: list[MonomialImage]
        is_permutation: bool

    def to_dict(self) -> MonomialImageReportPayload:
        return {
            "n": self.n,
            "p": self.p,
            "images": [image.to_dict() for image in self.images],
            "is_permutation": self.is_permutation,
        }


def monomial_image_check(
    phi: AnalyticMap,
    p: float,
    n: int,
    settings: Optional[QuadratureSettings] = None,
    tol: float = TOLERANCES["rotation_defect"],
) -> MonomialImageReport:
    """Images of z^k/k! for k < n under C_phi.

    An isometry of the order-n norm sends each of them to a unimodular
    multiple of some z^j/j! with j < n, and k -> j is a permutation.

    Parameters
    ----------
    phi : AnalyticMap
        The symbol.
    p : float
        The exponent.
    n : int
        The order of the equivalent norm, n >= 2.
    settings : Optional[QuadratureSettings], optional
        Quadrature sizes and truncation order.
    tol : float, optional
        Slack on residuals and on | |lambda_k| - 1 |.

    Returns
    -------
    MonomialImageReport
        One image per k and whether k -> j is a permutation.
    """

    settings = settings or QuadratureSettings()
    order = settings.truncation_order
    rule = rule_for(NormKind.equivalent(n), p, settings)
    scale = np.array([math.factorial(j) for j in range(n)], dtype=float)

    images = []
    for k in range(n):
        image = compose(phi, monomial(k, 1.0 / math.factorial(k)))
        coeffs = image.taylor_coefficients(order)
        head = coeffs[:n] * scale

        if np.all(head == 0):
            degree, factor = None, 0j
            others = np.abs(coeffs)
        else:
            degree = int(np.argmax(np.abs(head)))
            factor = complex(head[degree])
            others = np.concatenate((np.abs(np.delete(head, degree)), np.abs(coeffs[n:])))

        images.append(
            MonomialImage._create(
                k=k,
                image_degree=degree,
                factor=factor,
                residual=float(np.max(others)) if others.size else 0.0,
                norm=equivalent_norm(image, p, n, rule, order),
            )
        )

    degrees = [image.image_degree for image in images]
    is_permutation = (
        None not in degrees
        and sorted(degrees) == list(range(n))
        and all(image.residual <= tol and abs(abs(image.factor) - 1.0) <= tol for image in images)
    )
    return MonomialImageReport._create(n=n, p=p, images=images, is_permutation=is_permutation)


def factorial_identity(k: int) -> bool:
    """Whether 2 (k!)^2 = (2k)!, in exact integer arithmetic."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return 2 * math.factorial(k) ** 2 == math.factorial(2 * k)


def factorial_obstruction(k_max: int = 12) -> dict[int, bool]:
    """:func:`factorial_identity` for k = 1..k_max; only k = 1 satisfies it."""
    return {k: factorial_identity(k) for k in range(1, k_max + 1)}


class InvolutionCheck(_DictBased):
    """Norms of the involution phi_a, a = phi(0), before and after C_phi.

    An isometric C_phi keeps them equal, and since phi_a o phi fixes the
    origin the equality forces a = 0.
    """

    __slots__ = (
        "a",
        "involution_norm",
        "composed_norm",
    )

    if TYPE_CHECKING:
        a: complex
        involution_norm: float
        composed_norm: float

    @property
    def gap(self) -> float:
        return abs(self.involution_norm - self.composed_norm)

    def to_dict(self) -> InvolutionCheckPayload:
        return {
            "a": to_pair(self.a),
            "involution_norm": self.involution_norm,
            "composed_norm": self.composed_norm,
        }


def origin_involution_check(
    phi: AnalyticMap,
    p: float,
    settings: Optional[QuadratureSettings] = None,
) -> InvolutionCheck:
    settings = settings or QuadratureSettings()
    _require_self_map(phi)
    a = complex(phi.value(0j))
    rule = rule_for(NormKind.besov_norm(), p, settings)

    phi_a = involution(a)
    return InvolutionCheck._create(
        a=a,
        involution_norm=besov_norm(phi_a, p, rule),
        composed_norm=besov_norm(CompositionNode(phi_a, phi), p, rule),
    )
