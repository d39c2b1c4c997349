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

import asyncio
import logging
from typing import (
    Mapping,
    Optional,
    TYPE_CHECKING,
)

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import minimize as nelder_mead
from scipy.special import expit

from .analytic_map import AnalyticMap, PowerSeries, blaschke
from .config import (
    DEFAULT_SEED,
    SEARCH_BUDGET,
    SEARCH_MAX_ZERO_RADIUS,
    SEARCH_PENALTY_SCALE,
    SEARCH_PROXIMITY_WARNING,
    SEARCH_RESTARTS,
    SELF_MAP_TOL,
    QuadratureSettings,
)
from .errors import DecodeError
from .norms import NormKind
from .operators import basis_norms, default_basis, isometry_defect
from .utils import _DictBased

__all__ = (
    "SearchSpace",
    "RestartTrace",
    "SearchResult",
    "objective",
    "minimize",
    "minimize_async",
)

_log = logging.getLogger(__name__)

if TYPE_CHECKING:
    from .types.search import (
        FamilyType,
        RestartTrace as RestartTracePayload,
        SearchResult as SearchResultPayload,
        SearchSpace as SearchSpacePayload,
    )

Basis = Mapping[str, AnalyticMap]

# angles of the circle on which series maps are checked for feasibility
_BOUNDARY_ANGLES = 1024


class SearchSpace(_DictBased):
    """A parameterised family of self-maps fixing the origin.

    ``blaschke`` maps are lambda z * prod (a_j - z)/(1 - conj(a_j) z) over
    ``degree - 1`` free zeros, encoded as [theta, s_1, arg_1, ...] with
    |a_j| = max_radius * expit(s_j). ``series`` maps are
    c_1 z + ... + c_N z^N, encoded as [re c_1, im c_1, ...].

    Attributes
    ----------
    family: Literal["blaschke", "series"]
        The family.
    degree: int
        Blaschke degree d or series degree N.
    max_radius: float
        Cap on the modulus of decoded zeros.
    """

    __slots__ = (
        "family",
        "degree",
        "max_radius",
    )

    if TYPE_CHECKING:
        family: FamilyType
        degree: int
        max_radius: float

    def __init__(self, family: FamilyType, degree: int, max_radius: float = SEARCH_MAX_ZERO_RADIUS) -> None:
        if family not in ("blaschke", "series"):
            raise ValueError(f"unknown family {family!r}")
        if degree < 1:
            raise ValueError("degree must be at least 1")
        if not 0.0 < max_radius < 1.0:
            raise ValueError("max_radius must lie in (0, 1)")
        self.family = family
        self.degree = int(degree)
        self.max_radius = float(max_radius)

    @classmethod
    def blaschke(cls, degree: int, max_radius: float = SEARCH_MAX_ZERO_RADIUS) -> SearchSpace:
        return cls("blaschke", degree, max_radius)

    @classmethod
    def series(cls, degree: int) -> SearchSpace:
        return cls("series", degree)

    @property
    def dimension(self) -> int:
        if self.family == "blaschke":
            return 1 + 2 * (self.degree - 1)
        return 2 * self.degree

    def _check(self, params: ArrayLike) -> NDArray[np.float64]:
        values = np.asarray(params, dtype=float)
        if values.shape != (self.dimension,):
            raise DecodeError(f"expected {self.dimension} parameters for {self.family}({self.degree}), got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DecodeError("parameters must be finite")
        return values

    def zeros(self, params: ArrayLike) -> NDArray[np.complex128]:
        """The free zeros of a Blaschke parameter vector."""
        values = self._check(params)
        radii = self.max_radius * expit(values[1::2])
        return radii * np.exp(1j * values[2::2])

    def decode(self, params: ArrayLike) -> AnalyticMap:
        """Builds the map for ``params``; always fixes the origin.

        Raises
        ------
        DecodeError
            ``params`` has the wrong length or is not finite.
        """

        values = self._check(params)
        if self.family == "blaschke":
            return blaschke(values[0], np.concatenate(([0j], self.zeros(values))))
        coeffs = values[0::2] + 1j * values[1::2]
        return PowerSeries(np.concatenate(([0j], coeffs)))

    def boundary_modulus(self, params: ArrayLike) -> float:
        """max |phi| on the unit circle; 1 for Blaschke maps."""
        if self.family == "blaschke":
            return 1.0
        values = self._check(params)
        circle = np.exp(2j * np.pi * np.arange(_BOUNDARY_ANGLES) / _BOUNDARY_ANGLES)
        coeffs = np.concatenate(([0j], values[0::2] + 1j * values[1::2]))
        return float(np.max(np.abs(np.polynomial.polynomial.polyval(circle, coeffs))))

    def penalty(self, params: ArrayLike) -> float:
        """(max(0, max |phi| on the circle - 1)) * 1e6; 0 for Blaschke maps."""
        excess = self.boundary_modulus(params) - 1.0 - SELF_MAP_TOL
        return max(excess, 0.0) * SEARCH_PENALTY_SCALE

    def feasible(self, params: ArrayLike) -> AnalyticMap:
        """The decoded map, shrunk into the disk when it leaves it."""
        phi = self.decode(params)
        modulus = self.boundary_modulus(params)
        if isinstance(phi, PowerSeries) and modulus > 1.0:
            return PowerSeries(phi.coefficients / (modulus * (1.0 + 1e-9)))
        return phi

    def initial_point(self, rng: np.random.Generator) -> NDArray[np.float64]:
        if self.family == "blaschke":
            point = np.empty(self.dimension)
            point[0] = rng.uniform(-np.pi, np.pi)
            point[1::2] = rng.normal(0.0, 1.0, self.degree - 1)
            point[2::2] = rng.uniform(-np.pi, np.pi, self.degree - 1)
            return point
        return rng.uniform(-0.5, 0.5, self.dimension) / self.degree

    def to_dict(self) -> SearchSpacePayload:
        return {attr: getattr(self, attr) for attr in self.__slots__}


def objective(
    space: SearchSpace,
    params: ArrayLike,
    p: float,
    kind: Optional[NormKind] = None,
    basis: Optional[Basis] = None,
    settings: Optional[QuadratureSettings] = None,
    *,
    reference_norms: Optional[Mapping[str, float]] = None,
) -> float:
    """Isometry defect of the decoded map plus the feasibility penalty.

    Parameters
    ----------
    space : SearchSpace
        The family.
    params : ArrayLike
        A parameter vector of ``space``.
    p : float
        The exponent.
    kind : Optional[NormKind], optional
        The norm, by default the full Besov norm.
    basis : Optional[Basis], optional
        Test functions, by default :func:`besovkit.operators.default_basis`.
    settings : Optional[QuadratureSettings], optional
        Quadrature sizes.
    reference_norms : Optional[Mapping[str, float]], optional
        Precomputed basis norms.

    Returns
    -------
    float
        The value, >= 0.
    """

    phi = space.feasible(params)
    report = isometry_defect(phi, p, kind, basis, settings, reference_norms=reference_norms)
    return report.max_defect + space.penalty(params)


class RestartTrace(_DictBased):
    """One Nelder-Mead run.

    Attributes
    ----------
    restart: int
        Index of the restart.
    best_params: NDArray[np.float64]
        Best parameters seen.
    best_defect: float
        Objective at ``best_params``.
    evaluations: int
        Objective evaluations spent.
    converged: bool
        Whether the simplex met its tolerances within the budget.
    trace: list[float]
        Best objective so far after each evaluation, non-increasing.
    """

    __slots__ = (
        "restart",
        "best_params",
        "best_defect",
        "evaluations",
        "converged",
        "trace",
    )

    if TYPE_CHECKING:
        restart: int
        best_params: NDArray[np.float64]
        best_defect: float
        evaluations: int
        converged: bool
        trace: list[float]

    def to_dict(self) -> RestartTracePayload:
        return {
            "restart": self.restart,
            "best_defect": self.best_defect,
            "evaluations": self.evaluations,
            "converged": self.converged,
            "trace": self.trace,
        }


class SearchResult(_DictBased):
    """The merged outcome of every restart.

    Attributes
    ----------
    space: SearchSpace
        The family searched.
    p: float
        The exponent.
    kind: NormKind
        The norm.
    seed: int
        The root seed.
    best_restart: int
        Index of the winning restart, ties going to the lowest.
    restarts: list[RestartTrace]
        Every restart in index order.
    """

    __slots__ = (
        "space",
        "p",
        "kind",
        "seed",
        "best_restart",
        "restarts",
    )

    if TYPE_CHECKING:
        space: SearchSpace
        p: float
        kind: NormKind
        seed: int
        best_restart: int
        restarts: list[RestartTrace]

    @property
    def best(self) -> RestartTrace:
        return self.restarts[self.best_restart]

    @property
    def best_defect(self) -> float:
        return self.best.best_defect

    @property
    def best_params(self) -> NDArray[np.float64]:
        return self.best.best_params

    @property
    def converged(self) -> bool:
        return self.best.converged

    @property
    def best_map(self) -> AnalyticMap:
        return self.space.feasible(self.best_params)

    def to_dict(self) -> SearchResultPayload:
        return {
            "space": self.space.to_dict(),
            "p": self.p,
            "seed": self.seed,
            "best_params": [float(x) for x in self.best_params],
            "best_defect": self.best_defect,
            "best_restart": self.best_restart,
            "best_map": self.best_map.to_dict(),
            "converged": self.converged,
            "restarts": [restart.to_dict() for restart in self.restarts],
        }


def _run_restart(
    index: int,
    start: NDArray[np.float64],
    space: SearchSpace,
    p: float,
    kind: NormKind,
    basis: Basis,
    settings: QuadratureSettings,
    reference_norms: Mapping[str, float],
    budget: int,
) -> RestartTrace:
    values: list[float] = []

    def fun(params: NDArray[np.float64]) -> float:
        value = objective(space, params, p, kind, basis, settings, reference_norms=reference_norms)
        values.append(value)
        return value

    result = nelder_mead(
        fun,
        start,
        method="Nelder-Mead",
        options={"maxfev": budget, "xatol": 1e-10, "fatol": 1e-13},
    )
    trace = np.minimum.accumulate(values).tolist()

    if not result.success:
        _log.warning("restart %d stopped after %d evaluations: %s", index, len(values), result.message)
    else:
        _log.debug("restart %d converged to %.3e after %d evaluations", index, result.fun, len(values))

    return RestartTrace._create(
        restart=index,
        best_params=np.asarray(result.x, dtype=float),
        best_defect=float(result.fun),
        evaluations=len(values),
        converged=bool(result.success),
        trace=trace,
    )


async def minimize_async(
    space: SearchSpace,
    p: float,
    kind: Optional[NormKind] = None,
    basis: Optional[Basis] = None,
    restarts: int = SEARCH_RESTARTS,
    seed: int = DEFAULT_SEED,
    budget: int = SEARCH_BUDGET,
    settings: Optional[QuadratureSettings] = None,
) -> SearchResult:
    """Runs Nelder-Mead restarts concurrently and keeps the best.

    Every restart starts from its own generator spawned from ``seed``, so
    results do not depend on scheduling.

    Parameters
    ----------
    space : SearchSpace
        The family.
    p : float
        The exponent.
    kind : Optional[NormKind], optional
        The norm, by default the full Besov norm.
    basis : Optional[Basis], optional
        Test functions, by default :func:`besovkit.operators.default_basis`.
    restarts : int, optional
        Number of restarts, at least 1, by default 8.
    seed : int, optional
        Root seed.
    budget : int, optional
        Objective evaluations per restart, at least 200, by default 200.
    settings : Optional[QuadratureSettings], optional
        Quadrature sizes, capped by :meth:`QuadratureSettings.for_search`.

    Returns
    -------
    SearchResult
        Every restart and the best one.
    """

    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    if budget < SEARCH_BUDGET:
        raise ValueError(f"budget must be at least {SEARCH_BUDGET}")

    kind = kind or NormKind.besov_norm()
    basis = basis if basis is not None else default_basis()
    settings = QuadratureSettings.for_search(settings)
    reference_norms = basis_norms(basis, p, kind, settings)

    children = np.random.SeedSequence(seed).spawn(restarts)
    starts = [space.initial_point(np.random.default_rng(child)) for child in children]

    tasks = [
        asyncio.to_thread(_run_restart, i, start, space, p, kind, basis, settings, reference_norms, budget)
        for i, start in enumerate(starts)
    ]
    traces = await asyncio.gather(*tasks)

    best = min(traces, key=lambda trace: (trace.best_defect, trace.restart))
    if space.family == "blaschke" and space.degree > 1:
        radii = np.abs(space.zeros(best.best_params))
        if np.any(radii > SEARCH_PROXIMITY_WARNING):
            _log.warning(
                "best %s(%d) map has zeros at radius %.6f, close to the circle",
                space.family,
                space.degree,
                float(np.max(radii)),
            )

    return SearchResult._create(
        space=space,
        p=p,
        kind=kind,
        seed=seed,
        best_restart=best.restart,
        restarts=list(traces),
    )


def minimize(
    space: SearchSpace,
    p: float,
    kind: Optional[NormKind] = None,
    basis: Optional[Basis] = None,
    restarts: int = SEARCH_RESTARTS,
    seed: int = DEFAULT_SEED,
    budget: int = SEARCH_BUDGET,
    settings: Optional[QuadratureSettings] = None,
) -> SearchResult:
    """Synchronous form of :func:`minimize_async`.

    It starts its own event loop with :func:`asyncio.run`, so it raises
    :exc:`RuntimeError` when called while a loop is running; await
    :func:`minimize_async` there instead.
    """

    return asyncio.run(minimize_async(space, p, kind, basis, restarts, seed, budget, settings))
