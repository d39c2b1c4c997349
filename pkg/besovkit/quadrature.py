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
    NamedTuple,
    TYPE_CHECKING,
    Union,
)

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import beta, roots_jacobi, roots_legendre

from .cache import Cache, caching_function
from .config import (
    ANGULAR_REFINEMENT,
    ANGULAR_REFINEMENT_CAP,
    DEFAULT_ANGULAR_NODES,
    DEFAULT_MC_SAMPLES,
    DEFAULT_RADIAL_NODES,
    DEFAULT_SEED,
    INNER_PANEL_COUNT,
    INNER_PANEL_RATIO,
    INNER_RADIUS_SQUARED,
    MAX_ANGULAR_NODES,
    MAX_RADIAL_NODES,
    MIN_ANGULAR_NODES,
    MIN_MC_SAMPLES,
    MIN_RADIAL_NODES,
    RULE_CACHE_SIZE,
)
from .errors import NonFiniteIntegrandError
from .utils import _DictBased, frozen_array

__all__ = (
    "WeightedDiskRule",
    "MonteCarloEstimate",
    "build_rule",
    "integrate",
    "integrate_mc",
    "sample_points",
    "closed_form_moment",
    "rule_cache",
)

_log = logging.getLogger(__name__)

if TYPE_CHECKING:
    from .types.settings import WeightedDiskRule as WeightedDiskRulePayload

Integrand = Callable[[NDArray[np.complex128]], Union[ArrayLike, complex, float]]

rule_cache = Cache(RULE_CACHE_SIZE)

# Monte Carlo points are kept off the unit circle
_MAX_SAMPLE_RADIUS = 1.0 - 1e-12


def closed_form_moment(alpha: float, m: int = 0) -> float:
    """The moment integral of u^m (1 - u)^alpha over [0, 1], i.e. B(m + 1, alpha + 1)."""
    return float(beta(m + 1, alpha + 1))


def _check_alpha(alpha: float) -> None:
    if not alpha > -1.0:
        raise ValueError(f"weight (1 - |z|^2)^alpha is not integrable for alpha={alpha!r}, need alpha > -1")


def _legendre_panel(count: int, lower: float, upper: float) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    x, w = roots_legendre(count)
    half = 0.5 * (upper - lower)
    return lower + half * (x + 1.0), half * w


class WeightedDiskRule(_DictBased):
    """A product rule for integrals of g(z) (1 - |z|^2)^alpha dA over D(0, radius).

    Rings are indexed by u = |z|^2. On a full disk the block [1/4, 1] is a
    Gauss-Jacobi(alpha, 0) rule absorbing (1 - u)^alpha exactly, and
    [0, 1/4] is covered by geometric Gauss-Legendre panels. Ring ``j``
    carries an equispaced angular grid whose size grows towards the circle.

    Do not build this yourself, use :func:`build_rule`.

    Attributes
    ----------
    alpha: float
        The weight exponent.
    radial_count: int
        The node count K of the outer radial block.
    angular_count: int
        The base angular count M.
    radius: float
        Radius of the integration disk, 1 for the whole disk.
    radii_squared: NDArray[np.float64]
        Ring positions u, ascending, all in (0, 1).
    radial_weights: NDArray[np.float64]
        Ring weights, with (1 - u)^alpha and the normalization of dA folded in.
    ring_sizes: NDArray[np.int64]
        Angular count of each ring, a multiple of ``angular_count``.
    ring_offsets: NDArray[np.int64]
        Start of each ring inside ``points``.
    points: NDArray[np.complex128]
        Every node, ring by ring.
    """

    __slots__ = (
        "alpha",
        "radial_count",
        "angular_count",
        "radius",
        "radii_squared",
        "radial_weights",
        "ring_sizes",
        "ring_offsets",
        "points",
    )

    if TYPE_CHECKING:
        alpha: float
        radial_count: int
        angular_count: int
        radius: float
        radii_squared: NDArray[np.float64]
        radial_weights: NDArray[np.float64]
        ring_sizes: NDArray[np.int64]
        ring_offsets: NDArray[np.int64]
        points: NDArray[np.complex128]

    @property
    def node_count(self) -> int:
        return self.points.size

    @property
    def total_weight(self) -> float:
        """Sum of the radial weights, the weighted area of D(0, radius)."""
        return float(np.sum(self.radial_weights))

    def to_dict(self) -> WeightedDiskRulePayload:
        return {
            "alpha": self.alpha,
            "radial_count": self.radial_count,
            "angular_count": self.angular_count,
            "radius": self.radius,
            "node_count": self.node_count,
        }


@caching_function(rule_cache)
def build_rule(
    alpha: float,
    radial_nodes: int = DEFAULT_RADIAL_NODES,
    angular_nodes: int = DEFAULT_ANGULAR_NODES,
    radius: float = 1.0,
) -> WeightedDiskRule:
    """Builds the quadrature rule for the weight (1 - |z|^2)^alpha on D(0, radius).

    Rules are memoised in ``rule_cache``, which keeps the most recently used
    ones; ``rule_cache.clear()`` releases them all.

    Parameters
    ----------
    alpha : float
        Weight exponent, alpha > -1.
    radial_nodes : int, optional
        Node count K of the outer radial block, 4 <= K <= 512, by default 64.
    angular_nodes : int, optional
        Base angular count M, 8 <= M <= 8192, by default 256.
    radius : float, optional
        Radius r in (0, 1] of the integration disk, by default 1.

    Returns
    -------
    WeightedDiskRule
        The rule.

    Raises
    ------
    ValueError
        An argument is out of range, in particular alpha <= -1.
    """

    _check_alpha(alpha)
    if not MIN_RADIAL_NODES <= radial_nodes <= MAX_RADIAL_NODES:
        raise ValueError(f"radial_nodes must lie in [{MIN_RADIAL_NODES}, {MAX_RADIAL_NODES}]")
    if not MIN_ANGULAR_NODES <= angular_nodes <= MAX_ANGULAR_NODES:
        raise ValueError(f"angular_nodes must lie in [{MIN_ANGULAR_NODES}, {MAX_ANGULAR_NODES}]")
    if not 0.0 < radius <= 1.0:
        raise ValueError(f"radius must lie in (0, 1], got {radius!r}")

    edge = radius**2
    top = edge * INNER_RADIUS_SQUARED
    inner_count = max(12, radial_nodes // 4)

    # outer block [top, edge]
    if radius == 1.0:
        x, w = roots_jacobi(radial_nodes, alpha, 0.0)
        half = 0.5 * (1.0 - top)
        outer_u = top + half * (x + 1.0)
        outer_w = w * half ** (alpha + 1.0)
    else:
        outer_u, outer_w = _legendre_panel(radial_nodes, top, edge)
        outer_w = outer_w * (1.0 - outer_u) ** alpha

    # geometric panels on [0, top], smallest first
    blocks_u = []
    blocks_w = []
    bounds = [0.0] + [top * INNER_PANEL_RATIO**j for j in range(INNER_PANEL_COUNT, -1, -1)]
    for lower, upper in zip(bounds[:-1], bounds[1:]):
        u, w = _legendre_panel(inner_count, lower, upper)
        blocks_u.append(u)
        blocks_w.append(w * (1.0 - u) ** alpha)
    blocks_u.append(outer_u)
    blocks_w.append(outer_w)

    u = np.concatenate(blocks_u)
    weights = np.concatenate(blocks_w)
    radii = np.sqrt(u)

    factor = np.ceil(ANGULAR_REFINEMENT / (angular_nodes * (1.0 - radii)))
    sizes = angular_nodes * np.clip(factor, 1, ANGULAR_REFINEMENT_CAP).astype(np.int64)
    offsets = np.concatenate(([0], np.cumsum(sizes)[:-1])).astype(np.int64)

    points = np.concatenate(
        [r * np.exp(2j * np.pi * np.arange(size) / size) for r, size in zip(radii, sizes)]
    )

    _log.debug(
        "built rule alpha=%r K=%d M=%d radius=%r with %d rings and %d nodes",
        alpha,
        radial_nodes,
        angular_nodes,
        radius,
        u.size,
        points.size,
    )

    return WeightedDiskRule._create(
        alpha=float(alpha),
        radial_count=int(radial_nodes),
        angular_count=int(angular_nodes),
        radius=float(radius),
        radii_squared=frozen_array(u, dtype=np.float64),
        radial_weights=frozen_array(weights, dtype=np.float64),
        ring_sizes=frozen_array(sizes, dtype=np.int64),
        ring_offsets=frozen_array(offsets, dtype=np.int64),
        points=frozen_array(points),
    )


def integrate(rule: WeightedDiskRule, g: Integrand) -> complex:
    """Integrates ``g`` against the rule's weight.

    ``g`` is called once with every node of the rule as a flat array. Each
    ring is averaged over its angles first, then rings are summed with the
    radial weights, always in the same order.

    Parameters
    ----------
    rule : WeightedDiskRule
        The rule, see :func:`build_rule`.
    g : Callable
        A vectorised integrand. Constants are broadcast.

    Returns
    -------
    complex
        The integral of g(z) (1 - |z|^2)^alpha dA over the rule's disk.

    Raises
    ------
    NonFiniteIntegrandError
        ``g`` is not finite at some node.
    """

    values = np.asarray(g(rule.points))
    if values.shape != rule.points.shape:
        values = np.broadcast_to(values, rule.points.shape)

    finite = np.isfinite(values)
    if not np.all(finite):
        raise NonFiniteIntegrandError(rule.points[~finite][0])

    ring_means = np.add.reduceat(values, rule.ring_offsets) / rule.ring_sizes
    return complex(np.sum(ring_means * rule.radial_weights))


class MonteCarloEstimate(NamedTuple):
    estimate: complex
    standard_error: float


def sample_points(alpha: float, samples: int, seed: int = DEFAULT_SEED) -> NDArray[np.complex128]:
    """Draws points of the disk with density proportional to (1 - |z|^2)^alpha.

    With ``alpha = 0`` the points are area-uniform.
    """

    _check_alpha(alpha)
    rng = np.random.default_rng(seed)
    v = 1.0 - rng.random(samples)  # in (0, 1]
    u = 1.0 - v ** (1.0 / (alpha + 1.0))
    theta = 2.0 * np.pi * rng.random(samples)
    radii = np.minimum(np.sqrt(u), _MAX_SAMPLE_RADIUS)
    return radii * np.exp(1j * theta)


def integrate_mc(
    alpha: float,
    g: Integrand,
    samples: int = DEFAULT_MC_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> MonteCarloEstimate:
    """Monte Carlo estimate of the weighted integral of ``g``.

    Sampling from the normalized weight turns the integral into a mean,
    so discontinuous integrands are fine here.

    Parameters
    ----------
    alpha : float
        Weight exponent, alpha > -1.
    g : Callable
        A vectorised integrand.
    samples : int, optional
        Sample count, at least 10 000, by default 1 000 000.
    seed : int, optional
        Seed of the generator, by default :data:`besovkit.config.DEFAULT_SEED`.

    Returns
    -------
    MonteCarloEstimate
        The estimate and its standard error.
    """

    if samples < MIN_MC_SAMPLES:
        raise ValueError(f"at least {MIN_MC_SAMPLES} samples are required, got {samples}")
    points = sample_points(alpha, samples, seed)
    values = np.asarray(g(points))
    if values.shape != points.shape:
        values = np.broadcast_to(values, points.shape)

    scale = 1.0 / (alpha + 1.0)
    estimate = np.mean(values) * scale
    standard_error = float(np.std(values, ddof=1)) / math.sqrt(samples) * scale
    if not np.iscomplexobj(values):
        estimate = float(estimate)
    return MonteCarloEstimate(estimate, standard_error)
