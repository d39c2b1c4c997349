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

from typing import (
    Callable,
    Optional,
    TYPE_CHECKING,
)

import numpy as np
from numpy.typing import NDArray
from scipy.special import beta

from .analytic_map import AnalyticMap
from .config import DEFAULT_TRUNCATION_ORDER, QuadratureSettings
from .errors import RuleMismatchError
from .quadrature import WeightedDiskRule, build_rule, integrate
from .utils import _DictBased

__all__ = (
    "NormKind",
    "besov_seminorm",
    "besov_norm",
    "bergman_norm",
    "equivalent_norm",
    "evaluate_norm",
    "lp_norm",
    "rule_for",
    "monomial_seminorm_oracle",
)


if TYPE_CHECKING:
    from .types.operators import NormKind as NormKindPayload, NormLabel

# weight exponents are compared up to this absolute slack
_ALPHA_TOL = 1e-12


class NormKind(_DictBased):
    """Which norm an evaluator computes.

    The exponent p is not part of the kind; every evaluator takes it
    separately.

    Attributes
    ----------
    selector: Literal["besov_seminorm", "besov_norm", "bergman", "equivalent"]
        The norm family.
    alpha: Optional[float]
        Weight exponent of a Bergman norm, > -1.
    n: Optional[int]
        Order of the equivalent norm, >= 2.
    """

    __slots__ = (
        "selector",
        "alpha",
        "n",
    )

    if TYPE_CHECKING:
        selector: NormLabel
        alpha: Optional[float]
        n: Optional[int]

    def __init__(self, selector: NormLabel, alpha: Optional[float] = None, n: Optional[int] = None) -> None:
        if selector == "bergman":
            if alpha is None or not alpha > -1.0:
                raise ValueError("bergman norms need alpha > -1")
            n = None
        elif selector == "equivalent":
            if n is None or n < 2:
                raise ValueError("equivalent norms need n >= 2")
            alpha = None
        elif selector in ("besov_seminorm", "besov_norm"):
            alpha = n = None
        else:
            raise ValueError(f"unknown norm selector {selector!r}")

        self.selector = selector
        self.alpha = None if alpha is None else float(alpha)
        self.n = None if n is None else int(n)

    @classmethod
    def besov_seminorm(cls) -> NormKind:
        return cls("besov_seminorm")

    @classmethod
    def besov_norm(cls) -> NormKind:
        return cls("besov_norm")

    @classmethod
    def bergman(cls, alpha: float) -> NormKind:
        return cls("bergman", alpha=alpha)

    @classmethod
    def equivalent(cls, n: int) -> NormKind:
        return cls("equivalent", n=n)

    @property
    def label(self) -> str:
        if self.selector == "bergman":
            return f"bergman({self.alpha!r})"
        if self.selector == "equivalent":
            return f"equivalent({self.n})"
        return self.selector

    def weight_exponent(self, p: float) -> float:
        """Exponent of the weight the matching quadrature rule absorbs.

        Parameters
        ----------
        p : float
            The integrability exponent.

        Returns
        -------
        float
            p - 2 for Besov norms, alpha for Bergman norms and np - 2 for
            the equivalent norm of order n.
        """

        if self.selector == "bergman":
            return self.alpha
        if self.selector == "equivalent":
            return self.n * p - 2.0
        return p - 2.0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NormKind):
            return NotImplemented
        return (self.selector, self.alpha, self.n) == (other.selector, other.alpha, other.n)

    def __hash__(self) -> int:
        return hash((self.selector, self.alpha, self.n))

    def to_dict(self) -> NormKindPayload:
        return {
            "selector": self.selector,
            "alpha": self.alpha,
            "n": self.n,
        }


def _check_rule(rule: WeightedDiskRule, alpha: float) -> None:
    if abs(rule.alpha - alpha) > _ALPHA_TOL:
        raise RuleMismatchError(alpha, rule.alpha)


def _check_p(p: float, lower: float = 1.0, strict: bool = True) -> None:
    if (strict and not p > lower) or (not strict and not p >= lower):
        raise ValueError(f"p must be {'>' if strict else '>='} {lower}, got {p!r}")


def rule_for(kind: NormKind, p: float, settings: Optional[QuadratureSettings] = None) -> WeightedDiskRule:
    """Builds the rule ``kind`` needs at exponent ``p``."""
    settings = settings or QuadratureSettings()
    return build_rule(kind.weight_exponent(p), settings.radial_nodes, settings.angular_nodes)


def lp_norm(g: Callable[[NDArray[np.complex128]], NDArray], p: float, rule: WeightedDiskRule) -> float:
    """(integral of |g|^p against the rule's weight)^(1/p) for a pointwise callable."""
    integral = integrate(rule, lambda z: np.abs(g(z)) ** p).real
    return max(integral, 0.0) ** (1.0 / p)


def besov_seminorm(f: AnalyticMap, p: float, rule: WeightedDiskRule) -> float:
    """Computes the Besov seminorm of ``f``.

    Parameters
    ----------
    f : AnalyticMap
        The function.
    p : float
        The exponent, p > 1.
    rule : WeightedDiskRule
        A rule built with alpha = p - 2.

    Returns
    -------
    float
        (integral of |f'|^p (1 - |z|^2)^(p-2) dA)^(1/p).

    Raises
    ------
    RuleMismatchError
        The rule was built for another weight exponent.
    """

    _check_p(p)
    _check_rule(rule, p - 2.0)
    return lp_norm(f.derivative_value, p, rule)


def besov_norm(f: AnalyticMap, p: float, rule: WeightedDiskRule) -> float:
    """|f(0)| plus the Besov seminorm; see :func:`besov_seminorm`."""
    return abs(f.value(0j)) + besov_seminorm(f, p, rule)


def bergman_norm(f: AnalyticMap, p: float, alpha: float, rule: WeightedDiskRule) -> float:
    """Computes the weighted Bergman norm of ``f``.

    Parameters
    ----------
    f : AnalyticMap
        The function.
    p : float
        The exponent, p >= 1.
    alpha : float
        The weight exponent, alpha > -1.
    rule : WeightedDiskRule
        A rule built with the same alpha.

    Returns
    -------
    float
        (integral of |f|^p (1 - |z|^2)^alpha dA)^(1/p).
    """

    _check_p(p, strict=False)
    if not alpha > -1.0:
        raise ValueError(f"alpha must be > -1, got {alpha!r}")
    _check_rule(rule, alpha)
    return lp_norm(f.value, p, rule)


def equivalent_norm(
    f: AnalyticMap,
    p: float,
    n: int,
    rule: WeightedDiskRule,
    order: int = DEFAULT_TRUNCATION_ORDER,
) -> float:
    """The order-n norm: sum of |f^(k)(0)| for k < n plus the Bergman norm of f^(n).

    Non-polynomial maps are truncated at ``order`` before differentiating.

    Parameters
    ----------
    f : AnalyticMap
        The function.
    p : float
        The exponent, p > 1.
    n : int
        The order, n >= 2.
    rule : WeightedDiskRule
        A rule built with alpha = np - 2.
    order : int, optional
        Taylor truncation order, by default 64.

    Returns
    -------
    float
        The norm.

    Raises
    ------
    TruncationError
        ``order`` is shorter than ``n``.
    RuleMismatchError
        The rule was built for another weight exponent.
    """

    _check_p(p)
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    alpha = n * p - 2.0
    _check_rule(rule, alpha)

    head = sum(abs(f.nth_derivative_at_zero(k, order)) for k in range(n))
    return head + bergman_norm(f.derivative_map(n, order), p, alpha, rule)


def evaluate_norm(
    f: AnalyticMap,
    p: float,
    kind: NormKind,
    rule: WeightedDiskRule,
    order: int = DEFAULT_TRUNCATION_ORDER,
) -> float:
    """Dispatches to the evaluator selected by ``kind``."""
    if kind.selector == "besov_seminorm":
        return besov_seminorm(f, p, rule)
    elif kind.selector == "besov_norm":
        return besov_norm(f, p, rule)
    elif kind.selector == "bergman":
        return bergman_norm(f, p, kind.alpha, rule)
    else:
        return equivalent_norm(f, p, kind.n, rule, order)


def monomial_seminorm_oracle(m: int, p: float) -> float:
    """Closed form of the Besov seminorm of z^m, (m^p B((m-1)p/2 + 1, p - 1))^(1/p)."""
    if m == 0:
        return 0.0
    return m * float(beta((m - 1) * p / 2.0 + 1.0, p - 1.0)) ** (1.0 / p)
