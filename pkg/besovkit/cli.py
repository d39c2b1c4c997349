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

import argparse
import asyncio
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import (
    Any,
    Callable,
    Literal,
    Optional,
    Sequence,
    TYPE_CHECKING,
    Union,
)

import numpy as np
from scipy.special import beta
from pydantic import (
    AfterValidator,
    BaseModel,
    ConfigDict,
    Field,
    TypeAdapter,
    ValidationError,
    field_validator,
)
from typing_extensions import Annotated

from .analytic_map import (
    AnalyticMap,
    automorphism,
    blaschke,
    involution,
    map_from_dict,
    monomial,
    rotation,
    series,
)
from .config import (
    COVERAGE_SAMPLES,
    DEFAULT_ANGULAR_NODES,
    DEFAULT_MC_SAMPLES,
    DEFAULT_RADIAL_NODES,
    DEFAULT_ROOT_EPSILON,
    DEFAULT_SEED,
    MAX_ANGULAR_NODES,
    MAX_RADIAL_NODES,
    MIN_ANGULAR_NODES,
    MIN_GRID_DENSITY,
    MIN_MC_SAMPLES,
    MIN_RADIAL_NODES,
    SEARCH_BUDGET,
    SEARCH_MAX_ZERO_RADIUS,
    SEARCH_REGRESSION_FLOORS,
    SEARCH_RESTARTS,
    SEARCH_SEPARATION_RADIUS,
    TOLERANCES,
    QuadratureSettings,
)
from .errors import BesovKitError, InvalidSelfMapError, MapSchemaError
from .norms import NormKind, besov_seminorm, bergman_norm, evaluate_norm, monomial_seminorm_oracle, rule_for
from .operators import (
    DiskRegion,
    WeightedSymbol,
    borel_equality_check,
    change_of_variable_check,
    default_basis,
    factorial_obstruction,
    fullness_defect,
    isometry_defect,
    local_isometry_check,
    proof_chain_check,
    schwarz_pick_residual,
    seminorm_preservation_check,
)
from .quadrature import build_rule, integrate
from .search import SearchResult, SearchSpace, minimize, minimize_async
from .utils import _DictBased

__all__ = (
    "RunConfig",
    "VerifyRow",
    "VerifyReport",
    "parse_map_file",
    "parse_map",
    "run_verify",
    "build_parser",
    "main",
)

_log = logging.getLogger(__name__)

if TYPE_CHECKING:
    from .types.analytic_map import MapRole
    from .types.operators import NormRecord
    from .types.verify import VerifyReport as VerifyReportPayload, VerifyRow as VerifyRowPayload

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

_MAP_KINDS = frozenset(("rotation", "automorphism", "blaschke", "series", "compose"))


def _inside_disk(pair: list[float]) -> list[float]:
    if math.hypot(*pair) >= 1.0:
        raise ValueError("point must lie in the open unit disk")
    return pair


Pair = Annotated[list[float], Field(min_length=2, max_length=2)]
DiskPoint = Annotated[Pair, AfterValidator(_inside_disk)]


class _MapModel(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    role: Optional[Literal["symbol", "function"]] = None


class RotationModel(_MapModel):
    kind: Literal["rotation"]
    theta: float


class AutomorphismModel(_MapModel):
    kind: Literal["automorphism"]
    lambda_theta: float
    a: DiskPoint


class BlaschkeModel(_MapModel):
    kind: Literal["blaschke"]
    lambda_theta: float
    zeros: list[DiskPoint] = Field(min_length=1)


class SeriesModel(_MapModel):
    kind: Literal["series"]
    coeffs: list[Pair] = Field(min_length=1)


class ComposeModel(_MapModel):
    kind: Literal["compose"]
    outer: MapModel
    inner: MapModel


MapModel = Annotated[
    Union[RotationModel, AutomorphismModel, BlaschkeModel, SeriesModel, ComposeModel],
    Field(discriminator="kind"),
]
ComposeModel.model_rebuild()
_map_adapter: TypeAdapter = TypeAdapter(MapModel)


def _json_path(loc: Sequence[Union[str, int]]) -> str:
    path = "$"
    for part in loc:
        if isinstance(part, int):
            path += f"[{part}]"
        elif part not in _MAP_KINDS:
            path += f".{part}"
    return path


def parse_map(data: Any, role: MapRole = "symbol") -> AnalyticMap:
    """Validates a decoded JSON map description and builds the map.

    Parameters
    ----------
    data : Any
        The decoded JSON document.
    role : Literal["symbol", "function"], optional
        Role used when the document has no "role" field. Symbols must
        map the disk into itself.

    Returns
    -------
    AnalyticMap
        The map.

    Raises
    ------
    MapSchemaError
        The document violates the schema; the message carries the JSON path.
    InvalidSelfMapError
        A symbol leaves the disk; the error carries the witness point.
    """

    try:
        model = _map_adapter.validate_python(data)
    except ValidationError as e:
        error = e.errors()[0]
        raise MapSchemaError(_json_path(error["loc"]), error["msg"]) from None

    m = map_from_dict(model.model_dump(exclude_none=True))
    if (model.role or role) == "symbol":
        check = m.validate_self_map()
        if not check:
            raise InvalidSelfMapError(check.witness, check.max_modulus)
    return m


def parse_map_file(path: Union[str, Path], role: MapRole = "symbol") -> AnalyticMap:
    """Reads a map description from ``path``; see :func:`parse_map`."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise MapSchemaError("$", f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise MapSchemaError("$", f"invalid JSON at line {e.lineno}: {e.msg}") from None
    return parse_map(data, role)


class RunConfig(BaseModel):
    """Validated command line of one run. Unknown fields are rejected."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    command: Literal["norm", "defect", "residual", "coverage", "cov-check", "borel-check", "local-check", "search", "verify"]
    map_path: Optional[str] = None
    weight_path: Optional[str] = None
    p: float = Field(1.5, gt=1.0)
    kind: Literal["besov", "besov-semi", "bergman", "equiv"] = "besov"
    alpha: Optional[float] = Field(None, gt=-1.0)
    n: int = Field(2, ge=2)
    radial_nodes: int = Field(DEFAULT_RADIAL_NODES, ge=MIN_RADIAL_NODES, le=MAX_RADIAL_NODES)
    angular_nodes: int = Field(DEFAULT_ANGULAR_NODES, ge=MIN_ANGULAR_NODES, le=MAX_ANGULAR_NODES)
    mc_samples: int = Field(DEFAULT_MC_SAMPLES, ge=MIN_MC_SAMPLES)
    seed: int = DEFAULT_SEED
    output: Literal["json", "csv"] = "json"
    out: Optional[str] = None
    tolerances: dict[str, float] = Field(default_factory=dict)
    verbose: int = Field(0, ge=0)
    grid_density: int = Field(MIN_GRID_DENSITY, ge=MIN_GRID_DENSITY)
    samples: int = Field(COVERAGE_SAMPLES, ge=1)
    epsilon: float = Field(DEFAULT_ROOT_EPSILON, gt=0.0, lt=0.01)
    radius: float = Field(0.5, gt=0.0, lt=1.0)
    region: tuple[float, float] = (0.0, 0.5)
    method: Literal["mc", "quadrature"] = "mc"
    test_function: Literal["1", "|w|^2", "1-|w|^2"] = "1"
    family: Literal["blaschke", "series"] = "blaschke"
    degree: int = Field(2, ge=1)
    restarts: int = Field(SEARCH_RESTARTS, ge=1)
    budget: int = Field(SEARCH_BUDGET, ge=SEARCH_BUDGET)
    max_radius: float = Field(SEARCH_MAX_ZERO_RADIUS, gt=0.0, lt=1.0)

    @field_validator("tolerances", mode="before")
    @classmethod
    def _parse_tolerances(cls, value: Any) -> Any:
        if not isinstance(value, list):
            return value
        overrides = {}
        for item in value:
            name, sep, number = str(item).partition("=")
            if not sep:
                raise ValueError(f"expected NAME=VALUE, got {item!r}")
            if name not in TOLERANCES:
                raise ValueError(f"unknown tolerance {name!r}, known: {', '.join(sorted(TOLERANCES))}")
            overrides[name] = float(number)
        return overrides

    @field_validator("region", mode="before")
    @classmethod
    def _parse_region(cls, value: Any) -> Any:
        if not isinstance(value, str):
            return value
        radii = [float(part) for part in value.split(",")]
        if len(radii) == 1:
            radii = [0.0] + radii
        if len(radii) != 2 or not 0.0 <= radii[0] < radii[1] <= 1.0:
            raise ValueError("region must be RADIUS or INNER,OUTER with 0 <= INNER < OUTER <= 1")
        return tuple(radii)

    def settings(self) -> QuadratureSettings:
        return QuadratureSettings(
            radial_nodes=self.radial_nodes,
            angular_nodes=self.angular_nodes,
            mc_samples=self.mc_samples,
            seed=self.seed,
        )

    def norm_kind(self) -> NormKind:
        if self.kind == "besov-semi":
            return NormKind.besov_seminorm()
        elif self.kind == "bergman":
            return NormKind.bergman(0.0 if self.alpha is None else self.alpha)
        elif self.kind == "equiv":
            return NormKind.equivalent(self.n)
        return NormKind.besov_norm()

    def tolerance(self, name: str) -> float:
        return self.tolerances.get(name, TOLERANCES[name])


class VerifyRow(_DictBased):
    """One acceptance check.

    Attributes
    ----------
    check_id: str
        Short identifier.
    anchor: str
        The property the check exercises, in words.
    measured: float
        The measured quantity, NaN when the check raised.
    threshold: float
        The bound ``measured`` is compared with.
    passed: bool
        Whether the check passed.
    detail: str
        Extra context, or the error of a check that raised.
    """

    __slots__ = (
        "check_id",
        "anchor",
        "measured",
        "threshold",
        "passed",
        "detail",
    )

    if TYPE_CHECKING:
        check_id: str
        anchor: str
        measured: float
        threshold: float
        passed: bool
        detail: str

    def __init__(self, data: VerifyRowPayload) -> None:
        self._update(data)

    def _update(self, data: VerifyRowPayload) -> None:
        self.check_id = data["check_id"]
        self.anchor = data["anchor"]
        self.measured = data["measured"]
        self.threshold = data["threshold"]
        self.passed = data["passed"]
        self.detail = data["detail"]

    def to_dict(self) -> VerifyRowPayload:
        return {attr: getattr(self, attr) for attr in self.__slots__}


class VerifyReport(_DictBased):

    __slots__ = ("rows",)

    if TYPE_CHECKING:
        rows: list[VerifyRow]

    def __init__(self, rows: list[VerifyRow]) -> None:
        self.rows = rows

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    def to_dict(self) -> VerifyReportPayload:
        return {
            "passed": self.passed,
            "rows": [row.to_dict() for row in self.rows],
        }


CheckResult = tuple[float, bool, str]


def _at_most(measured: float, threshold: float, detail: str = "") -> CheckResult:
    return measured, bool(measured <= threshold), detail


def _more_than(measured: float, threshold: float, detail: str = "") -> CheckResult:
    return measured, bool(measured > threshold), detail


def _run_check(check_id: str, anchor: str, threshold: float, check: Callable[[], CheckResult]) -> VerifyRow:
    _log.info("running %s", check_id)
    try:
        measured, passed, detail = check()
    except Exception as e:
        _log.exception("check %s raised", check_id)
        measured, passed, detail = math.nan, False, f"{type(e).__name__}: {e}"
    return VerifyRow(
        {
            "check_id": check_id,
            "anchor": anchor,
            "measured": float(measured),
            "threshold": float(threshold),
            "passed": passed,
            "detail": detail,
        }
    )


_P_VALUES = (1.25, 1.5, 3.0, 5.0)


def _witnesses() -> dict[str, AnalyticMap]:
    return {
        "automorphism(1,0.5)": involution(0.5),
        "z^2": monomial(2),
        "z/2": series([0, 0.5]),
        "blaschke(0,0.4)": blaschke(0.0, [0, 0.4]),
    }


def run_verify(config: RunConfig) -> VerifyReport:
    """Runs the acceptance battery; a check that raises becomes a failing row."""
    settings = config.settings()
    K, M = settings.radial_nodes, settings.angular_nodes
    tol = config.tolerance
    rows: list[VerifyRow] = []

    def add(check_id: str, anchor: str, threshold: float, check: Callable[[], CheckResult]) -> None:
        rows.append(_run_check(check_id, anchor, threshold, check))

    def moments() -> CheckResult:
        errors = []
        for alpha in (-0.5, -0.25, 0.0, 1.0, 4.0):
            value = integrate(build_rule(alpha, K, M), lambda z: 1.0).real
            errors.append(abs(value * (alpha + 1.0) - 1.0))
        return _at_most(max(errors), tol("moment"), "alpha in {-0.5, -0.25, 0, 1, 4}")

    def monomials() -> CheckResult:
        errors = []
        for p in _P_VALUES:
            rule = build_rule(p - 2.0, K, M)
            for m in (1, 2, 3):
                value = besov_seminorm(monomial(m), p, rule) ** p
                errors.append(abs(value / monomial_seminorm_oracle(m, p) ** p - 1.0))
        return _at_most(max(errors), tol("monomial"), "m in {1, 2, 3}")

    def derivative_identity() -> CheckResult:
        rng = np.random.default_rng(config.seed)
        errors = []
        for p in _P_VALUES:
            rule = build_rule(p - 2.0, K, M)
            for _ in range(50):
                degree = int(rng.integers(1, 6))
                f = series(rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1))
                semi = besov_seminorm(f, p, rule)
                errors.append(abs(semi - bergman_norm(f.derivative(), p, p - 2.0, rule)) / semi)
        return _at_most(max(errors), tol("derivative_identity"), "50 random polynomials per p")

    def mobius() -> CheckResult:
        rng = np.random.default_rng(config.seed + 1)
        maps = [
            automorphism(rng.uniform(-np.pi, np.pi), rng.uniform(0.0, 0.6) * np.exp(1j * rng.uniform(-np.pi, np.pi)))
            for _ in range(10)
        ]
        deviation = max(seminorm_preservation_check(phi, p, settings=settings) for phi in maps for p in _P_VALUES)
        return _at_most(deviation, tol("mobius"), "10 automorphisms, 6 basis functions")

    def rotations() -> CheckResult:
        defects = []
        for k in range(8):
            phi = rotation(2.0 * np.pi * k / 8 + 0.3)
            for p in _P_VALUES:
                for kind in (NormKind.besov_norm(), NormKind.equivalent(2)):
                    defects.append(isometry_defect(phi, p, kind, settings=settings).max_defect)
        return _at_most(max(defects), tol("rotation_defect"), "8 rotations, besov_norm and equivalent(2)")

    def witnesses() -> CheckResult:
        smallest = math.inf
        worst = ""
        for name, phi in _witnesses().items():
            for p in _P_VALUES:
                defect = isometry_defect(phi, p, settings=settings).max_defect
                if defect < smallest:
                    smallest, worst = defect, f"{name} at p={p}"
        return _more_than(smallest, tol("witness_defect"), f"smallest: {worst}")

    def automorphism_row() -> CheckResult:
        report = isometry_defect(involution(0.5), 1.5, settings=settings)
        return _at_most(abs(report.row("z").defect - 0.5), tol("automorphism_row"), "f = z, a = 0.5, p = 1.5")

    def schwarz_pick() -> CheckResult:
        maps = list(_witnesses().values()) + [rotation(1.0)]
        return _at_most(max(schwarz_pick_residual(phi).max_residual for phi in maps), tol("schwarz_pick"))

    def schwarz_pick_equality() -> CheckResult:
        maps = [rotation(1.0), involution(0.5), automorphism(0.7, -0.3 + 0.2j)]
        return _at_most(max(schwarz_pick_residual(phi).max_abs_residual for phi in maps), tol("schwarz_pick"))

    def change_of_variable_exact() -> CheckResult:
        check = change_of_variable_check(monomial(2), lambda w: 1.0, settings)
        return _at_most(check.relative_difference, tol("change_of_variable_exact"), f"lhs={check.lhs!r} rhs={check.rhs!r}")

    def change_of_variable() -> CheckResult:
        cases = [
            (monomial(3), lambda w: 1.0),
            (monomial(2), lambda w: np.abs(w) ** 2),
            (rotation(0.7), lambda w: 1.0 - np.abs(w) ** 2),
        ]
        gap = max(change_of_variable_check(phi, g, settings).relative_difference for phi, g in cases)
        return _at_most(gap, tol("change_of_variable"), "z^3, z^2 and a rotation with radial g")

    chain_maps = {
        "z^2": monomial(2),
        "blaschke(0,0.4)": blaschke(0.0, [0, 0.4]),
        "blaschke(0,0.4,-0.3)": blaschke(0.0, [0, 0.4, -0.3]),
    }

    def chain_below_two() -> CheckResult:
        margins = {name: proof_chain_check(phi, 1.5, settings).margin for name, phi in chain_maps.items()}
        name = min(margins, key=margins.get)
        return _more_than(margins[name], 0.0, f"smallest margin: {name}")

    def chain_oracle() -> CheckResult:
        report = proof_chain_check(monomial(2), 1.5, settings)
        lhs = 2.0**1.5 * float(beta(1.75, 0.5))
        gap = max(abs(report.lhs / lhs - 1.0), abs(report.rhs / 4.0 - 1.0))
        return _at_most(gap, tol("monomial"), f"lhs={report.lhs!r} rhs={report.rhs!r}")

    def chain_above_two() -> CheckResult:
        margins = {}
        for name, phi in chain_maps.items():
            report = local_isometry_check(phi, 3.0, 0.999, settings)
            margins[name] = report.i2 - report.i1
        name = min(margins, key=margins.get)
        return _more_than(margins[name], 0.0, f"I2 - I1 at r = 0.999, smallest: {name}")

    def fullness() -> CheckResult:
        maps = [rotation(0.4), blaschke(0.0, [0, 0.4])]
        area = max(fullness_defect(phi, COVERAGE_SAMPLES, seed=config.seed).omitted_area for phi in maps)
        return _at_most(area, tol("fullness"), "rotation and degree-2 Blaschke")

    def fullness_half() -> CheckResult:
        area = fullness_defect(series([0, 0.5]), COVERAGE_SAMPLES, seed=config.seed).omitted_area
        return _at_most(abs(area - 0.75), tol("fullness_half"), f"omitted area {area!r}")

    def borel() -> CheckResult:
        sigmas = []
        regions = [DiskRegion.disk(0.25), DiskRegion.disk(0.5), DiskRegion.annulus(0.3, 0.6)]
        for theta in (0.3, 2.0):
            ws = WeightedSymbol.with_derivative(rotation(theta))
            for region in regions:
                sigmas.append(borel_equality_check(ws, 1.5, -0.5, region, "mc", settings).sigmas)
        return _at_most(max(sigmas), tol("borel_sigma"), "rotations, psi = phi', p = 1.5, alpha = -0.5")

    def factorials() -> CheckResult:
        holds = factorial_obstruction(12)
        wrong = [k for k, value in holds.items() if value != (k == 1)]
        return _at_most(float(len(wrong)), 0.0, f"identity holds for k in {[k for k, v in holds.items() if v]}")

    separation: dict[float, SearchResult] = {}

    def search_rotation() -> CheckResult:
        # every degree-1 map fixing the origin is a rotation
        result = minimize(SearchSpace.blaschke(1), 3.0, restarts=1, seed=config.seed, settings=settings)
        return _at_most(result.best_defect, tol("search_rotation"), "blaschke(1), p = 3")

    def search_separation() -> CheckResult:
        space = SearchSpace.blaschke(2, max_radius=SEARCH_SEPARATION_RADIUS)
        ps = tuple(SEARCH_REGRESSION_FLOORS)

        async def run_all() -> list[SearchResult]:
            runs = [minimize_async(space, p, restarts=SEARCH_RESTARTS, seed=config.seed, settings=settings) for p in ps]
            return await asyncio.gather(*runs)

        separation.update(zip(ps, asyncio.run(run_all())))
        floors = {p: max(tol("search_separation"), floor) for p, floor in SEARCH_REGRESSION_FLOORS.items()}
        minima = {p: separation[p].best_defect for p in ps}
        ratios = {p: minima[p] / floors[p] for p in ps}
        p = min(ratios, key=ratios.get)
        return _more_than(ratios[p], 1.0, f"minima {minima!r} against floors {floors!r}")

    def search_determinism() -> CheckResult:
        # restart i draws from the ith spawned seed, so a single restart replays restart 0
        space = SearchSpace.blaschke(2, max_radius=SEARCH_SEPARATION_RADIUS)
        replay = minimize(space, 1.5, restarts=1, seed=config.seed, settings=settings)
        reference = separation.get(1.5)
        if reference is None:
            reference = minimize(space, 1.5, restarts=1, seed=config.seed, settings=settings)
        first, second = reference.restarts[0], replay.restarts[0]
        same = first.trace == second.trace and np.array_equal(first.best_params, second.best_params)
        return _at_most(0.0 if same else 1.0, 0.0, "restart 0 replayed at the same seed")

    def convergence() -> CheckResult:
        doubled = min(2 * K, MAX_RADIAL_NODES)
        coarse = K if doubled > K else K // 2

        def g(z: np.ndarray) -> np.ndarray:
            return 1.0 / np.abs(1.25 - z) ** 2

        first = integrate(build_rule(-0.5, coarse, M), g).real
        second = integrate(build_rule(-0.5, max(doubled, coarse + 1), M), g).real
        return _at_most(abs(first - second) / abs(second), tol("convergence"), f"K={coarse} against K={max(doubled, coarse + 1)}")

    add("quadrature-moments", "weighted area of the disk", tol("moment"), moments)
    add("monomial-seminorms", "Besov seminorm of z^m in closed form", tol("monomial"), monomials)
    add("derivative-identity", "Besov seminorm equals the Bergman norm of f'", tol("derivative_identity"), derivative_identity)
    add("mobius-invariance", "Besov seminorm is Moebius invariant", tol("mobius"), mobius)
    add("rotation-isometry", "rotations compose isometrically", tol("rotation_defect"), rotations)
    add("non-rotation-witnesses", "non-rotations are not isometries", tol("witness_defect"), witnesses)
    add("automorphism-row", "full norm of f = z moves by |phi(0)|", tol("automorphism_row"), automorphism_row)
    add("schwarz-pick", "Schwarz-Pick inequality", tol("schwarz_pick"), schwarz_pick)
    add("schwarz-pick-equality", "Schwarz-Pick equality for automorphisms", tol("schwarz_pick"), schwarz_pick_equality)
    add("change-of-variable-exact", "area formula for z^2", tol("change_of_variable_exact"), change_of_variable_exact)
    add("change-of-variable", "area formula with counting function", tol("change_of_variable"), change_of_variable)
    add("proof-chain-below-2", "pull-back integral dominates for p < 2", 0.0, chain_below_two)
    add("proof-chain-oracle", "pull-back integrals of z^2 in closed form", tol("monomial"), chain_oracle)
    add("proof-chain-above-2", "pull-back integral is dominated for p > 2", 0.0, chain_above_two)
    add("fullness", "finite Blaschke products are onto", tol("fullness"), fullness)
    add("fullness-half", "z/2 omits three quarters of the disk", tol("fullness_half"), fullness_half)
    add("borel-equality", "rotations preserve weighted measure of centred sets", tol("borel_sigma"), borel)
    add("factorial-obstruction", "2 (k!)^2 = (2k)! only for k = 1", 0.0, factorials)
    add("search-rotation", "search recovers rotations", tol("search_rotation"), search_rotation)
    add("search-separation", "degree-2 Blaschke maps stay away from isometry", 1.0, search_separation)
    add("search-determinism", "search is reproducible under a fixed seed", 0.0, search_determinism)
    add("quadrature-convergence", "radial rule has converged", tol("convergence"), convergence)

    return VerifyReport(rows)


def _flatten(record: dict, prefix: str = "") -> dict[str, Any]:
    flat: dict[str, Any] = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{name}."))
        elif isinstance(value, list) and not any(isinstance(item, (dict, list)) for item in value):
            flat[name] = ";".join(str(item) for item in value)
        elif isinstance(value, list):
            flat[name] = json.dumps(value, default=_json_default)
        else:
            flat[name] = value
    return flat


def _table(payload: dict) -> list[dict[str, Any]]:
    for key in ("rows", "images", "restarts"):
        items = payload.get(key)
        if isinstance(items, list) and items and all(isinstance(item, dict) for item in items):
            return [_flatten(item) for item in items]
    return [_flatten(payload)]


def _json_default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def render(payload: dict, output: Literal["json", "csv"]) -> str:
    """Formats a report as indented JSON or as RFC 4180 CSV with a header."""
    if output == "json":
        return json.dumps(payload, indent=2, default=_json_default) + "\n"

    rows = _table(payload)
    fields = list(dict.fromkeys(key for row in rows for key in row))
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fields, lineterminator="\r\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def _test_function(name: str) -> Callable[[np.ndarray], Any]:
    if name == "|w|^2":
        return lambda w: np.abs(w) ** 2
    if name == "1-|w|^2":
        return lambda w: 1.0 - np.abs(w) ** 2
    return lambda w: 1.0


def _load_map(config: RunConfig, role: MapRole) -> AnalyticMap:
    if config.map_path is None:
        raise MapSchemaError("$", f"{config.command} needs --map")
    return parse_map_file(config.map_path, role)


def _run_command(config: RunConfig) -> tuple[dict, int]:
    settings = config.settings()
    command = config.command

    if command == "verify":
        report = run_verify(config)
        return report.to_dict(), EXIT_OK if report.passed else EXIT_CHECK_FAILED

    if command == "search":
        kind = config.norm_kind()
        space = SearchSpace(config.family, config.degree, config.max_radius)
        result = minimize(space, config.p, kind, None, config.restarts, config.seed, config.budget, settings)
        payload = result.to_dict()
        payload["kind"] = kind.to_dict()
        return payload, EXIT_OK

    if command == "norm":
        f = _load_map(config, "function")
        kind = config.norm_kind()
        rule = rule_for(kind, config.p, settings)
        record: NormRecord = {
            "kind": kind.to_dict(),
            "p": config.p,
            "value": evaluate_norm(f, config.p, kind, rule, settings.truncation_order),
            "rule_params": rule.to_dict(),
        }
        return record, EXIT_OK

    phi = _load_map(config, "symbol")
    if command == "defect":
        return isometry_defect(phi, config.p, config.norm_kind(), settings=settings).to_dict(), EXIT_OK
    elif command == "residual":
        return schwarz_pick_residual(phi, config.grid_density).to_dict(), EXIT_OK
    elif command == "coverage":
        return fullness_defect(phi, config.samples, config.epsilon, config.seed).to_dict(), EXIT_OK
    elif command == "cov-check":
        check = change_of_variable_check(phi, _test_function(config.test_function), settings, config.epsilon)
        return check.to_dict(), EXIT_OK
    elif command == "borel-check":
        weight = None if config.weight_path is None else parse_map_file(config.weight_path, "function")
        alpha = config.p - 2.0 if config.alpha is None else config.alpha
        region = DiskRegion(*config.region)
        check = borel_equality_check(WeightedSymbol(weight, phi), config.p, alpha, region, config.method, settings)
        return check.to_dict(), EXIT_OK
    else:
        return local_isometry_check(phi, config.p, config.radius, settings).to_dict(), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=float, help="exponent p > 1 (default 1.5)")
    common.add_argument("--radial-nodes", type=int, help="radial node count K (default 64)")
    common.add_argument("--angular-nodes", type=int, help="base angular count M (default 256)")
    common.add_argument("--mc-samples", type=int, help="Monte Carlo samples (default 1000000)")
    common.add_argument("--seed", type=int, help="random seed")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="output", action="store_const", const="json", help="emit JSON (default)")
    fmt.add_argument("--csv", dest="output", action="store_const", const="csv", help="emit CSV rows")
    common.add_argument("--out", help="write to this file instead of stdout")
    common.add_argument("--tol", dest="tolerances", action="append", metavar="NAME=VALUE", help="override a tolerance")
    common.add_argument("-v", "--verbose", action="count", help="log more, repeat for debug output")

    parser = argparse.ArgumentParser(
        prog="besovkit",
        description="Numerical checks of composition operators on analytic Besov spaces.",
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(name: str, help: str, with_map: bool = True) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, parents=[common], help=help)
        if with_map:
            sub.add_argument("--map", dest="map_path", required=True, help="JSON map description")
        return sub

    def kind_options(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--kind", choices=("besov", "besov-semi", "bergman", "equiv"))
        sub.add_argument("--alpha", type=float, help="Bergman weight exponent")
        sub.add_argument("--n", type=int, help="order of the equivalent norm (default 2)")

    kind_options(command("norm", "evaluate a norm of a function"))
    kind_options(command("defect", "isometry defect of C_phi on the test basis"))
    command("residual", "Schwarz-Pick residual of a symbol").add_argument("--grid-density", type=int)

    coverage = command("coverage", "omitted area and preimage counts")
    coverage.add_argument("--samples", type=int)
    coverage.add_argument("--epsilon", type=float)

    cov_check = command("cov-check", "change of variable w = phi(z)")
    cov_check.add_argument("--g", dest="test_function", choices=("1", "|w|^2", "1-|w|^2"))
    cov_check.add_argument("--epsilon", type=float)

    borel = command("borel-check", "weighted measure of preimages of centred sets")
    borel.add_argument("--weight", dest="weight_path", help="JSON map of psi (default phi')")
    borel.add_argument("--alpha", type=float, help="weight exponent (default p - 2)")
    borel.add_argument("--region", help="RADIUS for a disk or INNER,OUTER for an annulus")
    borel.add_argument("--method", choices=("mc", "quadrature"))

    command("local-check", "pull-back integrals on D(0, r)").add_argument("--radius", type=float)

    search = command("search", "minimise the isometry defect over a family", with_map=False)
    search.add_argument("--family", choices=("blaschke", "series"))
    search.add_argument("--degree", type=int)
    search.add_argument("--restarts", type=int)
    search.add_argument("--budget", type=int)
    search.add_argument("--max-radius", type=float)
    kind_options(search)

    command("verify", "run the acceptance battery", with_map=False)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the ``besovkit`` command.

    Returns
    -------
    int
        0 on success, 1 when a verify check fails, 2 on usage or input errors.
    """

    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(**{key: value for key, value in vars(args).items() if value is not None})
    except ValidationError as e:
        for error in e.errors():
            print(f"besovkit: {'.'.join(map(str, error['loc']))}: {error['msg']}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=max(logging.WARNING - 10 * config.verbose, logging.DEBUG),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        payload, code = _run_command(config)
    except (MapSchemaError, InvalidSelfMapError) as e:
        print(f"besovkit: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (BesovKitError, ValueError) as e:
        print(f"besovkit: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE

    text = render(payload, config.output)
    if config.out is None:
        sys.stdout.write(text)
    else:
        Path(config.out).write_text(text, encoding="utf-8", newline="")
    return code


if __name__ == "__main__":
    sys.exit(main())
