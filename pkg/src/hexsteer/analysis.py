"""Parameter sweeps, threshold localisation, collective steering and monogamy.

One-dimensional sweeps go through the scalar steering path so every row is a
full :class:`SteeringReport`.  Region scans evaluate whole grids at once with
:func:`hexsteer.steering.steerability_blocks`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Literal, Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import AmbiguousThresholdError, InvalidParameterError
from .model import MODE_SYMMETRY, PARAMETERS, CouplingStrengths, CovarianceMatrix, covariance, covariance_blocks
from .steering import (
    Bipartition,
    SteeringReport,
    _check_party,
    parse_modes,
    party_label,
    steerability,
    steerability_blocks,
    steering_report,
)

DEFAULT_T = 0.3


@dataclass(frozen=True)
class Axis:
    """A swept parameter: ``steps`` evenly spaced values from ``start`` to ``stop``."""

    name: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.name not in PARAMETERS:
            raise InvalidParameterError(f"axis must be one of {PARAMETERS}, got {self.name!r}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)) or not self.start < self.stop:
            raise InvalidParameterError(f"axis {self.name} needs start < stop, got {self.start}..{self.stop}")
        if self.start < 0:
            raise InvalidParameterError(f"axis {self.name} must stay >= 0")
        if int(self.steps) != self.steps or self.steps < 2:
            raise InvalidParameterError(f"axis {self.name} needs at least 2 steps, got {self.steps}")
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "stop", float(self.stop))
        object.__setattr__(self, "steps", int(self.steps))

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """Parse ``"name:start:stop:steps"``, e.g. ``"g3:0:6:201"``."""
        parts = text.split(":")
        if len(parts) != 4:
            raise InvalidParameterError(f"scan must look like axis:from:to:steps, got {text!r}")
        try:
            return cls(parts[0], float(parts[1]), float(parts[2]), int(parts[3]))
        except ValueError:
            raise InvalidParameterError(f"cannot parse scan {text!r}") from None

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class SweepSpec:
    axis: Axis
    fixed: CouplingStrengths
    partitions: tuple[Bipartition, ...]

    def __post_init__(self):
        object.__setattr__(self, "partitions", tuple(self.partitions))
        if not self.partitions:
            raise InvalidParameterError("a sweep needs at least one partition")

    def strengths(self, value: float) -> CouplingStrengths:
        return self.fixed.with_value(self.axis.name, float(value))


@dataclass(frozen=True)
class SweepRow:
    value: float
    reports: tuple[SteeringReport, ...]


def sweep(spec: SweepSpec, tolerances: Tolerances = DEFAULT_TOLERANCES) -> list[SweepRow]:
    rows = []
    for x in spec.axis.values():
        sigma = covariance(spec.strengths(x), rel_tol=tolerances.eig_residual)
        reports = tuple(steering_report(sigma, p, tolerances.eps_zero) for p in spec.partitions)
        rows.append(SweepRow(float(x), reports))
    return rows


Predicate = Literal["appears", "vanishes", "symmetry_crossing"]
Quantity = Literal["a_to_b", "b_to_a", "any"]


def _quantity(report: SteeringReport, quantity: Quantity) -> float:
    if quantity == "a_to_b":
        return report.a_to_b
    if quantity == "b_to_a":
        return report.b_to_a
    if quantity == "any":
        return max(report.a_to_b, report.b_to_a)
    raise InvalidParameterError(f"unknown quantity {quantity!r}")


def find_threshold(
    spec: SweepSpec,
    partition: Bipartition,
    predicate: Predicate,
    quantity: Quantity = "any",
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Locate where ``predicate`` flips along ``spec.axis``.

    ``appears``/``vanishes`` track whether ``quantity`` (a direction of the
    partition, or ``"any"`` for the larger one) exceeds ``eps_zero``.
    ``symmetry_crossing`` tracks the sign of ``a_to_b - b_to_a``.  The axis
    grid is scanned first; exactly one flip must be found there, otherwise
    :class:`AmbiguousThresholdError` lists the offending brackets.  The flip
    is then bisected to ``threshold_tol``.
    """
    if predicate not in ("appears", "vanishes", "symmetry_crossing"):
        raise InvalidParameterError(f"unknown predicate {predicate!r}")
    eps = tolerances.eps_zero

    def state(x: float) -> int:
        sigma = covariance(spec.strengths(x), rel_tol=tolerances.eig_residual)
        report = steering_report(sigma, partition, eps)
        if predicate == "symmetry_crossing":
            asym = report.asymmetry
            return 0 if abs(asym) <= eps else (1 if asym > 0 else -1)
        return int(_quantity(report, quantity) > eps)

    xs = spec.axis.values()
    states = [state(x) for x in xs]
    if predicate == "symmetry_crossing":
        signed = [(x, s) for x, s in zip(xs, states) if s != 0]
        brackets = [(a[0], b[0]) for a, b in zip(signed, signed[1:]) if a[1] != b[1]]
    else:
        brackets = [(xs[i], xs[i + 1]) for i in range(len(xs) - 1) if states[i] != states[i + 1]]
    brackets = [(float(lo), float(hi)) for lo, hi in brackets]
    if len(brackets) != 1:
        raise AmbiguousThresholdError(
            f"{predicate} for {partition.label} changes {len(brackets)} times on "
            f"{spec.axis.name} in [{spec.axis.start}, {spec.axis.stop}]",
            brackets,
        )
    lo, hi = brackets[0]
    s_lo = state(lo)
    if predicate == "appears" and s_lo != 0:
        raise AmbiguousThresholdError(f"{partition.label} vanishes rather than appears", brackets)
    if predicate == "vanishes" and s_lo != 1:
        raise AmbiguousThresholdError(f"{partition.label} appears rather than vanishes", brackets)
    while hi - lo > tolerances.threshold_tol:
        mid = 0.5 * (lo + hi)
        s_mid = state(mid)
        if predicate == "symmetry_crossing" and s_mid == 0:
            return mid
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class CollectiveSpec:
    """Steered mode ``b`` and the ``n - 1`` steering modes of an ``n``-partite check."""

    steered: int
    steering: tuple[int, ...]

    def __post_init__(self):
        steering = parse_modes(self.steering)
        _check_party(steering, "steering modes")
        _check_party((int(self.steered),), "steered mode")
        if int(self.steered) in steering:
            raise InvalidParameterError("steered mode cannot also be a steering mode")
        if len(steering) < 2:
            raise InvalidParameterError("collective steering needs at least two steering modes")
        object.__setattr__(self, "steered", int(self.steered))
        object.__setattr__(self, "steering", steering)

    @property
    def full(self) -> Bipartition:
        return Bipartition(self.steering, (self.steered,))

    def subsets(self) -> list[Bipartition]:
        k = len(self.steering) - 1
        return [Bipartition(sub, (self.steered,)) for sub in combinations(self.steering, k)]

    @property
    def label(self) -> str:
        return self.full.label


@dataclass(frozen=True)
class CollectiveResult:
    passed: bool
    value: float
    witnesses: dict[str, float]


def collective_check(
    sigma: CovarianceMatrix, spec: CollectiveSpec, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> CollectiveResult:
    """Whether the steering modes steer ``spec.steered`` only jointly.

    Passes when the full group steers with value above ``eps_zero`` and every
    group with one mode removed stays at or below ``eps_region``.
    """
    value = steerability(sigma, spec.full)
    witnesses = {p.label: steerability(sigma, p) for p in spec.subsets()}
    passed = value > tolerances.eps_zero and all(w <= tolerances.eps_region for w in witnesses.values())
    return CollectiveResult(passed, value, witnesses)


@dataclass(frozen=True, eq=False)
class RegionGrid:
    """Scalar results over one or two swept parameters.

    ``values`` has shape ``(axis_x.steps,)`` for a line scan and
    ``(axis_y.steps, axis_x.steps)`` for a plane scan (rows follow ``axis_y``).
    """

    axis_x: Axis
    axis_y: Axis | None
    fixed: CouplingStrengths
    values: np.ndarray
    predicate_name: str
    passed: np.ndarray | None = None

    def __post_init__(self):
        shape = (self.axis_x.steps,) if self.axis_y is None else (self.axis_y.steps, self.axis_x.steps)
        if self.values.shape != shape:
            raise InvalidParameterError(f"grid values have shape {self.values.shape}, expected {shape}")


def _check_axes(axis_x: Axis, axis_y: Axis | None) -> None:
    if axis_y is not None and axis_y.name == axis_x.name:
        raise InvalidParameterError("the two scan axes must be different parameters")


def grid_blocks(fixed: CouplingStrengths, axis_x: Axis, axis_y: Axis | None = None):
    """X/Y covariance blocks over the grid spanned by the axes."""
    _check_axes(axis_x, axis_y)
    params = {name: np.asarray(getattr(fixed, name)) for name in PARAMETERS}
    if axis_y is None:
        params[axis_x.name] = axis_x.values()
    else:
        yy, xx = np.meshgrid(axis_y.values(), axis_x.values(), indexing="ij")
        params[axis_x.name] = xx
        params[axis_y.name] = yy
    return covariance_blocks(params["g1"], params["g2"], params["g3"], params["t"])


def collective_blocks(sigma_x, sigma_y, spec: CollectiveSpec, tolerances: Tolerances = DEFAULT_TOLERANCES):
    """Vectorised collective check: returns ``(passed, full_value)`` arrays."""
    value = steerability_blocks(sigma_x, sigma_y, spec.full)
    passed = value > tolerances.eps_zero
    for sub in spec.subsets():
        passed &= steerability_blocks(sigma_x, sigma_y, sub) <= tolerances.eps_region
    return passed, value


def collective_region_scan(
    spec: CollectiveSpec,
    fixed: CouplingStrengths,
    axis_x: Axis,
    axis_y: Axis | None = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> RegionGrid:
    """Collective steerability where the check passes, 0 elsewhere."""
    sx, sy = grid_blocks(fixed, axis_x, axis_y)
    passed, value = collective_blocks(sx, sy, spec, tolerances)
    return RegionGrid(axis_x, axis_y, fixed, np.where(passed, value, 0.0), f"collective {spec.label}", passed)


def pass_intervals(xs: np.ndarray, passed: np.ndarray) -> list[tuple[float, float]]:
    """Maximal runs of passing grid points along a line scan, as ``(first, last)``."""
    runs = []
    start = None
    for x, ok in zip(xs, passed):
        if ok and start is None:
            start = x
        if not ok and start is not None:
            runs.append((float(start), float(prev)))
            start = None
        prev = x
    if start is not None:
        runs.append((float(start), float(xs[-1])))
    return runs


MonogamyType = Literal["I", "II", "IIIa", "IIIb", "IVa", "IVb"]
MONOGAMY_TYPES = ("I", "II", "IIIa", "IIIb", "IVa", "IVb")


@dataclass(frozen=True)
class MonogamyInstance:
    """Mode groups entering one monogamy relation.

    For types I and II, ``anchor`` is the steered mode and ``parts`` are the
    candidate steering parties.  For IIIa/IVa, ``parts`` jointly steer
    ``anchor``; for IIIb/IVb, ``anchor`` steers the ``parts`` jointly.
    """

    anchor: tuple[int, ...]
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        anchor = parse_modes(self.anchor)
        parts = tuple(parse_modes(p) for p in self.parts)
        _check_party(anchor, "anchor")
        if len(parts) < 2:
            raise InvalidParameterError("a monogamy relation needs at least two parts")
        flat = [m for p in parts for m in p]
        _check_party(tuple(flat), "parts")
        if set(flat) & set(anchor):
            raise InvalidParameterError("parts overlap the anchor")
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(self, "parts", parts)

    @property
    def union(self) -> tuple[int, ...]:
        return tuple(m for p in self.parts for m in p)

    @property
    def label(self) -> str:
        return f"{party_label(self.anchor)}|{'/'.join(party_label(p) for p in self.parts)}"


def _inst(anchor, *parts) -> MonogamyInstance:
    return MonogamyInstance(parse_modes(anchor), tuple(parse_modes(p) for p in parts))


TABLE2: dict[str, tuple[MonogamyInstance, ...]] = {
    "I": (_inst(1, 3, 2, 4),),
    "II": (_inst(5, "23", 4), _inst(1, "23", 4), _inst(6, "23", 4)),
    "IIIa": (_inst(5, 2, 3, 4), _inst(1, 2, 3, 4), _inst(6, 2, 3, 4)),
    "IIIb": (_inst(5, 2, 3, 4), _inst(1, 2, 3, 4), _inst(6, 2, 3, 4)),
    "IVa": (_inst("234", 1, 5, 6),),
    "IVb": (_inst("234", 1, 5, 6),),
}


def monogamy_partitions(type_tag: str, instance: MonogamyInstance) -> tuple[list[Bipartition], list[Bipartition]]:
    """The ``(lhs, rhs)`` partitions whose steerabilities enter the relation."""
    if type_tag in ("I", "II"):
        return [Bipartition(p, instance.anchor) for p in instance.parts], []
    if type_tag in ("IIIa", "IVa"):
        return (
            [Bipartition(instance.union, instance.anchor)],
            [Bipartition(p, instance.anchor) for p in instance.parts],
        )
    if type_tag in ("IIIb", "IVb"):
        return (
            [Bipartition(instance.anchor, instance.union)],
            [Bipartition(instance.anchor, p) for p in instance.parts],
        )
    raise InvalidParameterError(f"unknown monogamy type {type_tag!r}")


@dataclass(frozen=True)
class MonogamyResult:
    type_tag: str
    instance: MonogamyInstance
    lhs: tuple[tuple[str, float], ...]
    rhs: tuple[tuple[str, float], ...]
    residual: float
    satisfied: bool


def monogamy_residual(type_tag: str, lhs: Sequence, rhs: Sequence):
    # types I/II: minus the second-largest steering onto the anchor, so that
    # "at most one party steers" reads as residual >= -eps like III/IV
    if type_tag in ("I", "II"):
        stacked = np.sort(np.stack([np.asarray(v, dtype=float) for v in lhs]), axis=0)
        return -stacked[-2]
    return np.asarray(lhs[0], dtype=float) - sum(np.asarray(v, dtype=float) for v in rhs)


def monogamy_eval(
    sigma: CovarianceMatrix,
    type_tag: MonogamyType,
    instance: MonogamyInstance,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> MonogamyResult:
    """Evaluate one relation.

    Types I/II are satisfied when at most one of the listed parties steers
    the anchor (above ``eps_zero``); types III/IV when the residual
    ``lhs - sum(rhs)`` is at least ``-eps_zero``.
    """
    lhs_p, rhs_p = monogamy_partitions(type_tag, instance)
    lhs = tuple((p.label, steerability(sigma, p)) for p in lhs_p)
    rhs = tuple((p.label, steerability(sigma, p)) for p in rhs_p)
    residual = float(monogamy_residual(type_tag, [v for _, v in lhs], [v for _, v in rhs]))
    return MonogamyResult(type_tag, instance, lhs, rhs, residual, residual >= -tolerances.eps_zero)


def monogamy_region_scan(
    type_tag: MonogamyType,
    instance: MonogamyInstance,
    fixed: CouplingStrengths,
    axis_x: Axis,
    axis_y: Axis | None = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> RegionGrid:
    """Grid of residuals of a type-IV relation; cells >= -eps_zero are satisfied."""
    if type_tag not in ("IVa", "IVb"):
        raise InvalidParameterError("region scans are only defined for types IVa and IVb")
    sx, sy = grid_blocks(fixed, axis_x, axis_y)
    lhs_p, rhs_p = monogamy_partitions(type_tag, instance)
    lhs = [steerability_blocks(sx, sy, p) for p in lhs_p]
    rhs = [steerability_blocks(sx, sy, p) for p in rhs_p]
    residual = monogamy_residual(type_tag, lhs, rhs)
    return RegionGrid(
        axis_x, axis_y, fixed, residual, f"monogamy {type_tag} {instance.label}", residual >= -tolerances.eps_zero
    )


def all_pentapartite_collective_specs() -> list[tuple[CollectiveSpec, CollectiveSpec]]:
    """Collective configurations on the two five-mode subsets discussed, paired with their mirror image.

    Each pair is related by the relabeling symmetry of the coupling graph and
    therefore has identical steerabilities.
    """
    base = [CollectiveSpec(1, (2, 4, 5, 6)), CollectiveSpec(2, (3, 4, 5, 6)), CollectiveSpec(4, (2, 3, 5, 6))]
    pairs = []
    for spec in base:
        mirror = CollectiveSpec(
            MODE_SYMMETRY[spec.steered], tuple(sorted(MODE_SYMMETRY[m] for m in spec.steering))
        )
        pairs.append((spec, mirror))
    return pairs

