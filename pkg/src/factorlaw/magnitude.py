"""Factor ascription from dimensional facts.

A dimension is a ranged aspect of a case whose regions map to factors
via switching points.  Composite trade-off factors cover pairs of
dimensions that are not independent: a linear boundary fitted to
precedent points decides whether the factor applies, and componentwise
dominance against the raw precedent points covers the unfitted regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .model import Case, FactorCatalogue, Violation, validate_factors


class MagnitudeError(Exception):
    """Raised for malformed specs, out-of-range values, or missing facts."""


class AscriptionConflict(MagnitudeError):
    """A derived factor violates the catalogue against listed factors."""

    def __init__(self, violations: list[Violation]):
        super().__init__("; ".join(v.message for v in violations))
        self.violations = violations


class Dominance(Enum):
    APPLIES = "applies"
    NOT_APPLIES = "not-applies"
    UNCONSTRAINED = "unconstrained"


NEUTRAL = None  # interval outcome meaning "no factor applicable"


@dataclass(frozen=True)
class IntervalMapping:
    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool
    outcome: str | None  # factor id, or None for the neutral region

    def contains(self, value: float) -> bool:
        above = value > self.lo or (self.lo_closed and value == self.lo)
        below = value < self.hi or (self.hi_closed and value == self.hi)
        return above and below

    def to_dict(self) -> dict:
        return {
            "interval": [self.lo, None if math.isinf(self.hi) else self.hi],
            "closed": ("[" if self.lo_closed else "(") + ("]" if self.hi_closed else ")"),
            "outcome": self.outcome or "neutral",
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "IntervalMapping":
        lo, hi = payload["interval"]
        hi = math.inf if hi is None else float(hi)
        closed = payload.get("closed", "[)")
        outcome = payload.get("outcome", "neutral")
        return cls(
            lo=float(lo),
            hi=hi,
            lo_closed=closed[0] == "[",
            hi_closed=closed[1] == "]",
            outcome=None if outcome in (None, "neutral") else str(outcome),
        )


@dataclass(frozen=True)
class DimensionSpec:
    """A ranged dimension partitioned into factor/neutral intervals."""

    name: str
    lo: float
    hi: float
    mappings: tuple[IntervalMapping, ...]
    unit: str | None = None

    def __post_init__(self):
        if not self.mappings:
            raise MagnitudeError(f"dimension {self.name!r} has no interval mappings")
        cursor = self.lo
        cursor_closed = True
        for m in self.mappings:
            if m.lo != cursor or m.lo_closed != cursor_closed:
                raise MagnitudeError(
                    f"dimension {self.name!r}: intervals do not partition the range at {m.lo}"
                )
            if m.hi < m.lo:
                raise MagnitudeError(f"dimension {self.name!r}: empty interval at {m.lo}")
            cursor = m.hi
            cursor_closed = not m.hi_closed
        last = self.mappings[-1]
        if last.hi != self.hi or (not math.isinf(self.hi) and not last.hi_closed):
            raise MagnitudeError(f"dimension {self.name!r}: intervals do not cover the range")
        for a, b in zip(self.mappings, self.mappings[1:]):
            if a.outcome == b.outcome:
                raise MagnitudeError(
                    f"dimension {self.name!r}: adjacent intervals share outcome {a.outcome!r}"
                )

    def to_dict(self) -> dict:
        payload = {
            "name": self.name,
            "range": [self.lo, None if math.isinf(self.hi) else self.hi],
            "mappings": [m.to_dict() for m in self.mappings],
        }
        if self.unit:
            payload["unit"] = self.unit
        return payload

    @classmethod
    def from_dict(cls, payload: dict) -> "DimensionSpec":
        lo, hi = payload["range"]
        return cls(
            name=str(payload["name"]),
            lo=float(lo),
            hi=math.inf if hi is None else float(hi),
            mappings=tuple(IntervalMapping.from_dict(m) for m in payload["mappings"]),
            unit=payload.get("unit"),
        )


def ascribe_from_dimension(spec: DimensionSpec, value: float) -> str | None:
    """The factor (or None for neutral) ascribed at a point on the dimension."""
    in_range = (value > spec.lo or value == spec.lo) and (value < spec.hi or value == spec.hi)
    if not in_range:
        raise MagnitudeError(
            f"value {value} outside dimension {spec.name!r} range [{spec.lo}, {spec.hi}]"
        )
    for m in spec.mappings:
        if m.contains(value):
            return m.outcome
    raise MagnitudeError(f"dimension {spec.name!r} has no interval for {value}")


@dataclass(frozen=True)
class Axis:
    dimension: str
    increasing: bool  # True when larger values favour the factor


@dataclass(frozen=True)
class PrecedentPoint:
    point: tuple[float, float]
    applies: bool


@dataclass(frozen=True)
class CompositeFactorSpec:
    """A trade-off factor over two dimensions with a linear boundary.

    The factor applies at (x, y) iff a*x + b*y >= c (or > c when the
    boundary is exclusive).  Coefficient signs must match the declared
    pro-factor directions so that applicability is monotone.
    """

    factor: str
    axes: tuple[Axis, Axis]
    coefficients: tuple[float, float, float]  # a, b, c
    inclusive: bool = True
    precedents: tuple[PrecedentPoint, ...] = ()
    node: str | None = None

    def __post_init__(self):
        a, b, _ = self.coefficients
        for coeff, axis in zip((a, b), self.axes):
            if axis.increasing and coeff < 0 or not axis.increasing and coeff > 0:
                raise MagnitudeError(
                    f"composite {self.factor!r}: coefficient for {axis.dimension!r} "
                    "contradicts its declared direction"
                )
        for p in self.precedents:
            if self._holds(p.point) != p.applies:
                raise MagnitudeError(
                    f"composite {self.factor!r}: boundary misclassifies precedent {p.point}"
                )

    def _holds(self, point: tuple[float, float]) -> bool:
        a, b, c = self.coefficients
        lhs = a * point[0] + b * point[1]
        return lhs >= c if self.inclusive else lhs > c

    def on_boundary(self, point: tuple[float, float]) -> bool:
        a, b, c = self.coefficients
        return math.isclose(a * point[0] + b * point[1], c)

    def to_dict(self) -> dict:
        payload = {
            "factor": self.factor,
            "axes": [
                {"dimension": ax.dimension, "direction": "increasing" if ax.increasing else "decreasing"}
                for ax in self.axes
            ],
            "inequality": {"a": self.coefficients[0], "b": self.coefficients[1], "c": self.coefficients[2]},
            "inclusive": self.inclusive,
            "precedents": [{"point": list(p.point), "applies": p.applies} for p in self.precedents],
        }
        if self.node:
            payload["node"] = self.node
        return payload

    @classmethod
    def from_dict(cls, payload: dict) -> "CompositeFactorSpec":
        axes = tuple(
            Axis(dimension=str(ax["dimension"]), increasing=ax.get("direction", "increasing") == "increasing")
            for ax in payload["axes"]
        )
        if len(axes) != 2:
            raise MagnitudeError("composite specs take exactly two axes")
        ineq = payload["inequality"]
        return cls(
            factor=str(payload["factor"]),
            axes=axes,  # type: ignore[arg-type]
            coefficients=(float(ineq["a"]), float(ineq["b"]), float(ineq["c"])),
            inclusive=bool(payload.get("inclusive", True)),
            precedents=tuple(
                PrecedentPoint(point=(float(p["point"][0]), float(p["point"][1])), applies=bool(p["applies"]))
                for p in payload.get("precedents", [])
            ),
            node=payload.get("node"),
        )


def composite_applies(spec: CompositeFactorSpec, facts: dict[str, float]) -> bool:
    """Whether the composite factor applies to the given dimensional facts."""
    point = []
    for axis in spec.axes:
        if axis.dimension not in facts:
            raise MagnitudeError(f"missing dimensional fact {axis.dimension!r}")
        point.append(float(facts[axis.dimension]))
    return spec._holds((point[0], point[1]))


def _dominates(stronger: tuple[float, float], weaker: tuple[float, float],
               axes: tuple[Axis, Axis]) -> bool:
    """Componentwise weak dominance in the pro-factor direction."""
    for s, w, axis in zip(stronger, weaker, axes):
        if axis.increasing:
            if s < w:
                return False
        else:
            if s > w:
                return False
    return True


def dominance_applies(
    precedents: list[PrecedentPoint] | tuple[PrecedentPoint, ...],
    axes: tuple[Axis, Axis],
    query: tuple[float, float],
) -> Dominance:
    """Classify a point by dominance against applies/not-applies precedents.

    Each applies-precedent blocks off the region it dominates from below;
    each not-applies precedent blocks off the region dominating it from
    above.  A query caught by both regions means the precedent points
    themselves are inconsistent.
    """
    for p in precedents:
        for q in precedents:
            if p.applies and not q.applies and _dominates(q.point, p.point, axes):
                raise MagnitudeError(
                    f"inconsistent precedent points: {q.point} (not applies) "
                    f"dominates {p.point} (applies)"
                )
    applies = any(p.applies and _dominates(query, p.point, axes) for p in precedents)
    not_applies = any(
        not p.applies and _dominates(p.point, query, axes) for p in precedents
    )
    if applies and not_applies:
        raise MagnitudeError(f"query {query} is forced both ways by the precedent points")
    if applies:
        return Dominance.APPLIES
    if not_applies:
        return Dominance.NOT_APPLIES
    return Dominance.UNCONSTRAINED


def ascribe_all(
    dimension_specs: list[DimensionSpec] | tuple[DimensionSpec, ...],
    composite_specs: list[CompositeFactorSpec] | tuple[CompositeFactorSpec, ...],
    case: Case,
    catalogue: FactorCatalogue | None = None,
) -> Case:
    """Add every dimension-derived factor to the case's factor set.

    A case without dimensional facts is returned unchanged.  Derived
    factors that violate catalogue constraints against the explicitly
    listed ones raise AscriptionConflict.
    """
    facts = case.facts()
    if not facts:
        return case
    derived: set[str] = set()
    for spec in dimension_specs:
        if spec.name in facts:
            outcome = ascribe_from_dimension(spec, facts[spec.name])
            if outcome is not None:
                derived.add(outcome)
    for spec in composite_specs:
        if all(axis.dimension in facts for axis in spec.axes):
            if composite_applies(spec, facts):
                derived.add(spec.factor)
    if not derived:
        return case
    combined = frozenset(case.factors | derived)
    if catalogue is not None:
        known = {fid for fid in combined if fid in catalogue}
        violations = validate_factors(frozenset(known), catalogue)
        if violations:
            raise AscriptionConflict(violations)
    return case.with_factors(combined)
