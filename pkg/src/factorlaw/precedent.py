"""Issue-level preferences from decided cases and precedential constraint.

A decided case reveals, at every node where it has present factors of
both sides, a preference of the node-winning side's factors over the
node-losing side's.  The results model uses all winning factors; the
reason model narrows to a declared sufficient subset when the corpus
annotates one.  A fortiori, a preference forces any new case that is at
least as strong for the winner and no stronger for the loser.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from .adf import Adf, EvaluationTrace, Verdict, evaluate, is_factor_ref, present_sides, side_of_factor, spot_issues
from .model import Case, CaseBase, FactorCatalogue, Side


class PrecedentError(Exception):
    pass


class PreferenceModel(Enum):
    RESULTS = "results"
    REASON = "reason"


@dataclass(frozen=True)
class Preference:
    """weaker ≺ stronger at a node, revealed by the source case."""

    node: str
    weaker: frozenset[str]
    stronger: frozenset[str]
    model: PreferenceModel
    source: str

    @property
    def direction(self) -> Side:
        return side_of_factor(next(iter(self.stronger)))

    def to_dict(self) -> dict:
        return {
            "node": self.node,
            "weaker": sorted(self.weaker),
            "stronger": sorted(self.stronger),
            "model": self.model.value,
            "source": self.source,
        }


class ConstraintStatus(Enum):
    FORCED = "forced"
    PERMITTED = "permitted"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class ConstraintVerdict:
    status: ConstraintStatus
    side: Side | None
    citations: tuple[tuple[str, Preference], ...]

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "side": self.side.value if self.side else None,
            "citations": [{"case": name, "preference": p.to_dict()} for name, p in self.citations],
        }


def _resolution_from_trace(adf: Adf, trace: EvaluationTrace, node: str) -> Side:
    accepted = trace.results[node].verdict is Verdict.ACCEPT
    positive = adf.polarity.get(node, +1) > 0
    return Side.PLAINTIFF if accepted == positive else Side.DEFENDANT


def node_resolution(adf: Adf, case: Case, node: str) -> Side | None:
    """The side a node's verdict favours for this case; None when the
    node has no present descendant factors (neutral)."""
    if not case.decided:
        raise PrecedentError(f"case {case.name!r} is undecided")
    adf.node(node)
    if not (adf.descendant_factors(node) & case.factors):
        return None
    trace = evaluate(adf, case.factors)
    return _resolution_from_trace(adf, trace, node)


def extract_preferences(
    adf: Adf, case: Case, model: PreferenceModel = PreferenceModel.RESULTS
) -> list[Preference]:
    """The preferences a decided case reveals, one per contested node.

    Node-level winners come from ADF evaluation, so a case can support
    preferences for the side that lost it overall.  When the recorded
    outcome contradicts the evaluated root verdict, the case is evidence
    against the rule set: its recorded outcome is then attributed to its
    contested issue nodes instead, which is what lets a deviant decision
    surface as a consistency conflict.
    """
    if not case.decided:
        raise PrecedentError(f"case {case.name!r} is undecided")
    trace = evaluate(adf, case.factors)
    reasons = case.reasons()
    prefs: list[Preference] = []

    def preference_at(node: str, winner: Side) -> Preference | None:
        pros, cons = present_sides(adf, node, case.factors)
        if not pros or not cons:
            return None
        winning, losing = (pros, cons) if winner is Side.PLAINTIFF else (cons, pros)
        stronger = winning
        if model is PreferenceModel.REASON and node in reasons:
            declared = reasons[node]
            if not declared <= winning:
                raise PrecedentError(
                    f"case {case.name!r}: declared reason at {node} is not a subset "
                    f"of the winning present factors"
                )
            stronger = declared
        return Preference(node, losing, stronger, model, case.name)

    recorded = case.winner
    if recorded is not None and trace.decision is not recorded:
        for issue in spot_issues(adf, case):
            pref = preference_at(issue.node, recorded)
            if pref is not None:
                prefs.append(pref)
        return prefs

    for node in adf.order:
        winner = _resolution_from_trace(adf, trace, node)
        pref = preference_at(node, winner)
        if pref is not None:
            prefs.append(pref)
    return prefs


def constrains(
    adf: Adf,
    prefs: list[Preference] | tuple[Preference, ...],
    new_case: Case,
    node: str,
    outcome_at_node: Side | None = None,
) -> ConstraintVerdict:
    """Whether the preference base constrains the node for the new case.

    Forced toward side s iff some preference for s holds a fortiori:
    its stronger set is contained in the new case's present s-side
    factors under the node, and the present opposing factors are
    contained in its weaker set.  Forced both ways means the preference
    base itself is inconsistent on this configuration.
    """
    adf.node(node)
    pros, cons = present_sides(adf, node, new_case.factors)
    by_side = {Side.PLAINTIFF: pros, Side.DEFENDANT: cons}
    forced: dict[Side, list[tuple[str, Preference]]] = {Side.PLAINTIFF: [], Side.DEFENDANT: []}
    for pref in prefs:
        if pref.node != node:
            raise PrecedentError(f"preference on {pref.node!r} offered for node {node!r}")
        s = pref.direction
        if pref.stronger <= by_side[s] and by_side[s.opponent] <= pref.weaker:
            forced[s].append((pref.source, pref))
    if forced[Side.PLAINTIFF] and forced[Side.DEFENDANT]:
        citations = tuple(forced[Side.PLAINTIFF] + forced[Side.DEFENDANT])
        return ConstraintVerdict(ConstraintStatus.INCONSISTENT, None, citations)
    for side in (Side.PLAINTIFF, Side.DEFENDANT):
        if forced[side]:
            return ConstraintVerdict(ConstraintStatus.FORCED, side, tuple(forced[side]))
    return ConstraintVerdict(ConstraintStatus.PERMITTED, outcome_at_node, ())


@dataclass(frozen=True)
class Conflict:
    node: str
    first: Preference
    second: Preference

    def to_dict(self) -> dict:
        return {"node": self.node, "first": self.first.to_dict(), "second": self.second.to_dict()}


def preferences_conflict(a: Preference, b: Preference) -> bool:
    """Opposite-direction preferences that force some configuration both
    ways: each one's stronger set fits inside the other's weaker set."""
    if a.node != b.node or a.direction is b.direction:
        return False
    return a.stronger <= b.weaker and b.stronger <= a.weaker


def audit_consistency(
    adf: Adf, base: CaseBase, model: PreferenceModel = PreferenceModel.RESULTS
) -> list[Conflict]:
    """All pairwise preference conflicts in the corpus, per node."""
    by_node: dict[str, list[Preference]] = {}
    for case in base.decided():
        for pref in extract_preferences(adf, case, model):
            by_node.setdefault(pref.node, []).append(pref)
    conflicts: list[Conflict] = []
    for node in sorted(by_node):
        for a, b in itertools.combinations(by_node[node], 2):
            if preferences_conflict(a, b):
                conflicts.append(Conflict(node, a, b))
    return conflicts


def corpus_preferences(
    adf: Adf, base: CaseBase, model: PreferenceModel = PreferenceModel.RESULTS
) -> dict[str, list[Preference]]:
    """All preferences in the corpus, grouped by node."""
    by_node: dict[str, list[Preference]] = {}
    for case in base.decided():
        for pref in extract_preferences(adf, case, model):
            by_node.setdefault(pref.node, []).append(pref)
    return by_node


@dataclass(frozen=True)
class NodeRequirement:
    node: str
    children: int
    raw: int  # 2^children distinct truth assignments
    possible: int  # after catalogue exclusions/implications among the children

    def to_dict(self) -> dict:
        return {"node": self.node, "children": self.children, "raw": self.raw, "possible": self.possible}


@dataclass(frozen=True)
class ResolutionReport:
    per_node: tuple[NodeRequirement, ...]
    total_raw: int
    total_possible: int

    def to_dict(self) -> dict:
        return {
            "per_node": [n.to_dict() for n in self.per_node],
            "total_raw": self.total_raw,
            "total_possible": self.total_possible,
        }


def resolution_requirements(adf: Adf, catalogue: FactorCatalogue) -> ResolutionReport:
    """How many precedents would fully resolve every node.

    Per node, the distinct truth assignments to its children, reduced by
    catalogue exclusions and implications that hold among the node's own
    factor children.  Nodes shared between parents are counted once.
    """
    rows: list[NodeRequirement] = []
    for name in adf.order:
        node = adf.nodes[name]
        children = list(node.children)
        raw = 2 ** len(children)
        factor_children = {c for c in children if is_factor_ref(c)}
        exclusions = [pair for pair in catalogue.exclusions if pair <= factor_children]
        implications = [
            (ante, cons)
            for ante, cons in catalogue.implications
            if ante in factor_children and cons in factor_children
        ]
        possible = 0
        for assignment in itertools.product((False, True), repeat=len(children)):
            env = dict(zip(children, assignment))
            if any(all(env[f] for f in pair) for pair in exclusions):
                continue
            if any(env[ante] and not env[cons] for ante, cons in implications):
                continue
            possible += 1
        rows.append(NodeRequirement(name, len(children), raw, possible))
    return ResolutionReport(
        per_node=tuple(rows),
        total_raw=sum(r.raw for r in rows),
        total_possible=sum(r.possible for r in rows),
    )
