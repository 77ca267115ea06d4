"""Three-ply citation/objection/rebuttal trees and issue pruning.

The proponent cites the most-on-point precedent decided its way; the
opponent distinguishes it or cites counterexamples; the proponent
downplays distinctions by substitution or cancellation and answers
counterexamples by transformation or by distinguishing them.  The
engine never adjudicates which rebuttal wins: trees are explanatory
structures ranked by ancestor closeness only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .adf import Adf, Issue, side_of_factor
from .model import Case, CaseBase, Side


class ArgumentError(Exception):
    pass


class Actor(Enum):
    PROPONENT = "proponent"
    OPPONENT = "opponent"


class Move(Enum):
    CITE = "cite"
    DISTINGUISH_PRECEDENT_EXTRA = "distinguish-precedent-extra"
    DISTINGUISH_NEW_CASE_EXTRA = "distinguish-new-case-extra"
    COUNTEREXAMPLE = "counterexample"
    SUBSTITUTE = "substitute"
    CANCEL = "cancel"
    TRANSFORM = "transform"
    DISTINGUISH_COUNTEREXAMPLE = "distinguish-counterexample"


class DistinctionKind(Enum):
    PRECEDENT_ONLY_WINNER_FACTOR = "precedent-only-winner-factor"
    NEW_CASE_ONLY_LOSER_FACTOR = "new-case-only-loser-factor"


@dataclass(frozen=True)
class Distinction:
    kind: DistinctionKind
    factor: str


@dataclass(frozen=True)
class Downplay:
    move: Move  # SUBSTITUTE or CANCEL
    factor: str  # the counterpart factor doing the downplaying
    closeness: int  # edges from the distinguished factor to the common ancestor


@dataclass
class ArgumentNode:
    move: Move
    actor: Actor
    label: str
    case: str | None = None
    factor: str | None = None
    counterpart: str | None = None
    closeness: int | None = None
    detail: str | None = None  # transform sub-move: "substitute" | "cancel"
    children: list["ArgumentNode"] = field(default_factory=list)

    def to_dict(self) -> dict:
        payload: dict = {"move": self.move.value, "actor": self.actor.value, "label": self.label}
        for key in ("case", "factor", "counterpart", "closeness", "detail"):
            value = getattr(self, key)
            if value is not None:
                payload[key] = value
        payload["children"] = [child.to_dict() for child in self.children]
        return payload

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


def overlap(a: Case, b: Case) -> frozenset[str]:
    return a.factors & b.factors


def most_on_point(base: CaseBase, new_case: Case, side: Side) -> list[Case]:
    """All precedents decided for the side with maximal factor overlap,
    ordered by name."""
    candidates = [
        c for c in base.decided() if c.winner is side and c.name != new_case.name
    ]
    if not candidates:
        return []
    best = max(len(overlap(c, new_case)) for c in candidates)
    return sorted((c for c in candidates if len(overlap(c, new_case)) == best), key=lambda c: c.name)


def distinctions(precedent: Case, new_case: Case, winner: Side) -> list[Distinction]:
    """Factor differences the loser can point to against the citation."""
    if precedent.winner is not winner:
        raise ArgumentError(f"{precedent.name} was not decided for the {winner}")
    loser = winner.opponent
    kind1 = sorted(
        f for f in precedent.factors - new_case.factors if side_of_factor(f) is winner
    )
    kind2 = sorted(
        f for f in new_case.factors - precedent.factors if side_of_factor(f) is loser
    )
    return [
        *(Distinction(DistinctionKind.PRECEDENT_ONLY_WINNER_FACTOR, f) for f in kind1),
        *(Distinction(DistinctionKind.NEW_CASE_ONLY_LOSER_FACTOR, f) for f in kind2),
    ]


def counterexamples(base: CaseBase, cited: Case, new_case: Case) -> list[Case]:
    """Opposite-outcome precedents at least as on point as the citation."""
    if not cited.decided:
        raise ArgumentError(f"{cited.name} is undecided")
    threshold = len(overlap(cited, new_case))
    other = cited.winner.opponent
    return sorted(
        (
            c
            for c in base.decided()
            if c.winner is other and c.name != new_case.name and len(overlap(c, new_case)) >= threshold
        ),
        key=lambda c: c.name,
    )


def _closeness(adf: Adf, from_factor: str, to_factor: str) -> int | None:
    """Edges from the distinguished factor up to the nearest common ancestor."""
    mine = adf.ancestry(from_factor)
    other = adf.ancestry(to_factor)
    common = set(mine) & set(other)
    if not common:
        return None
    return min(mine[a] for a in common)


def downplays(d: Distinction, adf: Adf, precedent: Case, new_case: Case) -> list[Downplay]:
    """Substitution and cancellation candidates for one distinction.

    Substitutes replay the distinguished factor's role from the other
    case's same-side extras; cancels offset it with opposite-side extras.
    Lower closeness (nearer common ancestor) is more persuasive; ties
    break by factor id.
    """
    winner = precedent.winner
    if winner is None:
        raise ArgumentError(f"{precedent.name} is undecided")
    loser = winner.opponent
    precedent_extra = precedent.factors - new_case.factors
    new_extra = new_case.factors - precedent.factors
    if d.kind is DistinctionKind.PRECEDENT_ONLY_WINNER_FACTOR:
        substitutes = {f for f in new_extra if side_of_factor(f) is winner}
        cancels = {f for f in precedent_extra if side_of_factor(f) is loser}
    else:
        substitutes = {f for f in precedent_extra if side_of_factor(f) is loser}
        cancels = {f for f in new_extra if side_of_factor(f) is winner}
    found: list[Downplay] = []
    for move, pool in ((Move.SUBSTITUTE, substitutes), (Move.CANCEL, cancels)):
        for factor in pool:
            closeness = _closeness(adf, d.factor, factor)
            if closeness is not None:
                found.append(Downplay(move, factor, closeness))
    found.sort(key=lambda dp: (dp.closeness, dp.factor, dp.move.value))
    return found


_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _objection_label(index: int) -> str:
    return f"O1{_LETTERS[index % len(_LETTERS)]}"


def _rebuttal_label(letter: str, index: int) -> str:
    return f"P2{'′' * index}{letter}"


def build_argument_tree(base: CaseBase, adf: Adf, new_case: Case, side: Side) -> ArgumentNode:
    """The full three-ply tree for arguing the new case for a side."""
    precedents = most_on_point(base, new_case, side)
    if not precedents:
        raise ArgumentError(f"no precedent decided for the {side} to cite")
    cited = precedents[0]
    root = ArgumentNode(Move.CITE, Actor.PROPONENT, label="P1", case=cited.name)

    all_distinctions = distinctions(cited, new_case, side)
    kind1 = [d for d in all_distinctions if d.kind is DistinctionKind.PRECEDENT_ONLY_WINNER_FACTOR]
    kind2 = [d for d in all_distinctions if d.kind is DistinctionKind.NEW_CASE_ONLY_LOSER_FACTOR]
    counters = counterexamples(base, cited, new_case)

    objections: list[tuple[str, Distinction | Case]] = []
    objections.extend(("distinction", d) for d in kind1)
    objections.extend(("counterexample", c) for c in counters)
    objections.extend(("distinction", d) for d in kind2)

    for index, (kind, payload) in enumerate(objections):
        letter = _LETTERS[index % len(_LETTERS)]
        if kind == "distinction":
            objection = ArgumentNode(
                Move.DISTINGUISH_PRECEDENT_EXTRA
                if payload.kind is DistinctionKind.PRECEDENT_ONLY_WINNER_FACTOR
                else Move.DISTINGUISH_NEW_CASE_EXTRA,
                Actor.OPPONENT,
                label=_objection_label(index),
                factor=payload.factor,
            )
            for rebuttal_index, downplay in enumerate(downplays(payload, adf, cited, new_case)):
                objection.children.append(
                    ArgumentNode(
                        downplay.move,
                        Actor.PROPONENT,
                        label=_rebuttal_label(letter, rebuttal_index),
                        factor=downplay.factor,
                        counterpart=payload.factor,
                        closeness=downplay.closeness,
                    )
                )
        else:
            objection = ArgumentNode(
                Move.COUNTEREXAMPLE,
                Actor.OPPONENT,
                label=_objection_label(index),
                case=payload.name,
            )
            rebuttal_index = 0
            ce_winner = payload.winner
            ce_distinctions = distinctions(payload, new_case, ce_winner)
            for d in ce_distinctions:
                for downplay in downplays(d, adf, payload, new_case):
                    objection.children.append(
                        ArgumentNode(
                            Move.TRANSFORM,
                            Actor.PROPONENT,
                            label=_rebuttal_label(letter, rebuttal_index),
                            factor=downplay.factor,
                            counterpart=d.factor,
                            closeness=downplay.closeness,
                            detail=downplay.move.value,
                        )
                    )
                    rebuttal_index += 1
            for d in ce_distinctions:
                objection.children.append(
                    ArgumentNode(
                        Move.DISTINGUISH_COUNTEREXAMPLE,
                        Actor.PROPONENT,
                        label=_rebuttal_label(letter, rebuttal_index),
                        factor=d.factor,
                    )
                )
                rebuttal_index += 1
        root.children.append(objection)
    return root


def _under_some_issue(adf: Adf, issues: list[Issue], factor: str) -> bool:
    return any(factor in adf.descendant_factors(issue.node) for issue in issues)


def _share_issue(adf: Adf, issues: list[Issue], a: str, b: str) -> bool:
    return any(
        a in adf.descendant_factors(issue.node) and b in adf.descendant_factors(issue.node)
        for issue in issues
    )


def prune_by_issues(tree: ArgumentNode, issues: list[Issue], adf: Adf) -> ArgumentNode:
    """Drop objections about uncontested issues and cross-issue downplays.

    A distinction survives only when its factor lies under a spotted
    issue node; within it, a downplay survives only when its counterpart
    shares an issue node with the distinguished factor.  Counterexample
    branches survive only when they contest a spotted issue.  Labels are
    preserved from the unpruned tree.
    """
    pruned = ArgumentNode(
        tree.move, tree.actor, tree.label, tree.case, tree.factor,
        tree.counterpart, tree.closeness, tree.detail,
    )
    for objection in tree.children:
        if objection.move in (Move.DISTINGUISH_PRECEDENT_EXTRA, Move.DISTINGUISH_NEW_CASE_EXTRA):
            if not _under_some_issue(adf, issues, objection.factor):
                continue
            kept = ArgumentNode(
                objection.move, objection.actor, objection.label, factor=objection.factor
            )
            kept.children = [
                ArgumentNode(
                    child.move, child.actor, child.label, child.case, child.factor,
                    child.counterpart, child.closeness, child.detail,
                )
                for child in objection.children
                if _share_issue(adf, issues, child.counterpart, child.factor)
            ]
            pruned.children.append(kept)
        elif objection.move is Move.COUNTEREXAMPLE:
            contested = [
                child
                for child in objection.children
                if child.move is Move.DISTINGUISH_COUNTEREXAMPLE
                and _under_some_issue(adf, issues, child.factor)
            ]
            if not contested:
                continue
            kept = ArgumentNode(
                objection.move, objection.actor, objection.label, case=objection.case
            )
            for child in objection.children:
                if child.move is Move.TRANSFORM:
                    if _share_issue(adf, issues, child.counterpart, child.factor):
                        kept.children.append(
                            ArgumentNode(
                                child.move, child.actor, child.label, child.case, child.factor,
                                child.counterpart, child.closeness, child.detail,
                            )
                        )
                elif _under_some_issue(adf, issues, child.factor):
                    kept.children.append(
                        ArgumentNode(
                            child.move, child.actor, child.label, child.case, child.factor,
                            child.counterpart, child.closeness, child.detail,
                        )
                    )
            pruned.children.append(kept)
        else:
            pruned.children.append(objection)
    return pruned


def _describe(node: ArgumentNode) -> str:
    if node.move is Move.CITE:
        return f"cite {node.case}"
    if node.move is Move.DISTINGUISH_PRECEDENT_EXTRA:
        return f"distinguish: {node.factor} present in the precedent only"
    if node.move is Move.DISTINGUISH_NEW_CASE_EXTRA:
        return f"distinguish: {node.factor} present in the new case only"
    if node.move is Move.COUNTEREXAMPLE:
        return f"counterexample {node.case}"
    if node.move is Move.SUBSTITUTE:
        return f"substitute {node.factor} for {node.counterpart} (closeness {node.closeness})"
    if node.move is Move.CANCEL:
        return f"cancel {node.counterpart} with {node.factor} (closeness {node.closeness})"
    if node.move is Move.TRANSFORM:
        if node.detail == "substitute":
            return f"transform: substitute {node.factor} for {node.counterpart} (closeness {node.closeness})"
        return f"transform: cancel {node.counterpart} with {node.factor} (closeness {node.closeness})"
    return f"distinguish counterexample: {node.factor} differs"


def render_tree(tree: ArgumentNode, fmt: str = "plain") -> str:
    if fmt == "structured":
        import json

        return json.dumps(tree.to_dict(), indent=2) + "\n"
    lines: list[str] = []

    def emit(node: ArgumentNode, depth: int) -> None:
        lines.append(f"{'  ' * depth}{node.label}: {_describe(node)}")
        for child in node.children:
            emit(child, depth + 1)

    emit(tree, 0)
    return "\n".join(lines) + "\n"
