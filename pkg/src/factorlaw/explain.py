"""IRAC explanations and the SO?/WHY? summary dialogue.

One IRAC item per contested issue: the issue question, the governing
factor preference with its precedent citation, the present factors it
applies to, and the node's resolution.  A dialogue walks the issue tree
from there: SO? climbs to the next summary-grade claim, WHY? descends
into the supporting detail, OK closes.  All wording comes from an
editable phrase table keyed by node and factor ids.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum

from .adf import (
    Adf,
    AcceptanceRule,
    EvaluationTrace,
    Issue,
    Verdict,
    condition_atoms,
    evaluate,
    is_factor_ref,
    present_sides,
    spot_issues,
)
from .model import Case, CaseBase, Side, factor_sort_key
from .precedent import PreferenceModel, Preference, extract_preferences

PRECEDES = "≺"  # the preference symbol between weaker and stronger sets


class ExplainError(Exception):
    pass


class DialogueMove(Enum):
    SO = "SO"
    WHY = "WHY"
    OK = "OK"


# ---------------------------------------------------------------------------
# Phrases


class PhraseBook:
    """Wording for node claims and factor descriptions.

    Everything user-visible is data: per node an accept/reject claim,
    lowercase clause forms, a question form, the backing authority text,
    a summary flag (SO? stops only at summary nodes), and a pass-through
    flag (WHY? descends silently through such nodes); per factor a
    clause and a standalone statement.
    """

    def __init__(self, table: dict):
        self._nodes = table.get("nodes", {})
        self._factors = table.get("factors", {})
        self._decision = table.get("decision", {})
        self._authorities = table.get("authorities", {})

    def _node(self, name: str) -> dict:
        return self._nodes.get(name, {})

    def claim(self, name: str, verdict: Verdict) -> str:
        key = "accept" if verdict is Verdict.ACCEPT else "reject"
        fallback = f"{name} was {'established' if verdict is Verdict.ACCEPT else 'not established'}"
        return self._node(name).get(key, fallback)

    def clause(self, name: str, verdict: Verdict) -> str:
        key = "accept_clause" if verdict is Verdict.ACCEPT else "reject_clause"
        return self._node(name).get(key, self.claim(name, verdict).lower())

    def question(self, name: str) -> str:
        return self._node(name).get("question", self.claim(name, Verdict.ACCEPT).lower())

    def statute(self, name: str) -> str:
        return self._node(name).get("statute", self.authority("Restatement"))

    def is_summary(self, name: str) -> bool:
        return bool(self._node(name).get("summary", False))

    def is_pass_through(self, name: str) -> bool:
        return bool(self._node(name).get("pass_through", False))

    def factor_clause(self, fid: str) -> str:
        return self._factors.get(fid, {}).get("clause", f"{fid} is present")

    def factor_statement(self, fid: str) -> str:
        return self._factors.get(fid, {}).get("statement", f"{fid} is present")

    def decision_line(self, side: Side) -> str:
        return self._decision.get(side.value, f"The decision is for the {side}.")

    def authority(self, justification: str) -> str:
        return self._authorities.get(justification, justification)


def default_phrases() -> PhraseBook:
    from . import assets

    return PhraseBook(assets.load_phrases())


# ---------------------------------------------------------------------------
# IRAC generation


@dataclass(frozen=True)
class IracItem:
    issue: Issue
    issue_text: str
    rule_text: str
    application_text: str
    conclusion_text: str
    preference: Preference | None
    citation: str | None

    @property
    def node(self) -> str:
        return self.issue.node

    @property
    def text(self) -> str:
        return " ".join([self.issue_text, self.rule_text, self.application_text, self.conclusion_text])

    def to_dict(self) -> dict:
        return {
            "issue": self.issue.to_dict(),
            "issue_text": self.issue_text,
            "rule_text": self.rule_text,
            "application_text": self.application_text,
            "conclusion_text": self.conclusion_text,
            "preference": self.preference.to_dict() if self.preference else None,
            "citation": self.citation,
        }


@dataclass(frozen=True)
class IracExplanation:
    case_name: str
    citation: str | None
    decision: Side
    factors: frozenset[str]
    items: tuple[IracItem, ...]

    def to_dict(self) -> dict:
        return {
            "case": self.case_name,
            "citation": self.citation,
            "decision": self.decision.value,
            "factors": sorted(self.factors),
            "items": [item.to_dict() for item in self.items],
        }


def _join_clauses(parts: list[str]) -> str:
    if len(parts) <= 1:
        return parts[0] if parts else ""
    if len(parts) == 2:
        return f"{parts[0]} and {parts[1]}"
    return ", ".join(parts[:-1]) + f" and {parts[-1]}"


def _resolve_justification(
    justification: str | None, base: CaseBase, phrases: PhraseBook
) -> str | None:
    """A displayable citation for a rule justification."""
    if justification is None:
        return None
    if justification in base:
        cited = base.get(justification)
        return cited.citation or cited.name
    return phrases.authority(justification)


def _supports_here(pref: Preference, winning: frozenset[str], losing: frozenset[str]) -> bool:
    return pref.stronger <= winning and losing <= pref.weaker


def _earliest_supporting(
    adf: Adf, base: CaseBase, case: Case, node: str, winner: Side,
    winning: frozenset[str], losing: frozenset[str],
) -> Case | None:
    """The earliest-decided precedent whose preference at the node forces
    this configuration; ties broken by name."""
    candidates: list[tuple[int, str, Case]] = []
    for other in base.decided():
        if other.name == case.name:
            continue
        for pref in extract_preferences(adf, other):
            if pref.node == node and pref.direction is winner and _supports_here(pref, winning, losing):
                candidates.append((other.year() or 9999, other.name, other))
                break
    if not candidates:
        return None
    candidates.sort(key=lambda item: (item[0], item[1]))
    return candidates[0][2]


def _decisive_present_factor(rule: AcceptanceRule, factors: frozenset[str]) -> str | None:
    if rule.condition is None:
        return None
    for atom in condition_atoms(rule.condition):
        if is_factor_ref(atom) and atom in factors:
            return atom
    return None


def _decisive_child_node(rule: AcceptanceRule) -> str | None:
    if rule.condition is None:
        return None
    for atom in condition_atoms(rule.condition):
        if not is_factor_ref(atom):
            return atom
    return None


def _condition_factors_present(rule: AcceptanceRule, factors: frozenset[str]) -> list[str]:
    if rule.condition is None:
        return []
    seen: list[str] = []
    for atom in condition_atoms(rule.condition):
        if is_factor_ref(atom) and atom in factors and atom not in seen:
            seen.append(atom)
    return seen


def _deepest_cause(
    adf: Adf, trace: EvaluationTrace, node: str, factors: frozenset[str]
) -> tuple[str, str | None]:
    """Follow fired rules through node atoms down to the node and factor
    that actually decided a branch."""
    current = node
    for _ in range(len(adf.nodes) + 1):
        rule = trace.fired_rule(adf, current)
        if _decisive_present_factor(rule, factors) is not None or rule.condition is None:
            return current, _decisive_present_factor(rule, factors)
        child = _decisive_child_node(rule)
        if child is None:
            return current, None
        current = child
    return current, None


def generate_irac(
    case: Case,
    adf: Adf,
    base: CaseBase,
    model: PreferenceModel = PreferenceModel.RESULTS,
    phrases: PhraseBook | None = None,
) -> IracExplanation:
    """One IRAC item per spotted issue, plus the overall decision."""
    phrases = phrases or default_phrases()
    trace = evaluate(adf, case.factors)
    issues = spot_issues(adf, case)
    catalogue = base.catalogue
    items: list[IracItem] = []
    for issue in issues:
        if issue.node == adf.root:
            items.append(_root_item(case, adf, base, trace, issue, phrases))
        else:
            items.append(_issue_item(case, adf, base, trace, issue, model, phrases, catalogue))
    return IracExplanation(
        case_name=case.name,
        citation=case.citation,
        decision=trace.decision,
        factors=case.factors,
        items=tuple(items),
    )


def _issue_item(
    case: Case,
    adf: Adf,
    base: CaseBase,
    trace: EvaluationTrace,
    issue: Issue,
    model: PreferenceModel,
    phrases: PhraseBook,
    catalogue,
) -> IracItem:
    node = issue.node
    result = trace.results[node]
    positive = adf.polarity.get(node, +1) > 0
    winner = Side.PLAINTIFF if (result.verdict is Verdict.ACCEPT) == positive else Side.DEFENDANT
    pros, cons = issue.plaintiff_factors, issue.defendant_factors
    winning, losing = (pros, cons) if winner is Side.PLAINTIFF else (cons, pros)

    fired = trace.fired_rule(adf, node)
    stronger = _condition_factors_present(fired, winning) or sorted(winning, key=factor_sort_key)
    weaker = sorted(losing, key=factor_sort_key)

    preference = Preference(
        node=node,
        weaker=frozenset(weaker),
        stronger=frozenset(stronger),
        model=model,
        source=fired.justification or case.name,
    )

    own_court = fired.justification == case.name
    citation = _resolve_justification(fired.justification, base, phrases)
    if fired.justification is None:
        precedent = _earliest_supporting(adf, base, case, node, winner, winning, losing)
        if precedent is not None:
            citation = precedent.citation or precedent.name
        else:
            citation = phrases.statute(node)

    weaker_labels = ", ".join(catalogue.label_of(f) if f in catalogue else f for f in weaker)
    stronger_labels = ", ".join(catalogue.label_of(f) if f in catalogue else f for f in stronger)
    rule_core = f"{weaker_labels} {PRECEDES} {stronger_labels}"
    if own_court:
        rule_text = f"The rule used by this court is {rule_core}."
    else:
        rule_text = f"The rule is {rule_core} ({citation})."

    issue_text = (
        f"Whether {phrases.question(node)} when "
        f"{_join_clauses([phrases.factor_clause(f) for f in weaker])}, but "
        f"{_join_clauses([phrases.factor_clause(f) for f in stronger])}."
    )
    application_text = f"The rule applies because {_join_clauses(weaker + stronger)} are present."
    conclusion_text = f"Therefore, {phrases.clause(node, result.verdict)}."
    return IracItem(
        issue=issue,
        issue_text=issue_text,
        rule_text=rule_text,
        application_text=application_text,
        conclusion_text=conclusion_text,
        preference=preference,
        citation=None if own_court else citation,
    )


def _root_item(
    case: Case,
    adf: Adf,
    base: CaseBase,
    trace: EvaluationTrace,
    issue: Issue,
    phrases: PhraseBook,
) -> IracItem:
    """The whole claim is the issue: explain it through the branch that
    decided it, down to the deciding factors."""
    root = adf.root
    verdict = trace.results[root].verdict
    children = adf.nodes[root].node_children()
    accepted = [c for c in children if trace.results[c].verdict is Verdict.ACCEPT]
    rejected = [c for c in children if trace.results[c].verdict is Verdict.REJECT]

    issue_text = (
        f"Whether {phrases.question(root)} when "
        f"{_join_clauses([phrases.clause(c, Verdict.ACCEPT) for c in accepted])}, but "
        f"{_join_clauses([phrases.clause(c, Verdict.REJECT) for c in rejected])}."
        if rejected and accepted
        else f"Whether {phrases.question(root)}."
    )

    authority = _resolve_justification(trace.results[root].justification, base, phrases) or phrases.statute(root)
    if verdict is Verdict.REJECT and rejected:
        conditions = _join_clauses([f"if {phrases.clause(c, Verdict.REJECT)}" for c in rejected[:1]])
        rule_text = f"The rule is that {conditions} then {phrases.clause(root, Verdict.REJECT)} ({authority})."
    else:
        rule_text = f"The rule is that {phrases.clause(root, verdict)} when {_join_clauses([phrases.clause(c, Verdict.ACCEPT) for c in children])} ({authority})."

    clauses: list[str] = []
    explain_targets = rejected if verdict is Verdict.REJECT else accepted
    for child in explain_targets:
        for conjunct in _failed_conjuncts(adf, trace, child) or [child]:
            cause, factor = _deepest_cause(adf, trace, conjunct, case.factors)
            cause_clause = phrases.clause(cause, trace.results[cause].verdict)
            if factor is not None:
                cite = _resolve_justification(trace.results[cause].justification, base, phrases)
                suffix = f" ({cite})" if cite else ""
                clauses.append(f"{cause_clause} because {factor} is present{suffix}")
            else:
                clauses.append(cause_clause)
    application_text = f"The rule applies because {_join_clauses(clauses)}."
    conclusion_text = f"Therefore, {phrases.clause(root, verdict)}."
    return IracItem(
        issue=issue,
        issue_text=issue_text,
        rule_text=rule_text,
        application_text=application_text,
        conclusion_text=conclusion_text,
        preference=None,
        citation=authority,
    )


def _failed_conjuncts(adf: Adf, trace: EvaluationTrace, node: str) -> list[str]:
    """Node children that blocked the node's accepting rule."""
    result = trace.results[node]
    fired = trace.fired_rule(adf, node)
    if fired.condition is not None:
        return []
    target = Verdict.ACCEPT if result.verdict is Verdict.REJECT else Verdict.REJECT
    for rule in adf.nodes[node].rules:
        if rule.condition is None or rule.verdict is not target:
            continue
        blockers = [
            atom
            for atom in condition_atoms(rule.condition)
            if not is_factor_ref(atom) and (trace.results[atom].verdict is Verdict.ACCEPT) != (target is Verdict.ACCEPT)
        ]
        if blockers:
            return blockers
    return []


# ---------------------------------------------------------------------------
# Dialogue


@dataclass(frozen=True)
class DialogueState:
    explanation: IracExplanation
    issue_index: int
    focus: str
    path: tuple[str, ...]
    transcript: tuple[tuple[str, str], ...]
    stated: frozenset[str]
    replies: int
    closed: bool
    adf: Adf = field(repr=False, compare=False)
    trace: EvaluationTrace = field(repr=False, compare=False)
    phrases: PhraseBook = field(repr=False, compare=False)
    base: CaseBase = field(repr=False, compare=False)


def _ancestor_path(adf: Adf, node: str) -> tuple[str, ...]:
    """Root-to-node chain, taking the first parent at each step."""
    chain = [node]
    current = node
    seen = {node}
    while current != adf.root:
        parents = adf.parents_of(current)
        if not parents:
            break
        parent = parents[0]
        if parent in seen:
            break
        chain.append(parent)
        seen.add(parent)
        current = parent
    chain.reverse()
    return tuple(chain)


def dialogue_start(
    explanation: IracExplanation,
    issue_index: int,
    adf: Adf,
    base: CaseBase,
    phrases: PhraseBook | None = None,
) -> DialogueState:
    """Open a dialogue on the numbered issue (1-based)."""
    phrases = phrases or default_phrases()
    if not 1 <= issue_index <= len(explanation.items):
        raise ExplainError(
            f"issue index {issue_index} out of range; the explanation has "
            f"{len(explanation.items)} issue(s)"
        )
    item = explanation.items[issue_index - 1]
    trace = evaluate(adf, explanation.factors)
    return DialogueState(
        explanation=explanation,
        issue_index=issue_index,
        focus=item.node,
        path=_ancestor_path(adf, item.node),
        transcript=((f"Issue {issue_index}", item.text),),
        stated=frozenset(),
        replies=0,
        closed=False,
        adf=adf,
        trace=trace,
        phrases=phrases,
        base=base,
    )


def offered_claims(state: DialogueState) -> list[tuple[str, str]]:
    """Resolved claims for the focus node's child nodes.

    This is the WHY? listing: whatever node the dialogue just climbed
    from is among these children, so its own claim is always on offer.
    """
    if is_factor_ref(state.focus):
        return []
    claims = []
    for child in state.adf.nodes[state.focus].node_children():
        verdict = state.trace.results[child].verdict
        claims.append((child, state.phrases.claim(child, verdict)))
    return claims


def _so_justification(state: DialogueState, node: str) -> str:
    fired = state.trace.fired_rule(state.adf, node)
    if fired.justification and fired.justification in state.base:
        cited = state.base.get(fired.justification)
        return cited.citation or cited.name
    return state.phrases.statute(node)


def _claim_statement(state: DialogueState, node: str, justification: str) -> str:
    claim = state.phrases.claim(node, state.trace.results[node].verdict)
    return f"{claim} ({justification})."


def dialogue_move(
    state: DialogueState, move: DialogueMove, child: str | None = None
) -> tuple[DialogueState, str]:
    """Apply a SO?/WHY?/OK move; returns the new state and the statement."""
    if state.closed:
        raise ExplainError("the dialogue is closed")
    if move is DialogueMove.OK:
        new = replace(state, closed=True, transcript=state.transcript + (("OK", ""),))
        return new, ""
    if move is DialogueMove.SO:
        return _move_so(state)
    return _move_why(state, child)


def _move_so(state: DialogueState) -> tuple[DialogueState, str]:
    phrases = state.phrases
    # Nearest summary-grade ancestor (or self) not yet stated.
    target: str | None = None
    for name in reversed(state.path):
        if name in state.adf.nodes and phrases.is_summary(name) and name not in state.stated:
            target = name
            break
    if target is None:
        statement = phrases.decision_line(state.explanation.decision)
        new = replace(
            state,
            replies=state.replies + 1,
            transcript=state.transcript + (("SO?", statement),),
        )
        return new, statement
    statement = _claim_statement(state, target, _so_justification(state, target))
    index = state.path.index(target)
    new = replace(
        state,
        focus=target,
        path=state.path[: index + 1],
        stated=state.stated | {target},
        replies=state.replies + 1,
        transcript=state.transcript + (("SO?", statement),),
    )
    return new, statement


def _descend_pass_through(state: DialogueState, node: str) -> list[str]:
    """Nodes visited when landing on `node`, skipping pass-through hops."""
    chain = [node]
    while state.phrases.is_pass_through(chain[-1]):
        rule = state.trace.fired_rule(state.adf, chain[-1])
        nxt = _decisive_child_node(rule)
        if nxt is None:
            break
        chain.append(nxt)
    return chain


def _move_why(state: DialogueState, child: str | None) -> tuple[DialogueState, str]:
    phrases = state.phrases
    focus = state.focus
    if is_factor_ref(focus):
        statement = "No further detail is available."
        new = replace(
            state,
            replies=state.replies + 1,
            transcript=state.transcript + (("WHY?", statement),),
        )
        return new, statement

    node = state.adf.nodes[focus]
    label = "WHY?" if child is None else f"WHY? ({child})"
    if child is not None and child not in node.children:
        raise ExplainError(f"{child!r} is not a child of {focus!r}")

    fired = state.trace.fired_rule(state.adf, focus)
    if child is None:
        child = _decisive_child_node(fired)

    if child is not None and not is_factor_ref(child):
        chain = _descend_pass_through(state, child)
        target = chain[-1]
        statement = _claim_statement(state, target, phrases.statute(target))
        new = replace(
            state,
            focus=target,
            path=state.path + tuple(chain),
            replies=state.replies + 1,
            transcript=state.transcript + ((label, statement),),
        )
        return new, statement

    if child is None:
        factor = _decisive_present_factor(fired, state.explanation.factors)
        if factor is not None:
            pros, cons = present_sides(state.adf, focus, state.explanation.factors)
            unopposed = not (pros and cons)
            if unopposed and phrases.is_summary(focus):
                statement = (
                    f"The issue was unopposed. Further, {phrases.factor_clause(factor)} ({factor})."
                )
            else:
                statement = f"{phrases.factor_statement(factor)} ({factor})."
            new = replace(
                state,
                focus=factor,
                path=state.path + (factor,),
                replies=state.replies + 1,
                transcript=state.transcript + ((label, statement),),
            )
            return new, statement
        # Default rule with nothing informative: list the children claims.
        node_children = node.node_children()
        if node_children:
            statement = " ".join(
                f"{phrases.claim(c, state.trace.results[c].verdict)}." for c in node_children
            )
            first = node_children[0]
            new = replace(
                state,
                focus=first,
                path=state.path + (first,),
                replies=state.replies + 1,
                transcript=state.transcript + ((label, statement),),
            )
            return new, statement
        statement = "No further detail is available."
        new = replace(
            state,
            replies=state.replies + 1,
            transcript=state.transcript + ((label, statement),),
        )
        return new, statement

    # Explicit factor child selected.
    statement = f"{phrases.factor_statement(child)} ({child})."
    new = replace(
        state,
        focus=child,
        path=state.path + (child,),
        replies=state.replies + 1,
        transcript=state.transcript + ((label, statement),),
    )
    return new, statement


# ---------------------------------------------------------------------------
# Rendering


def render_explanation(explanation: IracExplanation, fmt: str = "plain") -> str:
    if fmt == "structured":
        return json.dumps(explanation.to_dict(), indent=2) + "\n"
    phrases = default_phrases()
    header = explanation.citation or explanation.case_name
    if not header.endswith("."):
        header += "."
    lines = [header, ""]
    decision = phrases.decision_line(explanation.decision)
    if not explanation.items:
        lines.append(decision)
        return "\n".join(lines) + "\n"
    count = len(explanation.items)
    issue_header = "There is one issue:" if count == 1 else f"There are {_count_word(count)} issues:"
    lines.append(f"{decision} {issue_header}")
    lines.append("")
    for index, item in enumerate(explanation.items, start=1):
        lines.append(f"{index}. {item.text}")
    return "\n".join(lines) + "\n"


def _count_word(count: int) -> str:
    words = {2: "two", 3: "three", 4: "four", 5: "five"}
    return words.get(count, str(count))


def parse_explanation(text: str) -> dict:
    """Inverse of the structured rendering (schema-level round trip)."""
    return json.loads(text)


def render_transcript(state: DialogueState, fmt: str = "plain") -> str:
    if fmt == "structured":
        payload = {
            "case": state.explanation.case_name,
            "issue": state.issue_index,
            "focus": state.focus,
            "closed": state.closed,
            "transcript": [{"move": move, "statement": statement} for move, statement in state.transcript],
        }
        return json.dumps(payload, indent=2) + "\n"
    lines: list[str] = []
    reply = 0
    for move, statement in state.transcript:
        if move.startswith("Issue"):
            lines.append(f"{move}: {statement}")
        elif statement:
            reply += 1
            lines.append(move)
            lines.append(f"Reply {reply}: {statement}")
        else:
            lines.append(move)
    return "\n".join(lines) + "\n"
