"""Issue tree as an abstract dialectical framework over case factors.

Each node carries an ordered list of acceptance rules over its children
(factor ids and other nodes); the first rule whose condition holds
decides the node, with an optional unconditional default last.  The
root's verdict decides the case: Accept finds for the plaintiff.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .model import Case, FactorCatalogue, Side

_FACTOR_ID_RE = re.compile(r"^F\d+[pd]$")


class AdfError(Exception):
    """Raised for structurally invalid frameworks."""


class AdfParseError(AdfError):
    """Raised when the ADF DSL cannot be parsed; carries a line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class UndecidableNodeError(AdfError):
    """No rule fired at a node and it has no default."""

    def __init__(self, node: str):
        super().__init__(f"node {node!r} is undecidable: no rule fired and no default")
        self.node = node


class Verdict(Enum):
    ACCEPT = "accept"
    REJECT = "reject"

    def __invert__(self) -> "Verdict":
        return Verdict.REJECT if self is Verdict.ACCEPT else Verdict.ACCEPT


def is_factor_ref(token: str) -> bool:
    """Whether a child reference names a base-level factor."""
    return bool(_FACTOR_ID_RE.match(token))


def side_of_factor(token: str) -> Side:
    return Side.PLAINTIFF if token.endswith("p") else Side.DEFENDANT


# ---------------------------------------------------------------------------
# Conditions


@dataclass(frozen=True)
class FactorPresent:
    id: str

    def __str__(self) -> str:
        return self.id


@dataclass(frozen=True)
class NodeAccepted:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Not:
    operand: "Condition"

    def __str__(self) -> str:
        return f"NOT {_wrap(self.operand, 3)}"


@dataclass(frozen=True)
class And:
    operands: tuple["Condition", ...]

    def __str__(self) -> str:
        return " AND ".join(_wrap(op, 2) for op in self.operands)


@dataclass(frozen=True)
class Or:
    operands: tuple["Condition", ...]

    def __str__(self) -> str:
        return " OR ".join(_wrap(op, 1) for op in self.operands)


Condition = FactorPresent | NodeAccepted | Not | And | Or


def _precedence(cond: Condition) -> int:
    if isinstance(cond, Or):
        return 1
    if isinstance(cond, And):
        return 2
    if isinstance(cond, Not):
        return 3
    return 4


def _wrap(cond: Condition, at_least: int) -> str:
    return f"({cond})" if _precedence(cond) < at_least else str(cond)


def condition_atoms(cond: Condition) -> list[str]:
    """Atom names in left-to-right textual order."""
    if isinstance(cond, (FactorPresent,)):
        return [cond.id]
    if isinstance(cond, NodeAccepted):
        return [cond.name]
    if isinstance(cond, Not):
        return condition_atoms(cond.operand)
    return [name for op in cond.operands for name in condition_atoms(op)]


def _eval_condition(cond: Condition, values: dict[str, bool]) -> bool:
    if isinstance(cond, FactorPresent):
        return values[cond.id]
    if isinstance(cond, NodeAccepted):
        return values[cond.name]
    if isinstance(cond, Not):
        return not _eval_condition(cond.operand, values)
    if isinstance(cond, And):
        return all(_eval_condition(op, values) for op in cond.operands)
    return any(_eval_condition(op, values) for op in cond.operands)


# ---------------------------------------------------------------------------
# Nodes and framework


@dataclass(frozen=True)
class AcceptanceRule:
    condition: Condition | None  # None is the DEFAULT rule
    verdict: Verdict
    justification: str | None = None

    @property
    def is_default(self) -> bool:
        return self.condition is None

    def __str__(self) -> str:
        head = self.verdict.name
        if self.condition is not None:
            head += f" IF {self.condition}"
        if self.justification:
            head += f" @ {self.justification}"
        return head


@dataclass(frozen=True)
class AdfNode:
    name: str
    children: tuple[str, ...]
    rules: tuple[AcceptanceRule, ...]

    def factor_children(self) -> list[str]:
        return [c for c in self.children if is_factor_ref(c)]

    def node_children(self) -> list[str]:
        return [c for c in self.children if not is_factor_ref(c)]


class Adf:
    """An acyclic framework of nodes; every node reachable from the root."""

    def __init__(self, nodes: list[AdfNode], root: str):
        self.nodes: dict[str, AdfNode] = {}
        for node in nodes:
            if node.name in self.nodes:
                raise AdfError(f"duplicate node {node.name!r}")
            if not node.rules:
                raise AdfError(f"node {node.name!r} has no rules")
            defaults = [i for i, r in enumerate(node.rules) if r.is_default]
            if len(defaults) > 1:
                raise AdfError(f"node {node.name!r} has more than one default rule")
            if defaults and defaults[0] != len(node.rules) - 1:
                raise AdfError(f"node {node.name!r}: default rule must come last")
            declared = set(node.children)
            for rule in node.rules:
                if rule.condition is None:
                    continue
                for atom in condition_atoms(rule.condition):
                    if atom not in declared:
                        raise AdfError(
                            f"node {node.name!r}: condition atom {atom!r} is not a declared child"
                        )
            self.nodes[node.name] = node
        if root not in self.nodes:
            raise AdfError(f"root node {root!r} is not defined")
        for node in nodes:
            for child in node.node_children():
                if child not in self.nodes:
                    raise AdfError(f"node {node.name!r}: child node {child!r} is not defined")
        self.root = root
        self.order = self._topological_order()
        self._descendants: dict[str, frozenset[str]] = {}
        for name in reversed(self.order):
            node = self.nodes[name]
            acc: set[str] = set(node.factor_children())
            for child in node.node_children():
                acc |= self._descendants[child]
            self._descendants[name] = frozenset(acc)
        self.polarity = self._polarities()

    def _topological_order(self) -> list[str]:
        """Parents before children; raises on cycles."""
        state: dict[str, int] = {}
        order: list[str] = []

        def visit(name: str, stack: list[str]) -> None:
            mark = state.get(name, 0)
            if mark == 1:
                cycle = " -> ".join(stack + [name])
                raise AdfError(f"cycle in node references: {cycle}")
            if mark == 2:
                return
            state[name] = 1
            for child in self.nodes[name].node_children():
                visit(child, stack + [name])
            state[name] = 2
            order.append(name)

        visit(self.root, [])
        for name in self.nodes:
            visit(name, [])
        order.reverse()
        return order

    def reachable(self) -> set[str]:
        seen: set[str] = set()
        frontier = [self.root]
        while frontier:
            name = frontier.pop()
            if name in seen:
                continue
            seen.add(name)
            frontier.extend(self.nodes[name].node_children())
        return seen

    def _polarities(self) -> dict[str, int]:
        """+1 when a node's acceptance supports the plaintiff claim, else -1.

        Propagated from the root through rule verdicts and NOT nesting;
        a node referenced with conflicting signs is an error.
        """

        def signed_atoms(cond: Condition, sign: int) -> list[tuple[str, int]]:
            if isinstance(cond, FactorPresent):
                return []
            if isinstance(cond, NodeAccepted):
                return [(cond.name, sign)]
            if isinstance(cond, Not):
                return signed_atoms(cond.operand, -sign)
            return [pair for op in cond.operands for pair in signed_atoms(op, sign)]

        polarity: dict[str, int] = {self.root: +1}
        for name in self.order:
            if name not in polarity:
                polarity[name] = +1  # unreferenced (unreachable) nodes default positive
            node = self.nodes[name]
            for rule in node.rules:
                if rule.condition is None:
                    continue
                rule_sign = +1 if rule.verdict is Verdict.ACCEPT else -1
                for child, sign in signed_atoms(rule.condition, +1):
                    candidate = polarity[name] * rule_sign * sign
                    if child in polarity and polarity[child] != candidate:
                        raise AdfError(
                            f"node {child!r} is referenced with conflicting polarities"
                        )
                    polarity[child] = candidate
        return polarity

    def node(self, name: str) -> AdfNode:
        if name not in self.nodes:
            raise AdfError(f"unknown node {name!r}")
        return self.nodes[name]

    def parents_of(self, name: str) -> list[str]:
        return [n.name for n in self.nodes.values() if name in n.children]

    def descendant_factors(self, name: str) -> frozenset[str]:
        """All factor ids reachable from the node through child references."""
        if name not in self._descendants:
            raise AdfError(f"unknown node {name!r}")
        return self._descendants[name]

    def ancestry(self, token: str) -> dict[str, int]:
        """Ancestor nodes of a factor or node, by minimum edge distance.

        A node counts as its own ancestor at distance 0; a factor's
        housing nodes sit at distance 1.
        """
        if token not in self.nodes and not is_factor_ref(token):
            raise AdfError(f"unknown token {token!r}")
        distances: dict[str, int] = {token: 0}
        frontier = [token]
        while frontier:
            item = frontier.pop(0)
            for parent in self.parents_of(item):
                candidate = distances[item] + 1
                if parent not in distances or candidate < distances[parent]:
                    distances[parent] = candidate
                    frontier.append(parent)
        if is_factor_ref(token):
            distances.pop(token, None)
        return distances


# ---------------------------------------------------------------------------
# DSL parsing


_RULE_LINE_RE = re.compile(r"^(ACCEPT|REJECT)\b\s*(?:IF\b(?P<cond>.*?))?(?:@(?P<just>.*))?$", re.IGNORECASE)


class _ConditionParser:
    """Recursive-descent parser for AND/OR/NOT expressions over atoms."""

    _TOKEN_RE = re.compile(r"\s*(\(|\)|[A-Za-z_][A-Za-z0-9_]*)")

    def __init__(self, text: str, line: int):
        self.tokens = self._tokenize(text, line)
        self.pos = 0
        self.line = line

    def _tokenize(self, text: str, line: int) -> list[str]:
        tokens: list[str] = []
        rest = text
        while rest.strip():
            m = self._TOKEN_RE.match(rest)
            if not m:
                raise AdfParseError(f"bad condition syntax near {rest.strip()[:20]!r}", line)
            tokens.append(m.group(1))
            rest = rest[m.end():]
        return tokens

    def _peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self) -> str:
        token = self._peek()
        if token is None:
            raise AdfParseError("unexpected end of condition", self.line)
        self.pos += 1
        return token

    def parse(self) -> Condition:
        cond = self._or()
        if self._peek() is not None:
            raise AdfParseError(f"unexpected token {self._peek()!r} in condition", self.line)
        return cond

    def _or(self) -> Condition:
        operands = [self._and()]
        while self._peek() is not None and self._peek().upper() == "OR":
            self._next()
            operands.append(self._and())
        return operands[0] if len(operands) == 1 else Or(tuple(operands))

    def _and(self) -> Condition:
        operands = [self._not()]
        while self._peek() is not None and self._peek().upper() == "AND":
            self._next()
            operands.append(self._not())
        return operands[0] if len(operands) == 1 else And(tuple(operands))

    def _not(self) -> Condition:
        token = self._peek()
        if token is not None and token.upper() == "NOT":
            self._next()
            return Not(self._not())
        return self._atom()

    def _atom(self) -> Condition:
        token = self._next()
        if token == "(":
            cond = self._or()
            if self._next() != ")":
                raise AdfParseError("unbalanced parentheses in condition", self.line)
            return cond
        if token in (")",) or token.upper() in ("AND", "OR", "NOT"):
            raise AdfParseError(f"unexpected token {token!r} in condition", self.line)
        if is_factor_ref(token):
            return FactorPresent(token)
        return NodeAccepted(token)


def parse_adf(text: str) -> Adf:
    """Parse the node-block DSL into a framework.

    One block per node: a NODE line, a CHILDREN line, then rule lines
    (`ACCEPT IF <expr>`, `REJECT`, ... each optionally `@ justification`);
    `ROOT <name>` once per document; `#` starts a comment.
    """
    root: str | None = None
    nodes: list[AdfNode] = []
    current_name: str | None = None
    current_children: tuple[str, ...] = ()
    current_rules: list[AcceptanceRule] = []
    current_line = 0

    def flush() -> None:
        nonlocal current_name, current_children, current_rules
        if current_name is None:
            return
        if not current_rules:
            raise AdfParseError(f"node {current_name!r} has no rules", current_line)
        nodes.append(AdfNode(current_name, current_children, tuple(current_rules)))
        current_name = None
        current_children = ()
        current_rules = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        upper = line.upper()
        if upper.startswith("ROOT "):
            if root is not None:
                raise AdfParseError("ROOT declared twice", lineno)
            root = line[5:].strip()
        elif upper.startswith("NODE "):
            flush()
            current_name = line[5:].strip()
            current_line = lineno
            if not current_name:
                raise AdfParseError("NODE requires a name", lineno)
        elif upper.startswith("CHILDREN"):
            if current_name is None:
                raise AdfParseError("CHILDREN outside a NODE block", lineno)
            listing = line[len("CHILDREN"):].strip()
            current_children = tuple(t.strip() for t in listing.split(",") if t.strip())
        elif upper.startswith(("ACCEPT", "REJECT")):
            if current_name is None:
                raise AdfParseError("rule line outside a NODE block", lineno)
            m = _RULE_LINE_RE.match(line)
            if not m:
                raise AdfParseError(f"bad rule line {line!r}", lineno)
            verdict = Verdict.ACCEPT if m.group(1).upper() == "ACCEPT" else Verdict.REJECT
            cond_text = m.group("cond")
            condition = _ConditionParser(cond_text, lineno).parse() if cond_text else None
            justification = (m.group("just") or "").strip() or None
            current_rules.append(AcceptanceRule(condition, verdict, justification))
        else:
            raise AdfParseError(f"unrecognized line {line!r}", lineno)
    flush()
    if root is None:
        raise AdfParseError("document declares no ROOT")
    return Adf(nodes, root)


def render_adf(adf: Adf) -> str:
    """DSL rendering of a framework; parse_adf round-trips it."""
    lines = [f"ROOT {adf.root}", ""]
    for name in adf.order:
        node = adf.nodes[name]
        lines.append(f"NODE {node.name}")
        lines.append("CHILDREN " + ", ".join(node.children))
        for rule in node.rules:
            lines.append(str(rule))
        lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Evaluation


@dataclass(frozen=True)
class NodeResult:
    verdict: Verdict
    fired_index: int
    justification: str | None
    child_values: tuple[tuple[str, bool], ...]

    @property
    def accepted(self) -> bool:
        return self.verdict is Verdict.ACCEPT


@dataclass(frozen=True)
class EvaluationTrace:
    results: dict[str, NodeResult]
    root: str

    @property
    def root_verdict(self) -> Verdict:
        return self.results[self.root].verdict

    @property
    def decision(self) -> Side:
        return Side.PLAINTIFF if self.root_verdict is Verdict.ACCEPT else Side.DEFENDANT

    def fired_rule(self, adf: Adf, name: str) -> AcceptanceRule:
        return adf.node(name).rules[self.results[name].fired_index]


def evaluate(adf: Adf, factors: frozenset[str] | set[str]) -> EvaluationTrace:
    """Bottom-up evaluation: per node, the first rule whose condition
    holds fires; the default fires when no earlier rule does."""
    values: dict[str, bool] = {}
    results: dict[str, NodeResult] = {}
    for name in reversed(adf.order):
        node = adf.nodes[name]
        env = {
            child: (child in factors if is_factor_ref(child) else values[child])
            for child in node.children
        }
        fired: tuple[int, AcceptanceRule] | None = None
        for index, rule in enumerate(node.rules):
            if rule.condition is None or _eval_condition(rule.condition, env):
                fired = (index, rule)
                break
        if fired is None:
            raise UndecidableNodeError(name)
        index, rule = fired
        values[name] = rule.verdict is Verdict.ACCEPT
        results[name] = NodeResult(
            verdict=rule.verdict,
            fired_index=index,
            justification=rule.justification,
            child_values=tuple(sorted(env.items())),
        )
    return EvaluationTrace(results=results, root=adf.root)


# ---------------------------------------------------------------------------
# Issues


@dataclass(frozen=True)
class Issue:
    node: str
    plaintiff_factors: frozenset[str]
    defendant_factors: frozenset[str]

    def to_dict(self) -> dict:
        return {
            "node": self.node,
            "plaintiff_factors": sorted(self.plaintiff_factors),
            "defendant_factors": sorted(self.defendant_factors),
        }


def present_sides(adf: Adf, name: str, factors: frozenset[str]) -> tuple[frozenset[str], frozenset[str]]:
    present = adf.descendant_factors(name) & factors
    pros = frozenset(f for f in present if side_of_factor(f) is Side.PLAINTIFF)
    cons = frozenset(f for f in present if side_of_factor(f) is Side.DEFENDANT)
    return pros, cons


def _is_contested(adf: Adf, name: str, factors: frozenset[str]) -> bool:
    pros, cons = present_sides(adf, name, factors)
    return bool(pros) and bool(cons)


def spot_issues(adf: Adf, case: Case | frozenset[str]) -> list[Issue]:
    """The contested issues of a case: lowest claim-supporting nodes whose
    present descendant factors include both sides.

    Only positive-polarity nodes count as issues, and lowest-ness is
    judged against positive child nodes: a negative node (one whose
    acceptance favours the defence, e.g. an obtainability or own-efforts
    rebuttal) is a consideration inside its parent issue, not an issue
    of the claim itself.
    """
    factors = case.factors if isinstance(case, Case) else frozenset(case)
    issues: list[Issue] = []
    seen: set[str] = set()

    def walk(name: str) -> None:
        if name in seen:
            return
        seen.add(name)
        node = adf.nodes[name]
        if adf.polarity.get(name, +1) > 0 and _is_contested(adf, name, factors):
            lowest = not any(
                adf.polarity.get(child, +1) > 0 and _is_contested(adf, child, factors)
                for child in node.node_children()
            )
            if lowest:
                pros, cons = present_sides(adf, name, factors)
                issues.append(Issue(name, pros, cons))
        for child in node.node_children():
            walk(child)

    walk(adf.root)
    return issues


# ---------------------------------------------------------------------------
# Lints


@dataclass(frozen=True)
class Lint:
    kind: str  # "width" | "unhoused-factor" | "missing-default" | "unreachable"
    message: str
    node: str | None = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "message": self.message, "node": self.node}


MAX_ADVISED_CHILDREN = 5


def validate_adf(adf: Adf, catalogue: FactorCatalogue) -> list[Lint]:
    """Warning-level lints; none of these block evaluation."""
    lints: list[Lint] = []
    housed: set[str] = set()
    reachable = adf.reachable()
    for name in adf.order:
        node = adf.nodes[name]
        housed.update(node.factor_children())
        if len(node.children) > MAX_ADVISED_CHILDREN:
            lints.append(
                Lint(
                    "width",
                    f"node {name!r} has {len(node.children)} children; "
                    f"more than {MAX_ADVISED_CHILDREN} makes full resolution need over "
                    f"{2 ** MAX_ADVISED_CHILDREN} precedents",
                    node=name,
                )
            )
        if not any(r.is_default for r in node.rules):
            lints.append(
                Lint("missing-default", f"node {name!r} has no default rule and may be undecidable", node=name)
            )
        if name not in reachable:
            lints.append(Lint("unreachable", f"node {name!r} is unreachable from the root", node=name))
    for factor in catalogue:
        if factor.id not in housed:
            lints.append(
                Lint("unhoused-factor", f"factor {factor.id} appears under no node", node=None)
            )
    return lints
