"""Independent reference evaluator for the rule table.

Works from a hand-transcribed prefix-form rule fixture and a naive
recursive walk, sharing no code or data files with the engine under
test.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

FIXTURE = Path(__file__).parent / "fixtures" / "oracle_rules.json"
_FACTOR = re.compile(r"^F\d+[pd]$")


def load_rules() -> dict:
    return json.loads(FIXTURE.read_text())


def oracle_evaluate(rules: dict, factors: set[str] | frozenset[str]) -> dict[str, bool]:
    """Verdict per node (True = accept), by memoized recursion."""
    memo: dict[str, bool] = {}

    def truth(condition) -> bool:
        if isinstance(condition, str):
            if _FACTOR.match(condition):
                return condition in factors
            return node(condition)
        op = condition[0]
        if op == "not":
            return not truth(condition[1])
        if op == "and":
            return all(truth(part) for part in condition[1:])
        if op == "or":
            return any(truth(part) for part in condition[1:])
        raise ValueError(f"bad operator {op!r}")

    def node(name: str) -> bool:
        if name in memo:
            return memo[name]
        for verdict, condition in rules["nodes"][name]["rules"]:
            if condition is None or truth(condition):
                memo[name] = verdict == "accept"
                return memo[name]
        raise ValueError(f"no rule fired at {name}")

    for name in rules["nodes"]:
        node(name)
    return memo


def oracle_outcome(rules: dict, factors: set[str] | frozenset[str]) -> str:
    verdicts = oracle_evaluate(rules, factors)
    return "P" if verdicts[rules["root"]] else "D"
