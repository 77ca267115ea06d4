"""Command-line entry point: decide, explain, dialogue, argue, audit, count, serve."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import assets
from .adf import Adf, AdfError, evaluate, spot_issues, validate_adf
from .argument import ArgumentError, build_argument_tree, prune_by_issues, render_tree
from .explain import (
    DialogueMove,
    ExplainError,
    PhraseBook,
    default_phrases,
    dialogue_move,
    dialogue_start,
    generate_irac,
    render_explanation,
)
from .model import Case, CaseBase, CorpusError, Outcome, Side, validate_factors
from .precedent import PreferenceModel, audit_consistency, corpus_preferences, resolution_requirements

EXIT_OK = 0
EXIT_DATA = 1
EXIT_NOT_FOUND = 2
EXIT_INTERNAL = 3


@dataclass
class RunConfig:
    adf: Adf
    base: CaseBase
    phrases: PhraseBook
    model: PreferenceModel
    issues_on: bool
    fmt: str


class NotFound(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="factorlaw",
        description="Decide and explain factor-based cases against an issue tree.",
    )
    parser.add_argument("--adf", help="path to an ADF file (default: bundled trade-secrets tree)")
    parser.add_argument("--cases", help="path to a corpus file (default: bundled corpus)")
    parser.add_argument("--model", choices=["results", "reason"], default="results")
    parser.add_argument("--issues", choices=["on", "off"], default="on",
                        help="prune argument trees by spotted issues")
    parser.add_argument("--format", choices=["plain", "structured"], default="plain")

    sub = parser.add_subparsers(dest="command", required=True)

    p_decide = sub.add_parser("decide", help="decide a case and show the trace")
    p_decide.add_argument("case", nargs="?", help="case name from the corpus")
    p_decide.add_argument("--factors", help="comma-separated factor ids for an ad-hoc case")

    p_explain = sub.add_parser("explain", help="IRAC explanation for a case")
    p_explain.add_argument("case")
    p_explain.add_argument("--factors", help="comma-separated factor ids instead of a corpus case")

    p_dialogue = sub.add_parser("dialogue", help="interactive SO?/WHY?/OK dialogue")
    p_dialogue.add_argument("case")
    p_dialogue.add_argument("--issue", type=int, default=1)

    p_argue = sub.add_parser("argue", help="three-ply argument tree for a case")
    p_argue.add_argument("case")
    p_argue.add_argument("--side", choices=["P", "D"], default="P")

    p_audit = sub.add_parser("audit", help="corpus agreement and preference consistency")
    p_audit.add_argument("--whole-case", action="store_true",
                         help="also audit issue-free, whole-case preferences")

    sub.add_parser("count", help="per-node resolution requirements")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")

    return parser


def _load_config(args: argparse.Namespace) -> RunConfig:
    adf = assets.load_adf(args.adf)
    base = assets.load_cases(args.cases)
    return RunConfig(
        adf=adf,
        base=base,
        phrases=default_phrases(),
        model=PreferenceModel(args.model),
        issues_on=args.issues == "on",
        fmt=args.format,
    )


def _resolve_case(config: RunConfig, name: str | None, factors_arg: str | None) -> Case:
    if factors_arg:
        tokens = [t for t in factors_arg.split(",") if t.strip()]
        resolved = frozenset(config.base.catalogue.normalize_token(t)[0] for t in tokens)
        violations = validate_factors(resolved, config.base.catalogue)
        if violations:
            raise CorpusError("; ".join(v.message for v in violations))
        return Case(name=name or "AdHoc", factors=resolved, outcome=Outcome.UNDECIDED)
    if not name:
        raise CorpusError("a case name or --factors is required")
    if name not in config.base:
        raise NotFound(f"unknown case {name!r}")
    return config.base.get(name)


def cmd_decide(config: RunConfig, args: argparse.Namespace, out) -> int:
    case = _resolve_case(config, args.case, args.factors)
    trace = evaluate(config.adf, case.factors)
    issues = spot_issues(config.adf, case)
    if config.fmt == "structured":
        payload = {
            "case": case.name,
            "decision": trace.decision.value,
            "issues": [i.to_dict() for i in issues],
            "trace": {
                name: {
                    "verdict": result.verdict.value,
                    "rule": str(config.adf.nodes[name].rules[result.fired_index]),
                    "justification": result.justification,
                }
                for name, result in trace.results.items()
            },
        }
        print(json.dumps(payload, indent=2), file=out)
        return EXIT_OK
    print(f"Decision: {trace.decision}", file=out)
    issue_names = ", ".join(i.node for i in issues) or "none"
    print(f"Issues: {issue_names}", file=out)
    print("Trace:", file=out)
    for name in config.adf.order:
        result = trace.results[name]
        rule = config.adf.nodes[name].rules[result.fired_index]
        print(f"  {name}: {result.verdict.value} via [{rule}]", file=out)
    return EXIT_OK


def cmd_explain(config: RunConfig, args: argparse.Namespace, out) -> int:
    case = _resolve_case(config, args.case, args.factors)
    explanation = generate_irac(case, config.adf, config.base, config.model, config.phrases)
    print(render_explanation(explanation, config.fmt), end="", file=out)
    return EXIT_OK


def cmd_dialogue(config: RunConfig, args: argparse.Namespace, out, stdin) -> int:
    case = _resolve_case(config, args.case, None)
    explanation = generate_irac(case, config.adf, config.base, config.model, config.phrases)
    if not explanation.items:
        print("No contested issues; nothing to discuss.", file=out)
        return EXIT_OK
    state = dialogue_start(explanation, args.issue, config.adf, config.base, config.phrases)
    print(f"Issue {args.issue}: {explanation.items[args.issue - 1].text}", file=out)
    print("Moves: SO | WHY [child] | OK", file=out)
    for line in stdin:
        parts = line.strip().split()
        if not parts:
            continue
        word = parts[0].rstrip("?").upper()
        if word not in ("SO", "WHY", "OK"):
            print(f"Unknown move {parts[0]!r}; use SO, WHY [child], or OK.", file=out)
            continue
        child = parts[1] if len(parts) > 1 else None
        try:
            state, statement = dialogue_move(state, DialogueMove(word), child)
        except ExplainError as exc:
            print(f"! {exc}", file=out)
            continue
        if statement:
            print(statement, file=out)
        if state.closed:
            break
    return EXIT_OK


def cmd_argue(config: RunConfig, args: argparse.Namespace, out) -> int:
    case = _resolve_case(config, args.case, None)
    tree = build_argument_tree(config.base, config.adf, case, Side(args.side))
    if config.issues_on:
        tree = prune_by_issues(tree, spot_issues(config.adf, case), config.adf)
    print(render_tree(tree, config.fmt), end="", file=out)
    return EXIT_OK


def cmd_audit(config: RunConfig, args: argparse.Namespace, out) -> int:
    decided = config.base.decided()
    agree = sum(
        1 for case in decided if evaluate(config.adf, case.factors).decision is case.winner
    )
    conflicts = audit_consistency(config.adf, config.base, config.model)
    if config.fmt == "structured":
        payload = {
            "agreed": agree,
            "decided": len(decided),
            "conflicts": [c.to_dict() for c in conflicts],
            "lints": [l.to_dict() for l in validate_adf(config.adf, config.base.catalogue)],
        }
        if args.whole_case:
            root_prefs = corpus_preferences(config.adf, config.base, config.model).get(
                config.adf.root, []
            )
            payload["whole_case_preferences"] = [p.to_dict() for p in root_prefs]
        print(json.dumps(payload, indent=2), file=out)
        return EXIT_OK if agree == len(decided) and not conflicts else EXIT_DATA
    print(
        f"{agree}/{len(decided)} outcomes agree; {len(conflicts)} preference conflicts",
        file=out,
    )
    for conflict in conflicts:
        print(
            f"  {conflict.node}: {conflict.first.source} vs {conflict.second.source}",
            file=out,
        )
    for lint in validate_adf(config.adf, config.base.catalogue):
        print(f"  lint: {lint.message}", file=out)
    if args.whole_case:
        root_prefs = corpus_preferences(config.adf, config.base, config.model).get(config.adf.root, [])
        print(f"whole-case preferences at the root: {len(root_prefs)}", file=out)
    return EXIT_OK if agree == len(decided) and not conflicts else EXIT_DATA


def cmd_count(config: RunConfig, args: argparse.Namespace, out) -> int:
    report = resolution_requirements(config.adf, config.base.catalogue)
    if config.fmt == "structured":
        print(json.dumps(report.to_dict(), indent=2), file=out)
        return EXIT_OK
    for row in report.per_node:
        print(f"  {row.node}: {row.children} children, {row.raw} raw, {row.possible} possible", file=out)
    print(f"Total: {report.total_possible} case descriptions ({report.total_raw} before constraints)", file=out)
    return EXIT_OK


def cmd_serve(config: RunConfig, args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(adf=config.adf, base=config.base, phrases=config.phrases, model=config.model)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def run(argv: list[str] | None = None, out=None, stdin=None) -> int:
    out = out or sys.stdout
    stdin = stdin or sys.stdin
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args)
        if args.command == "decide":
            return cmd_decide(config, args, out)
        if args.command == "explain":
            return cmd_explain(config, args, out)
        if args.command == "dialogue":
            return cmd_dialogue(config, args, out, stdin)
        if args.command == "argue":
            return cmd_argue(config, args, out)
        if args.command == "audit":
            return cmd_audit(config, args, out)
        if args.command == "count":
            return cmd_count(config, args, out)
        if args.command == "serve":
            return cmd_serve(config, args)
        parser.error(f"unknown command {args.command!r}")
    except NotFound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except (CorpusError, AdfError, ArgumentError, ExplainError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover - invariant breaches
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def main() -> None:
    sys.exit(run())
