"""HTTP facade over the engine for the web UI and other clients.

Everything except dialogue sessions is stateless: each request is a
pure function of its body and the assets loaded at startup.  Sessions
live in memory, are evicted after an idle period, and moves on one
session are serialized by a per-session lock.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import assets
from .adf import Adf, evaluate, spot_issues
from .argument import ArgumentError, build_argument_tree, prune_by_issues
from .explain import (
    DialogueMove,
    ExplainError,
    PhraseBook,
    default_phrases,
    dialogue_move,
    dialogue_start,
    generate_irac,
    offered_claims,
)
from .model import Case, CaseBase, Outcome, Side, UnknownFactorError, validate_factors
from .precedent import PreferenceModel

DEFAULT_SESSION_TTL = 1800.0


class DecideRequest(BaseModel):
    case: str | None = None
    factors: list[str] | None = None


class ExplainRequest(BaseModel):
    case: str | None = None
    factors: list[str] | None = None
    model: str = "results"


class DialogueRequest(BaseModel):
    case: str | None = None
    factors: list[str] | None = None
    issue: int = 1
    model: str = "results"


class MoveRequest(BaseModel):
    move: str
    child: str | None = None


class WhatIfRequest(BaseModel):
    case: str
    add: list[str] = []
    remove: list[str] = []


@dataclass
class _Session:
    state: object
    last_used: float
    lock: threading.Lock = field(default_factory=threading.Lock)


class _SessionStore:
    def __init__(self, ttl: float):
        self.ttl = ttl
        self._sessions: dict[str, _Session] = {}
        self._expired: set[str] = set()
        self._lock = threading.Lock()

    def create(self, state) -> str:
        session_id = uuid.uuid4().hex
        with self._lock:
            self._sessions[session_id] = _Session(state=state, last_used=time.monotonic())
        return session_id

    def _purge(self) -> None:
        now = time.monotonic()
        stale = [sid for sid, s in self._sessions.items() if now - s.last_used > self.ttl]
        for sid in stale:
            del self._sessions[sid]
            self._expired.add(sid)

    def acquire(self, session_id: str) -> _Session:
        with self._lock:
            self._purge()
            if session_id in self._sessions:
                session = self._sessions[session_id]
                session.last_used = time.monotonic()
                return session
            if session_id in self._expired:
                raise HTTPException(status_code=410, detail="session expired")
            raise HTTPException(status_code=404, detail="unknown session")


def create_app(
    adf: Adf | None = None,
    base: CaseBase | None = None,
    phrases: PhraseBook | None = None,
    model: PreferenceModel = PreferenceModel.RESULTS,
    session_ttl: float = DEFAULT_SESSION_TTL,
) -> FastAPI:
    adf = adf or assets.load_adf()
    base = base or assets.load_cases()
    phrases = phrases or default_phrases()
    sessions = _SessionStore(session_ttl)
    app = FastAPI(title="factorlaw", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def resolve_case(name: str | None, factors: list[str] | None, default_name: str = "AdHoc") -> Case:
        if factors is not None:
            try:
                resolved = frozenset(base.catalogue.normalize_token(t)[0] for t in factors)
            except UnknownFactorError as exc:
                raise HTTPException(status_code=400, detail={"error": str(exc)}) from exc
            violations = validate_factors(resolved, base.catalogue)
            if violations:
                raise HTTPException(
                    status_code=400,
                    detail={"error": "invalid factors", "violations": [v.to_dict() for v in violations]},
                )
            return Case(name=name or default_name, factors=resolved, outcome=Outcome.UNDECIDED)
        if not name:
            raise HTTPException(status_code=400, detail={"error": "case or factors required"})
        if name not in base:
            raise HTTPException(status_code=404, detail={"error": f"unknown case {name!r}"})
        return base.get(name)

    def decision_payload(case: Case) -> dict:
        trace = evaluate(adf, case.factors)
        issues = spot_issues(adf, case)
        return {
            "case": case.name,
            "factors": sorted(case.factors),
            "decision": trace.decision.value,
            "issues": [issue.to_dict() for issue in issues],
            "trace": {
                name: {
                    "verdict": trace.results[name].verdict.value,
                    "rule": str(adf.nodes[name].rules[trace.results[name].fired_index]),
                    "justification": trace.results[name].justification,
                    "children": list(adf.nodes[name].children),
                }
                for name in adf.order
            },
        }

    def preference_model(value: str) -> PreferenceModel:
        try:
            return PreferenceModel(value)
        except ValueError:
            raise HTTPException(status_code=400, detail={"error": f"unknown model {value!r}"}) from None

    @app.get("/cases")
    def list_cases() -> dict:
        return {
            "cases": [
                {
                    "name": c.name,
                    "citation": c.citation,
                    "outcome": c.outcome.value,
                    "factors": sorted(c.factors),
                }
                for c in base
            ]
        }

    @app.get("/cases/{name}")
    def get_case(name: str) -> dict:
        if name not in base:
            raise HTTPException(status_code=404, detail={"error": f"unknown case {name!r}"})
        case = base.get(name)
        payload = case.to_dict()
        payload["labels"] = {
            fid: base.catalogue.label_of(fid) for fid in case.factors if fid in base.catalogue
        }
        return payload

    @app.get("/catalogue")
    def get_catalogue() -> dict:
        return base.catalogue.to_dict()

    @app.post("/decide")
    def decide(request: DecideRequest) -> dict:
        return decision_payload(resolve_case(request.case, request.factors))

    @app.post("/explain")
    def explain(request: ExplainRequest) -> dict:
        case = resolve_case(request.case, request.factors)
        explanation = generate_irac(case, adf, base, preference_model(request.model), phrases)
        return explanation.to_dict()

    @app.post("/dialogue")
    def open_dialogue(request: DialogueRequest) -> dict:
        case = resolve_case(request.case, request.factors)
        explanation = generate_irac(case, adf, base, preference_model(request.model), phrases)
        if not explanation.items:
            raise HTTPException(status_code=400, detail={"error": "the case has no contested issues"})
        try:
            state = dialogue_start(explanation, request.issue, adf, base, phrases)
        except ExplainError as exc:
            raise HTTPException(status_code=400, detail={"error": str(exc)}) from exc
        session_id = sessions.create(state)
        return {
            "session": session_id,
            "case": case.name,
            "issue": request.issue,
            "issues": [item.issue.to_dict() for item in explanation.items],
            "focus": state.focus,
            "offered": [{"child": c, "claim": claim} for c, claim in offered_claims(state)],
            "transcript": [{"move": m, "statement": s} for m, s in state.transcript],
        }

    @app.post("/dialogue/{session_id}/move")
    def move(session_id: str, request: MoveRequest) -> dict:
        session = sessions.acquire(session_id)
        try:
            kind = DialogueMove(request.move.rstrip("?").upper())
        except ValueError:
            raise HTTPException(status_code=400, detail={"error": f"unknown move {request.move!r}"}) from None
        with session.lock:
            try:
                state, statement = dialogue_move(session.state, kind, request.child)
            except ExplainError as exc:
                raise HTTPException(status_code=400, detail={"error": str(exc)}) from exc
            session.state = state
        return {
            "statement": statement,
            "focus": state.focus,
            "closed": state.closed,
            "offered": [{"child": c, "claim": claim} for c, claim in offered_claims(state)],
            "transcript": [{"move": m, "statement": s} for m, s in state.transcript],
        }

    @app.post("/whatif")
    def whatif(request: WhatIfRequest) -> dict:
        if request.case not in base:
            raise HTTPException(status_code=404, detail={"error": f"unknown case {request.case!r}"})
        before_case = base.get(request.case)
        try:
            add = {base.catalogue.normalize_token(t)[0] for t in request.add}
            remove = {base.catalogue.normalize_token(t)[0] for t in request.remove}
        except UnknownFactorError as exc:
            raise HTTPException(status_code=400, detail={"error": str(exc)}) from exc
        after_factors = frozenset((before_case.factors - remove) | add)
        violations = validate_factors(after_factors, base.catalogue)
        if violations:
            raise HTTPException(
                status_code=400,
                detail={"error": "invalid factors", "violations": [v.to_dict() for v in violations]},
            )
        after_case = Case(
            name=f"{before_case.name} (what-if)", factors=after_factors, outcome=Outcome.UNDECIDED
        )
        before = decision_payload(before_case)
        after = decision_payload(after_case)
        flipped = sorted(
            name
            for name in before["trace"]
            if before["trace"][name]["verdict"] != after["trace"][name]["verdict"]
        )
        return {"before": before, "after": after, "flipped": flipped}

    @app.get("/argue/{name}")
    def argue(
        name: str,
        issues: str = Query("on", pattern="^(on|off)$"),
        side: str = Query("P", pattern="^[PD]$"),
    ) -> dict:
        if name not in base:
            raise HTTPException(status_code=404, detail={"error": f"unknown case {name!r}"})
        case = base.get(name)
        try:
            tree = build_argument_tree(base, adf, case, Side(side))
        except ArgumentError as exc:
            raise HTTPException(status_code=400, detail={"error": str(exc)}) from exc
        if issues == "on":
            tree = prune_by_issues(tree, spot_issues(adf, case), adf)
        return tree.to_dict()

    return app
