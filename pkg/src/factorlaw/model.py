"""Factor catalogue, case representation, and corpus ingestion.

Cases are flat sets of base-level factors, each factor favouring one
party.  A corpus is a JSON document bundling a catalogue (optional
override of the built-in one), the decided cases, and any dimension
specifications used for factor ascription.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass
from enum import Enum


class Side(Enum):
    PLAINTIFF = "P"
    DEFENDANT = "D"

    @property
    def opponent(self) -> "Side":
        return Side.DEFENDANT if self is Side.PLAINTIFF else Side.PLAINTIFF

    def __str__(self) -> str:
        return "plaintiff" if self is Side.PLAINTIFF else "defendant"


class Outcome(Enum):
    PLAINTIFF = "P"
    DEFENDANT = "D"
    UNDECIDED = "?"

    @property
    def side(self) -> Side | None:
        if self is Outcome.UNDECIDED:
            return None
        return Side(self.value)


class CorpusError(Exception):
    """Raised when a corpus document cannot be parsed or is invalid."""


class UnknownFactorError(CorpusError):
    """Raised when a factor token cannot be resolved against the catalogue."""


class CorpusWarning(UserWarning):
    """Emitted when a factor token is salvaged by normalization."""


@dataclass(frozen=True)
class Factor:
    id: str
    label: str
    side: Side


@dataclass(frozen=True)
class Violation:
    """A constraint violated by a case; data, not an exception."""

    kind: str  # "unknown-factor" | "exclusion" | "implication"
    factors: tuple[str, ...]
    message: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "factors": list(self.factors), "message": self.message}


_TOKEN_RE = re.compile(r"^([A-Za-z])(\d+)([PDpd]?)$")


class FactorCatalogue:
    """The base-level factors plus exclusion and implication constraints."""

    def __init__(
        self,
        factors: list[Factor],
        exclusions: list[tuple[str, str]] | None = None,
        implications: list[tuple[str, str]] | None = None,
    ):
        self._by_id: dict[str, Factor] = {}
        for f in factors:
            if f.id in self._by_id:
                raise CorpusError(f"duplicate factor id {f.id}")
            if _TOKEN_RE.match(f.id):
                expected = "p" if f.side is Side.PLAINTIFF else "d"
                if f.id[-1] != expected:
                    raise CorpusError(f"factor {f.id} suffix disagrees with side {f.side}")
            self._by_id[f.id] = f
        self.factors: tuple[Factor, ...] = tuple(factors)
        self.exclusions: frozenset[frozenset[str]] = frozenset(
            frozenset(pair) for pair in (exclusions or [])
        )
        self.implications: tuple[tuple[str, str], ...] = tuple(implications or [])
        for pair in self.exclusions:
            for fid in pair:
                self._require(fid)
        for ante, cons in self.implications:
            self._require(ante)
            self._require(cons)

    def _require(self, fid: str) -> Factor:
        if fid not in self._by_id:
            raise UnknownFactorError(f"unknown factor id {fid!r}")
        return self._by_id[fid]

    def __contains__(self, fid: str) -> bool:
        return fid in self._by_id

    def __iter__(self):
        return iter(self.factors)

    def get(self, fid: str) -> Factor:
        return self._require(fid)

    def side_of(self, fid: str) -> Side:
        return self._require(fid).side

    def label_of(self, fid: str) -> str:
        return self._require(fid).label

    def ids(self) -> frozenset[str]:
        return frozenset(self._by_id)

    def normalize_token(self, token: str) -> tuple[str, str | None]:
        """Resolve a raw factor token to a canonical id.

        Returns (canonical_id, warning_message_or_None).  Tokens are
        case-insensitive; a token whose shape or side letter does not
        match any catalogue entry is salvaged when its number identifies
        a unique factor (corpus sources are not reliable about side
        letters).  Unresolvable tokens raise UnknownFactorError.
        """
        raw = token.strip()
        if raw in self._by_id:
            return raw, None
        m = _TOKEN_RE.match(raw)
        if not m:
            raise UnknownFactorError(f"malformed factor token {raw!r}")
        number, suffix = m.group(2), m.group(3).lower()
        canonical = f"F{number}{suffix}"
        if canonical in self._by_id:
            if canonical != raw:
                return canonical, f"factor token {raw!r} normalized to {canonical}"
            return canonical, None
        candidates = [f.id for f in self.factors if f.id[1:-1] == number]
        if len(candidates) == 1:
            return candidates[0], f"factor token {raw!r} normalized to {candidates[0]}"
        raise UnknownFactorError(f"unknown factor token {raw!r}")

    def to_dict(self) -> dict:
        return {
            "factors": [
                {"id": f.id, "label": f.label, "side": f.side.value} for f in self.factors
            ],
            "exclusions": sorted(
                (sorted(pair, key=factor_sort_key) for pair in self.exclusions),
                key=lambda pair: [factor_sort_key(fid) for fid in pair],
            ),
            "implications": [list(pair) for pair in self.implications],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "FactorCatalogue":
        try:
            factors = [
                Factor(id=f["id"], label=f["label"], side=Side(f["side"]))
                for f in payload["factors"]
            ]
        except (KeyError, ValueError) as exc:
            raise CorpusError(f"bad catalogue entry: {exc}") from exc
        exclusions = [tuple(pair) for pair in payload.get("exclusions", [])]
        implications = [tuple(pair) for pair in payload.get("implications", [])]
        return cls(factors, exclusions, implications)


# The 26 base-level factors of the US trade-secrets domain, with the side
# each one favours encoded in the id suffix.
_FACTOR_TABLE = [
    ("F1d", "Disclosure-In-Negotiations"),
    ("F2p", "Bribe-Employee"),
    ("F3d", "Employee-Sole-Developer"),
    ("F4p", "Agreed-Not-To-Disclose"),
    ("F5d", "Agreement-Not-Specific"),
    ("F6p", "Security-Measures"),
    ("F7p", "Brought-Tools"),
    ("F8p", "Competitive-Advantage"),
    ("F10d", "Secrets-Disclosed-Outsiders"),
    ("F11d", "Vertical-Knowledge"),
    ("F12p", "Outsider-Disclosures-Restricted"),
    ("F13p", "Noncompetition-Agreement"),
    ("F14p", "Restricted-Materials-Used"),
    ("F15p", "Unique-Product"),
    ("F16d", "Info-Reverse-Engineerable"),
    ("F17d", "Info-Independently-Generated"),
    ("F18p", "Identical-Products"),
    ("F19d", "No-Security-Measures"),
    ("F20d", "Info-Known-To-Competitors"),
    ("F21p", "Knew-Info-Confidential"),
    ("F22p", "Invasive-Techniques"),
    ("F23d", "Waiver-Of-Confidentiality"),
    ("F24d", "Info-Obtainable-Elsewhere"),
    ("F25d", "Info-Reverse-Engineered"),
    ("F26p", "Deception"),
    ("F27d", "Disclosure-In-Public-Forum"),
]


def default_catalogue() -> FactorCatalogue:
    """The standard trade-secrets catalogue.

    Security measures is the one aspect whose absence is itself a reason
    for the other side, hence the F6p/F19d exclusion; restricting
    disclosures to outsiders presupposes such disclosures, hence
    F12p implies F10d.
    """
    factors = [
        Factor(fid, label, Side.PLAINTIFF if fid.endswith("p") else Side.DEFENDANT)
        for fid, label in _FACTOR_TABLE
    ]
    return FactorCatalogue(
        factors,
        exclusions=[("F6p", "F19d")],
        implications=[("F12p", "F10d")],
    )


@dataclass(frozen=True)
class Case:
    name: str
    factors: frozenset[str]
    outcome: Outcome
    citation: str | None = None
    dimensional_facts: tuple[tuple[str, float], ...] = ()
    declared_reasons: tuple[tuple[str, frozenset[str]], ...] = ()

    @property
    def decided(self) -> bool:
        return self.outcome is not Outcome.UNDECIDED

    @property
    def winner(self) -> Side | None:
        return self.outcome.side

    def facts(self) -> dict[str, float]:
        return dict(self.dimensional_facts)

    def reasons(self) -> dict[str, frozenset[str]]:
        return dict(self.declared_reasons)

    def with_factors(self, factors: frozenset[str]) -> "Case":
        return Case(
            name=self.name,
            factors=factors,
            outcome=self.outcome,
            citation=self.citation,
            dimensional_facts=self.dimensional_facts,
            declared_reasons=self.declared_reasons,
        )

    def year(self) -> int | None:
        """Decision year, parsed from the citation string when present."""
        if not self.citation:
            return None
        years = re.findall(r"\((?:[^()\d]*?)(\d{4})\)", self.citation)
        if not years:
            years = re.findall(r"\b(1[89]\d\d|20\d\d)\b", self.citation)
        return int(years[-1]) if years else None

    def to_dict(self) -> dict:
        payload: dict = {
            "name": self.name,
            "outcome": self.outcome.value,
            "factors": sorted(self.factors, key=factor_sort_key),
        }
        if self.citation:
            payload["citation"] = self.citation
        if self.dimensional_facts:
            payload["dimensions"] = {k: v for k, v in self.dimensional_facts}
        if self.declared_reasons:
            payload["reasons"] = {
                node: sorted(fids, key=factor_sort_key) for node, fids in self.declared_reasons
            }
        return payload


def factor_sort_key(fid: str) -> tuple[int, str]:
    m = _TOKEN_RE.match(fid)
    return (int(m.group(2)) if m else 0, fid)


def factor_side(fid: str, catalogue: FactorCatalogue) -> Side:
    """The side favoured by a factor."""
    return catalogue.side_of(fid)


def validate_case(case: Case, catalogue: FactorCatalogue) -> list[Violation]:
    """Every exclusion/implication/unknown-id constraint the case violates.

    Violations are data: an empty list means the case is valid.
    """
    return validate_factors(case.factors, catalogue)


def validate_factors(factors: frozenset[str] | set[str], catalogue: FactorCatalogue) -> list[Violation]:
    violations: list[Violation] = []
    for fid in sorted(factors, key=factor_sort_key):
        if fid not in catalogue:
            violations.append(
                Violation("unknown-factor", (fid,), f"factor {fid} is not in the catalogue")
            )
    for pair in sorted(catalogue.exclusions, key=lambda p: sorted(p)):
        if pair <= factors:
            a, b = sorted(pair)
            violations.append(
                Violation("exclusion", (a, b), f"factors {a} and {b} exclude each other")
            )
    for ante, cons in catalogue.implications:
        if ante in factors and cons not in factors:
            violations.append(
                Violation(
                    "implication", (ante, cons), f"{ante} cannot be present without {cons}"
                )
            )
    return violations


class CaseBase:
    """A named collection of cases sharing one catalogue."""

    def __init__(self, cases: list[Case], catalogue: FactorCatalogue,
                 dimension_specs: list | None = None,
                 composite_specs: list | None = None):
        names = [c.name for c in cases]
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise CorpusError(f"duplicate case names: {sorted(dupes)}")
        for case in cases:
            violations = validate_case(case, catalogue)
            if violations:
                details = "; ".join(v.message for v in violations)
                raise CorpusError(f"case {case.name!r} is invalid: {details}")
        self.cases: tuple[Case, ...] = tuple(cases)
        self.catalogue = catalogue
        self.dimension_specs = tuple(dimension_specs or ())
        self.composite_specs = tuple(composite_specs or ())
        self._by_name = {c.name: c for c in cases}

    def __iter__(self):
        return iter(self.cases)

    def __len__(self) -> int:
        return len(self.cases)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def get(self, name: str) -> Case:
        if name not in self._by_name:
            raise KeyError(f"unknown case {name!r}")
        return self._by_name[name]

    def decided(self) -> list[Case]:
        return [c for c in self.cases if c.decided]

    def to_dict(self) -> dict:
        payload = {
            "catalogue": self.catalogue.to_dict(),
            "cases": [c.to_dict() for c in self.cases],
        }
        if self.dimension_specs:
            payload["dimensions"] = [spec.to_dict() for spec in self.dimension_specs]
        if self.composite_specs:
            payload["composites"] = [spec.to_dict() for spec in self.composite_specs]
        return payload

    def __eq__(self, other) -> bool:
        return isinstance(other, CaseBase) and self.to_dict() == other.to_dict()


def parse_case_corpus(text: str, catalogue: FactorCatalogue | None = None) -> CaseBase:
    """Parse a corpus document into a CaseBase.

    The document's own catalogue section, when present, overrides the
    supplied or built-in catalogue.  Factor tokens are normalized to
    canonical ids, with a CorpusWarning for each salvaged token.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"corpus is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise CorpusError("corpus document must be a JSON object")
    if "catalogue" in payload and payload["catalogue"]:
        catalogue = FactorCatalogue.from_dict(payload["catalogue"])
    elif catalogue is None:
        catalogue = default_catalogue()

    cases: list[Case] = []
    for index, record in enumerate(payload.get("cases", [])):
        where = f"case record {index}"
        if not isinstance(record, dict) or "name" not in record:
            raise CorpusError(f"{where}: missing name")
        where = f"case {record['name']!r}"
        try:
            outcome = Outcome(record.get("outcome", "?"))
        except ValueError:
            raise CorpusError(f"{where}: bad outcome {record.get('outcome')!r}") from None
        factors: set[str] = set()
        for token in record.get("factors", []):
            try:
                canonical, note = catalogue.normalize_token(str(token))
            except UnknownFactorError as exc:
                raise CorpusError(f"{where}: {exc}") from exc
            if note:
                warnings.warn(f"{where}: {note}", CorpusWarning, stacklevel=2)
            factors.add(canonical)
        reasons: list[tuple[str, frozenset[str]]] = []
        for node, fids in sorted(record.get("reasons", {}).items()):
            normalized = frozenset(catalogue.normalize_token(str(t))[0] for t in fids)
            reasons.append((node, normalized))
        dims = tuple(sorted((str(k), float(v)) for k, v in record.get("dimensions", {}).items()))
        cases.append(
            Case(
                name=str(record["name"]),
                factors=frozenset(factors),
                outcome=outcome,
                citation=record.get("citation"),
                dimensional_facts=dims,
                declared_reasons=tuple(reasons),
            )
        )

    from .magnitude import CompositeFactorSpec, DimensionSpec

    dimension_specs = [DimensionSpec.from_dict(d) for d in payload.get("dimensions", [])]
    composite_specs = [CompositeFactorSpec.from_dict(d) for d in payload.get("composites", [])]
    return CaseBase(cases, catalogue, dimension_specs, composite_specs)


def serialize_case_corpus(base: CaseBase) -> str:
    """Canonical JSON rendering; parse(serialize(base)) == base."""
    return json.dumps(base.to_dict(), indent=2, sort_keys=False) + "\n"
