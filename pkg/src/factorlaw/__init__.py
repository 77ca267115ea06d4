"""Factor-based legal decision engine.

Decides factor-set cases against an issue tree of acceptance rules,
spots the contested issues, justifies them by precedent-derived
preferences, and explains outcomes in IRAC form with an interactive
SO?/WHY? dialogue and what-if counterfactuals.
"""

from .adf import Adf, EvaluationTrace, Issue, Verdict, evaluate, parse_adf, spot_issues, validate_adf
from .model import (
    Case,
    CaseBase,
    Factor,
    FactorCatalogue,
    Outcome,
    Side,
    Violation,
    default_catalogue,
    factor_side,
    parse_case_corpus,
    serialize_case_corpus,
    validate_case,
)
from .precedent import (
    ConstraintStatus,
    ConstraintVerdict,
    Preference,
    PreferenceModel,
    audit_consistency,
    constrains,
    extract_preferences,
    node_resolution,
    resolution_requirements,
)

__version__ = "0.1.0"

__all__ = [
    "Adf",
    "Case",
    "CaseBase",
    "ConstraintStatus",
    "ConstraintVerdict",
    "EvaluationTrace",
    "Factor",
    "FactorCatalogue",
    "Issue",
    "Outcome",
    "Preference",
    "PreferenceModel",
    "Side",
    "Verdict",
    "Violation",
    "audit_consistency",
    "constrains",
    "default_catalogue",
    "evaluate",
    "extract_preferences",
    "factor_side",
    "node_resolution",
    "parse_adf",
    "parse_case_corpus",
    "resolution_requirements",
    "serialize_case_corpus",
    "spot_issues",
    "validate_adf",
    "validate_case",
]
