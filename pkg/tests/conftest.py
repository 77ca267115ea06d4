from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from factorlaw import assets
from factorlaw.explain import default_phrases
from factorlaw.model import CaseBase, default_catalogue

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def adf():
    return assets.load_adf()


@pytest.fixture(scope="session")
def base():
    return assets.load_cases()


@pytest.fixture(scope="session")
def catalogue():
    return default_catalogue()


@pytest.fixture(scope="session")
def phrases():
    return default_phrases()


@pytest.fixture(scope="session")
def trio(base):
    """The three-case example corpus (cited precedents plus the new case)."""
    return CaseBase(
        [base.get(name) for name in ("Deceived", "NoMeasures", "Bribed")], base.catalogue
    )


def golden(name: str) -> str:
    return (GOLDEN_DIR / name).read_text()


_ALL_IDS = sorted(f.id for f in default_catalogue())


def valid_factor_sets() -> st.SearchStrategy[frozenset[str]]:
    """Random factor sets respecting the catalogue constraints."""

    def repair(raw: set[str]) -> frozenset[str]:
        fixed = set(raw)
        if "F6p" in fixed:
            fixed.discard("F19d")
        if "F12p" in fixed:
            fixed.add("F10d")
        return frozenset(fixed)

    return st.sets(st.sampled_from(_ALL_IDS), max_size=10).map(repair)
