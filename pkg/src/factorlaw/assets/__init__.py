"""Loaders for the bundled trade-secrets assets."""

from __future__ import annotations

import json
import os
import warnings
from importlib import resources

from ..adf import Adf, parse_adf
from ..model import CaseBase, CorpusWarning, parse_case_corpus

ASSET_DIR_ENV = "FACTORLAW_ASSETS"


def _read_asset(name: str) -> str:
    override = os.environ.get(ASSET_DIR_ENV)
    if override:
        path = os.path.join(override, name)
        if os.path.exists(path):
            with open(path, encoding="utf-8") as handle:
                return handle.read()
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def load_adf(path: str | None = None) -> Adf:
    if path:
        with open(path, encoding="utf-8") as handle:
            return parse_adf(handle.read())
    return parse_adf(_read_asset("trade_secrets.adf"))


def load_cases(path: str | None = None, quiet: bool = True) -> CaseBase:
    if path:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    else:
        text = _read_asset("trade_secrets_cases.json")
    if quiet:
        # The bundled corpus keeps its sources' raw factor tokens; the
        # salvage warnings are expected there.
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", CorpusWarning)
            return parse_case_corpus(text)
    return parse_case_corpus(text)


def load_fiscal_demo() -> CaseBase:
    return parse_case_corpus(_read_asset("fiscal_domicile.json"))


def load_phrases(path: str | None = None) -> dict:
    if path:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    return json.loads(_read_asset("trade_secrets_phrases.json"))
