from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import valid_factor_sets
from factorlaw.adf import present_sides, spot_issues
from factorlaw.model import Case, CaseBase, Outcome, Side
from factorlaw.precedent import (
    ConstraintStatus,
    PrecedentError,
    PreferenceModel,
    audit_consistency,
    constrains,
    extract_preferences,
    node_resolution,
    preferences_conflict,
    resolution_requirements,
)


def prefs_at(adf, case, node, model=PreferenceModel.RESULTS):
    return [p for p in extract_preferences(adf, case, model) if p.node == node]


class TestNodeResolution:
    def test_mbl_supports_plaintiff_at_maintain_secrecy(self, adf, base):
        assert node_resolution(adf, base.get("MBL"), "MaintainSecrecy") is Side.PLAINTIFF

    def test_nomeasures_at_maintain_secrecy(self, adf, base):
        assert node_resolution(adf, base.get("NoMeasures"), "MaintainSecrecy") is Side.DEFENDANT

    def test_neutral_node(self, adf, base):
        assert node_resolution(adf, base.get("Deceived"), "ConfidRelation") is None

    def test_undecided_case_rejected(self, adf):
        case = Case("New", frozenset({"F6p"}), Outcome.UNDECIDED)
        with pytest.raises(PrecedentError, match="undecided"):
            node_resolution(adf, case, "MaintainSecrecy")


class TestExtractPreferences:
    def test_deceived_results(self, adf, base):
        deceived = base.get("Deceived")
        (secrecy,) = prefs_at(adf, deceived, "MaintainSecrecy")
        assert secrecy.weaker == frozenset({"F10d"})
        assert secrecy.stronger == frozenset({"F6p"})
        (valuable,) = prefs_at(adf, deceived, "InfoValuable")
        assert valuable.weaker == frozenset({"F24d"})
        assert valuable.stronger == frozenset({"F6p"})

    def test_mason_results_vs_reason(self, adf, base):
        mason = base.get("Mason")
        (results,) = prefs_at(adf, mason, "InfoValuable")
        assert results.weaker == frozenset({"F16d"})
        assert results.stronger == frozenset({"F6p", "F15p"})
        (reason,) = prefs_at(adf, mason, "InfoValuable", PreferenceModel.REASON)
        assert reason.stronger == frozenset({"F6p"})

    def test_one_sided_case_has_no_preferences(self, adf, catalogue):
        case = Case("AllPlaintiff", frozenset({"F6p", "F21p"}), Outcome.PLAINTIFF)
        assert extract_preferences(adf, case) == []

    def test_no_preference_at_neutral_nodes(self, adf, base):
        for case in base.decided():
            for pref in extract_preferences(adf, case):
                assert node_resolution(adf, case, pref.node) is not None

    def test_reason_entailed_by_results(self, adf, base):
        for case in base.decided():
            results = extract_preferences(adf, case)
            for reason in extract_preferences(adf, case, PreferenceModel.REASON):
                matches = [
                    r
                    for r in results
                    if r.node == reason.node and r.weaker == reason.weaker and reason.stronger <= r.stronger
                ]
                assert matches, (case.name, reason.node)

    def test_declared_reason_must_be_subset(self, adf, base):
        bad = Case(
            "Bad",
            base.get("Mason").factors,
            Outcome.PLAINTIFF,
            declared_reasons=(("InfoValuable", frozenset({"F8p"})),),
        )
        with pytest.raises(PrecedentError, match="subset"):
            extract_preferences(adf, bad, PreferenceModel.REASON)

    def test_undecided_case_rejected(self, adf, base):
        case = Case("New", frozenset({"F6p", "F10d"}), Outcome.UNDECIDED)
        with pytest.raises(PrecedentError):
            extract_preferences(adf, case)


class TestConstrains:
    def test_mason_reason_forces_bribed_at_info_valuable(self, adf, base):
        reason = prefs_at(adf, base.get("Mason"), "InfoValuable", PreferenceModel.REASON)
        verdict = constrains(adf, reason, base.get("Bribed"), "InfoValuable")
        assert verdict.status is ConstraintStatus.FORCED
        assert verdict.side is Side.PLAINTIFF
        assert verdict.citations[0][0] == "Mason"

    def test_mason_results_does_not_force_bribed(self, adf, base):
        results = prefs_at(adf, base.get("Mason"), "InfoValuable")
        verdict = constrains(adf, results, base.get("Bribed"), "InfoValuable")
        assert verdict.status is ConstraintStatus.PERMITTED

    def test_identical_node_factors_are_forced(self, adf, base):
        deceived = base.get("Deceived")
        prefs = prefs_at(adf, deceived, "MaintainSecrecy")
        clone = Case("Clone", frozenset({"F6p", "F10d"}), Outcome.UNDECIDED)
        verdict = constrains(adf, prefs, clone, "MaintainSecrecy")
        assert verdict.status is ConstraintStatus.FORCED
        assert verdict.side is node_resolution(adf, deceived, "MaintainSecrecy")

    def test_opposing_preferences_are_inconsistent(self, adf, base):
        pro = Case("Pro", frozenset({"F6p", "F10d"}), Outcome.PLAINTIFF)
        anti = Case("Anti", frozenset({"F6p", "F10d"}), Outcome.DEFENDANT)
        prefs = prefs_at(adf, pro, "MaintainSecrecy") + prefs_at(adf, anti, "MaintainSecrecy")
        assert {p.direction for p in prefs} == {Side.PLAINTIFF, Side.DEFENDANT}
        query = Case("Query", frozenset({"F6p", "F10d"}), Outcome.UNDECIDED)
        verdict = constrains(adf, prefs, query, "MaintainSecrecy")
        assert verdict.status is ConstraintStatus.INCONSISTENT

    def test_wrong_node_preference_rejected(self, adf, base):
        prefs = prefs_at(adf, base.get("Deceived"), "MaintainSecrecy")
        with pytest.raises(PrecedentError):
            constrains(adf, prefs, base.get("Bribed"), "InfoValuable")

    @settings(max_examples=60)
    @given(extra_win=valid_factor_sets(), drop_lose=st.sets(st.sampled_from(["F10d"])))
    def test_a_fortiori_monotonicity(self, adf, base, extra_win, drop_lose):
        prefs = prefs_at(adf, base.get("Deceived"), "MaintainSecrecy")
        node_scope = adf.descendant_factors("MaintainSecrecy")
        weak = Case("Weak", frozenset({"F6p", "F10d"}), Outcome.UNDECIDED)
        first = constrains(adf, prefs, weak, "MaintainSecrecy")
        assert first.status is ConstraintStatus.FORCED
        stronger_factors = (weak.factors | {f for f in extra_win if f.endswith("p")}) - drop_lose
        if "F19d" in stronger_factors and "F6p" in stronger_factors:
            stronger_factors -= {"F19d"}
        strong = Case("Strong", frozenset(stronger_factors), Outcome.UNDECIDED)
        pros, cons = present_sides(adf, "MaintainSecrecy", strong.factors)
        if "F6p" in pros and cons <= frozenset({"F10d"}):
            second = constrains(adf, prefs, strong, "MaintainSecrecy")
            assert second.status is ConstraintStatus.FORCED
            assert second.side is Side.PLAINTIFF


class TestAudit:
    def test_golden_corpus_is_consistent(self, adf, base):
        for model in PreferenceModel:
            assert audit_consistency(adf, base, model) == []

    def test_injected_deviant_case_conflicts(self, adf, base):
        anti = Case("AntiDeceived", frozenset({"F6p", "F10d"}), Outcome.DEFENDANT)
        injected = CaseBase(list(base.cases) + [anti], base.catalogue)
        conflicts = audit_consistency(adf, injected)
        assert conflicts
        assert all(c.node == "MaintainSecrecy" for c in conflicts)
        sources = {(c.first.source, c.second.source) for c in conflicts}
        assert ("Deceived", "AntiDeceived") in sources

    def test_single_case_corpus_never_inconsistent(self, adf, base):
        for case in base.decided():
            solo = CaseBase([case], base.catalogue)
            assert audit_consistency(adf, solo) == []

    def test_replaying_a_case_forces_its_own_resolutions(self, adf, base):
        for case in base.decided():
            prefs = extract_preferences(adf, case)
            for issue in spot_issues(adf, case):
                at_node = [p for p in prefs if p.node == issue.node]
                if not at_node:
                    continue
                verdict = constrains(adf, at_node, case, issue.node)
                assert verdict.status is ConstraintStatus.FORCED
                assert verdict.side is node_resolution(adf, case, issue.node)

    def test_conflict_test_is_symmetric(self, adf, base):
        anti = Case("AntiDeceived", frozenset({"F6p", "F10d"}), Outcome.DEFENDANT)
        (anti_pref,) = [p for p in extract_preferences(adf, anti) if p.node == "MaintainSecrecy"]
        (pro_pref,) = prefs_at(adf, base.get("Deceived"), "MaintainSecrecy")
        assert preferences_conflict(anti_pref, pro_pref)
        assert preferences_conflict(pro_pref, anti_pref)
        assert not preferences_conflict(pro_pref, pro_pref)


class TestResolutionRequirements:
    def test_measures_outsiders(self, adf, catalogue):
        report = resolution_requirements(adf, catalogue)
        row = {r.node: r for r in report.per_node}["MeasuresOutsiders"]
        assert row.raw == 4
        assert row.possible == 3

    def test_maximum_raw_is_32(self, adf, catalogue):
        report = resolution_requirements(adf, catalogue)
        assert max(r.raw for r in report.per_node) == 32

    def test_total_below_150(self, adf, catalogue):
        report = resolution_requirements(adf, catalogue)
        assert report.total_possible < 150
        assert len(report.per_node) == len(adf.nodes)

    def test_exclusion_reduces_maintain_secrecy(self, adf, catalogue):
        report = resolution_requirements(adf, catalogue)
        row = {r.node: r for r in report.per_node}["MaintainSecrecy"]
        assert row.raw == 16
        assert row.possible == 12
