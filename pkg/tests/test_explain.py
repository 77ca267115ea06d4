from __future__ import annotations

import json
import re

import pytest

from conftest import golden
from factorlaw.adf import spot_issues
from factorlaw.explain import (
    DialogueMove,
    ExplainError,
    dialogue_move,
    dialogue_start,
    generate_irac,
    parse_explanation,
    render_explanation,
    render_transcript,
)
from factorlaw.model import Case, Outcome

FACTOR_TOKEN = re.compile(r"\bF\d+[pd]\b")


def explain(base, adf, phrases, name):
    return generate_irac(base.get(name), adf, base, phrases=phrases)


def play(base, adf, phrases, name, issue, moves):
    state = dialogue_start(explain(base, adf, phrases, name), issue, adf, base, phrases)
    statements = []
    for move in moves:
        if isinstance(move, tuple):
            state, statement = dialogue_move(state, move[0], child=move[1])
        else:
            state, statement = dialogue_move(state, move)
        statements.append(statement)
    return state, statements


class TestIrac:
    @pytest.mark.parametrize("name", ["boeing", "bribed", "mason", "nomeasures", "deceived"])
    def test_golden_renderings(self, adf, base, phrases, name):
        explanation = explain(base, adf, phrases, name.capitalize() if name != "nomeasures" else "NoMeasures")
        assert render_explanation(explanation) == golden(f"irac_{name}.txt")

    def test_boeing_cites_trandes_and_laser(self, adf, base, phrases):
        explanation = explain(base, adf, phrases, "Boeing")
        assert len(explanation.items) == 2
        assert "Trandes" in explanation.items[0].rule_text
        assert "Laser" in explanation.items[1].rule_text

    def test_bribed_mirrors_deceived_with_f16d(self, adf, base, phrases):
        bribed = explain(base, adf, phrases, "Bribed")
        deceived = explain(base, adf, phrases, "Deceived")
        assert bribed.items[0].text == deceived.items[0].text  # secrecy issue identical
        assert "F16d" in bribed.items[1].application_text
        assert "F24d" in deceived.items[1].application_text
        assert "Mason" in bribed.items[1].rule_text

    def test_nomeasures_single_root_item_cites_ferranti_and_arco(self, adf, base, phrases):
        explanation = explain(base, adf, phrases, "NoMeasures")
        assert len(explanation.items) == 1
        application = explanation.items[0].application_text
        assert "Ferranti" in application and "F24d" in application
        assert "Arco" in application and "F10d" in application

    def test_mason_rule_set_by_this_court(self, adf, base, phrases):
        explanation = explain(base, adf, phrases, "Mason")
        assert "used by this court" in explanation.items[0].rule_text
        assert explanation.items[0].citation is None

    def test_selectivity(self, adf, base, phrases):
        """Every factor mentioned is present in the case and under an issue."""
        for case in base:
            explanation = explain(base, adf, phrases, case.name)
            issues = spot_issues(adf, case)
            scopes = [adf.descendant_factors(issue.node) for issue in issues]
            for item in explanation.items:
                mentioned = set(FACTOR_TOKEN.findall(item.text))
                for fid in mentioned:
                    assert fid in case.factors, (case.name, fid)
                    assert any(fid in scope for scope in scopes), (case.name, fid)

    def test_contrastiveness(self, adf, base, phrases):
        """Every item spans factors of both sides."""
        for case in base:
            explanation = explain(base, adf, phrases, case.name)
            for item in explanation.items:
                assert item.issue.plaintiff_factors and item.issue.defendant_factors
                if item.preference is not None:
                    assert item.preference.weaker

    def test_default_fired_issue_cites_earliest_supporting_precedent(self, base, phrases):
        """When the deciding rule carries no justification, the citation
        falls back to the earliest precedent whose preference covers the
        configuration (Emery 1968 beats Laser 1983 here)."""
        from factorlaw.adf import parse_adf

        text = (
            "ROOT Claim\n"
            "NODE Claim\n"
            "CHILDREN Secrecy\n"
            "ACCEPT IF Secrecy\n"
            "REJECT\n"
            "NODE Secrecy\n"
            "CHILDREN F6p, F10d\n"
            "REJECT IF F10d AND NOT F6p\n"
            "ACCEPT\n"
        )
        tiny = parse_adf(text)
        case = Case("New", frozenset({"F6p", "F10d"}), Outcome.UNDECIDED)
        explanation = generate_irac(case, tiny, base, phrases=phrases)
        (item,) = explanation.items
        assert item.node == "Secrecy"
        assert "A. H. Emery Co." in item.rule_text

    def test_no_issue_case_renders_decision_only(self, adf, base, phrases):
        case = Case("Lopsided", frozenset({"F6p", "F21p"}), Outcome.UNDECIDED)
        explanation = generate_irac(case, adf, base, phrases=phrases)
        assert explanation.items == ()
        text = render_explanation(explanation)
        assert "plaintiff" in text and "issue" not in text

    def test_deterministic_rendering(self, adf, base, phrases):
        for name in ("Boeing", "Mason"):
            first = render_explanation(explain(base, adf, phrases, name))
            second = render_explanation(explain(base, adf, phrases, name))
            assert first == second

    def test_structured_round_trip(self, adf, base, phrases):
        explanation = explain(base, adf, phrases, "Boeing")
        rendered = render_explanation(explanation, "structured")
        assert parse_explanation(rendered) == explanation.to_dict()
        assert json.loads(rendered)["decision"] == "P"


class TestDialogue:
    def test_start_focuses_issue_node(self, adf, base, phrases):
        state = dialogue_start(explain(base, adf, phrases, "Bribed"), 1, adf, base, phrases)
        assert state.focus == "MaintainSecrecy"
        state = dialogue_start(explain(base, adf, phrases, "Boeing"), 2, adf, base, phrases)
        assert state.focus == "NoticeConfid"

    def test_start_index_out_of_range(self, adf, base, phrases):
        with pytest.raises(ExplainError, match="out of range"):
            dialogue_start(explain(base, adf, phrases, "Bribed"), 3, adf, base, phrases)

    def test_start_with_no_issues(self, adf, base, phrases):
        case = Case("Lopsided", frozenset({"F6p"}), Outcome.UNDECIDED)
        explanation = generate_irac(case, adf, base, phrases=phrases)
        with pytest.raises(ExplainError):
            dialogue_start(explanation, 1, adf, base, phrases)

    def test_bribed_so_chain(self, adf, base, phrases):
        state, statements = play(
            base, adf, phrases, "Bribed", 1,
            [DialogueMove.SO, DialogueMove.SO, DialogueMove.SO, DialogueMove.SO],
        )
        assert statements[0].startswith("Secrecy was Maintained")
        assert statements[1].startswith("The information was a Trade Secret")
        assert statements[2].startswith("The Trade Secret was Misappropriated")
        assert statements[3] == "The decision is for the plaintiff."
        assert render_transcript(state) == golden("dialogue_bribed_so.txt")

    def test_bribed_why_chain_names_the_present_illegal_act_factor(self, adf, base, phrases):
        moves = [
            DialogueMove.SO, DialogueMove.SO, DialogueMove.SO,
            (DialogueMove.WHY, "InfoMisappropriated"),
            DialogueMove.WHY, DialogueMove.WHY, DialogueMove.WHY, DialogueMove.WHY,
        ]
        state, statements = play(base, adf, phrases, "Bribed", 1, moves)
        assert statements[3].startswith("The Information was Misappropriated")
        assert statements[4].startswith("There was Wrongdoing")
        assert statements[5].startswith("There was an Illegal Act")
        assert statements[6] == "The Information was Obtained by Bribery (F2p)."
        assert statements[7] == "No further detail is available."
        assert render_transcript(state) == golden("dialogue_bribed_why.txt")

    def test_boeing_issue1_replies(self, adf, base, phrases):
        state, statements = play(
            base, adf, phrases, "Boeing", 1,
            [DialogueMove.SO, DialogueMove.SO, DialogueMove.WHY, DialogueMove.WHY],
        )
        assert statements[0] == "Secrecy was Maintained (Restatement of Torts section 757, comment(b), bullet 3)."
        assert statements[1] == "The information was a Trade Secret (Restatement of Torts section 757, comment(b))."
        assert statements[2] == "The information was valuable (Restatement of Torts section 757, comment(b), bullet 3)."
        assert statements[3] == "The issue was unopposed. Further, the product was unique (F15p)."
        assert render_transcript(state) == golden("dialogue_boeing_issue1.txt")

    def test_boeing_issue2_replies(self, adf, base, phrases):
        state, statements = play(
            base, adf, phrases, "Boeing", 2,
            [DialogueMove.SO, DialogueMove.SO, DialogueMove.OK],
        )
        assert statements[0].startswith("There was a Confidential Relationship")
        assert statements[1].startswith("The Information was Misappropriated")
        assert state.closed
        assert render_transcript(state) == golden("dialogue_boeing_issue2.txt")

    def test_why_at_factor_leaf(self, adf, base, phrases):
        state, statements = play(
            base, adf, phrases, "Boeing", 1,
            [DialogueMove.SO, DialogueMove.SO, DialogueMove.WHY, DialogueMove.WHY, DialogueMove.WHY],
        )
        assert statements[-1] == "No further detail is available."

    def test_moves_keep_focus_inside_the_tree(self, adf, base, phrases):
        import itertools

        for case_name in ("Bribed", "Mason", "Boeing"):
            explanation = explain(base, adf, phrases, case_name)
            for sequence in itertools.product([DialogueMove.SO, DialogueMove.WHY], repeat=5):
                state = dialogue_start(explanation, 1, adf, base, phrases)
                for move in sequence:
                    state, _ = dialogue_move(state, move)
                    assert state.focus in adf.nodes or any(
                        state.focus in node.children for node in adf.nodes.values()
                    )

    def test_so_then_why_offers_the_origin_claim(self, adf, base, phrases):
        """Climbing with SO? then asking WHY? puts the claim you came from
        back on the table among the focus node's children."""
        state = dialogue_start(explain(base, adf, phrases, "Bribed"), 1, adf, base, phrases)
        from factorlaw.explain import offered_claims

        state, _ = dialogue_move(state, DialogueMove.SO)  # states MaintainSecrecy
        origin = state.focus
        state, _ = dialogue_move(state, DialogueMove.SO)  # climbs to InfoTradeSecret
        offered = offered_claims(state)
        children = [child for child, _ in offered]
        assert origin in children
        claims = dict(offered)
        assert claims[origin].startswith("Secrecy was Maintained")

    def test_move_after_close_rejected(self, adf, base, phrases):
        state, _ = play(base, adf, phrases, "Bribed", 1, [DialogueMove.OK])
        with pytest.raises(ExplainError, match="closed"):
            dialogue_move(state, DialogueMove.SO)

    def test_unknown_child_rejected(self, adf, base, phrases):
        state = dialogue_start(explain(base, adf, phrases, "Bribed"), 1, adf, base, phrases)
        with pytest.raises(ExplainError, match="not a child"):
            dialogue_move(state, DialogueMove.WHY, child="NoSuchNode")

    def test_transcript_is_append_only(self, adf, base, phrases):
        state = dialogue_start(explain(base, adf, phrases, "Bribed"), 1, adf, base, phrases)
        previous = state.transcript
        for move in (DialogueMove.SO, DialogueMove.WHY, DialogueMove.SO):
            state, _ = dialogue_move(state, move)
            assert state.transcript[: len(previous)] == previous
            previous = state.transcript

    def test_structured_transcript(self, adf, base, phrases):
        state, _ = play(base, adf, phrases, "Boeing", 1, [DialogueMove.SO])
        payload = json.loads(render_transcript(state, "structured"))
        assert payload["case"] == "Boeing"
        assert payload["transcript"][-1]["move"] == "SO?"
