"""Tests for reading and writing .coef annotation files."""
from fractions import Fraction

import pytest

from src.models.annotation import LogIndex, RankIndex
from src.potential.coef_file import parse_coef, render_coef
from src.utils.errors import ProgramSyntaxError

SPLAY_ARITIES = {"splay": (1, 1)}


class TestParseCoef:
    def test_splay_fixture(self, corpus_dir):
        signatures = parse_coef((corpus_dir / "splay.coef").read_text(), SPLAY_ARITIES)

        splay = signatures["splay"]
        assert splay.costed.argument[RankIndex(1)] == 1
        assert splay.costed.argument[LogIndex((1,), 0)] == 3
        assert splay.costed.argument[LogIndex((0,), 2)] == 1
        assert splay.costed.result.indices() == (RankIndex(1),)
        assert len(splay.cost_free) == 1
        assert splay.cost_free[0].argument[LogIndex((1,), 0)] == 1
        assert splay.cost_free[0].result[LogIndex((1,), 0)] == 1

    def test_nested_let_fixture(self, corpus_dir):
        text = (corpus_dir / "nested_let.coef").read_text()

        signature = parse_coef(text, {"nested_let": (4, 1)})["nested_let"]

        assert signature.costed.argument[LogIndex((1, 1, 1, 0), 0)] == 1
        assert signature.costed.argument[RankIndex(4)] == 1
        assert signature.cost_free == []

    def test_arities_inferred_without_a_program(self):
        text = "fn f\nwith-cost:\n  q2 = 1/2\n  q(1 1 | 0) = 1\nresult:\n  q(| 2) = 1\n"

        signature = parse_coef(text)["f"]

        assert (signature.argument_arity, signature.result_arity) == (2, 0)
        assert signature.costed.argument[RankIndex(2)] == Fraction(1, 2)

    def test_missing_result_section_means_zero(self):
        signature = parse_coef("fn splay\nwith-cost:\n  q* = 1\n", SPLAY_ARITIES)["splay"]

        assert len(signature.costed.result) == 0

    def test_cost_free_pairs_default_to_empty(self):
        signature = parse_coef("fn splay\nwith-cost:\n  q* = 1\n", SPLAY_ARITIES)["splay"]

        pairs = signature.cost_free_pairs()
        assert len(pairs) == 1
        assert len(pairs[0].argument) == 0

    @pytest.mark.parametrize(
        "text",
        [
            "with-cost:\n  q* = 1\n",
            "fn splay\n  q* = 1\n",
            "fn splay\nwith-cost:\n  q* = -1\n",
            "fn splay\nwith-cost:\n  q* = one\n",
            "fn splay\nwith-cost:\n  q(0 | 0) = 1\n",
            "fn splay\nwith-cost:\n  q* = 1\n  q* = 2\n",
            "fn splay\nwith-cost:\n  q(1 1 | 0) = 1\n",
            "fn splay\nresult:\n  q* = 1\n",
            "fn other\nwith-cost:\n  q* = 1\n",
            "fn splay\nwith-cost:\n  q* = 1\nfn splay\nwith-cost:\n  q* = 1\n",
        ],
    )
    def test_malformed_files_raise(self, text):
        with pytest.raises(ProgramSyntaxError):
            parse_coef(text, SPLAY_ARITIES)

    def test_error_reports_line(self):
        with pytest.raises(ProgramSyntaxError) as excinfo:
            parse_coef("fn splay\nwith-cost:\n  q* = 1\n  bogus\n", SPLAY_ARITIES)

        assert excinfo.value.line == 4


class TestRenderCoef:
    def test_render_then_parse_keeps_coefficients(self, corpus_dir):
        original = parse_coef((corpus_dir / "splay.coef").read_text(), SPLAY_ARITIES)

        rendered = render_coef(original.values())
        reparsed = parse_coef(rendered, SPLAY_ARITIES)

        assert reparsed["splay"].costed.argument == original["splay"].costed.argument
        assert reparsed["splay"].cost_free[0].result == original["splay"].cost_free[0].result

    def test_single_tree_uses_star(self, corpus_dir):
        original = parse_coef((corpus_dir / "splay.coef").read_text(), SPLAY_ARITIES)

        rendered = render_coef(original.values())

        assert "  q* = 1" in rendered
        assert "  q(1 | 0) = 3" in rendered
        assert rendered.startswith("fn splay\nwith-cost:\n")
