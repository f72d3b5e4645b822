"""Tests for tactic files."""
import pytest

from src.typesystem.tactics import parse_tactics
from src.utils.errors import ProgramSyntaxError, TacticError


class TestParseTactics:
    def test_splay_fixture(self, corpus_dir):
        tactics = parse_tactics((corpus_dir / "splay.tac").read_text(), "splay.tac")

        kinds = [directive.kind for directive in tactics.directives]
        assert kinds.count("admit") == 7
        assert kinds.count("weaken") == 2
        assert tactics.functions() == {"splay"}
        assert tactics.admitted("splay", (0,))
        assert not tactics.admitted("splay", (1,))

    def test_directive_with_variable(self):
        tactics = parse_tactics("insert @ /1 : share t\ndelete @ / : wvar x -- comment\n")

        share, wvar = tactics.directives
        assert (share.function, share.path, share.kind, share.variable) == (
            "insert",
            (1,),
            "share",
            "t",
        )
        assert wvar.path == ()
        assert str(wvar) == "delete @ / : wvar x"

    def test_directives_at_path_keep_file_order(self):
        tactics = parse_tactics("f @ /1 : shift\nf @ /1 : weaken\ng @ /1 : weaken\n")

        assert [d.kind for d in tactics.at("f", (1,))] == ["shift", "weaken"]

    @pytest.mark.parametrize(
        "text",
        [
            "f @ /1 : rotate\n",
            "f @ /1 : share\n",
            "f @ /1 : weaken t\n",
            "f @ 1/0 : weaken\n",
            "f /1 weaken\n",
        ],
    )
    def test_malformed_lines_raise(self, text):
        with pytest.raises(ProgramSyntaxError):
            parse_tactics(text)


class TestConsumption:
    def test_unconsumed_directives_raise(self):
        tactics = parse_tactics("f @ /1 : weaken\nf @ /0 : weaken\n")
        tactics.consume(tactics.directives[0])

        with pytest.raises(TacticError) as excinfo:
            tactics.check_consumed()

        assert "line 2" in str(excinfo.value)

    def test_directives_below_an_admitted_path_are_ignored(self):
        tactics = parse_tactics("f @ /1 : admit\nf @ /1/0 : weaken\n")
        tactics.consume(tactics.directives[0])

        tactics.check_consumed([("f", (1,))])

    def test_admitted_path_itself_still_needs_consuming(self):
        tactics = parse_tactics("f @ /1 : admit\n")

        assert tactics.unconsumed([("f", (1,))]) == tactics.directives
