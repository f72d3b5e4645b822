"""Tests for the .core parser and value literals."""
import pytest

from src.models.program import (
    TREE,
    Cmp,
    FunApp,
    If,
    Leaf,
    Let,
    Match,
    Node,
    Var,
    format_expr,
)
from src.models.value import LEAF, BaseValue, BoolValue, NodeValue, node
from src.syntax.parser import parse_expression, parse_program, parse_value
from src.utils.errors import ProgramSyntaxError


class TestParseProgram:
    """Definitions, declarations and comments."""

    def test_splay_corpus_parses(self, corpus_dir):
        program = parse_program((corpus_dir / "splay.core").read_text(), "splay.core")

        assert program.names() == ["splay"]
        definition = program.get("splay")
        assert definition.params == ("a", "t")
        assert isinstance(definition.body, Match)
        assert definition.body.pattern.binders == ("cl", "c", "cr")

    def test_several_definitions_and_comments(self):
        text = (
            "-- identity on trees\n"
            "id t = t\n"
            "\n"
            "twice t = -- trailing comment\n"
            "  id (id t)\n"
        )
        program = parse_program(text)

        assert program.names() == ["id", "twice"]
        body = program.get("twice").body
        assert isinstance(body, FunApp)
        assert isinstance(body.arguments[0], FunApp)

    def test_declaration_fixes_signature(self):
        program = parse_program("f : Base * Tree -> Tree\nf a t = t\n")

        assert str(program.declarations["f"]) == "Base * Tree -> Tree"
        assert program.declarations["f"].result == TREE

    def test_let_if_and_comparison(self):
        expr = parse_expression("let x = (leaf, a, leaf) in if a < b then x else leaf")

        assert isinstance(expr, Let)
        assert isinstance(expr.bound, Node)
        assert isinstance(expr.body, If)
        assert expr.body.cond == Cmp(Var("a"), "<", Var("b"))
        assert expr.body.else_branch == Leaf()

    def test_match_with_one_arm(self):
        expr = parse_expression("match t with | (l, x, r) -> l")

        assert isinstance(expr, Match)
        assert expr.leaf_branch is None
        assert expr.node_branch == Var("l")

    def test_primes_in_names(self):
        expr = parse_expression("(a', b'', c)")

        assert format_expr(expr) == "(a', b'', c)"

    @pytest.mark.parametrize(
        "text",
        [
            "f t = match t with\n",
            "f t = (t, t)\n",
            "f t = if t then\n",
            "f = let in t\n",
        ],
    )
    def test_malformed_programs_raise(self, text):
        with pytest.raises(ProgramSyntaxError):
            parse_program(text)

    def test_syntax_error_carries_line(self):
        with pytest.raises(ProgramSyntaxError) as excinfo:
            parse_program("ok t = t\n\nbad t = (t, , t)\n")

        assert excinfo.value.line is not None
        assert excinfo.value.line == 3

    def test_duplicate_definition_raises(self):
        with pytest.raises(ProgramSyntaxError):
            parse_program("f t = t\nf t = leaf\n")


class TestParseValue:
    """Value literals used by run and by witnesses."""

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("leaf", LEAF),
            ("7", BaseValue(7)),
            ("true", BoolValue(True)),
            ("false", BoolValue(False)),
            ("(leaf, 1, leaf)", node(LEAF, 1, LEAF)),
            ("((leaf, 1, leaf), 2, leaf)", node(node(LEAF, 1, LEAF), 2, LEAF)),
        ],
    )
    def test_literals(self, text, expected):
        assert parse_value(text) == expected

    def test_printing_round_trips_through_parse(self):
        value = node(node(LEAF, 1, LEAF), 2, node(LEAF, 3, LEAF))

        assert parse_value(str(value)) == value
        assert isinstance(parse_value(str(value)), NodeValue)

    @pytest.mark.parametrize("text", ["(leaf, leaf, leaf)", "(1, 2, 3)", "(leaf, 1)", "tree"])
    def test_malformed_literals_raise(self, text):
        with pytest.raises(ProgramSyntaxError):
            parse_value(text)
