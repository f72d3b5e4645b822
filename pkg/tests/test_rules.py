"""Tests for the constraints of single typing rules on small judgements."""
from fractions import Fraction

import pytest

from src.models.annotation import Annotation, LogIndex, RankIndex
from src.models.constraint import check_assignment
from src.models.program import BASE, BOOL, TREE, Cmp, FunApp, If, Leaf, Let, Node, Var
from src.potential.coef_file import parse_coef
from src.typesystem.context import TypingContext
from src.typesystem.derivation import Derivation, Judgement
from src.typesystem.let_rules import FAMILY_TARGETS, emit_let
from src.typesystem.rules import RuleEnvironment, emit_syntax_directed
from src.typesystem.signatures import build_signature_table, lift

LOG1 = LogIndex((1,), 0)
LOG2_CONST = LogIndex((0,), 2)


def _make_judgement(entries, expr, annotation, result, result_type=TREE, costed=True):
    return Judgement(
        "f",
        "cost" if costed else "free0",
        costed,
        TypingContext(tuple(entries)),
        expr,
        (),
        annotation,
        result,
        result_type,
    )


def _make_literal(arity, coefficients):
    return lift(Annotation(arity, {index: Fraction(v) for index, v in coefficients.items()}))


def _name(expr):
    (name,) = expr.terms
    return name


def _assignment(cs, *pairs, **named):
    """Zero everywhere except the given annotation coefficients and named unknowns."""
    values = {name: Fraction(0) for name in cs.unknowns}
    for annotation, coefficients in pairs:
        for index, value in coefficients.items():
            values[_name(annotation[index])] = Fraction(value)
    values.update({name: Fraction(value) for name, value in named.items()})
    for implication in cs.implications:
        values[implication.selector] = Fraction(1 if values[implication.guard] else 0)
    return values


def _mentioned(cs):
    names = set()
    for constraint in cs.constraints:
        names.update(constraint.expr.unknowns())
    return names


def _constant(expr):
    assert expr.is_constant()
    return expr.constant


class TestLeaf:
    def test_log_two_collects_rank_and_constants(self):
        """rk(leaf) = log 2, so q* and q(0 | 2) both land on the constant log(2) entry."""
        derivation = Derivation()
        q = derivation.fresh_annotation("f", "arg", 0)
        result = _make_literal(1, {RankIndex(1): 1, LOG2_CONST: 1})
        judgement = _make_judgement((), Leaf(), q, result)

        assert emit_syntax_directed(derivation, judgement, None) == []

        cs = derivation.constraints
        assert check_assignment(cs, _assignment(cs, (q, {LogIndex((), 2): 2})))
        assert not check_assignment(cs, _assignment(cs, (q, {LogIndex((), 2): 1})))

    def test_every_split_of_two_is_summed(self):
        derivation = Derivation()
        q = derivation.fresh_annotation("f", "arg", 0)
        result = derivation.fresh_annotation("f", "res", 1)
        judgement = _make_judgement((), Leaf(), q, result)

        emit_syntax_directed(derivation, judgement, None)

        cs = derivation.constraints
        parts = {RankIndex(1): 1, LOG2_CONST: 1, LogIndex((1,), 1): 1}
        assert check_assignment(cs, _assignment(cs, (q, {LogIndex((), 2): 3}), (result, parts)))
        assert not check_assignment(cs, _assignment(cs, (q, {LogIndex((), 2): 2}), (result, parts)))


class TestNode:
    ENTRIES = (("ar", TREE), ("b", BASE), ("t", TREE))
    CONTEXT = {
        RankIndex(1): 1,
        RankIndex(2): 1,
        LogIndex((1, 0), 0): 1,
        LogIndex((0, 1), 0): 1,
        LogIndex((1, 1), 0): 1,
        LogIndex((0, 0), 2): 1,
    }
    RESULT = {RankIndex(1): 1, LOG1: 1, LOG2_CONST: 1}

    def _emit(self):
        derivation = Derivation()
        q = derivation.fresh_annotation("f", "arg", 2)
        result = derivation.fresh_annotation("f", "res", 1)
        judgement = _make_judgement(self.ENTRIES, Node(Var("ar"), Var("b"), Var("t")), q, result)
        emit_syntax_directed(derivation, judgement, None)
        return derivation.constraints, q, result

    def test_all_ones_assignment_holds(self):
        cs, q, result = self._emit()

        assert check_assignment(cs, _assignment(cs, (q, self.CONTEXT), (result, self.RESULT)))

    def test_the_subtree_log_must_match_the_result_log(self):
        cs, q, result = self._emit()
        context = dict(self.CONTEXT)
        context[LogIndex((1, 1), 0)] = 0

        assert not check_assignment(cs, _assignment(cs, (q, context), (result, self.RESULT)))

    def test_unused_context_indices_are_pinned(self):
        cs, q, result = self._emit()
        context = dict(self.CONTEXT)
        context[LogIndex((1, 0), 1)] = 1

        assert not check_assignment(cs, _assignment(cs, (q, context), (result, self.RESULT)))


class TestApp:
    def _emit(self, corpus_dir, splay_normalized):
        derivation = Derivation()
        annotated = parse_coef((corpus_dir / "splay.coef").read_text(), {"splay": (1, 1)})
        signatures = build_signature_table(splay_normalized, annotated, derivation)
        env = RuleEnvironment(splay_normalized, signatures)
        q = derivation.fresh_annotation("splay", "arg", 1)
        result = derivation.fresh_annotation("splay", "res", 1)
        expr = FunApp("splay", (Var("a"), Var("bl")))
        judgement = _make_judgement((("a", BASE), ("bl", TREE)), expr, q, result)
        emit_syntax_directed(derivation, judgement, env)
        return derivation.constraints, q, result

    def test_recursive_call_pays_one(self, corpus_dir, splay_normalized):
        cs, q, result = self._emit(corpus_dir, splay_normalized)
        paid = {RankIndex(1): 1, LOG1: 3, LOG2_CONST: 2}

        assert check_assignment(cs, _assignment(cs, (q, paid), (result, {RankIndex(1): 1})))

    def test_signature_alone_does_not_cover_the_call(self, corpus_dir, splay_normalized):
        cs, q, result = self._emit(corpus_dir, splay_normalized)
        unpaid = {RankIndex(1): 1, LOG1: 3, LOG2_CONST: 1}

        assert not check_assignment(cs, _assignment(cs, (q, unpaid), (result, {RankIndex(1): 1})))

    def test_cost_free_multiple_is_added_on_both_sides(self, corpus_dir, splay_normalized):
        cs, q, result = self._emit(corpus_dir, splay_normalized)
        (multiple,) = [name for name in cs.unknowns if name.endswith(".K0")]
        context = {RankIndex(1): 1, LOG1: 5, LOG2_CONST: 2}

        values = _assignment(cs, (q, context), (result, {RankIndex(1): 1, LOG1: 2}))
        values[multiple] = Fraction(2)

        assert check_assignment(cs, values)


class TestIte:
    def test_both_branches_get_the_same_annotations(self):
        derivation = Derivation()
        q = derivation.fresh_annotation("f", "arg", 1)
        result = derivation.fresh_annotation("f", "res", 1)
        expr = If(Var("c"), Var("t"), Leaf())
        judgement = _make_judgement((("t", TREE), ("c", BOOL)), expr, q, result)

        then_branch, else_branch = emit_syntax_directed(derivation, judgement, None)

        assert then_branch.annotation is q and else_branch.annotation is q
        assert then_branch.result is result and else_branch.result is result
        assert derivation.constraints.constraints == []


class TestZeroConvention:
    @pytest.mark.parametrize(
        "entries,expr,result_arity,result_type",
        [
            ((("l", TREE), ("x", BASE), ("r", TREE)), Node(Var("l"), Var("x"), Var("r")), 1, TREE),
            ((("t", TREE), ("a", BASE), ("b", BASE)), Cmp(Var("a"), "<", Var("b")), 0, BOOL),
        ],
    )
    def test_every_fresh_context_index_is_constrained(
        self, entries, expr, result_arity, result_type
    ):
        derivation = Derivation()
        arity = sum(1 for _, type_ in entries if type_ == TREE)
        q = derivation.fresh_annotation("f", "arg", arity)
        result = derivation.fresh_annotation("f", "res", result_arity)
        judgement = _make_judgement(entries, expr, q, result, result_type)

        emit_syntax_directed(derivation, judgement, None)

        mentioned = _mentioned(derivation.constraints)
        assert {_name(value) for _, value in q.items()} <= mentioned


class TestLetTreeCostFree:
    """let x = splay a bl in ... with potential shared between bl and br, cr."""

    ENTRIES = (("bl", TREE), ("br", TREE), ("cr", TREE), ("a", BASE), ("c", BASE))
    CONTEXT = {
        RankIndex(1): 1,
        RankIndex(2): 1,
        RankIndex(3): 1,
        LogIndex((1, 0, 0), 0): 3,
        LogIndex((0, 0, 0), 2): 2,
        LogIndex((1, 1, 1), 0): 1,
    }

    def _emit(self):
        derivation = Derivation()
        body = FunApp("h", (Var("br"), Var("cr"), Var("x")))
        expr = Let("x", FunApp("splay", (Var("a"), Var("bl"))), body, None, TREE)
        q = _make_literal(3, self.CONTEXT)
        result = derivation.fresh_annotation("f", "res", 1)
        judgement = _make_judgement(self.ENTRIES, expr, q, result)
        return derivation, emit_let(derivation, judgement)

    def test_left_premise_gets_the_bound_tree_potential(self):
        _, premises = self._emit()
        left = premises[0]

        assert left.context.trees() == ("bl",)
        assert _constant(left.annotation[RankIndex(1)]) == 1
        assert _constant(left.annotation[LOG1]) == 3
        assert _constant(left.annotation[LOG2_CONST]) == 2
        assert left.result_type == TREE

    def test_one_cost_free_premise_per_target(self):
        derivation, premises = self._emit()

        families = premises[1:-1]
        assert len(families) == len(FAMILY_TARGETS)
        assert all(not premise.costed for premise in families)
        assert families[FAMILY_TARGETS.index((1, 0))].scope == "cost~b11d1e0"

    def test_continuation_carries_the_family_result(self):
        derivation, premises = self._emit()
        body = premises[-1]

        assert body.context.trees() == ("br", "cr", "x")
        shared = body.annotation[LogIndex((1, 1, 1), 0)]
        assert _name(shared).endswith(".fam.b11d1e0.res")
        assert _constant(body.annotation[RankIndex(1)]) == 1

    def test_family_split_holds_when_result_does_not_exceed_argument(self):
        derivation, premises = self._emit()
        family = premises[1 + FAMILY_TARGETS.index((1, 0))]
        cs = derivation.constraints
        argument = family.annotation[LOG1]
        target = family.result[LOG1]

        assert check_assignment(cs, _assignment(cs, **{_name(argument): 1, _name(target): 1}))
        assert not check_assignment(cs, _assignment(cs, **{_name(argument): 1, _name(target): 2}))
        assert not check_assignment(cs, _assignment(cs, **{_name(argument): 0, _name(target): 0}))

    def test_let_needs_a_typed_binder(self):
        derivation = Derivation()
        expr = Let("x", Leaf(), Var("x"))
        judgement = _make_judgement((), expr, Annotation(0), Annotation(1, {}))

        with pytest.raises(ValueError):
            emit_let(derivation, judgement)

    def test_base_binder_uses_let_gen(self):
        derivation = Derivation()
        expr = Let("y", Cmp(Var("a"), "<", Var("a")), Var("t"), None, BOOL)
        q = _make_literal(1, {RankIndex(1): 1})
        judgement = _make_judgement((("t", TREE), ("a", BASE)), expr, q, Annotation(1))

        bound, body = emit_let(derivation, judgement)

        assert bound.annotation.arity == 0
        assert _constant(body.annotation[RankIndex(1)]) == 1
        assert derivation.records[-1].rule == "let:gen"


class TestDispatch:
    def test_let_is_not_syntax_directed(self):
        expr = Let("x", Leaf(), Leaf(), None, TREE)
        judgement = _make_judgement((), expr, Annotation(0), Annotation(1))

        with pytest.raises(TypeError):
            emit_syntax_directed(Derivation(), judgement, None)

    def test_annotation_must_match_the_context(self):
        judgement = _make_judgement((("t", TREE),), Var("t"), Annotation(0), Annotation(1))

        with pytest.raises(ValueError):
            emit_syntax_directed(Derivation(), judgement, None)
