"""Tests for sampling annotated signatures on random search trees."""
import random
from fractions import Fraction

import pytest

from src.models.annotation import Annotation, LogIndex, RankIndex
from src.models.value import BaseValue, LeafValue, NodeValue, in_order_keys
from src.semantics.validation import MAX_WITNESSES, draw_arguments, validate_pair
from src.syntax.parser import parse_program
from src.syntax.typecheck import simple_typecheck
from src.utils.errors import EvaluationError


def _make_splay_pair():
    coefficients = {
        RankIndex(1): Fraction(1),
        LogIndex((1,), 0): Fraction(3),
        LogIndex((0,), 2): Fraction(1),
    }
    argument = Annotation(1, coefficients)
    return argument, Annotation(1, {RankIndex(1): Fraction(1)})


def _make_size_pair():
    size = {LogIndex((1,), 0): Fraction(1)}
    return Annotation(1, dict(size)), Annotation(1, dict(size))


class TestDrawArguments:
    def test_one_value_per_parameter(self, splay_program):
        rng = random.Random(1)

        key, tree = draw_arguments(splay_program.get("splay"), 8, rng)

        assert isinstance(key, BaseValue)
        assert isinstance(tree, (LeafValue, NodeValue))
        keys = in_order_keys(tree)
        assert keys == sorted(keys)
        assert len(keys) < 8


class TestValidatePair:
    def test_amortised_bound_holds(self, splay_program):
        argument, result = _make_splay_pair()

        outcome = validate_pair(
            splay_program, "splay", argument, result, True, samples=300, max_size=32, seed=7
        )

        assert (outcome.attempted, outcome.passed, outcome.failed) == (300, 300, 0)
        assert outcome.worst_slack >= 0

    def test_size_is_preserved_without_cost(self, splay_program):
        argument, result = _make_size_pair()

        outcome = validate_pair(splay_program, "splay", argument, result, False, samples=100)

        assert outcome.failed == 0
        assert outcome.worst_slack == pytest.approx(0.0)

    def test_charging_cost_breaks_the_size_pair(self, splay_program):
        argument, result = _make_size_pair()

        outcome = validate_pair(splay_program, "splay", argument, result, True, samples=100)

        assert outcome.failed == 100
        assert len(outcome.witnesses) == MAX_WITNESSES
        assert all(witness.slack < 0 for witness in outcome.witnesses)

    def test_fuel_exhaustion_is_skipped(self):
        program = simple_typecheck(parse_program("loop : Tree -> Tree\nloop t = loop t\n"))
        empty = Annotation(1)

        outcome = validate_pair(program, "loop", empty, empty, True, samples=5, fuel=50)

        assert (outcome.skipped, outcome.passed, outcome.failed) == (5, 0, 0)
        assert outcome.worst_slack is None

    def test_evaluation_errors_propagate(self):
        program = simple_typecheck(parse_program("left t = match t with | leaf -> leaf\n"))
        empty = Annotation(1)

        with pytest.raises(EvaluationError):
            validate_pair(program, "left", empty, empty, True, samples=5)

    @pytest.mark.parametrize("samples,max_size", [(0, 8), (10, 0)])
    def test_bad_sampling_parameters(self, splay_program, samples, max_size):
        argument, result = _make_splay_pair()

        with pytest.raises(ValueError):
            validate_pair(splay_program, "splay", argument, result, True, samples, max_size)
