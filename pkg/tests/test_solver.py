"""Tests for presolve, the exact simplex and branching on implications."""
import itertools
import random
from fractions import Fraction

import pytest

from src.models.constraint import Constraint, ConstraintSet, LinExpr, check_assignment
from src.solver.internal import SolveStats, solve
from src.solver.presolve import presolve
from src.solver.simplex import phase_one
from src.utils.config import Settings
from src.utils.errors import InfeasibleSystemError, SolverLimitError

RELATIONS = ("<=", "=", ">=")


def _make_system(rows):
    cs = ConstraintSet()
    cs.declare("x")
    cs.declare("y")
    for number, (a, b, k, relation) in enumerate(rows):
        cs.add(Constraint(LinExpr({"x": a, "y": b}, k), relation, f"row{number}"))
    return cs


def _make_random_rows(rng):
    return [
        (rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-6, 6), rng.choice(RELATIONS))
        for _ in range(rng.randint(1, 4))
    ]


def _has_vertex(rows):
    """Brute force: a nonempty region of the nonnegative quadrant has a vertex."""
    lines = [(a, b, k) for a, b, k, _ in rows] + [(1, 0, 0), (0, 1, 0)]
    for (a1, b1, k1), (a2, b2, k2) in itertools.combinations(lines, 2):
        det = a1 * b2 - a2 * b1
        if det == 0:
            continue
        x = Fraction(-k1 * b2 + k2 * b1, det)
        y = Fraction(-a1 * k2 + a2 * k1, det)
        point = {"x": x, "y": y}
        if x < 0 or y < 0:
            continue
        if all(Constraint(LinExpr({"x": a, "y": b}, k), rel).holds(point) for a, b, k, rel in rows):
            return True
    return False


def _make_implication_system():
    """g >= 1 and x >= 1, with g != 0 -> x <= 0."""
    cs = ConstraintSet()
    g = cs.declare("g")
    x = cs.declare("x")
    cs.greater_equal(g, 1, "g")
    cs.greater_equal(x, 1, "x")
    cs.implication(g, x, LinExpr(), big_m=1000, origin="guarded")
    return cs


class TestPresolve:
    def test_equality_defines_an_unknown(self):
        x, y = LinExpr.var("x"), LinExpr.var("y")

        reduced = presolve([Constraint(x - y - 2, "=", "def")])

        assert reduced.rows == []
        assert reduced.complete(["x", "y"], {}) == {"x": Fraction(2), "y": Fraction(0)}

    def test_same_sign_equality_pins_to_zero(self):
        reduced = presolve([Constraint(LinExpr({"x": 1, "y": 2}), "=", "zero")])

        assert reduced.substitution["x"].is_zero()
        assert reduced.substitution["y"].is_zero()

    def test_violated_constant_row_names_its_origin(self):
        with pytest.raises(InfeasibleSystemError) as excinfo:
            presolve([Constraint(LinExpr({"x": 1}, 1), "<=", "impossible")])

        assert excinfo.value.conflict == ["impossible"]

    def test_mixed_row_is_kept(self):
        reduced = presolve([Constraint(LinExpr({"x": 1, "y": -1}), "<=", "mixed")])

        assert len(reduced.rows) == 1
        assert reduced.live_unknowns() == ["x", "y"]


class TestPhaseOne:
    def test_feasible_point(self):
        rows = [(LinExpr({"x": 1, "y": 1}, -3), "=", "sum"), (LinExpr({"x": -1}, 1), "<=", "x")]

        result = phase_one(rows)

        assert result.values["x"] + result.values["y"] == 3
        assert result.values["x"] >= 1

    def test_infeasible_rows_are_reported(self):
        rows = [(LinExpr({"x": 1}, -1), "<=", "low"), (LinExpr({"x": -1}, 2), "<=", "high")]

        with pytest.raises(InfeasibleSystemError) as excinfo:
            phase_one(rows)

        assert excinfo.value.conflict

    @pytest.mark.slow
    def test_agrees_with_vertex_enumeration(self):
        rng = random.Random(9)
        for _ in range(200):
            rows = _make_random_rows(rng)
            cs = _make_system(rows)
            expected = _has_vertex(rows)

            try:
                assignment = solve(cs)
            except InfeasibleSystemError:
                assert not expected, rows
                continue

            assert expected, rows
            assert check_assignment(cs, assignment)


class TestImplications:
    def test_guard_at_zero_satisfies_the_implication(self):
        cs = ConstraintSet()
        g = cs.declare("g")
        x = cs.declare("x")
        cs.greater_equal(x, 1, "x")
        cs.implication(g, x, LinExpr(), big_m=1000, origin="guarded")

        assignment = solve(cs)

        assert all(implication.holds(assignment) for implication in cs.implications)

    def test_branching_refutes_both_sides(self):
        stats = SolveStats()

        with pytest.raises(InfeasibleSystemError):
            solve(_make_implication_system(), Settings(), stats)

        assert stats.branches == 3

    def test_branch_limit(self):
        with pytest.raises(SolverLimitError):
            solve(_make_implication_system(), Settings(branch_limit=1))

    def test_zero_guard_is_dropped(self):
        cs = ConstraintSet()
        x = cs.declare("x")

        cs.implication(LinExpr(), x, LinExpr(), big_m=10)

        assert cs.implications == []

    def test_guard_must_be_a_single_unknown(self):
        cs = ConstraintSet()
        x = cs.declare("x")

        with pytest.raises(ValueError):
            cs.implication(x * 2, x, LinExpr(), big_m=10)
