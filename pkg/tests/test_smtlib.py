"""Tests for the SMT-LIB export, model import and the solver backends."""
import subprocess
from fractions import Fraction
from unittest.mock import patch

import pytest

from src.models.constraint import ConstraintSet
from src.solver.backends import INTERNAL, SMTLIB_OUT, run_backend, validate_backend
from src.solver.smtlib import export_smtlib, import_model, literal, symbol
from src.utils.errors import (
    AnalysisError,
    InfeasibleSystemError,
    ProgramSyntaxError,
    SolverLimitError,
)


def _make_system():
    cs = ConstraintSet()
    x = cs.declare("f.cost/1.arg.rk1")
    y = cs.declare("f.cost/1.res#1")
    g = cs.declare("g")
    cs.equal(x + y, 3, "sum")
    cs.less_equal(y * Fraction(1, 2), 1, "half")
    cs.implication(g, x, y, big_m=100, origin="guarded")
    return cs


def _completed(stdout, returncode=0):
    return subprocess.CompletedProcess(args=[], returncode=returncode, stdout=stdout, stderr="")


class TestExport:
    def test_header_and_footer(self):
        script = export_smtlib(_make_system())

        lines = script.splitlines()
        assert lines[:2] == ["(set-option :produce-models true)", "(set-logic QF_LRA)"]
        assert lines[-2:] == ["(check-sat)", "(get-model)"]

    def test_every_unknown_is_declared_nonnegative(self):
        cs = _make_system()

        script = export_smtlib(cs)

        assert script.count("(declare-fun ") == len(cs.unknowns)
        assert script.count("(assert (>= ") == len(cs.unknowns)

    def test_export_is_deterministic(self):
        assert export_smtlib(_make_system()) == export_smtlib(_make_system())

    def test_implication_is_asserted_directly(self):
        script = export_smtlib(_make_system())

        assert "(assert (=> (> g 0.0)" in script

    @pytest.mark.parametrize(
        "name,expected",
        [("f.cost/1.arg.rk1", "f.cost/1.arg.rk1"), ("f.res#1", "|f.res#1|"), ("1x", "|1x|")],
    )
    def test_symbols(self, name, expected):
        assert symbol(name) == expected

    def test_symbol_with_a_bar_raises(self):
        with pytest.raises(ValueError):
            symbol("a|b")

    @pytest.mark.parametrize(
        "value,expected",
        [(Fraction(3), "3.0"), (Fraction(-1, 2), "(- (/ 1.0 2.0))"), (Fraction(0), "0.0")],
    )
    def test_literals(self, value, expected):
        assert literal(value) == expected


class TestImportModel:
    def test_model_values_are_exact(self):
        text = (
            "sat\n(\n  (define-fun x () Real (/ 1.0 3.0))\n"
            "  (define-fun |y#1| () Real 2.5)\n)\n"
        )

        assignment = import_model(text, ["x", "y#1", "z"])

        assert assignment == {"x": Fraction(1, 3), "y#1": Fraction(5, 2), "z": Fraction(0)}

    def test_model_keyword_is_accepted(self):
        assignment = import_model("sat (model (define-fun x () Real 4.0))")

        assert assignment == {"x": Fraction(4)}

    def test_unsat(self):
        with pytest.raises(InfeasibleSystemError):
            import_model("unsat\n(error \"model is not available\")\n")

    def test_unknown(self):
        with pytest.raises(SolverLimitError):
            import_model("unknown\n")

    def test_negative_value_is_rejected(self):
        with pytest.raises(ProgramSyntaxError):
            import_model("sat ((define-fun x () Real (- 1.0)))")

    def test_unbalanced_output_is_rejected(self):
        with pytest.raises(ProgramSyntaxError):
            import_model("sat ((define-fun x () Real 1.0)")


class TestBackends:
    @pytest.mark.parametrize("name", [INTERNAL, SMTLIB_OUT, "smtlib-exec:/usr/bin/z3"])
    def test_known_backends(self, name):
        assert validate_backend(name) == name

    @pytest.mark.parametrize("name", ["z3", "smtlib-exec:", ""])
    def test_unknown_backends(self, name):
        with pytest.raises(AnalysisError):
            validate_backend(name)

    def test_internal_backend_reports_stats(self, settings):
        result = run_backend(_make_system(), INTERNAL, settings)

        assert result.assignment is not None
        assert result.stats is not None and result.stats.branches >= 1

    def test_smtlib_out_only_renders(self, settings):
        result = run_backend(_make_system(), SMTLIB_OUT, settings)

        assert result.assignment is None
        assert result.script.startswith("(set-option")

    def test_exec_backend_checks_the_model(self, settings):
        model = "sat\n((define-fun |f.cost/1.arg.rk1| () Real 3.0))\n"
        with patch("src.solver.backends.subprocess.run", return_value=_completed(model)) as run:
            result = run_backend(_make_system(), "smtlib-exec:z3", settings)

        assert run.call_args.args[0][0] == "z3"
        assert result.assignment["f.cost/1.arg.rk1"] == 3
        assert result.assignment["g"] == 0

    def test_exec_backend_rejects_a_wrong_model(self, settings):
        model = "sat\n((define-fun |f.cost/1.arg.rk1| () Real 1.0))\n"
        with patch("src.solver.backends.subprocess.run", return_value=_completed(model)):
            with pytest.raises(SolverLimitError):
                run_backend(_make_system(), "smtlib-exec:z3", settings)

    def test_exec_backend_timeout(self, settings):
        timeout = subprocess.TimeoutExpired(cmd="z3", timeout=1)
        with patch("src.solver.backends.subprocess.run", side_effect=timeout):
            with pytest.raises(SolverLimitError):
                run_backend(_make_system(), "smtlib-exec:z3", settings)

    def test_exec_backend_missing_binary(self, settings):
        with patch("src.solver.backends.subprocess.run", side_effect=FileNotFoundError("z3")):
            with pytest.raises(AnalysisError):
                run_backend(_make_system(), "smtlib-exec:z3", settings)

    @pytest.mark.integration
    def test_real_solver_agrees(self, smt_solver, settings):
        result = run_backend(_make_system(), f"smtlib-exec:{smt_solver}", settings)

        assert result.assignment["f.cost/1.arg.rk1"] + result.assignment["f.cost/1.res#1"] == 3
