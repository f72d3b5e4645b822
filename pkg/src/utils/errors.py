"""Error types raised by the analyzer and the exit codes the CLI maps them to."""
from __future__ import annotations

from typing import List, Optional, Sequence


class AnalysisError(Exception):
    """Base class for every error the command router reports."""

    exit_code = 2
    kind = "error"


class ProgramSyntaxError(AnalysisError):
    """Malformed program, annotation, tactic or value text."""

    exit_code = 3
    kind = "syntax"

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        source: Optional[str] = None,
    ):
        self.line = line
        self.column = column
        self.source = source
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {column}" if column is not None else "")
        prefix = f"{source}: " if source else ""
        super().__init__(f"{prefix}{message}{where}")


class SimpleTypeError(AnalysisError):
    """Program is not simply typed."""

    exit_code = 4
    kind = "type"


class TacticError(AnalysisError):
    """Tactic directive that cannot be applied or was never consumed."""

    exit_code = 5
    kind = "tactic"


class InfeasibleSystemError(AnalysisError):
    """Constraint system has no nonnegative rational solution."""

    exit_code = 1
    kind = "infeasible"

    def __init__(self, message: str, conflict: Optional[Sequence[str]] = None):
        self.conflict: List[str] = list(conflict or [])
        super().__init__(message)


class SolverLimitError(AnalysisError):
    """Time cap, branch limit or an external solver answering unknown."""

    exit_code = 6
    kind = "solver-limit"


class EvaluationError(AnalysisError):
    """Runtime failure of the cost-annotated interpreter."""

    exit_code = 7
    kind = "evaluation"


class EvaluationTimeout(EvaluationError):
    """Fuel exhausted before the evaluation finished."""

    kind = "timeout"
