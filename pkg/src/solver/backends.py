"""Solver backends selected by --backend: internal | smtlib-out | smtlib-exec:<path>."""
from __future__ import annotations

import logging
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from src.models.constraint import Assignment, ConstraintSet, check_assignment
from src.solver.internal import SolveStats, solve
from src.solver.smtlib import export_smtlib, import_model
from src.utils.config import Settings
from src.utils.errors import AnalysisError, SolverLimitError

logger = logging.getLogger(__name__)

INTERNAL = "internal"
SMTLIB_OUT = "smtlib-out"
SMTLIB_EXEC = "smtlib-exec:"


@dataclass
class BackendResult:
    """A verified model, or only the exported script when no solver ran."""

    assignment: Optional[Assignment] = None
    script: Optional[str] = None
    stats: Optional[SolveStats] = None


def validate_backend(name: str) -> str:
    if name in (INTERNAL, SMTLIB_OUT):
        return name
    if name.startswith(SMTLIB_EXEC) and len(name) > len(SMTLIB_EXEC):
        return name
    raise AnalysisError(f"unknown backend {name!r}; use internal, smtlib-out or smtlib-exec:<path>")


def run_backend(cs: ConstraintSet, backend: str, settings: Settings) -> BackendResult:
    backend = validate_backend(backend)
    if backend == INTERNAL:
        stats = SolveStats()
        return BackendResult(assignment=solve(cs, settings, stats), stats=stats)

    script = export_smtlib(cs)
    if backend == SMTLIB_OUT:
        return BackendResult(script=script)

    executable = backend[len(SMTLIB_EXEC) :]
    with tempfile.TemporaryDirectory() as directory:
        path = Path(directory) / "system.smt2"
        path.write_text(script)
        try:
            completed = subprocess.run(
                [executable, str(path)],
                capture_output=True,
                text=True,
                timeout=settings.solver_timeout,
                check=False,
            )
        except subprocess.TimeoutExpired as exc:
            raise SolverLimitError(f"{executable} exceeded {settings.solver_timeout}s") from exc
        except OSError as exc:
            logger.error(f"Cannot start external solver {executable}", exc_info=True)
            raise AnalysisError(f"cannot start external solver {executable}: {exc}") from exc

    logger.debug(f"{executable} exited with {completed.returncode}")
    assignment = import_model(completed.stdout, cs.unknowns)
    if not check_assignment(cs, assignment):
        raise SolverLimitError(f"model from {executable} does not satisfy the constraint set")
    return BackendResult(assignment=assignment, script=script)
