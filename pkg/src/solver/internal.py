"""
Built-in exact solver: presolve, phase-one simplex and branching on implications

The big-M rows of an implication guard != 0 -> lhs <= rhs only relax it. When a
relaxed solution violates one, the search branches on guard = 0 first and then on
the consequent with its selector at 1, depth first, up to the branch limit.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import List, Optional, Sequence

from src.models.constraint import (
    Assignment,
    Constraint,
    ConstraintSet,
    Implication,
    LinExpr,
    check_assignment,
)
from src.solver.presolve import presolve
from src.solver.simplex import phase_one
from src.utils.config import Settings
from src.utils.errors import InfeasibleSystemError, SolverLimitError

logger = logging.getLogger(__name__)


@dataclass
class SolveStats:
    branches: int = 0
    pivots: int = 0
    seconds: float = 0.0


def solve(
    cs: ConstraintSet, settings: Optional[Settings] = None, stats: Optional[SolveStats] = None
) -> Assignment:
    """
    An exact nonnegative assignment satisfying every constraint and implication of cs.
    Raises InfeasibleSystemError (with the conflicting origins of the first failure)
    or SolverLimitError when the time cap or the branch limit is reached.
    """
    settings = settings if settings is not None else Settings()
    stats = stats if stats is not None else SolveStats()
    started = time.monotonic()
    deadline = started + settings.solver_timeout
    first_failure: Optional[InfeasibleSystemError] = None

    pending: List[List[Constraint]] = [[]]
    while pending:
        extra = pending.pop()
        stats.branches += 1
        if stats.branches > settings.branch_limit:
            raise SolverLimitError(f"branch limit {settings.branch_limit} reached")
        try:
            assignment = _relaxation(cs, extra, deadline, stats)
        except InfeasibleSystemError as exc:
            if first_failure is None:
                first_failure = exc
            continue

        violated = _first_violated(cs.implications, assignment)
        if violated is None:
            if not check_assignment(cs, assignment):
                raise RuntimeError("solver produced an assignment that fails the exact check")
            stats.seconds = time.monotonic() - started
            logger.info(
                f"Feasible after {stats.branches} branch(es), {stats.pivots} pivot(s), "
                f"{stats.seconds:.2f}s"
            )
            return assignment

        logger.debug(f"Branching on implication {violated.origin}")
        holds = Constraint(violated.consequent.expr, "<=", violated.origin + " [branch]")
        selected = Constraint(
            LinExpr.var(violated.selector) - 1, "=", violated.origin + " [branch]"
        )
        pending.append(extra + [holds, selected])
        pending.append(extra + [Constraint(LinExpr.var(violated.guard), "=", violated.origin)])

    assert first_failure is not None
    logger.info(f"Infeasible after {stats.branches} branch(es): {first_failure}")
    raise first_failure


def _relaxation(
    cs: ConstraintSet, extra: Sequence[Constraint], deadline: float, stats: SolveStats
) -> Assignment:
    reduced = presolve(list(cs.constraints) + list(extra))
    if reduced.rows:
        result = phase_one(reduced.rows, deadline)
        stats.pivots += result.pivots
        values = result.values
    else:
        values = {}
    return reduced.complete(cs.unknowns, values)


def _first_violated(
    implications: Sequence[Implication], assignment: Assignment
) -> Optional[Implication]:
    for implication in implications:
        if not implication.holds(assignment):
            return implication
    return None
