"""
Exact phase-1 simplex over sparse rows of Fractions

Rows are Σ a_j x_j (<=, =) b with every x_j >= 0. A row with b >= 0 and relation <=
starts with its slack in the basis; every other row gets an artificial unknown and
the phase minimises their sum. Entering columns follow Dantzig's rule and switch to
Bland's rule after a run of degenerate pivots, so the method terminates.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from src.models.constraint import LinExpr
from src.utils.errors import InfeasibleSystemError, SolverLimitError

logger = logging.getLogger(__name__)

DEGENERATE_RUN = 50

SparseRow = Dict[int, Fraction]


@dataclass
class Tableau:
    rows: List[SparseRow] = field(default_factory=list)
    rhs: List[Fraction] = field(default_factory=list)
    basis: List[int] = field(default_factory=list)
    column_rows: Dict[int, Set[int]] = field(default_factory=dict)
    objective: SparseRow = field(default_factory=dict)
    value: Fraction = Fraction(0)
    artificial: Set[int] = field(default_factory=set)
    pivots: int = 0

    def add_row(self, row: SparseRow, rhs: Fraction, basic: int) -> None:
        number = len(self.rows)
        self.rows.append(row)
        self.rhs.append(rhs)
        self.basis.append(basic)
        for column in row:
            self.column_rows.setdefault(column, set()).add(number)

    def pivot(self, row_number: int, column: int) -> None:
        row = self.rows[row_number]
        factor = row[column]
        if factor != 1:
            for key in row:
                row[key] /= factor
            self.rhs[row_number] /= factor
        for other in list(self.column_rows.get(column, ())):
            if other == row_number:
                continue
            scale = self.rows[other][column]
            self._subtract(self.rows[other], other, scale, row)
            self.rhs[other] -= scale * self.rhs[row_number]
        if column in self.objective:
            scale = self.objective[column]
            self._subtract(self.objective, None, scale, row)
            self.value -= scale * self.rhs[row_number]
        self.basis[row_number] = column
        self.pivots += 1

    def _subtract(
        self, target: SparseRow, number: Optional[int], scale: Fraction, row: SparseRow
    ) -> None:
        for key, value in row.items():
            updated = target.get(key, Fraction(0)) - scale * value
            if updated == 0:
                if key in target:
                    del target[key]
                    if number is not None:
                        self.column_rows[key].discard(number)
            else:
                target[key] = updated
                if number is not None:
                    self.column_rows.setdefault(key, set()).add(number)


@dataclass
class PhaseOneResult:
    values: Dict[str, Fraction]
    pivots: int


def phase_one(
    rows: Sequence[Tuple[LinExpr, str, str]],
    deadline: Optional[float] = None,
) -> PhaseOneResult:
    """
    A nonnegative point satisfying every row (expr relation 0, relation = or <=).
    Raises InfeasibleSystemError naming the rows left with positive artificials.
    """
    names = sorted({name for expr, _, _ in rows for name in expr.unknowns()})
    column_of = {name: number for number, name in enumerate(names)}
    next_column = len(names)
    tableau = Tableau()
    origins: List[str] = []

    for expr, relation, origin in rows:
        row: SparseRow = {column_of[name]: c for name, c in expr.terms.items()}
        rhs = -expr.constant
        if rhs < 0:
            row = {key: -value for key, value in row.items()}
            rhs = -rhs
            flipped = True
        else:
            flipped = False
        if relation == "<=":
            slack = next_column
            next_column += 1
            row[slack] = Fraction(-1) if flipped else Fraction(1)
            if not flipped:
                tableau.add_row(row, rhs, slack)
                origins.append(origin)
                continue
        artificial = next_column
        next_column += 1
        row[artificial] = Fraction(1)
        tableau.artificial.add(artificial)
        tableau.add_row(row, rhs, artificial)
        origins.append(origin)
        for key, value in row.items():
            if key != artificial:
                tableau.objective[key] = tableau.objective.get(key, Fraction(0)) + value
        tableau.value += rhs

    tableau.objective = {k: v for k, v in tableau.objective.items() if v != 0}
    _optimise(tableau, deadline)

    if tableau.value > 0:
        conflict = [
            origins[number]
            for number, basic in enumerate(tableau.basis)
            if basic in tableau.artificial and tableau.rhs[number] > 0
        ]
        logger.info(f"Phase one ends at {tableau.value} after {tableau.pivots} pivot(s)")
        raise InfeasibleSystemError(
            f"no nonnegative solution (infeasibility {tableau.value})", conflict
        )

    values = {name: Fraction(0) for name in names}
    for number, basic in enumerate(tableau.basis):
        if basic < len(names):
            values[names[basic]] = tableau.rhs[number]
    logger.debug(f"Phase one feasible after {tableau.pivots} pivot(s)")
    return PhaseOneResult(values, tableau.pivots)


def _optimise(tableau: Tableau, deadline: Optional[float]) -> None:
    degenerate = 0
    while True:
        if deadline is not None and time.monotonic() > deadline:
            raise SolverLimitError(f"simplex time cap reached after {tableau.pivots} pivot(s)")
        candidates = [
            (value, column)
            for column, value in tableau.objective.items()
            if value > 0 and column not in tableau.artificial
        ]
        if not candidates:
            return
        if degenerate >= DEGENERATE_RUN:
            column = min(column for _, column in candidates)
        else:
            column = max(candidates, key=lambda item: (item[0], -item[1]))[1]

        best: Optional[Tuple[Fraction, int, int]] = None
        for number in tableau.column_rows.get(column, ()):
            coefficient = tableau.rows[number][column]
            if coefficient <= 0:
                continue
            ratio = tableau.rhs[number] / coefficient
            key = (ratio, tableau.basis[number], number)
            if best is None or key < best:
                best = key
        if best is None:
            raise RuntimeError(f"phase one objective unbounded along column {column}")
        ratio, _, row_number = best
        degenerate = degenerate + 1 if ratio == 0 else 0
        tableau.pivot(row_number, column)
