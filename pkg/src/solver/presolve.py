"""
Presolve: eliminate unknowns fixed or defined by equalities before the simplex runs

An equality c_u u + sum c_j x_j + k = 0 defines u when every other coefficient and
the constant have the sign opposite to c_u: u is then a nonnegative combination of
the x_j and substituting it keeps u >= 0 without an extra row. Rows whose terms all
share one sign pin their unknowns to zero.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple

from src.models.constraint import Assignment, Constraint, LinExpr
from src.utils.errors import InfeasibleSystemError

logger = logging.getLogger(__name__)

Row = Tuple[LinExpr, str, str]


@dataclass
class Presolved:
    """Rows over the unknowns left after elimination, and how to recover the others."""

    rows: List[Row] = field(default_factory=list)
    substitution: Dict[str, LinExpr] = field(default_factory=dict)

    def live_unknowns(self) -> List[str]:
        names: Set[str] = set()
        for expr, _, _ in self.rows:
            names.update(expr.unknowns())
        return sorted(names)

    def complete(self, unknowns: Iterable[str], values: Mapping[str, Fraction]) -> Assignment:
        """Assignment for every unknown: solved, substituted, or zero when unconstrained."""
        assignment: Assignment = {}
        for name in unknowns:
            if name not in self.substitution:
                assignment[name] = Fraction(values.get(name, 0))
                continue
            expr = _resolve(self.substitution[name], self.substitution)
            self.substitution[name] = expr
            total = expr.constant
            for other, coefficient in expr.terms.items():
                total += coefficient * Fraction(values.get(other, 0))
            assignment[name] = total
        return assignment


def _resolve(expr: LinExpr, substitution: Mapping[str, LinExpr]) -> LinExpr:
    while True:
        pending = [name for name in expr.unknowns() if name in substitution]
        if not pending:
            return expr
        for name in pending:
            expr = expr.substitute(name, substitution[name])


def _normalise(expr: LinExpr, relation: str) -> Tuple[LinExpr, str]:
    if relation == ">=":
        return -expr, "<="
    return expr, relation


def _holds(expr: LinExpr, relation: str) -> bool:
    return Constraint(expr, relation).holds({})


def presolve(constraints: Iterable[Constraint]) -> Presolved:
    """Eliminate until nothing changes; raises InfeasibleSystemError on a violated constant row."""
    result = Presolved()
    rows: List[Row] = []
    for constraint in constraints:
        expr, relation = _normalise(constraint.expr, constraint.relation)
        rows.append((expr, relation, constraint.origin))

    changed = True
    passes = 0
    while changed:
        changed = False
        passes += 1
        kept: List[Row] = []
        for expr, relation, origin in rows:
            expr = _resolve(expr, result.substitution)
            if expr.is_constant():
                if not _holds(expr, relation):
                    raise InfeasibleSystemError(
                        f"constraint {origin or '<anonymous>'} cannot hold", [origin]
                    )
                continue
            eliminated = _eliminate(expr, relation, result.substitution)
            if eliminated is None:
                kept.append((expr, relation, origin))
                continue
            if eliminated is False:
                raise InfeasibleSystemError(
                    f"constraint {origin or '<anonymous>'} cannot hold", [origin]
                )
            changed = True
        rows = kept
    result.rows = rows
    logger.debug(
        f"Presolve: {len(result.substitution)} unknown(s) eliminated in {passes} pass(es), "
        f"{len(rows)} row(s) left"
    )
    return result


def _eliminate(expr: LinExpr, relation: str, substitution: Dict[str, LinExpr]) -> Optional[bool]:
    """True when the row is used up, False when it cannot hold, None when it stays."""
    terms = expr.terms
    constant = expr.constant
    positive = all(c > 0 for c in terms.values())
    negative = all(c < 0 for c in terms.values())

    if relation == "<=":
        # sum of nonnegative terms + k <= 0
        if positive and constant >= 0:
            if constant > 0:
                return False
            for name in terms:
                substitution[name] = LinExpr()
            return True
        if negative and constant <= 0:
            return True
        return None

    if (positive and constant >= 0) or (negative and constant <= 0):
        if constant != 0:
            return False
        for name in terms:
            substitution[name] = LinExpr()
        return True

    for name, coefficient in sorted(terms.items()):
        others = [c for other, c in terms.items() if other != name]
        if coefficient > 0:
            fits = all(c < 0 for c in others) and constant <= 0
        else:
            fits = all(c > 0 for c in others) and constant >= 0
        if fits:
            rest = LinExpr({o: c for o, c in terms.items() if o != name}, constant)
            substitution[name] = rest * (-1 / coefficient)
            return True
    return None
