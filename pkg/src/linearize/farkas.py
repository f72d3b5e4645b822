"""
Farkas reduction of symbolic potential comparisons

To show  lhs . x + c_lhs <= rhs . x + c_rhs  for every x >= 0 with A x <= b, it is
enough to find multipliers f >= 0 with

    lhs_j <= (f A)_j + rhs_j   for every column j
    f . b + c_lhs <= c_rhs

The multipliers become fresh unknowns of the constraint set; the monomials x do not.
"""
from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Set, Union

from src.linearize.knowledge import KnowledgeSystem
from src.models.annotation import Annotation, Index, LogIndex, RankIndex, index_key
from src.models.constraint import ConstraintSet, LinExpr, Number

logger = logging.getLogger(__name__)

TOLERANCE = 1e-9

Coefficient = Union[LinExpr, Fraction]


@dataclass
class FarkasCertificate:
    """Multiplier unknowns, one per knowledge row, in row order."""

    knowledge: KnowledgeSystem
    multipliers: List[str] = field(default_factory=list)

    def render(self, assignment: Optional[Mapping[str, Fraction]] = None) -> str:
        """A and b, then one multiplier per row with its value when a model is given."""
        lines = [self.knowledge.render(), "multipliers:"]
        for number, name in enumerate(self.multipliers):
            value = "?" if assignment is None else str(assignment.get(name, Fraction(0)))
            lines.append(f"  f{number} = {value}   [{name}]")
        return "\n".join(lines)


def constant_value(index: LogIndex, round_up: bool) -> int:
    """log2(b) of a constant index, rounded to an integer bound on the safe side."""
    if index.constant <= 1:
        return 0
    exact = math.log2(index.constant)
    if 2 ** int(exact) == index.constant:
        return int(exact)
    return math.ceil(exact) if round_up else math.floor(exact)


def _expr(value: Union[Coefficient, Number]) -> LinExpr:
    if isinstance(value, LinExpr):
        return value
    return LinExpr.const(value)


def _columns(*annotations: Annotation[Any]) -> Set[Index]:
    found: Set[Index] = set()
    for annotation in annotations:
        for index in annotation:
            if isinstance(index, RankIndex) or not index.is_constant():
                found.add(index)
    return found


def _constant_part(annotation: Annotation[Any], round_up: bool) -> LinExpr:
    total = LinExpr()
    for index, value in annotation.items():
        if isinstance(index, LogIndex) and index.is_constant():
            total = total + _expr(value) * constant_value(index, round_up)
    return total


def farkas_reduce(
    lhs: Annotation[Any],
    rhs: Annotation[Any],
    knowledge: KnowledgeSystem,
    cs: ConstraintSet,
    prefix: str,
    origin: str = "",
) -> FarkasCertificate:
    """Add constraints to cs implying Phi(lhs) <= Phi(rhs) under the knowledge rows."""
    if lhs.arity != rhs.arity:
        raise ValueError(f"cannot compare annotations of arity {lhs.arity} and {rhs.arity}")
    certificate = FarkasCertificate(knowledge)
    combination: Dict[Index, LinExpr] = {}
    bound = LinExpr()
    for number, row in enumerate(knowledge.rows):
        multiplier = cs.fresh(f"{prefix}.f{number}", f"multiplier ({row.reason})")
        (name,) = multiplier.terms
        certificate.multipliers.append(name)
        for column, coefficient in row.coefficients:
            combination[column] = combination.get(column, LinExpr()) + multiplier * coefficient
        bound = bound + multiplier * row.bound

    columns = _columns(lhs, rhs) | set(knowledge.columns)
    for column in sorted(columns, key=index_key):
        cs.less_equal(
            _expr(lhs.get(column)),
            _expr(rhs.get(column)) + combination.get(column, LinExpr()),
            f"{origin} column {column}",
        )
    cs.less_equal(
        bound + _constant_part(lhs, round_up=True),
        _constant_part(rhs, round_up=False),
        f"{origin} constant",
    )
    logger.debug(
        f"Farkas reduction {prefix}: {len(columns)} column(s), {len(knowledge.rows)} multiplier(s)"
    )
    return certificate


def verify_farkas_sufficiency(
    lhs: Annotation[Fraction],
    rhs: Annotation[Fraction],
    knowledge: KnowledgeSystem,
    multipliers: Optional[Mapping[int, Fraction]] = None,
    samples: int = 1000,
    seed: Optional[int] = None,
) -> bool:
    """
    Sample points x >= 0 with A x <= b and test lhs . x + c_lhs <= rhs . x + c_rhs.

    When multipliers are given (row number -> value) the certificate itself is
    checked exactly first and a violated certificate is rejected outright.
    """
    if multipliers is not None and not _certificate_holds(lhs, rhs, knowledge, multipliers):
        return False

    rng = random.Random(seed)
    columns = sorted(_columns(lhs, rhs) | set(knowledge.columns), key=index_key)
    for number in range(samples):
        point = _sample_point(columns, knowledge, rng, from_sizes=number % 2 == 1)
        if point is None:
            continue
        left = _evaluate(lhs, point)
        right = _evaluate(rhs, point)
        if left > right + TOLERANCE:
            logger.info(f"Counterexample to the weakening: {left} > {right}")
            return False
    return True


def _certificate_holds(
    lhs: Annotation[Fraction],
    rhs: Annotation[Fraction],
    knowledge: KnowledgeSystem,
    multipliers: Mapping[int, Fraction],
) -> bool:
    if any(Fraction(value) < 0 for value in multipliers.values()):
        return False
    combination: Dict[Index, Fraction] = {}
    bound = Fraction(0)
    for number, row in enumerate(knowledge.rows):
        factor = Fraction(multipliers.get(number, 0))
        for column, coefficient in row.coefficients:
            combination[column] = combination.get(column, Fraction(0)) + factor * coefficient
        bound += factor * row.bound
    for column in _columns(lhs, rhs) | set(knowledge.columns):
        if Fraction(lhs.get(column)) > Fraction(rhs.get(column)) + combination.get(column, 0):
            return False
    return bound + _constant_part(lhs, True).constant <= _constant_part(rhs, False).constant


def _sample_point(
    columns: List[Index], knowledge: KnowledgeSystem, rng: random.Random, from_sizes: bool
) -> Optional[Dict[Index, float]]:
    if from_sizes:
        return _point_from_sizes(columns, knowledge, rng)
    point: Dict[Index, float] = {column: rng.uniform(0, 12) for column in columns}
    for row in knowledge.rows:
        value = sum(point[column] * c for column, c in row.coefficients)
        if value > row.bound:
            return None
    return point


def _point_from_sizes(
    columns: List[Index], knowledge: KnowledgeSystem, rng: random.Random
) -> Dict[Index, float]:
    # real sizes satisfy every row, since rows are facts about real logarithms
    sizes: Dict[str, int] = {}
    point: Dict[Index, float] = {}
    for column in columns:
        if isinstance(column, RankIndex):
            point[column] = rng.uniform(0, 64)
            continue
        argument = column.constant
        for name, a in zip(knowledge.names, column.coefficients):
            if a == 0:
                continue
            for leaf, count in knowledge.facts.expand(name).items():
                if leaf not in sizes:
                    sizes[leaf] = rng.randint(1, 2 ** rng.randint(0, 10))
                argument += a * count * sizes[leaf]
        point[column] = math.log2(max(argument, 1))
    return point


def _evaluate(annotation: Annotation[Fraction], point: Mapping[Index, float]) -> float:
    total = 0.0
    for index, value in annotation.items():
        if isinstance(index, LogIndex) and index.is_constant():
            total += float(value) * math.log2(max(index.constant, 1))
        else:
            total += float(value) * point[index]
    return total
