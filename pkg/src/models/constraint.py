"""Linear expressions over named unknowns and the constraint sets built from them."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]
Assignment = Dict[str, Fraction]

RELATIONS = ("=", "<=", ">=")


class LinExpr:
    """Sum of rational multiples of unknowns plus a rational constant. Immutable."""

    __slots__ = ("_terms", "_constant")

    def __init__(self, terms: Optional[Mapping[str, Number]] = None, constant: Number = 0):
        cleaned: Dict[str, Fraction] = {}
        for name, coefficient in (terms or {}).items():
            value = Fraction(coefficient)
            if value != 0:
                cleaned[name] = value
        self._terms = cleaned
        self._constant = Fraction(constant)

    @classmethod
    def var(cls, name: str) -> "LinExpr":
        return cls({name: 1})

    @classmethod
    def const(cls, value: Number) -> "LinExpr":
        return cls(None, value)

    @property
    def terms(self) -> Mapping[str, Fraction]:
        return self._terms

    @property
    def constant(self) -> Fraction:
        return self._constant

    def is_constant(self) -> bool:
        return not self._terms

    def is_zero(self) -> bool:
        return not self._terms and self._constant == 0

    def unknowns(self) -> Iterator[str]:
        return iter(self._terms)

    def evaluate(self, assignment: Mapping[str, Fraction]) -> Fraction:
        total = self._constant
        for name, coefficient in self._terms.items():
            if name not in assignment:
                raise KeyError(f"assignment is missing unknown {name}")
            total += coefficient * assignment[name]
        return total

    def substitute(self, name: str, replacement: "LinExpr") -> "LinExpr":
        if name not in self._terms:
            return self
        coefficient = self._terms[name]
        rest = {key: value for key, value in self._terms.items() if key != name}
        return LinExpr(rest, self._constant) + replacement * coefficient

    def __add__(self, other: Union["LinExpr", Number]) -> "LinExpr":
        other = _lift(other)
        terms = dict(self._terms)
        for name, coefficient in other._terms.items():
            terms[name] = terms.get(name, Fraction(0)) + coefficient
        return LinExpr(terms, self._constant + other._constant)

    __radd__ = __add__

    def __neg__(self) -> "LinExpr":
        return LinExpr({name: -value for name, value in self._terms.items()}, -self._constant)

    def __sub__(self, other: Union["LinExpr", Number]) -> "LinExpr":
        return self + (-_lift(other))

    def __rsub__(self, other: Union["LinExpr", Number]) -> "LinExpr":
        return _lift(other) - self

    def __mul__(self, scalar: Number) -> "LinExpr":
        if isinstance(scalar, LinExpr):
            raise TypeError("product of two linear expressions is not linear")
        factor = Fraction(scalar)
        terms = {name: value * factor for name, value in self._terms.items()}
        return LinExpr(terms, self._constant * factor)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LinExpr.const(other)
        if not isinstance(other, LinExpr):
            return NotImplemented
        return self._terms == other._terms and self._constant == other._constant

    def __hash__(self) -> int:
        return hash((frozenset(self._terms.items()), self._constant))

    def __repr__(self) -> str:
        return f"LinExpr({self})"

    def __str__(self) -> str:
        parts = []
        for name in sorted(self._terms):
            coefficient = self._terms[name]
            if coefficient == 1:
                parts.append(name)
            else:
                parts.append(f"{coefficient}*{name}")
        if self._constant != 0 or not parts:
            parts.append(str(self._constant))
        return " + ".join(parts)


def _lift(value: Union[LinExpr, Number]) -> LinExpr:
    if isinstance(value, LinExpr):
        return value
    return LinExpr.const(value)


@dataclass(frozen=True)
class Constraint:
    """expr (relation) 0, where expr carries its own constant."""

    expr: LinExpr
    relation: str
    origin: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")

    def holds(self, assignment: Mapping[str, Fraction]) -> bool:
        value = self.expr.evaluate(assignment)
        if self.relation == "=":
            return value == 0
        if self.relation == "<=":
            return value <= 0
        return value >= 0

    def is_trivial(self) -> bool:
        """Constant constraint that holds regardless of the assignment."""
        return self.expr.is_constant() and self.holds({})

    def __str__(self) -> str:
        terms = LinExpr(self.expr.terms)
        return f"{terms} {self.relation} {-self.expr.constant}"


@dataclass(frozen=True)
class Implication:
    """guard != 0 implies consequent; selector names the big-M switch encoding it."""

    guard: str
    consequent: Constraint
    selector: str
    origin: str = field(default="", compare=False)

    def holds(self, assignment: Mapping[str, Fraction]) -> bool:
        if assignment[self.guard] == 0:
            return True
        return self.consequent.holds(assignment)


class ConstraintSet:
    """Append-only collection of linear constraints over nonnegative unknowns."""

    def __init__(self) -> None:
        self.unknowns: Dict[str, str] = {}
        self.constraints: List[Constraint] = []
        self.implications: List[Implication] = []

    def declare(self, name: str, note: str = "") -> LinExpr:
        if name in self.unknowns:
            raise ValueError(f"unknown {name} declared twice")
        self.unknowns[name] = note
        return LinExpr.var(name)

    def fresh(self, name: str, note: str = "") -> LinExpr:
        """Declare name, or name with a numeric suffix when it is taken."""
        candidate = name
        counter = 1
        while candidate in self.unknowns:
            candidate = f"{name}~{counter}"
            counter += 1
        return self.declare(candidate, note)

    def add(self, constraint: Constraint) -> None:
        for name in constraint.expr.unknowns():
            if name not in self.unknowns:
                raise ValueError(f"constraint mentions undeclared unknown {name}")
        if constraint.is_trivial():
            return
        if constraint.expr.is_constant():
            logger.debug(f"Constant constraint is violated: {constraint} ({constraint.origin})")
        self.constraints.append(constraint)

    def equal(
        self, lhs: Union[LinExpr, Number], rhs: Union[LinExpr, Number], origin: str = ""
    ) -> None:
        self.add(Constraint(_lift(lhs) - _lift(rhs), "=", origin))

    def less_equal(
        self, lhs: Union[LinExpr, Number], rhs: Union[LinExpr, Number], origin: str = ""
    ) -> None:
        self.add(Constraint(_lift(lhs) - _lift(rhs), "<=", origin))

    def greater_equal(
        self, lhs: Union[LinExpr, Number], rhs: Union[LinExpr, Number], origin: str = ""
    ) -> None:
        self.add(Constraint(_lift(lhs) - _lift(rhs), ">=", origin))

    def implication(
        self, guard: LinExpr, lhs: LinExpr, rhs: LinExpr, big_m: int, origin: str = ""
    ) -> None:
        """Record guard != 0 -> lhs <= rhs, with its big-M relaxation rows."""
        if guard.is_zero():
            return
        if len(guard.terms) != 1 or guard.constant != 0 or set(guard.terms.values()) != {1}:
            raise ValueError(f"implication guard must be a single unknown, got {guard}")
        (guard_name,) = guard.terms
        consequent = Constraint(lhs - rhs, "<=", origin)
        if consequent.is_trivial():
            return
        selector = self.fresh(f"{guard_name}.sel", "implication selector")
        self.less_equal(guard, selector * big_m, origin + " [selector]")
        self.less_equal(lhs, rhs + (1 - selector) * big_m, origin + " [selector]")
        self.less_equal(selector, 1, origin + " [selector]")
        (selector_name,) = selector.terms
        self.implications.append(Implication(guard_name, consequent, selector_name, origin))

    def extend(self, other: "ConstraintSet") -> None:
        for name, note in other.unknowns.items():
            if name in self.unknowns:
                raise ValueError(f"unknown {name} declared in both sets")
            self.unknowns[name] = note
        self.constraints.extend(other.constraints)
        self.implications.extend(other.implications)

    def restrict(self, prefix: str) -> "ConstraintSet":
        """Sub-system of constraints whose origin starts with prefix."""
        subset = ConstraintSet()
        chosen = [c for c in self.constraints if c.origin.startswith(prefix)]
        implications = [i for i in self.implications if i.origin.startswith(prefix)]
        names = set()
        for constraint in chosen:
            names.update(constraint.expr.unknowns())
        for implication in implications:
            names.update(implication.consequent.expr.unknowns())
            names.update((implication.guard, implication.selector))
        subset.unknowns = {name: self.unknowns[name] for name in self.unknowns if name in names}
        subset.constraints = chosen
        subset.implications = implications
        return subset

    def stats(self) -> Tuple[int, int]:
        return len(self.unknowns), len(self.constraints)

    def __iter__(self) -> Iterator[Constraint]:
        return iter(self.constraints)

    def __len__(self) -> int:
        return len(self.constraints)


def check_assignment(cs: ConstraintSet, assignment: Mapping[str, Fraction]) -> bool:
    """Exact check of every constraint, implication and nonnegativity."""
    for name in cs.unknowns:
        if name not in assignment:
            raise KeyError(f"assignment is missing unknown {name}")
        if Fraction(assignment[name]) < 0:
            return False
    for constraint in cs.constraints:
        if not constraint.holds(assignment):
            logger.debug(f"Constraint violated: {constraint} ({constraint.origin})")
            return False
    for implication in cs.implications:
        if not implication.holds(assignment):
            logger.debug(f"Implication violated: {implication.origin}")
            return False
    return True
