"""Resource annotations: coefficient maps over rank and logarithmic indices."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Generic, Iterator, Mapping, Optional, Tuple, TypeVar, Union

from src.models.constraint import LinExpr

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class RankIndex:
    """Coefficient of rk(t_position); positions are 1-based."""

    position: int

    def __post_init__(self) -> None:
        if self.position < 1:
            raise ValueError("rank positions start at 1")

    def __str__(self) -> str:
        return f"rk{self.position}"


@dataclass(frozen=True, order=True)
class LogIndex:
    """Coefficient of log(sum a_i |t_i| + b)."""

    coefficients: Tuple[int, ...]
    constant: int

    def __post_init__(self) -> None:
        if any(a < 0 for a in self.coefficients) or self.constant < 0:
            raise ValueError("log index entries must be natural numbers")

    @property
    def arity(self) -> int:
        return len(self.coefficients)

    def is_constant(self) -> bool:
        return not any(self.coefficients)

    def is_zero(self) -> bool:
        return self.is_constant() and self.constant == 0

    def __str__(self) -> str:
        return "lg" + ".".join(str(a) for a in self.coefficients) + f"+{self.constant}"


Index = Union[RankIndex, LogIndex]

C = TypeVar("C", Fraction, LinExpr)


def constant_index(arity: int, value: int = 2) -> LogIndex:
    return LogIndex((0,) * arity, value)


def index_key(index: Index) -> Tuple[int, Tuple[int, ...], int]:
    """Total order: ranks first, then log indices lexicographically."""
    if isinstance(index, RankIndex):
        return (0, (index.position,), 0)
    return (1, index.coefficients, index.constant)


def format_index(index: Index, star: bool = False) -> str:
    """Render an index the way .coef files write it."""
    if isinstance(index, RankIndex):
        return "q*" if star else f"q{index.position}"
    vector = " ".join(str(a) for a in index.coefficients)
    return f"q({vector} | {index.constant})" if vector else f"q(| {index.constant})"


class Annotation(Generic[C]):
    """
    Finitely supported map from indices to coefficients for m tree positions.
    Absent indices have coefficient zero. Coefficients are rationals, or linear
    expressions over unknowns while a derivation is being built.
    """

    def __init__(self, arity: int, coefficients: Optional[Mapping[Index, C]] = None):
        if arity < 0:
            raise ValueError("annotation arity must be nonnegative")
        self.arity = arity
        self._coefficients: Dict[Index, C] = {}
        for index, value in (coefficients or {}).items():
            self._check_index(index)
            self._coefficients[index] = value

    def _check_index(self, index: Index) -> None:
        if isinstance(index, RankIndex):
            if index.position > self.arity:
                raise ValueError(f"rank index {index} outside arity {self.arity}")
        elif index.arity != self.arity:
            raise ValueError(f"log index {index} does not have arity {self.arity}")
        elif index.is_zero():
            raise ValueError("log(0) carries no potential and is not an index")

    def get(self, index: Index, default: Union[int, C] = 0) -> Union[int, C]:
        return self._coefficients.get(index, default)

    def __getitem__(self, index: Index) -> C:
        return self._coefficients[index]

    def __setitem__(self, index: Index, value: C) -> None:
        self._check_index(index)
        self._coefficients[index] = value

    def __contains__(self, index: object) -> bool:
        return index in self._coefficients

    def __iter__(self) -> Iterator[Index]:
        return iter(sorted(self._coefficients, key=index_key))

    def __len__(self) -> int:
        return len(self._coefficients)

    def items(self) -> Iterator[Tuple[Index, C]]:
        for index in self:
            yield index, self._coefficients[index]

    def indices(self) -> Tuple[Index, ...]:
        return tuple(self)

    def copy(self) -> "Annotation[C]":
        return Annotation(self.arity, dict(self._coefficients))

    def nonzero(self) -> "Annotation[C]":
        """Drop entries whose coefficient is literally zero."""
        kept = {i: v for i, v in self._coefficients.items() if not _is_literal_zero(v)}
        return Annotation(self.arity, kept)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Annotation):
            return NotImplemented
        mine = self.nonzero()
        theirs = other.nonzero()
        return self.arity == other.arity and mine._coefficients == theirs._coefficients

    def __repr__(self) -> str:
        body = ", ".join(f"{index}: {value}" for index, value in self.items())
        return f"Annotation({self.arity}, {{{body}}})"


def _is_literal_zero(value: object) -> bool:
    if isinstance(value, LinExpr):
        return value.is_zero()
    return value == 0
