"""Annotated signatures: the costed pair and the cost-free pairs of a function."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Generic, List, Optional

from src.models.annotation import Annotation, C


@dataclass
class AnnotatedPair(Generic[C]):
    """Argument annotation Q and result annotation Q' of one signature entry."""

    argument: Annotation[C]
    result: Annotation[C]

    @classmethod
    def empty(cls, argument_arity: int, result_arity: int) -> "AnnotatedPair[C]":
        return cls(Annotation(argument_arity), Annotation(result_arity))


@dataclass
class AnnotatedSignature:
    """
    What the user fixes for one function. A missing costed pair is left for the
    solver to determine; with no cost-free pairs only the empty pair is assumed.
    """

    name: str
    argument_arity: int
    result_arity: int
    costed: Optional[AnnotatedPair[Fraction]] = None
    cost_free: List[AnnotatedPair[Fraction]] = field(default_factory=list)

    def cost_free_pairs(self) -> List[AnnotatedPair[Fraction]]:
        if self.cost_free:
            return list(self.cost_free)
        return [AnnotatedPair.empty(self.argument_arity, self.result_arity)]
