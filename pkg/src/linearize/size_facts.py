"""Size relations between tree variables gathered from the pattern matches on an AST path."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Tuple

from src.models.program import Expr, Let, Match, Path, children

logger = logging.getLogger(__name__)

SizeTerm = Tuple[Mapping[str, int], int]

COPY_MARK = "#"


def base_name(name: str) -> str:
    """Shared copies z#1, z#2 have the size of z."""
    return name.split(COPY_MARK, 1)[0]


@dataclass(frozen=True)
class SizeFacts:
    """|parent| = |left| + |right| for every matched node; every size is at least 1."""

    splits: Tuple[Tuple[str, str, str], ...] = ()

    def with_split(self, parent: str, left: str, right: str) -> "SizeFacts":
        return SizeFacts(self.splits + ((parent, left, right),))

    def forget(self, name: str) -> "SizeFacts":
        """Drop facts about a name that is rebound."""
        kept = tuple(split for split in self.splits if name not in split)
        return SizeFacts(kept)

    def expand(self, name: str) -> Dict[str, int]:
        """Write |name| as a sum of sizes that are independent of each other."""
        parts = {parent: (left, right) for parent, left, right in self.splits}
        result: Dict[str, int] = {}
        pending = [base_name(name)]
        while pending:
            current = pending.pop()
            if current in parts:
                pending.extend(parts[current])
            else:
                result[current] = result.get(current, 0) + 1
        return result

    def expand_term(self, term: SizeTerm) -> Tuple[Dict[str, int], int]:
        coefficients, constant = term
        total: Dict[str, int] = {}
        for name, factor in coefficients.items():
            if factor == 0:
                continue
            for leaf, count in self.expand(name).items():
                total[leaf] = total.get(leaf, 0) + factor * count
        return total, constant

    def entails_at_least(self, bigger: SizeTerm, smaller: SizeTerm) -> bool:
        """Does bigger >= smaller hold for all sizes >= 1 satisfying the facts?"""
        big, big_constant = self.expand_term(bigger)
        small, small_constant = self.expand_term(smaller)
        return difference_nonnegative(big, big_constant, small, small_constant)


def difference_nonnegative(
    big: Mapping[str, int], big_constant: int, small: Mapping[str, int], small_constant: int
) -> bool:
    # independent sizes range over [1, inf): a negative coefficient is unbounded below
    names = set(big) | set(small)
    coefficients = [big.get(name, 0) - small.get(name, 0) for name in names]
    if any(c < 0 for c in coefficients):
        return False
    return sum(coefficients) + big_constant - small_constant >= 0


def size_facts(body: Expr, path: Path) -> SizeFacts:
    """Facts valid at path inside a normalised definition body."""
    facts = SizeFacts()
    current = body
    for step in path:
        if isinstance(current, Match) and step == 1 and current.pattern is not None:
            for binder in current.pattern.binders:
                facts = facts.forget(binder)
            scrutinee = current.scrutinee
            name = getattr(scrutinee, "name", None)
            if name is not None and name not in current.pattern.binders:
                facts = facts.with_split(name, current.pattern.left, current.pattern.right)
        elif isinstance(current, Let) and step == 1:
            facts = facts.forget(current.name)
        lookup = dict(children(current))
        if step not in lookup:
            raise KeyError(f"path step {step} leaves the expression")
        current = lookup[step]
    logger.debug(f"{len(facts.splits)} size fact(s) along path {path}")
    return facts


def term_of(coefficients: Iterable[int], names: Iterable[str], constant: int) -> SizeTerm:
    return {name: a for name, a in zip(names, coefficients) if a}, constant
