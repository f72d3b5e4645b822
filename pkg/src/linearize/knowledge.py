"""
Expert knowledge about logarithms of tree sizes, as rows of A x <= b

Columns are log monomials log(sum a_i |x_i| + b) over a typing context. Rows come
from two facts about log2 on arguments >= 1:

  monotonicity   e >= e'            gives  log e' - log e <= 0   (and -log e <= -1 when e >= 2)
  concavity      e >= e1 + e2       gives  log e1 + log e2 - 2 log e <= -2
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

from src.linearize.size_facts import SizeFacts, difference_nonnegative, term_of
from src.models.annotation import LogIndex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KnowledgeRow:
    coefficients: Tuple[Tuple[LogIndex, int], ...]
    bound: int
    reason: str

    def as_dict(self) -> Dict[LogIndex, int]:
        return dict(self.coefficients)


@dataclass
class KnowledgeSystem:
    names: Tuple[str, ...]
    columns: List[LogIndex]
    rows: List[KnowledgeRow] = field(default_factory=list)
    facts: SizeFacts = field(default_factory=SizeFacts)

    def describe(self, column: LogIndex) -> str:
        parts = [
            (name if a == 1 else f"{a}{name}")
            for name, a in zip(self.names, column.coefficients)
            if a
        ]
        if column.constant:
            parts.append(str(column.constant))
        return "log(" + " + ".join(parts) + ")"

    def render(self) -> str:
        """Plain-text dump of A and b for --explain."""
        lines = [f"columns over ({', '.join(self.names)}):"]
        for position, column in enumerate(self.columns):
            lines.append(f"  x{position} = {self.describe(column)}")
        lines.append(f"rows ({len(self.rows)}):")
        for row in self.rows:
            terms = " ".join(
                f"{'+' if c > 0 else '-'}{'' if abs(c) == 1 else abs(c)}{self.describe(index)}"
                for index, c in row.coefficients
            )
            lines.append(f"  {terms} <= {row.bound}   [{row.reason}]")
        return "\n".join(lines)


def build_knowledge(
    monomials: Sequence[LogIndex], names: Sequence[str], facts: SizeFacts
) -> KnowledgeSystem:
    """Rows about the given monomials, entailed by the size facts."""
    columns = sorted({m for m in monomials if not m.is_constant()})
    system = KnowledgeSystem(tuple(names), columns, facts=facts)
    if not columns:
        return system

    expanded = {
        column: facts.expand_term(term_of(column.coefficients, names, column.constant))
        for column in columns
    }

    def at_least(big: LogIndex, small: LogIndex) -> bool:
        (b, bc), (s, sc) = expanded[big], expanded[small]
        return difference_nonnegative(b, bc, s, sc)

    geq = {(u, v): u != v and at_least(u, v) for u in columns for v in columns}

    def equivalent(u: LogIndex, v: LogIndex) -> bool:
        return u == v or (geq[(u, v)] and geq[(v, u)])

    def strictly_between(u: LogIndex, v: LogIndex) -> bool:
        return any(
            geq[(u, w)] and geq[(w, v)] and not equivalent(w, u) and not equivalent(w, v)
            for w in columns
        )

    for u, v in itertools.permutations(columns, 2):
        if geq[(u, v)] and not strictly_between(u, v):
            system.rows.append(KnowledgeRow(((v, 1), (u, -1)), 0, "monotone"))

    at_least_two = {
        u: difference_nonnegative(expanded[u][0], expanded[u][1], {}, 2) for u in columns
    }
    for u in columns:
        if at_least_two[u] and not any(
            at_least_two[w] and geq[(u, w)] and not equivalent(u, w) for w in columns
        ):
            system.rows.append(KnowledgeRow(((u, -1),), -1, "log >= 1"))

    system.rows.extend(_lemma_rows(columns, expanded, geq, equivalent))
    logger.debug(f"Knowledge over {len(columns)} column(s): {len(system.rows)} row(s)")
    return system


def _lemma_rows(
    columns: List[LogIndex],
    expanded: Dict[LogIndex, Tuple[Dict[str, int], int]],
    geq: Dict[Tuple[LogIndex, LogIndex], bool],
    equivalent: Callable[[LogIndex, LogIndex], bool],
) -> List[KnowledgeRow]:
    def covers(w: LogIndex, u: LogIndex, v: LogIndex) -> bool:
        (wc, wk), (uc, uk), (vc, vk) = expanded[w], expanded[u], expanded[v]
        summed = dict(uc)
        for name, count in vc.items():
            summed[name] = summed.get(name, 0) + count
        return difference_nonnegative(wc, wk, summed, uk + vk)

    def at_least(a: LogIndex, b: LogIndex) -> bool:
        return a == b or geq[(a, b)]

    pairs = list(itertools.combinations_with_replacement(columns, 2))
    valid: Dict[LogIndex, List[Tuple[LogIndex, LogIndex]]] = {
        w: [(u, v) for u, v in pairs if covers(w, u, v)] for w in columns
    }

    def dominated(pair: Tuple[LogIndex, LogIndex], others: List[Tuple[LogIndex, LogIndex]]) -> bool:
        u, v = pair
        for x, y in others:
            for a, b in ((x, y), (y, x)):
                if at_least(a, u) and at_least(b, v) and not (
                    equivalent(a, u) and equivalent(b, v)
                ):
                    return True
        return False

    rows: List[KnowledgeRow] = []
    for w in columns:
        for u, v in valid[w]:
            if dominated((u, v), valid[w]):
                continue
            smaller_w = any(
                geq[(w, other)] and not equivalent(w, other) and (u, v) in valid[other]
                for other in columns
            )
            if smaller_w:
                continue
            coefficients: Dict[LogIndex, int] = {}
            for column, c in ((u, 1), (v, 1), (w, -2)):
                coefficients[column] = coefficients.get(column, 0) + c
            rows.append(
                KnowledgeRow(
                    tuple((k, c) for k, c in coefficients.items() if c), -2, "concavity"
                )
            )
    return rows
