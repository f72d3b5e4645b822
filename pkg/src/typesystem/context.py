"""Typing contexts and the re-indexing of annotations that follows their tree positions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, Sequence, Tuple

from src.models.annotation import Annotation, C, Index, LogIndex, RankIndex
from src.models.program import SimpleType, TreeType


@dataclass(frozen=True)
class TypingContext:
    """Ordered (name, type) entries; tree-typed entries give the annotation positions."""

    entries: Tuple[Tuple[str, SimpleType], ...] = ()

    def __post_init__(self) -> None:
        names = [name for name, _ in self.entries]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate variable in typing context: {names}")

    def __iter__(self) -> Iterator[Tuple[str, SimpleType]]:
        return iter(self.entries)

    def __contains__(self, name: object) -> bool:
        return any(entry == name for entry, _ in self.entries)

    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.entries)

    def trees(self) -> Tuple[str, ...]:
        return tuple(name for name, type_ in self.entries if isinstance(type_, TreeType))

    def type_of(self, name: str) -> SimpleType:
        for entry, type_ in self.entries:
            if entry == name:
                return type_
        raise KeyError(f"{name} is not in the typing context")

    def is_tree(self, name: str) -> bool:
        return isinstance(self.type_of(name), TreeType)

    def without(self, name: str) -> "TypingContext":
        return TypingContext(tuple(entry for entry in self.entries if entry[0] != name))

    def extend(self, name: str, type_: SimpleType) -> "TypingContext":
        return TypingContext(self.without(name).entries + ((name, type_),))

    def restrict(self, names: Sequence[str]) -> "TypingContext":
        """Entries whose name is in names, keeping context order."""
        wanted = set(names)
        return TypingContext(tuple(entry for entry in self.entries if entry[0] in wanted))

    def __str__(self) -> str:
        return ", ".join(f"{name}:{type_}" for name, type_ in self.entries)


def reorder(annotation: Annotation[C], old: Sequence[str], new: Sequence[str]) -> Annotation[C]:
    """Re-index an annotation over tree names old to the permutation new."""
    if sorted(old) != sorted(new):
        raise ValueError(f"{list(new)} is not a permutation of {list(old)}")
    if tuple(old) == tuple(new):
        return annotation
    position = {name: i for i, name in enumerate(old)}
    moved: Dict[Index, C] = {}
    for index, value in annotation.items():
        if isinstance(index, RankIndex):
            target: Index = RankIndex(new.index(old[index.position - 1]) + 1)
        else:
            vector = tuple(index.coefficients[position[name]] for name in new)
            target = LogIndex(vector, index.constant)
        moved[target] = value
    return Annotation(len(new), moved)


def drop_position(annotation: Annotation[C], names: Sequence[str], name: str) -> Annotation[C]:
    """Forget tree name: keep ranks of the others and logs in which name has coefficient 0."""
    where = list(names).index(name)
    kept: Dict[Index, C] = {}
    for index, value in annotation.items():
        if isinstance(index, RankIndex):
            if index.position - 1 == where:
                continue
            position = index.position if index.position - 1 < where else index.position - 1
            kept[RankIndex(position)] = value
        else:
            if index.coefficients[where] != 0:
                continue
            vector = index.coefficients[:where] + index.coefficients[where + 1 :]
            if not any(vector) and index.constant == 0:
                continue
            kept[LogIndex(vector, index.constant)] = value
    return Annotation(annotation.arity - 1, kept)


def split_index(index: LogIndex, first: int) -> Tuple[Tuple[int, ...], Tuple[int, ...], int]:
    """(a, b, c) for a log index over a context split after the first positions."""
    return index.coefficients[:first], index.coefficients[first:], index.constant
