"""Pointwise annotation algebra, sharing and the restricted index template."""
from __future__ import annotations

import itertools
import logging
from typing import Dict, List, Union

from src.models.annotation import Annotation, C, Index, LogIndex, RankIndex, constant_index
from src.models.constraint import Number

logger = logging.getLogger(__name__)

TEMPLATE_COEFFICIENTS = (0, 1)
TEMPLATE_CONSTANTS = (0, 1, 2)


def index_universe(arity: int) -> List[Index]:
    """Ranks, then every log index with a_i in {0,1} and b in {0,1,2} except log(0)."""
    if arity < 0:
        raise ValueError("arity must be nonnegative")
    indices: List[Index] = [RankIndex(position) for position in range(1, arity + 1)]
    for vector in itertools.product(TEMPLATE_COEFFICIENTS, repeat=arity):
        for constant in TEMPLATE_CONSTANTS:
            if any(vector) or constant:
                indices.append(LogIndex(vector, constant))
    return indices


def in_template(index: Index) -> bool:
    if isinstance(index, RankIndex):
        return True
    return all(a in TEMPLATE_COEFFICIENTS for a in index.coefficients) and (
        index.constant in TEMPLATE_CONSTANTS
    )


def add(left: Annotation[C], right: Annotation[C]) -> Annotation[C]:
    if left.arity != right.arity:
        raise ValueError(f"cannot add annotations of arity {left.arity} and {right.arity}")
    result = left.copy()
    for index, value in right.items():
        result[index] = result.get(index) + value
    return result


def scale(factor: Number, annotation: Annotation[C]) -> Annotation[C]:
    result: Annotation[C] = Annotation(annotation.arity)
    if factor == 0:
        return result
    for index, value in annotation.items():
        result[index] = value * factor
    return result


def add_constant(annotation: Annotation[C], amount: Union[Number, C]) -> Annotation[C]:
    """Q + K: only the coefficient of log(2) = 1 changes."""
    result = annotation.copy()
    index = constant_index(annotation.arity)
    result[index] = result.get(index) + amount
    return result


def share(annotation: Annotation[C], restricted: bool = False) -> Annotation[C]:
    """
    Merge the last two positions into one: rank coefficients add and log index
    entries (a1, a2) become a1 + a2. With restricted=True a merged index that
    leaves the template raises instead of being kept.
    """
    if annotation.arity < 2:
        raise ValueError("sharing needs an annotation over at least two trees")
    arity = annotation.arity - 1
    merged: Dict[Index, C] = {}
    for index, value in annotation.items():
        if isinstance(index, RankIndex):
            target: Index = RankIndex(min(index.position, arity))
        else:
            *rest, first, second = index.coefficients
            target = LogIndex(tuple(rest) + (first + second,), index.constant)
            if not in_template(target):
                if restricted:
                    raise ValueError(f"shared index {target} leaves the coefficient template")
                logger.debug(f"Sharing produced {target} outside the template")
        merged[target] = merged[target] + value if target in merged else value
    return Annotation(arity, merged)
