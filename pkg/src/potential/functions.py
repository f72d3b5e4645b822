"""Rank, clamped logarithm and the potential of values under an annotation."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Sequence

from src.models.annotation import Annotation, LogIndex, RankIndex
from src.models.value import NodeValue, TreeValue


def log2p(n: float) -> float:
    """log2(max(n, 1))."""
    return math.log2(max(n, 1))


def rank(tree: TreeValue) -> float:
    """rk(leaf) = 1; rk((l, d, r)) = rk(l) + log|l| + log|r| + rk(r)."""
    cache: Dict[int, float] = {}
    return _rank(tree, cache)


def _rank(tree: TreeValue, cache: Dict[int, float]) -> float:
    if not isinstance(tree, NodeValue):
        return 1.0
    key = id(tree)
    if key not in cache:
        cache[key] = (
            _rank(tree.left, cache)
            + log2p(tree.left.size)
            + log2p(tree.right.size)
            + _rank(tree.right, cache)
        )
    return cache[key]


def potential_of(annotation: Annotation[Fraction], trees: Sequence[TreeValue]) -> float:
    """Sum of q_i rk(t_i) plus q_(a,b) log(sum a_i |t_i| + b), in double precision."""
    if len(trees) != annotation.arity:
        raise ValueError(
            f"annotation of arity {annotation.arity} applied to {len(trees)} tree(s)"
        )
    sizes = [tree.size for tree in trees]
    total = 0.0
    for index, coefficient in annotation.items():
        value = float(coefficient)
        if value == 0:
            continue
        if isinstance(index, RankIndex):
            total += value * rank(trees[index.position - 1])
        else:
            total += value * log2p(_argument(index, sizes))
    return total


def _argument(index: LogIndex, sizes: Sequence[int]) -> int:
    return sum(a * size for a, size in zip(index.coefficients, sizes)) + index.constant
