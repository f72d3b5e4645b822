"""Random binary search trees and keys for empirical validation."""
from __future__ import annotations

import logging
import random
from typing import List, Optional, Sequence, Set

from src.models.value import LEAF, BaseValue, NodeValue, TreeValue, in_order_keys

logger = logging.getLogger(__name__)

KEY_BOUND = 2**63


def gen_random_search_tree(
    n: int, seed: Optional[int] = None, rng: Optional[random.Random] = None
) -> TreeValue:
    """Search tree with n leaves (n - 1 distinct keys) and a uniformly random shape."""
    if n < 1:
        raise ValueError("a tree has at least one leaf")
    rng = rng or random.Random(seed)
    drawn: Set[int] = set()
    while len(drawn) < n - 1:
        drawn.add(rng.randrange(KEY_BOUND))
    keys = sorted(drawn)
    return _build(keys, rng)


def _build(keys: Sequence[int], rng: random.Random) -> TreeValue:
    if not keys:
        return LEAF
    root = rng.randrange(len(keys))
    return NodeValue(_build(keys[:root], rng), BaseValue(keys[root]), _build(keys[root + 1 :], rng))


def gen_search_key(tree: TreeValue, rng: random.Random) -> int:
    """A key of the tree half of the time, otherwise a nearby key."""
    keys: List[int] = in_order_keys(tree)
    if keys and rng.random() < 0.5:
        return rng.choice(keys)
    if not keys:
        return rng.randrange(KEY_BOUND)
    low = max(keys[0] - 1, 0)
    high = min(keys[-1] + 1, KEY_BOUND - 1)
    return rng.randint(low, high)
