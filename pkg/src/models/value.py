"""Runtime values of the core language and environments binding them."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, List, Union


@dataclass(frozen=True)
class BaseValue:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class BoolValue:
    value: bool

    def __str__(self) -> str:
        return "true" if self.value else "false"


@dataclass(frozen=True)
class LeafValue:
    @property
    def size(self) -> int:
        return 1

    def __str__(self) -> str:
        return "leaf"


@dataclass(frozen=True)
class NodeValue:
    left: "TreeValue"
    label: BaseValue
    right: "TreeValue"

    @cached_property
    def size(self) -> int:
        """Number of leaves."""
        return self.left.size + self.right.size

    def __str__(self) -> str:
        return f"({self.left}, {self.label}, {self.right})"


TreeValue = Union[LeafValue, NodeValue]
Value = Union[BaseValue, BoolValue, LeafValue, NodeValue]
Environment = Dict[str, Value]

LEAF = LeafValue()


def is_tree(value: Value) -> bool:
    return isinstance(value, (LeafValue, NodeValue))


def node(left: TreeValue, key: int, right: TreeValue) -> NodeValue:
    return NodeValue(left, BaseValue(key), right)


def in_order_keys(tree: TreeValue) -> List[int]:
    return [label.value for label in _labels(tree)]


def _labels(tree: TreeValue) -> Iterator[BaseValue]:
    stack: List[TreeValue] = []
    current: TreeValue = tree
    while stack or isinstance(current, NodeValue):
        while isinstance(current, NodeValue):
            stack.append(current)
            current = current.left
        top = stack.pop()
        assert isinstance(top, NodeValue)
        yield top.label
        current = top.right


def format_value(value: Value) -> str:
    return str(value)
