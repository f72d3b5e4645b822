"""Abstract syntax of the core language: simple types, expressions and programs."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple, Union

logger = logging.getLogger(__name__)

Path = Tuple[int, ...]
Location = Optional[Tuple[int, int]]


# ---------------------------------------------------------------------------
# Simple types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoolType:
    def __str__(self) -> str:
        return "Bool"


@dataclass(frozen=True)
class BaseType:
    def __str__(self) -> str:
        return "Base"


@dataclass(frozen=True)
class TreeType:
    def __str__(self) -> str:
        return "Tree"


@dataclass(frozen=True)
class ProductType:
    components: Tuple["SimpleType", ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise ValueError("product type needs at least one component")

    def __str__(self) -> str:
        return " * ".join(str(component) for component in self.components)


SimpleType = Union[BoolType, BaseType, TreeType, ProductType]

BOOL = BoolType()
BASE = BaseType()
TREE = TreeType()


@dataclass(frozen=True)
class FunctionType:
    """Signature alpha_1 x ... x alpha_n -> beta of a definition."""

    arguments: Tuple[SimpleType, ...]
    result: SimpleType

    def __str__(self) -> str:
        args = " * ".join(str(arg) for arg in self.arguments) or "()"
        return f"{args} -> {self.result}"


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

COMPARISON_OPERATORS = ("<", ">", "=")


@dataclass(frozen=True)
class Var:
    name: str
    loc: Location = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class TrueLit:
    loc: Location = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class FalseLit:
    loc: Location = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Leaf:
    loc: Location = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Node:
    left: "Expr"
    label: "Expr"
    right: "Expr"
    loc: Location = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Cmp:
    left: "Expr"
    op: str
    right: "Expr"
    loc: Location = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.op not in COMPARISON_OPERATORS:
            raise ValueError(f"unknown comparison operator {self.op!r}")


@dataclass(frozen=True)
class If:
    cond: "Expr"
    then_branch: "Expr"
    else_branch: "Expr"
    loc: Location = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class NodePattern:
    left: str
    label: str
    right: str

    @property
    def binders(self) -> Tuple[str, str, str]:
        return (self.left, self.label, self.right)


@dataclass(frozen=True)
class Match:
    """Pattern match; either arm may be absent, which fails at run time."""

    scrutinee: "Expr"
    leaf_branch: Optional["Expr"]
    pattern: Optional[NodePattern]
    node_branch: Optional["Expr"]
    loc: Location = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Let:
    name: str
    bound: "Expr"
    body: "Expr"
    loc: Location = field(default=None, compare=False, repr=False)
    binder_type: Optional[SimpleType] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class FunApp:
    function: str
    arguments: Tuple["Expr", ...]
    loc: Location = field(default=None, compare=False, repr=False)


Expr = Union[Var, TrueLit, FalseLit, Leaf, Node, Cmp, If, Match, Let, FunApp]


@dataclass(frozen=True)
class Definition:
    name: str
    params: Tuple[str, ...]
    body: Expr
    signature: Optional[FunctionType] = None
    loc: Location = field(default=None, compare=False, repr=False)

    @property
    def arity(self) -> int:
        return len(self.params)

    def tree_params(self) -> Tuple[str, ...]:
        """Parameters of type Tree, in declaration order."""
        if self.signature is None:
            raise ValueError(f"definition {self.name} has no signature yet")
        return tuple(
            name
            for name, type_ in zip(self.params, self.signature.arguments)
            if isinstance(type_, TreeType)
        )


@dataclass(frozen=True)
class Program:
    definitions: Tuple[Definition, ...]
    declarations: Dict[str, FunctionType] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        seen = set()
        for definition in self.definitions:
            if definition.name in seen:
                raise ValueError(f"duplicate definition of {definition.name}")
            seen.add(definition.name)

    def get(self, name: str) -> Definition:
        for definition in self.definitions:
            if definition.name == name:
                return definition
        raise KeyError(f"undefined function {name}")

    def names(self) -> List[str]:
        return [definition.name for definition in self.definitions]


# ---------------------------------------------------------------------------
# Traversal helpers
# ---------------------------------------------------------------------------


def free_vars(expr: Expr) -> FrozenSet[str]:
    """Variables occurring unbound in expr."""
    if isinstance(expr, Var):
        return frozenset({expr.name})
    if isinstance(expr, (TrueLit, FalseLit, Leaf)):
        return frozenset()
    if isinstance(expr, Node):
        return free_vars(expr.left) | free_vars(expr.label) | free_vars(expr.right)
    if isinstance(expr, Cmp):
        return free_vars(expr.left) | free_vars(expr.right)
    if isinstance(expr, If):
        return free_vars(expr.cond) | free_vars(expr.then_branch) | free_vars(expr.else_branch)
    if isinstance(expr, Match):
        result = free_vars(expr.scrutinee)
        if expr.leaf_branch is not None:
            result |= free_vars(expr.leaf_branch)
        if expr.node_branch is not None and expr.pattern is not None:
            result |= free_vars(expr.node_branch) - set(expr.pattern.binders)
        return result
    if isinstance(expr, Let):
        return free_vars(expr.bound) | (free_vars(expr.body) - {expr.name})
    if isinstance(expr, FunApp):
        result = frozenset()
        for argument in expr.arguments:
            result |= free_vars(argument)
        return result
    raise TypeError(f"not an expression: {expr!r}")


def occurrences(expr: Expr, name: str) -> int:
    """Number of free occurrences of name in expr."""
    if isinstance(expr, Var):
        return 1 if expr.name == name else 0
    if isinstance(expr, (TrueLit, FalseLit, Leaf)):
        return 0
    if isinstance(expr, Node):
        return sum(occurrences(part, name) for part in (expr.left, expr.label, expr.right))
    if isinstance(expr, Cmp):
        return occurrences(expr.left, name) + occurrences(expr.right, name)
    if isinstance(expr, If):
        # branches are alternatives, only one of them runs
        return occurrences(expr.cond, name) + max(
            occurrences(expr.then_branch, name), occurrences(expr.else_branch, name)
        )
    if isinstance(expr, Match):
        branches = [0]
        if expr.leaf_branch is not None:
            branches.append(occurrences(expr.leaf_branch, name))
        if expr.node_branch is not None and expr.pattern is not None:
            if name not in expr.pattern.binders:
                branches.append(occurrences(expr.node_branch, name))
        return occurrences(expr.scrutinee, name) + max(branches)
    if isinstance(expr, Let):
        inner = 0 if expr.name == name else occurrences(expr.body, name)
        return occurrences(expr.bound, name) + inner
    if isinstance(expr, FunApp):
        return sum(occurrences(argument, name) for argument in expr.arguments)
    raise TypeError(f"not an expression: {expr!r}")


def rename_free(expr: Expr, old: str, new: str) -> Expr:
    """Replace free occurrences of variable old by new."""
    if isinstance(expr, Var):
        return Var(new, expr.loc) if expr.name == old else expr
    if isinstance(expr, (TrueLit, FalseLit, Leaf)):
        return expr
    if isinstance(expr, Node):
        return Node(
            rename_free(expr.left, old, new),
            rename_free(expr.label, old, new),
            rename_free(expr.right, old, new),
            expr.loc,
        )
    if isinstance(expr, Cmp):
        return Cmp(
            rename_free(expr.left, old, new), expr.op, rename_free(expr.right, old, new), expr.loc
        )
    if isinstance(expr, If):
        return If(
            rename_free(expr.cond, old, new),
            rename_free(expr.then_branch, old, new),
            rename_free(expr.else_branch, old, new),
            expr.loc,
        )
    if isinstance(expr, Match):
        leaf_branch = None if expr.leaf_branch is None else rename_free(expr.leaf_branch, old, new)
        node_branch = expr.node_branch
        if node_branch is not None and expr.pattern is not None and old not in expr.pattern.binders:
            node_branch = rename_free(node_branch, old, new)
        scrutinee = rename_free(expr.scrutinee, old, new)
        return Match(scrutinee, leaf_branch, expr.pattern, node_branch, expr.loc)
    if isinstance(expr, Let):
        body = expr.body if expr.name == old else rename_free(expr.body, old, new)
        return Let(expr.name, rename_free(expr.bound, old, new), body, expr.loc, expr.binder_type)
    if isinstance(expr, FunApp):
        arguments = tuple(rename_free(a, old, new) for a in expr.arguments)
        return FunApp(expr.function, arguments, expr.loc)
    raise TypeError(f"not an expression: {expr!r}")


def children(expr: Expr) -> List[Tuple[int, Expr]]:
    """Addressable sub-expressions with their child index."""
    if isinstance(expr, Let):
        return [(0, expr.bound), (1, expr.body)]
    if isinstance(expr, If):
        return [(0, expr.then_branch), (1, expr.else_branch)]
    if isinstance(expr, Match):
        result = []
        if expr.leaf_branch is not None:
            result.append((0, expr.leaf_branch))
        if expr.node_branch is not None:
            result.append((1, expr.node_branch))
        return result
    return []


def node_at(expr: Expr, path: Path) -> Expr:
    """Resolve a child-index path; raises KeyError when it leaves the tree."""
    current = expr
    for step in path:
        lookup = dict(children(current))
        if step not in lookup:
            raise KeyError(f"path {format_path(path)} does not address a sub-expression")
        current = lookup[step]
    return current


def walk(expr: Expr, path: Path = ()) -> Iterator[Tuple[Path, Expr]]:
    yield path, expr
    for index, child in children(expr):
        yield from walk(child, path + (index,))


def format_path(path: Path) -> str:
    return "/" + "/".join(str(step) for step in path)


def parse_path(text: str) -> Path:
    stripped = text.strip()
    if not stripped.startswith("/"):
        raise ValueError(f"path must start with '/': {text!r}")
    parts = [part for part in stripped[1:].split("/") if part != ""]
    if not all(part.isdigit() for part in parts):
        raise ValueError(f"path steps must be child indices: {text!r}")
    return tuple(int(part) for part in parts)


# ---------------------------------------------------------------------------
# Pretty printing (used by reports and --explain)
# ---------------------------------------------------------------------------


def format_expr(expr: Expr) -> str:
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, TrueLit):
        return "true"
    if isinstance(expr, FalseLit):
        return "false"
    if isinstance(expr, Leaf):
        return "leaf"
    if isinstance(expr, Node):
        return f"({format_expr(expr.left)}, {format_expr(expr.label)}, {format_expr(expr.right)})"
    if isinstance(expr, Cmp):
        return f"{format_expr(expr.left)} {expr.op} {format_expr(expr.right)}"
    if isinstance(expr, If):
        return (
            f"if {format_expr(expr.cond)} then {format_expr(expr.then_branch)} "
            f"else {format_expr(expr.else_branch)}"
        )
    if isinstance(expr, Match):
        arms = []
        if expr.leaf_branch is not None:
            arms.append(f"| leaf -> {format_expr(expr.leaf_branch)}")
        if expr.node_branch is not None and expr.pattern is not None:
            binders = ", ".join(expr.pattern.binders)
            arms.append(f"| ({binders}) -> {format_expr(expr.node_branch)}")
        return f"match {format_expr(expr.scrutinee)} with " + " ".join(arms)
    if isinstance(expr, Let):
        return f"let {expr.name} = {format_expr(expr.bound)} in {format_expr(expr.body)}"
    if isinstance(expr, FunApp):
        args = " ".join(
            format_expr(a) if isinstance(a, Var) else f"({format_expr(a)})" for a in expr.arguments
        )
        return f"{expr.function} {args}"
    raise TypeError(f"not an expression: {expr!r}")
