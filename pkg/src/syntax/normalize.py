"""Let-normal form: every constructor, comparison, match and call argument becomes a variable."""
from __future__ import annotations

import logging
from dataclasses import replace
from typing import List, Tuple

from src.models.program import (
    Cmp,
    Definition,
    Expr,
    FalseLit,
    FunApp,
    If,
    Leaf,
    Let,
    Match,
    Node,
    Program,
    TrueLit,
    Var,
)

logger = logging.getLogger(__name__)

FRESH_PREFIX = "$t"

Bindings = List[Tuple[str, Expr]]


def normalize(program: Program) -> Program:
    """Return the let-normal form of every definition; the input is left untouched."""
    definitions = tuple(normalize_definition(definition) for definition in program.definitions)
    return Program(definitions, dict(program.declarations))


def normalize_definition(definition: Definition) -> Definition:
    normalizer = _Normalizer()
    body = normalizer.expr(definition.body)
    logger.debug(f"Normalised {definition.name} with {normalizer.counter} fresh name(s)")
    return replace(definition, body=body)


def normalize_expr(expr: Expr) -> Expr:
    return _Normalizer().expr(expr)


def is_fresh(name: str) -> bool:
    return name.startswith("$")


class _Normalizer:
    """Allocates $t names per definition, innermost sub-expression first."""

    def __init__(self) -> None:
        self.counter = 0

    def fresh(self) -> str:
        name = f"{FRESH_PREFIX}{self.counter}"
        self.counter += 1
        return name

    def expr(self, expr: Expr) -> Expr:
        if isinstance(expr, (Var, TrueLit, FalseLit, Leaf)):
            return expr

        if isinstance(expr, Node):
            bindings: Bindings = []
            parts = [self.atom(part, bindings) for part in (expr.left, expr.label, expr.right)]
            return _wrap(bindings, Node(parts[0], parts[1], parts[2], expr.loc))

        if isinstance(expr, FunApp):
            bindings = []
            arguments = tuple(self.atom(argument, bindings) for argument in expr.arguments)
            return _wrap(bindings, FunApp(expr.function, arguments, expr.loc))

        if isinstance(expr, Cmp):
            bindings = []
            left = self.atom(expr.left, bindings)
            right = self.atom(expr.right, bindings)
            return _wrap(bindings, Cmp(left, expr.op, right, expr.loc))

        if isinstance(expr, If):
            bindings = []
            cond: Expr
            if isinstance(expr.cond, Var):
                cond = expr.cond
            elif isinstance(expr.cond, Cmp):
                # comparisons of variables stay inline so both branches keep the constant potential
                left = self.atom(expr.cond.left, bindings)
                right = self.atom(expr.cond.right, bindings)
                cond = Cmp(left, expr.cond.op, right, expr.cond.loc)
            else:
                cond = self.atom(expr.cond, bindings)
            then_branch = self.expr(expr.then_branch)
            else_branch = self.expr(expr.else_branch)
            return _wrap(bindings, If(cond, then_branch, else_branch, expr.loc))

        if isinstance(expr, Match):
            bindings = []
            scrutinee = self.atom(expr.scrutinee, bindings)
            leaf_branch = None if expr.leaf_branch is None else self.expr(expr.leaf_branch)
            node_branch = None if expr.node_branch is None else self.expr(expr.node_branch)
            return _wrap(
                bindings, Match(scrutinee, leaf_branch, expr.pattern, node_branch, expr.loc)
            )

        if isinstance(expr, Let):
            return Let(
                expr.name, self.expr(expr.bound), self.expr(expr.body), expr.loc, expr.binder_type
            )

        raise TypeError(f"not an expression: {expr!r}")

    def atom(self, expr: Expr, bindings: Bindings) -> Var:
        if isinstance(expr, Var):
            return expr
        normal = self.expr(expr)
        # lets introduced by normalisation bind names nobody else can capture
        while isinstance(normal, Let) and is_fresh(normal.name):
            bindings.append((normal.name, normal.bound))
            normal = normal.body
        name = self.fresh()
        bindings.append((name, normal))
        return Var(name, expr.loc)


def _wrap(bindings: Bindings, body: Expr) -> Expr:
    for name, bound in reversed(bindings):
        body = Let(name, bound, body, bound.loc)
    return body
