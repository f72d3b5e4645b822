"""Structural rules: dropping and sharing variables, weakening and shifting potential."""
from __future__ import annotations

import itertools
import logging
from typing import Optional

from src.linearize.farkas import farkas_reduce
from src.linearize.knowledge import build_knowledge
from src.linearize.size_facts import COPY_MARK, SizeFacts, base_name, size_facts
from src.models.annotation import LogIndex, constant_index
from src.models.program import (
    Cmp,
    Expr,
    FunApp,
    Let,
    Match,
    Node,
    Var,
    free_vars,
    rename_free,
)
from src.potential.algebra import add_constant, share
from src.typesystem.context import TypingContext, drop_position, reorder
from src.typesystem.derivation import Derivation, Judgement, WeakeningRecord
from src.typesystem.rules import zero_rest
from src.typesystem.tactics import Directive
from src.utils.errors import TacticError

logger = logging.getLogger(__name__)

RESULT_NAME = "result"


def apply_structural(
    derivation: Derivation, directive: Directive, judgement: Judgement, body: Expr
) -> Judgement:
    """Apply one tactic directive at the judgement it addresses and return the premise."""
    if directive.kind == "weaken":
        return weaken(derivation, judgement, body)
    if directive.kind == "shift":
        return shift(derivation, judgement)
    if directive.kind == "wvar":
        assert directive.variable is not None
        if directive.variable not in judgement.context:
            raise TacticError(f"{directive}: {directive.variable} is not in the context")
        if directive.variable in free_vars(judgement.expr):
            raise TacticError(f"{directive}: {directive.variable} is still used")
        derivation.record(judgement, "w:var")
        return drop_variable(judgement, directive.variable)
    if directive.kind == "share":
        assert directive.variable is not None
        if directive.variable not in judgement.context:
            raise TacticError(f"{directive}: {directive.variable} is not in the context")
        split = split_occurrence(judgement.expr, directive.variable, "_")
        if split is None:
            logger.warning(f"{directive}: {directive.variable} occurs once, nothing to share")
            return judgement
        return share_variable(derivation, judgement, directive.variable)
    raise TacticError(f"{directive}: not a structural rule")


def drop_variable(judgement: Judgement, name: str) -> Judgement:
    context = judgement.context
    annotation = judgement.annotation
    if context.is_tree(name):
        annotation = drop_position(annotation, context.trees(), name)
    return judgement.with_(context=context.without(name), annotation=annotation)


def drop_unused(derivation: Derivation, judgement: Judgement) -> Judgement:
    """w:var for every context variable the expression does not mention."""
    used = free_vars(judgement.expr)
    unused = [name for name in judgement.context.names() if name not in used]
    if not unused:
        return judgement
    derivation.record(judgement, "w:var")
    for name in unused:
        judgement = drop_variable(judgement, name)
    return judgement


def split_occurrence(expr: Expr, name: str, copy: str) -> Optional[Expr]:
    """
    Rename the later of two sub-expressions that both use name, or None when name
    is used by at most one of them. If-conditions and both branches read the same
    value, so they never need a copy.
    """
    if isinstance(expr, Let):
        if name != expr.name and name in free_vars(expr.bound) and name in free_vars(expr.body):
            body = rename_free(expr.body, name, copy)
            return Let(expr.name, expr.bound, body, expr.loc, expr.binder_type)
        return None
    if isinstance(expr, Node):
        if _is(expr.left, name) and _is(expr.right, name):
            return Node(expr.left, expr.label, Var(copy), expr.loc)
        return None
    if isinstance(expr, Cmp):
        if _is(expr.left, name) and _is(expr.right, name):
            return Cmp(expr.left, expr.op, Var(copy), expr.loc)
        return None
    if isinstance(expr, FunApp):
        positions = [i for i, argument in enumerate(expr.arguments) if _is(argument, name)]
        if len(positions) < 2:
            return None
        arguments = list(expr.arguments)
        arguments[positions[-1]] = Var(copy)
        return FunApp(expr.function, tuple(arguments), expr.loc)
    if isinstance(expr, Match) and _is(expr.scrutinee, name):
        binders = expr.pattern.binders if expr.pattern is not None else ()
        in_leaf = expr.leaf_branch is not None and name in free_vars(expr.leaf_branch)
        in_node = (
            expr.node_branch is not None
            and name not in binders
            and name in free_vars(expr.node_branch)
        )
        if not (in_leaf or in_node):
            return None
        leaf = expr.leaf_branch
        if leaf is not None:
            leaf = rename_free(leaf, name, copy)
        node = expr.node_branch
        if node is not None and name not in binders:
            node = rename_free(node, name, copy)
        return Match(expr.scrutinee, leaf, expr.pattern, node, expr.loc)
    return None


def auto_share(derivation: Derivation, judgement: Judgement) -> Judgement:
    """Share every tree variable used by two sub-expressions, until none is."""
    changed = True
    while changed:
        changed = False
        for name in judgement.context.trees():
            if split_occurrence(judgement.expr, name, "_") is not None:
                judgement = share_variable(derivation, judgement, name)
                changed = True
                break
    return judgement


def copy_name(judgement: Judgement, name: str) -> str:
    taken = set(judgement.context.names()) | set(free_vars(judgement.expr))
    for number in itertools.count(1):
        candidate = f"{base_name(name)}{COPY_MARK}{number}"
        if candidate not in taken:
            return candidate
    raise AssertionError("unreachable")


def share_variable(derivation: Derivation, judgement: Judgement, name: str) -> Judgement:
    """
    Replace name by name and a copy in the context. The premise annotation is a fresh
    template S whose sharing (positions name and copy merged) matches the conclusion.
    """
    copy = copy_name(judgement, name)
    expr = split_occurrence(judgement.expr, name, copy)
    assert expr is not None
    derivation.record(judgement, "share")
    tag, cs = judgement.tag, derivation.constraints

    if not judgement.context.is_tree(name):
        context = judgement.context.extend(copy, judgement.context.type_of(name))
        return judgement.with_(context=context, expr=expr)

    trees = judgement.context.trees()
    order = tuple(n for n in trees if n != name) + (name,)
    conclusion = reorder(judgement.annotation, trees, order)
    premise = derivation.fresh_annotation(tag, "share", len(order) + 1)
    merged = share(premise)
    for index, value in merged.items():
        cs.equal(conclusion.get(index), value, f"{tag} share {name} {index}")
    zero_rest(derivation, conclusion, set(merged.indices()), f"{tag} share {name}")

    tree_type = judgement.context.type_of(name)
    entries = tuple((n, judgement.context.type_of(n)) for n in order) + ((copy, tree_type),)
    placed = set(order)
    rest = tuple(entry for entry in judgement.context if entry[0] not in placed)
    logger.debug(f"{tag}: shared {name} as {name}, {copy}")
    return judgement.with_(context=TypingContext(entries + rest), expr=expr, annotation=premise)


def weaken(derivation: Derivation, judgement: Judgement, body: Expr) -> Judgement:
    """Fresh P, P' with Phi(P) <= Phi(Q) and Phi(Q') <= Phi(P'), both by Farkas reduction."""
    derivation.record(judgement, "w")
    tag, cs = judgement.tag, derivation.constraints
    trees = judgement.context.trees()
    premise = derivation.fresh_annotation(tag, "wctx", len(trees))
    result = derivation.fresh_annotation(tag, "wres", judgement.result.arity)

    monomials = [
        index
        for index in list(premise) + list(judgement.annotation)
        if isinstance(index, LogIndex)
    ]
    knowledge = build_knowledge(monomials, trees, size_facts(body, judgement.path))
    context_certificate = farkas_reduce(
        premise, judgement.annotation, knowledge, cs, f"{tag}.wctx", f"{tag} weaken context"
    )

    result_monomials = [
        index for index in list(result) + list(judgement.result) if isinstance(index, LogIndex)
    ]
    names = (RESULT_NAME,) * judgement.result.arity
    result_knowledge = build_knowledge(result_monomials, names, SizeFacts())
    result_certificate = farkas_reduce(
        judgement.result, result, result_knowledge, cs, f"{tag}.wres", f"{tag} weaken result"
    )

    derivation.weakenings.append(
        WeakeningRecord(
            judgement.function,
            judgement.scope,
            judgement.path,
            trees,
            [context_certificate, result_certificate],
        )
    )
    logger.debug(f"{tag}: weakening with {len(knowledge.rows)} knowledge row(s)")
    return judgement.with_(annotation=premise, result=result)


def shift(derivation: Derivation, judgement: Judgement) -> Judgement:
    """Q = Q_inner + K and Q' = Q'_inner + K for a fresh K >= 0."""
    derivation.record(judgement, "shift")
    tag, cs = judgement.tag, derivation.constraints
    amount = derivation.fresh(tag, "shift", "shift constant")
    inner = add_constant(judgement.annotation, -amount)
    inner_result = add_constant(judgement.result, -amount)
    cs.greater_equal(inner.get(constant_index(inner.arity)), 0, f"{tag} shift context")
    cs.greater_equal(
        inner_result.get(constant_index(inner_result.arity)), 0, f"{tag} shift result"
    )
    return judgement.with_(annotation=inner, result=inner_result)


def _is(expr: Expr, name: str) -> bool:
    return isinstance(expr, Var) and expr.name == name
