"""
let x = e1 in e2: split the context potential between the two expressions

The tree variables of e1 (Gamma, m of them) come first and those of e2 (Delta, k of
them) after, so a context index reads (a, b | c). Potential on indices mixing both
sides (b != 0 and a != 0 or c != 0) cannot be handed to either expression alone. For
a tree-valued e1 it is moved through cost-free derivations of e1, one per target
index (b, d | e) of the continuation.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from typing import Dict, List, Tuple

from src.models.annotation import Annotation, LogIndex, RankIndex
from src.models.constraint import LinExpr
from src.models.program import TREE, Let, TreeType, free_vars
from src.typesystem.context import TypingContext, reorder
from src.typesystem.derivation import Derivation, Judgement, result_arity

logger = logging.getLogger(__name__)

FAMILY_TARGETS: Tuple[Tuple[int, int], ...] = ((0, 1), (0, 2), (1, 0), (1, 1), (1, 2))

Vector = Tuple[int, ...]


def emit_let(derivation: Derivation, judgement: Judgement) -> List[Judgement]:
    """Emit let:tree:cf or let:gen; return the premises for e1, the families and e2."""
    expr = judgement.expr
    if not isinstance(expr, Let):
        raise TypeError("emit_let needs a let expression")
    binder_type = expr.binder_type
    if binder_type is None:
        raise ValueError(f"{judgement.tag}: let {expr.name} was not type checked")

    context = judgement.context
    first = free_vars(expr.bound)
    second = free_vars(expr.body) - {expr.name}
    gamma = tuple(name for name in context.trees() if name in first)
    delta = tuple(name for name in context.trees() if name not in first)
    overlap = set(gamma) & second
    if overlap:
        raise ValueError(f"{judgement.tag}: tree variables {sorted(overlap)} must be shared first")

    q = reorder(judgement.annotation, context.trees(), gamma + delta)
    m, k = len(gamma), len(delta)

    bound_context = TypingContext(tuple(entry for entry in context if entry[0] in first))
    body_context = TypingContext(
        tuple(entry for entry in context if entry[0] in second and entry[0] != expr.name)
    ).extend(expr.name, binder_type)
    body_context = _tree_order(body_context, delta + (expr.name,))

    p: Annotation[LinExpr] = Annotation(m)
    r: Annotation[LinExpr] = Annotation(k + result_arity(binder_type))
    mixed: Dict[Vector, List[Tuple[Vector, int, LinExpr]]] = defaultdict(list)
    for index, value in q.items():
        if isinstance(index, RankIndex):
            if index.position <= m:
                p[index] = value
            else:
                r[RankIndex(index.position - m)] = value
            continue
        a, b, c = index.coefficients[:m], index.coefficients[m:], index.constant
        if not any(b):
            p[LogIndex(a, c)] = value
        elif isinstance(binder_type, TreeType):
            if any(a) or c:
                mixed[b].append((a, c, value))
            else:
                r[LogIndex(b + (0,), 0)] = value
        elif any(a):
            # no tree result can carry it
            derivation.constraints.equal(value, 0, f"{judgement.tag} let:gen {index} unused")
        else:
            r[LogIndex(b, c)] = value

    if not isinstance(binder_type, TreeType):
        derivation.record(judgement, "let:gen")
        return [
            judgement.child(0, bound_context, expr.bound, p, Annotation(0), binder_type),
            judgement.child(1, body_context, expr.body, r),
        ]

    derivation.record(judgement, "let:tree:cf")
    tag = judgement.tag
    p_result = derivation.fresh_annotation(tag, "e1res", 1)
    r[RankIndex(k + 1)] = p_result[RankIndex(1)]
    for index, value in p_result.items():
        if isinstance(index, LogIndex):
            (d,) = index.coefficients
            r[LogIndex((0,) * k + (d,), index.constant)] = value

    premises = [judgement.child(0, bound_context, expr.bound, p, p_result, binder_type)]
    for vector in sorted(mixed):
        premises.extend(
            _families(derivation, judgement, vector, mixed[vector], bound_context, m, r)
        )
    premises.append(judgement.child(1, body_context, expr.body, r))
    logger.debug(f"{tag}: let {expr.name} with {len(premises) - 2} cost-free famil(ies)")
    return premises


def _families(
    derivation: Derivation,
    judgement: Judgement,
    vector: Vector,
    entries: List[Tuple[Vector, int, LinExpr]],
    bound_context: TypingContext,
    m: int,
    r: Annotation[LinExpr],
) -> List[Judgement]:
    """Split q(a, vector | c) over the targets (d, e) and derive e1 cost-free for each."""
    expr = judgement.expr
    assert isinstance(expr, Let)
    cs, tag = derivation.constraints, judgement.tag
    label = "".join(str(b) for b in vector)
    parts: Dict[Tuple[Vector, int], LinExpr] = defaultdict(LinExpr)
    premises: List[Judgement] = []

    for d, e in FAMILY_TARGETS:
        family = f"{judgement.scope}~b{label}d{d}e{e}"
        argument: Annotation[LinExpr] = Annotation(m)
        for a, c, _ in entries:
            index = LogIndex(a, c)
            argument[index] = derivation.fresh(tag, f"fam.b{label}d{d}e{e}.{index}")
            parts[(a, c)] = parts[(a, c)] + argument[index]
        target = LogIndex((d,), e)
        result: Annotation[LinExpr] = Annotation(1)
        result[target] = derivation.fresh(tag, f"fam.b{label}d{d}e{e}.res")
        r[LogIndex(vector + (d,), e)] = result[target]

        total = LinExpr()
        for index, value in argument.items():
            total = total + value
            cs.implication(
                value, result[target], value, derivation.big_m, f"{tag} family {family} {index}"
            )
        cs.greater_equal(total, result[target], f"{tag} family {family} total")
        premises.append(
            judgement.child(
                0, bound_context, expr.bound, argument, result, TREE, scope=family, costed=False
            )
        )

    for a, c, value in entries:
        cs.equal(value, parts[(a, c)], f"{tag} family split {LogIndex(a + vector, c)}")
    return premises


def _tree_order(context: TypingContext, order: Tuple[str, ...]) -> TypingContext:
    trees = [name for name in order if context.is_tree(name)]
    entries = tuple((name, context.type_of(name)) for name in trees)
    placed = set(trees)
    rest = tuple(entry for entry in context if entry[0] not in placed)
    return TypingContext(entries + rest)
