"""
Syntax-directed rules: one constraint family per expression head

Every rule equates the coefficients it relates and pins the remaining coefficients of
the context annotation to zero. Sub-judgements are returned to the driver.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Mapping, Sequence, Set, Tuple, Type

from src.models.annotation import Annotation, Index, LogIndex, RankIndex, constant_index
from src.models.constraint import LinExpr
from src.models.program import (
    BASE,
    TREE,
    Cmp,
    Expr,
    FalseLit,
    FunApp,
    If,
    Leaf,
    Let,
    Match,
    Node,
    Program,
    TreeType,
    TrueLit,
    Var,
)
from src.typesystem.context import TypingContext, drop_position, reorder
from src.typesystem.derivation import Derivation, Judgement, equate
from src.typesystem.signatures import FunctionSignatures, SignaturePair

logger = logging.getLogger(__name__)


@dataclass
class RuleEnvironment:
    program: Program
    signatures: Mapping[str, FunctionSignatures]


Rule = Callable[[Derivation, Judgement, RuleEnvironment], List[Judgement]]


def emit_syntax_directed(
    derivation: Derivation, judgement: Judgement, env: RuleEnvironment
) -> List[Judgement]:
    """Emit the constraints of the rule for the head of judgement.expr; return its premises."""
    expr = judgement.expr
    if isinstance(expr, Let):
        raise TypeError("let expressions are handled by emit_let")
    if judgement.annotation.arity != len(judgement.context.trees()):
        raise ValueError(
            f"{judgement.tag}: annotation of arity {judgement.annotation.arity} for "
            f"context ({judgement.context})"
        )
    rule = _RULES.get(type(expr))
    if rule is None:
        raise TypeError(f"no rule for {type(expr).__name__}")
    return rule(derivation, judgement, env)


def arrange(judgement: Judgement, order: Sequence[str]) -> Judgement:
    """Put the tree variables of the context in the given order, base variables after."""
    trees = judgement.context.trees()
    entries = tuple((name, judgement.context.type_of(name)) for name in order)
    placed = set(order)
    rest = tuple(entry for entry in judgement.context if entry[0] not in placed)
    return judgement.with_(
        context=TypingContext(entries + rest),
        annotation=reorder(judgement.annotation, trees, order),
    )


def zero_rest(
    derivation: Derivation, annotation: Annotation[LinExpr], used: Set[Index], origin: str
) -> None:
    for index, value in annotation.items():
        if index not in used:
            derivation.constraints.equal(value, 0, f"{origin} {index} unused")


def _terminal(derivation: Derivation, judgement: Judgement, rule: str) -> None:
    derivation.record(judgement, rule)
    derivation.checked.append((judgement.function, judgement.scope, judgement.path))


def _var(derivation: Derivation, judgement: Judgement, env: RuleEnvironment) -> List[Judgement]:
    _terminal(derivation, judgement, "var")
    equate(derivation.constraints, judgement.annotation, judgement.result, f"{judgement.tag} var")
    return []


def _constant(
    derivation: Derivation, judgement: Judgement, env: RuleEnvironment
) -> List[Judgement]:
    _terminal(derivation, judgement, "const")
    equate(derivation.constraints, judgement.annotation, judgement.result, f"{judgement.tag} const")
    return []


def _leaf(derivation: Derivation, judgement: Judgement, env: RuleEnvironment) -> List[Judgement]:
    _terminal(derivation, judgement, "leaf")
    sums: Dict[int, LinExpr] = {}
    for index, value in judgement.result.items():
        # rk(leaf) = 1 = log 2; log(a|leaf| + b) = log(a + b)
        argument = 2 if isinstance(index, RankIndex) else sum(index.coefficients) + index.constant
        if argument >= 2:
            sums[argument] = sums.get(argument, LinExpr()) + value
    arguments = set(sums)
    for index in judgement.annotation:
        if isinstance(index, LogIndex) and index.constant >= 2:
            arguments.add(index.constant)
    for argument in sorted(arguments):
        derivation.constraints.equal(
            judgement.annotation.get(constant_index(0, argument)),
            sums.get(argument, 0),
            f"{judgement.tag} leaf log({argument})",
        )
    return []


def _node(derivation: Derivation, judgement: Judgement, env: RuleEnvironment) -> List[Judgement]:
    expr = judgement.expr
    assert isinstance(expr, Node)
    left, right = _name(expr.left), _name(expr.right)
    judgement = arrange(judgement, (left, right))
    _terminal(derivation, judgement, "node")
    cs, q, tag = derivation.constraints, judgement.annotation, judgement.tag

    star = judgement.result.get(RankIndex(1))
    rank_like: List[Index] = [RankIndex(1), RankIndex(2), LogIndex((1, 0), 0), LogIndex((0, 1), 0)]
    used: Set[Index] = set(rank_like)
    for index in rank_like:
        cs.equal(q.get(index), star, f"{tag} node {index}")
    for index, value in judgement.result.items():
        if isinstance(index, LogIndex):
            (a,) = index.coefficients
            target = LogIndex((a, a), index.constant)
            used.add(target)
            cs.equal(q.get(target), value, f"{tag} node {target}")
    zero_rest(derivation, q, used, f"{tag} node")
    return []


def _cmp(derivation: Derivation, judgement: Judgement, env: RuleEnvironment) -> List[Judgement]:
    _terminal(derivation, judgement, "cmp")
    q, arity = judgement.annotation, judgement.annotation.arity
    constants = {i.constant for i in judgement.result if isinstance(i, LogIndex)}
    constants |= {i.constant for i in q if isinstance(i, LogIndex) and i.is_constant()}
    used: Set[Index] = set()
    for constant in sorted(constants):
        index = constant_index(arity, constant)
        used.add(index)
        derivation.constraints.equal(
            q.get(index), judgement.result.get(constant_index(0, constant)), f"{judgement.tag} cmp"
        )
    zero_rest(derivation, q, used, f"{judgement.tag} cmp")
    return []


def _ite(derivation: Derivation, judgement: Judgement, env: RuleEnvironment) -> List[Judgement]:
    expr = judgement.expr
    assert isinstance(expr, If)
    derivation.record(judgement, "ite")
    return [
        judgement.child(0, judgement.context, expr.then_branch, judgement.annotation),
        judgement.child(1, judgement.context, expr.else_branch, judgement.annotation),
    ]


def _match(derivation: Derivation, judgement: Judgement, env: RuleEnvironment) -> List[Judgement]:
    expr = judgement.expr
    assert isinstance(expr, Match)
    scrutinee = _name(expr.scrutinee)
    others = tuple(name for name in judgement.context.trees() if name != scrutinee)
    judgement = arrange(judgement, others + (scrutinee,))
    derivation.record(judgement, "match")
    q, m = judgement.annotation, len(others)
    premises: List[Judgement] = []

    if expr.leaf_branch is not None:
        p: Annotation[LinExpr] = Annotation(m)
        for index, value in q.items():
            if isinstance(index, RankIndex):
                if index.position <= m:
                    p[index] = value
                else:
                    target = constant_index(m, 2)
                    p[target] = p.get(target) + value
                continue
            # |leaf| = 1: log(a.x + a|t| + b) becomes log(a.x + a + b)
            merged = LogIndex(index.coefficients[:m], index.coefficients[m] + index.constant)
            p[merged] = p.get(merged) + value
        premises.append(
            judgement.child(0, judgement.context.without(scrutinee), expr.leaf_branch, p)
        )

    if expr.node_branch is not None and expr.pattern is not None:
        pattern = expr.pattern
        context = judgement.context.without(scrutinee)
        names = list(others) + [scrutinee]
        annotation = q
        for binder in pattern.binders:
            if binder in context:
                if context.is_tree(binder):
                    annotation = drop_position(annotation, names, binder)
                    names.remove(binder)
                context = context.without(binder)
                logger.debug(f"{judgement.tag}: binder {binder} shadows a context variable")
        kept = len(names) - 1
        rank = annotation.get(RankIndex(kept + 1))
        r: Annotation[LinExpr] = Annotation(kept + 2)
        for index, value in annotation.items():
            if isinstance(index, RankIndex):
                if index.position <= kept:
                    r[index] = value
                continue
            *vector, a = index.coefficients
            r[LogIndex(tuple(vector) + (a, a), index.constant)] = value
        if not _is_zero(rank):
            for index in (
                RankIndex(kept + 1),
                RankIndex(kept + 2),
                LogIndex((0,) * kept + (1, 0), 0),
                LogIndex((0,) * kept + (0, 1), 0),
            ):
                r[index] = r.get(index) + rank
        context = context.extend(pattern.left, TREE).extend(pattern.label, BASE)
        context = context.extend(pattern.right, TREE)
        premises.append(judgement.child(1, context, expr.node_branch, r))
    return premises


def _app(derivation: Derivation, judgement: Judgement, env: RuleEnvironment) -> List[Judgement]:
    expr = judgement.expr
    assert isinstance(expr, FunApp)
    definition = env.program.get(expr.function)
    assert definition.signature is not None
    names = tuple(
        _name(argument)
        for argument, type_ in zip(expr.arguments, definition.signature.arguments)
        if isinstance(type_, TreeType)
    )
    judgement = arrange(judgement, names)
    rule = "app" if judgement.costed else "app:cf"
    _terminal(derivation, judgement, rule)
    tag, cs = judgement.tag, derivation.constraints
    signature = env.signatures[expr.function]

    scaled: List[Tuple[LinExpr, SignaturePair]] = []
    if judgement.costed:
        scaled.append((LinExpr.const(1), signature.costed))
    for number, pair in enumerate(signature.cost_free):
        if pair.literal:
            scaled.append((derivation.fresh(tag, f"K{number}", "cost-free multiple"), pair))
        elif not judgement.costed:
            scaled.append((LinExpr.const(1), pair))

    argument = _combine([(k, pair.argument) for k, pair in scaled], len(names))
    if judgement.costed:
        cost = constant_index(len(names), 2)
        argument[cost] = argument.get(cost) + 1
    result = _combine([(k, pair.result) for k, pair in scaled], judgement.result.arity)

    equate(cs, judgement.annotation, argument, f"{tag} {rule} argument", argument.indices())
    zero_rest(derivation, judgement.annotation, set(argument.indices()), f"{tag} {rule}")
    equate(cs, judgement.result, result, f"{tag} {rule} result")
    return []


def _combine(
    terms: Iterable[Tuple[LinExpr, Annotation[LinExpr]]], arity: int
) -> Annotation[LinExpr]:
    total: Annotation[LinExpr] = Annotation(arity)
    for factor, annotation in terms:
        for index, value in annotation.items():
            total[index] = total.get(index) + _product(factor, value)
    return total


def _product(factor: LinExpr, value: LinExpr) -> LinExpr:
    if value.is_constant():
        return factor * value.constant
    if factor.is_constant():
        return value * factor.constant
    raise ValueError(f"nonlinear product {factor} * {value}")


def _name(expr: Expr) -> str:
    if not isinstance(expr, Var):
        raise TypeError(f"expected a variable in let-normal form, got {type(expr).__name__}")
    return expr.name


def _is_zero(value: object) -> bool:
    return value.is_zero() if isinstance(value, LinExpr) else value == 0


_RULES: Dict[Type[object], Rule] = {
    Var: _var,
    TrueLit: _constant,
    FalseLit: _constant,
    Leaf: _leaf,
    Node: _node,
    Cmp: _cmp,
    If: _ite,
    Match: _match,
    FunApp: _app,
}
