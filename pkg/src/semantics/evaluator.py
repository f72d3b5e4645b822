"""Big-step evaluator that counts function applications as cost."""
from __future__ import annotations

import logging
import sys
from typing import Dict, Mapping, Sequence, Tuple

from src.models.program import (
    BaseType,
    BoolType,
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
    SimpleType,
    TreeType,
    TrueLit,
    Var,
)
from src.models.value import (
    LEAF,
    BaseValue,
    BoolValue,
    Environment,
    LeafValue,
    NodeValue,
    Value,
    is_tree,
)
from src.utils.errors import EvaluationError, EvaluationTimeout

logger = logging.getLogger(__name__)

DEFAULT_FUEL = 1_000_000
# every nested let/match/if adds a Python frame; deep trees need headroom
_RECURSION_LIMIT = 10_000


class _Fuel:
    def __init__(self, steps: int):
        self.remaining = steps

    def burn(self) -> None:
        self.remaining -= 1
        if self.remaining < 0:
            raise EvaluationTimeout("evaluation ran out of fuel")


def evaluate(
    sigma: Mapping[str, Value], expr: Expr, program: Program, fuel: int = DEFAULT_FUEL
) -> Tuple[Value, int]:
    """Evaluate expr under sigma; returns the value and the number of calls made."""
    if sys.getrecursionlimit() < _RECURSION_LIMIT:
        sys.setrecursionlimit(_RECURSION_LIMIT)
    functions = {definition.name: definition for definition in program.definitions}
    try:
        return _eval(dict(sigma), expr, functions, _Fuel(fuel))
    except RecursionError as exc:
        raise EvaluationTimeout("evaluation exceeded the recursion depth") from exc


def run_function(
    program: Program, name: str, arguments: Sequence[Value], fuel: int = DEFAULT_FUEL
) -> Tuple[Value, int]:
    """Call name on arguments; the outermost call costs one unit like any other."""
    definition = program.get(name)
    if len(arguments) != definition.arity:
        raise EvaluationError(
            f"{name} expects {definition.arity} argument(s), got {len(arguments)}"
        )
    if definition.signature is not None:
        typed = zip(definition.signature.arguments, arguments)
        for position, (type_, value) in enumerate(typed, 1):
            if not value_has_type(value, type_):
                raise EvaluationError(
                    f"argument {position} of {name} is not of type {type_}: {value}"
                )
    sigma: Environment = dict(zip(definition.params, arguments))
    value, cost = evaluate(sigma, definition.body, program, fuel)
    logger.debug(f"{name} returned {value} at cost {cost + 1}")
    return value, cost + 1


def value_has_type(value: Value, type_: SimpleType) -> bool:
    if isinstance(type_, TreeType):
        return is_tree(value)
    if isinstance(type_, BaseType):
        return isinstance(value, BaseValue)
    if isinstance(type_, BoolType):
        return isinstance(value, BoolValue)
    return False


def _eval(
    sigma: Dict[str, Value], expr: Expr, functions: Mapping[str, Definition], fuel: _Fuel
) -> Tuple[Value, int]:
    fuel.burn()

    if isinstance(expr, Var):
        return _lookup(sigma, expr.name), 0
    if isinstance(expr, TrueLit):
        return BoolValue(True), 0
    if isinstance(expr, FalseLit):
        return BoolValue(False), 0
    if isinstance(expr, Leaf):
        return LEAF, 0

    if isinstance(expr, Node):
        left, left_cost = _eval(sigma, expr.left, functions, fuel)
        label, label_cost = _eval(sigma, expr.label, functions, fuel)
        right, right_cost = _eval(sigma, expr.right, functions, fuel)
        if not (is_tree(left) and is_tree(right) and isinstance(label, BaseValue)):
            raise EvaluationError(f"ill-typed node ({left}, {label}, {right})")
        cost = left_cost + label_cost + right_cost
        return NodeValue(left, label, right), cost  # type: ignore[arg-type]

    if isinstance(expr, Cmp):
        left, left_cost = _eval(sigma, expr.left, functions, fuel)
        right, right_cost = _eval(sigma, expr.right, functions, fuel)
        return BoolValue(_compare(left, expr.op, right)), left_cost + right_cost

    if isinstance(expr, If):
        cond, cond_cost = _eval(sigma, expr.cond, functions, fuel)
        if not isinstance(cond, BoolValue):
            raise EvaluationError(f"if condition is not a boolean: {cond}")
        branch = expr.then_branch if cond.value else expr.else_branch
        value, cost = _eval(sigma, branch, functions, fuel)
        return value, cond_cost + cost

    if isinstance(expr, Match):
        scrutinee, scrutinee_cost = _eval(sigma, expr.scrutinee, functions, fuel)
        if isinstance(scrutinee, LeafValue):
            if expr.leaf_branch is None:
                raise EvaluationError("match failure: no arm for leaf")
            value, cost = _eval(sigma, expr.leaf_branch, functions, fuel)
            return value, scrutinee_cost + cost
        if isinstance(scrutinee, NodeValue):
            if expr.node_branch is None or expr.pattern is None:
                raise EvaluationError("match failure: no arm for a node")
            inner = dict(sigma)
            inner[expr.pattern.left] = scrutinee.left
            inner[expr.pattern.label] = scrutinee.label
            inner[expr.pattern.right] = scrutinee.right
            value, cost = _eval(inner, expr.node_branch, functions, fuel)
            return value, scrutinee_cost + cost
        raise EvaluationError(f"match on a non-tree value: {scrutinee}")

    if isinstance(expr, Let):
        bound, bound_cost = _eval(sigma, expr.bound, functions, fuel)
        inner = dict(sigma)
        inner[expr.name] = bound
        value, body_cost = _eval(inner, expr.body, functions, fuel)
        return value, bound_cost + body_cost

    if isinstance(expr, FunApp):
        definition = functions.get(expr.function)
        if definition is None:
            raise EvaluationError(f"call of undefined function {expr.function}")
        arguments = []
        argument_cost = 0
        for argument in expr.arguments:
            value, cost = _eval(sigma, argument, functions, fuel)
            arguments.append(value)
            argument_cost += cost
        params = definition.params
        if len(params) != len(arguments):
            raise EvaluationError(f"{expr.function} called with {len(arguments)} argument(s)")
        value, body_cost = _eval(
            dict(zip(params, arguments)), definition.body, functions, fuel
        )
        return value, argument_cost + body_cost + 1

    raise EvaluationError(f"cannot evaluate {expr!r}")


def _lookup(sigma: Mapping[str, Value], name: str) -> Value:
    if name not in sigma:
        raise EvaluationError(f"unbound variable {name}")
    return sigma[name]


def _compare(left: Value, op: str, right: Value) -> bool:
    if op == "=":
        if type(left) is not type(right) and not (is_tree(left) and is_tree(right)):
            raise EvaluationError(f"cannot compare {left} with {right}")
        return left == right
    if not (isinstance(left, BaseValue) and isinstance(right, BaseValue)):
        raise EvaluationError(f"ordering comparison needs base values: {left} {op} {right}")
    if op == "<":
        return left.value < right.value
    return left.value > right.value

