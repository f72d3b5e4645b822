"""
Simple type inference for normalised programs

Signatures are monomorphic. Declared signatures are unified with the bodies;
missing ones are inferred, and type variables that stay unresolved default to Base.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Tuple, Union

from src.models.program import (
    BASE,
    BOOL,
    TREE,
    Cmp,
    Expr,
    FalseLit,
    FunApp,
    FunctionType,
    If,
    Leaf,
    Let,
    Location,
    Match,
    Node,
    Program,
    SimpleType,
    TrueLit,
    Var,
)
from src.utils.errors import SimpleTypeError

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class _TypeVar:
    ident: int


_Type = Union[SimpleType, _TypeVar]


class _Unifier:
    def __init__(self) -> None:
        self.parent: Dict[int, _Type] = {}
        self.counter = 0

    def fresh(self) -> _TypeVar:
        var = _TypeVar(self.counter)
        self.counter += 1
        return var

    def resolve(self, type_: _Type) -> _Type:
        while isinstance(type_, _TypeVar) and type_.ident in self.parent:
            type_ = self.parent[type_.ident]
        return type_

    def unify(self, left: _Type, right: _Type, loc: Location, what: str) -> None:
        left = self.resolve(left)
        right = self.resolve(right)
        if isinstance(left, _TypeVar):
            if not (isinstance(right, _TypeVar) and right.ident == left.ident):
                self.parent[left.ident] = right
            return
        if isinstance(right, _TypeVar):
            self.parent[right.ident] = left
            return
        if left != right:
            raise SimpleTypeError(f"{what}: expected {left}, found {right}{_where(loc)}")

    def final(self, type_: _Type) -> SimpleType:
        resolved = self.resolve(type_)
        if isinstance(resolved, _TypeVar):
            return BASE
        return resolved


def _where(loc: Location) -> str:
    if loc is None:
        return ""
    return f" at line {loc[0]}, column {loc[1]}"


def simple_typecheck(program: Program) -> Program:
    """Infer and check simple types; returns the program with signatures and let types filled in."""
    checker = _Checker(program)
    try:
        return checker.run()
    except SimpleTypeError as exc:
        logger.error(f"Type check failed: {exc}")
        raise


class _Checker:
    def __init__(self, program: Program):
        self.program = program
        self.unifier = _Unifier()
        self.signatures: Dict[str, Tuple[List[_Type], _Type]] = {}
        self.let_types: Dict[int, _Type] = {}

    def run(self) -> Program:
        for name in self.program.declarations:
            if name not in self.program.names():
                raise SimpleTypeError(f"declaration of undefined function {name}")

        for definition in self.program.definitions:
            declared = self.program.declarations.get(definition.name)
            if declared is not None:
                if len(declared.arguments) != definition.arity:
                    raise SimpleTypeError(
                        f"{definition.name} declares {len(declared.arguments)} argument(s) "
                        f"but defines {definition.arity}{_where(definition.loc)}"
                    )
                arguments: List[_Type] = list(declared.arguments)
                result: _Type = declared.result
            else:
                arguments = [self.unifier.fresh() for _ in definition.params]
                result = self.unifier.fresh()
            self.signatures[definition.name] = (arguments, result)

        for definition in self.program.definitions:
            arguments, result = self.signatures[definition.name]
            env = dict(zip(definition.params, arguments))
            body_type = self.infer(definition.body, env)
            self.unifier.unify(result, body_type, definition.loc, f"result of {definition.name}")

        definitions = []
        for definition in self.program.definitions:
            arguments, result = self.signatures[definition.name]
            signature = FunctionType(
                tuple(self.unifier.final(arg) for arg in arguments), self.unifier.final(result)
            )
            body = self.annotate(definition.body)
            definitions.append(replace(definition, body=body, signature=signature))
            logger.info(f"Typed {definition.name} : {signature}")
        return Program(tuple(definitions), dict(self.program.declarations))

    def infer(self, expr: Expr, env: Dict[str, _Type]) -> _Type:
        if isinstance(expr, Var):
            if expr.name not in env:
                raise SimpleTypeError(f"unbound variable {expr.name}{_where(expr.loc)}")
            return env[expr.name]
        if isinstance(expr, (TrueLit, FalseLit)):
            return BOOL
        if isinstance(expr, Leaf):
            return TREE
        if isinstance(expr, Node):
            self.unifier.unify(TREE, self.infer(expr.left, env), expr.loc, "left subtree")
            self.unifier.unify(BASE, self.infer(expr.label, env), expr.loc, "node label")
            self.unifier.unify(TREE, self.infer(expr.right, env), expr.loc, "right subtree")
            return TREE
        if isinstance(expr, Cmp):
            left = self.infer(expr.left, env)
            right = self.infer(expr.right, env)
            self.unifier.unify(left, right, expr.loc, f"operands of {expr.op}")
            if expr.op in ("<", ">"):
                self.unifier.unify(BASE, left, expr.loc, f"ordering comparison {expr.op}")
            return BOOL
        if isinstance(expr, If):
            self.unifier.unify(BOOL, self.infer(expr.cond, env), expr.loc, "if condition")
            then_type = self.infer(expr.then_branch, env)
            else_type = self.infer(expr.else_branch, env)
            self.unifier.unify(then_type, else_type, expr.loc, "if branches")
            return then_type
        if isinstance(expr, Match):
            self.unifier.unify(TREE, self.infer(expr.scrutinee, env), expr.loc, "match scrutinee")
            branch_types: List[_Type] = []
            if expr.leaf_branch is not None:
                branch_types.append(self.infer(expr.leaf_branch, env))
            if expr.node_branch is not None and expr.pattern is not None:
                inner = dict(env)
                inner[expr.pattern.left] = TREE
                inner[expr.pattern.label] = BASE
                inner[expr.pattern.right] = TREE
                branch_types.append(self.infer(expr.node_branch, inner))
            if not branch_types:
                raise SimpleTypeError(f"match without arms{_where(expr.loc)}")
            for other in branch_types[1:]:
                self.unifier.unify(branch_types[0], other, expr.loc, "match arms")
            return branch_types[0]
        if isinstance(expr, Let):
            bound = self.infer(expr.bound, env)
            self.let_types[id(expr)] = bound
            inner = dict(env)
            inner[expr.name] = bound
            return self.infer(expr.body, inner)
        if isinstance(expr, FunApp):
            if expr.function not in self.signatures:
                raise SimpleTypeError(
                    f"call of undefined function {expr.function}{_where(expr.loc)}"
                )
            arguments, result = self.signatures[expr.function]
            if len(arguments) != len(expr.arguments):
                raise SimpleTypeError(
                    f"{expr.function} expects {len(arguments)} argument(s), "
                    f"got {len(expr.arguments)}{_where(expr.loc)}"
                )
            for position, (expected, argument) in enumerate(zip(arguments, expr.arguments), 1):
                self.unifier.unify(
                    expected,
                    self.infer(argument, env),
                    expr.loc,
                    f"argument {position} of {expr.function}",
                )
            return result
        raise TypeError(f"not an expression: {expr!r}")

    def annotate(self, expr: Expr) -> Expr:
        """Copy expr with the inferred binder type stored on every let."""
        if isinstance(expr, Let):
            binder_type = self.unifier.final(self.let_types[id(expr)])
            return Let(
                expr.name,
                self.annotate(expr.bound),
                self.annotate(expr.body),
                expr.loc,
                binder_type,
            )
        if isinstance(expr, If):
            return If(
                expr.cond,
                self.annotate(expr.then_branch),
                self.annotate(expr.else_branch),
                expr.loc,
            )
        if isinstance(expr, Match):
            leaf_branch = None if expr.leaf_branch is None else self.annotate(expr.leaf_branch)
            node_branch = None if expr.node_branch is None else self.annotate(expr.node_branch)
            return Match(expr.scrutinee, leaf_branch, expr.pattern, node_branch, expr.loc)
        return expr
