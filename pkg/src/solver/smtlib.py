"""SMT-LIB 2 (QF_LRA) rendering of constraint sets and parsing of get-model answers."""
from __future__ import annotations

import logging
import re
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterable, List, Optional, Union

from src.models.constraint import Assignment, Constraint, ConstraintSet, LinExpr
from src.utils.errors import InfeasibleSystemError, ProgramSyntaxError, SolverLimitError

logger = logging.getLogger(__name__)

_SIMPLE_SYMBOL = re.compile(r"^[A-Za-z~!@$%^&*_+=<>.?/\-][A-Za-z0-9~!@$%^&*_+=<>.?/\-]*$")
_TOKEN = re.compile(r"\s*(\(|\)|\|[^|]*\||[^\s()|]+)")

SExpr = Union[str, List["SExpr"]]


def symbol(name: str) -> str:
    if _SIMPLE_SYMBOL.match(name):
        return name
    if "|" in name or "\\" in name:
        raise ValueError(f"unknown name {name!r} cannot be written as an SMT-LIB symbol")
    return f"|{name}|"


def literal(value: Fraction) -> str:
    value = Fraction(value)
    magnitude = abs(value)
    if magnitude.denominator == 1:
        text = f"{magnitude.numerator}.0"
    else:
        text = f"(/ {magnitude.numerator}.0 {magnitude.denominator}.0)"
    return f"(- {text})" if value < 0 else text


def _sum(expr: LinExpr) -> str:
    parts = []
    for name in sorted(expr.terms):
        coefficient = expr.terms[name]
        if coefficient == 1:
            parts.append(symbol(name))
        else:
            parts.append(f"(* {literal(coefficient)} {symbol(name)})")
    if not parts:
        return "0.0"
    if len(parts) == 1:
        return parts[0]
    return "(+ " + " ".join(parts) + ")"


def render_constraint(constraint: Constraint) -> str:
    """terms (relation) -constant."""
    terms = LinExpr(constraint.expr.terms)
    return f"({constraint.relation} {_sum(terms)} {literal(-constraint.expr.constant)})"


def export_smtlib(cs: ConstraintSet) -> str:
    """Deterministic QF_LRA script: sorted declarations, one assertion per row."""
    lines = ["(set-option :produce-models true)", "(set-logic QF_LRA)"]
    names = sorted(cs.unknowns)
    for name in names:
        lines.append(f"(declare-fun {symbol(name)} () Real)")
    for name in names:
        lines.append(f"(assert (>= {symbol(name)} 0.0))")
    for constraint in cs.constraints:
        lines.append(f"(assert {render_constraint(constraint)})")
    for implication in cs.implications:
        guard = symbol(implication.guard)
        lines.append(
            f"(assert (=> (> {guard} 0.0) {render_constraint(implication.consequent)}))"
        )
    lines.extend(["(check-sat)", "(get-model)"])
    logger.debug(f"Exported {len(names)} unknown(s) and {len(cs.constraints)} constraint(s)")
    return "\n".join(lines) + "\n"


def tokenize(text: str) -> List[str]:
    tokens: List[str] = []
    position = 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            if text[position:].strip():
                raise ProgramSyntaxError(f"cannot read solver output near {text[position:][:20]!r}")
            break
        tokens.append(match.group(1))
        position = match.end()
    return tokens


def parse_sexprs(text: str) -> List[SExpr]:
    stack: List[List[SExpr]] = [[]]
    for token in tokenize(text):
        if token == "(":
            stack.append([])
        elif token == ")":
            if len(stack) == 1:
                raise ProgramSyntaxError("unbalanced ')' in solver output")
            finished = stack.pop()
            stack[-1].append(finished)
        else:
            stack[-1].append(token[1:-1] if token.startswith("|") else token)
    if len(stack) != 1:
        raise ProgramSyntaxError("unbalanced '(' in solver output")
    return stack[0]


def _value(term: SExpr) -> Fraction:
    if isinstance(term, str):
        try:
            return Fraction(Decimal(term))
        except InvalidOperation as exc:
            raise ProgramSyntaxError(f"not a real literal: {term!r}") from exc
    if not term or not isinstance(term[0], str):
        raise ProgramSyntaxError(f"not a real term: {term!r}")
    head, arguments = term[0], [_value(argument) for argument in term[1:]]
    if head == "-" and len(arguments) == 1:
        return -arguments[0]
    if head == "-" and arguments:
        return arguments[0] - sum(arguments[1:], Fraction(0))
    if head == "+":
        return sum(arguments, Fraction(0))
    if head == "/" and len(arguments) == 2:
        if arguments[1] == 0:
            raise ProgramSyntaxError("division by zero in solver model")
        return arguments[0] / arguments[1]
    if head == "*":
        product = Fraction(1)
        for argument in arguments:
            product *= argument
        return product
    raise ProgramSyntaxError(f"unsupported term {head!r} in solver model")


def import_model(text: str, unknowns: Optional[Iterable[str]] = None) -> Assignment:
    """
    Exact values from a check-sat/get-model answer. Unknowns the model leaves out
    are 0; unsat and unknown answers raise the corresponding errors.
    """
    items = parse_sexprs(text)
    status = next((item for item in items if isinstance(item, str)), None)
    if status == "unsat":
        raise InfeasibleSystemError("external solver answered unsat")
    if status == "unknown":
        raise SolverLimitError("external solver answered unknown")

    assignment: Assignment = {name: Fraction(0) for name in unknowns or ()}
    for definition in _definitions(items):
        name, value = definition[1], definition[4]
        if not isinstance(name, str):
            raise ProgramSyntaxError(f"bad define-fun in solver model: {definition!r}")
        number = _value(value)
        if number < 0:
            raise ProgramSyntaxError(f"negative value {number} for {name} in solver model")
        assignment[name] = number
    logger.debug(f"Imported {len(assignment)} value(s) from solver model")
    return assignment


def _definitions(items: List[SExpr]) -> Iterable[List[SExpr]]:
    for item in items:
        if isinstance(item, list):
            if len(item) == 5 and item[0] == "define-fun":
                yield item
            else:
                yield from _definitions(item)
