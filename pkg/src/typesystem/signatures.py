"""Resolved signatures: what each function promises, as linear expressions over unknowns."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping

from src.models.annotation import Annotation
from src.models.constraint import LinExpr
from src.models.program import Program
from src.models.signature import AnnotatedPair, AnnotatedSignature
from src.typesystem.derivation import COST_FREE_PREFIX, COSTED, Derivation, result_arity
from src.utils.errors import SimpleTypeError

logger = logging.getLogger(__name__)


@dataclass
class SignaturePair:
    """One (Q, Q') entry; literal pairs come from the user, the others are solved for."""

    scope: str
    argument: Annotation[LinExpr]
    result: Annotation[LinExpr]
    literal: bool


@dataclass
class FunctionSignatures:
    name: str
    argument_arity: int
    result_arity: int
    costed: SignaturePair
    cost_free: List[SignaturePair] = field(default_factory=list)

    def pairs(self) -> List[SignaturePair]:
        return [self.costed] + self.cost_free


def lift(annotation: Annotation[Fraction]) -> Annotation[LinExpr]:
    return Annotation(
        annotation.arity, {index: LinExpr.const(value) for index, value in annotation.items()}
    )


def _literal(scope: str, pair: AnnotatedPair[Fraction]) -> SignaturePair:
    return SignaturePair(scope, lift(pair.argument), lift(pair.result), literal=True)


def _indeterminate(
    derivation: Derivation, name: str, scope: str, argument_arity: int, results: int
) -> SignaturePair:
    tag = f"{name}.sig.{scope}"
    return SignaturePair(
        scope,
        derivation.fresh_annotation(tag, "arg", argument_arity),
        derivation.fresh_annotation(tag, "res", results),
        literal=False,
    )


def build_signature_table(
    program: Program, annotated: Mapping[str, AnnotatedSignature], derivation: Derivation
) -> Dict[str, FunctionSignatures]:
    """
    A function absent from the annotation file gets an indeterminate costed pair and
    one indeterminate cost-free pair. A function listed without a costed section gets
    an indeterminate costed pair; its cost-free pairs are taken as written. The empty
    cost-free pair is always admissible and is left implicit.
    """
    table: Dict[str, FunctionSignatures] = {}
    for definition in program.definitions:
        if definition.signature is None:
            raise SimpleTypeError(f"{definition.name} has not been type checked")
        arguments = len(definition.tree_params())
        results = result_arity(definition.signature.result)
        given = annotated.get(definition.name)
        if given is not None and (given.argument_arity, given.result_arity) != (arguments, results):
            raise SimpleTypeError(
                f"annotation of {definition.name} has arity {given.argument_arity} -> "
                f"{given.result_arity}, the function has {arguments} -> {results}"
            )

        if given is not None and given.costed is not None:
            costed = _literal(COSTED, given.costed)
        else:
            costed = _indeterminate(derivation, definition.name, COSTED, arguments, results)

        cost_free: List[SignaturePair] = []
        if given is None:
            scope = f"{COST_FREE_PREFIX}0"
            cost_free.append(_indeterminate(derivation, definition.name, scope, arguments, results))
        else:
            for number, pair in enumerate(given.cost_free):
                cost_free.append(_literal(f"{COST_FREE_PREFIX}{number}", pair))

        table[definition.name] = FunctionSignatures(
            definition.name, arguments, results, costed, cost_free
        )
        logger.debug(
            f"Signature of {definition.name}: costed {'given' if costed.literal else 'inferred'}, "
            f"{len(cost_free)} cost-free pair(s)"
        )
    return table


def _solved(
    annotation: Annotation[LinExpr], assignment: Mapping[str, Fraction]
) -> Annotation[Fraction]:
    values = {index: value.evaluate(assignment) for index, value in annotation.items()}
    return Annotation(annotation.arity, {index: v for index, v in values.items() if v != 0})


def solved_signature(
    signatures: FunctionSignatures, assignment: Mapping[str, Fraction]
) -> AnnotatedSignature:
    """Numeric signature under a model; cost-free pairs that solve to empty are dropped."""
    costed = AnnotatedPair(
        _solved(signatures.costed.argument, assignment),
        _solved(signatures.costed.result, assignment),
    )
    cost_free: List[AnnotatedPair[Fraction]] = []
    for pair in signatures.cost_free:
        solved = AnnotatedPair(_solved(pair.argument, assignment), _solved(pair.result, assignment))
        if len(solved.argument) or len(solved.result):
            cost_free.append(solved)
    return AnnotatedSignature(
        signatures.name, signatures.argument_arity, signatures.result_arity, costed, cost_free
    )
