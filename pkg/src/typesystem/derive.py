"""
Whole-program constraint generation

Every definition body is judged against each of its signature pairs: the costed one
in scope "cost" and cost-free pair j in scope "free<j>". At every judgement the driver
drops unused variables, applies the tactic directives placed at that path in file
order, shares variables used by two sub-expressions and then applies the rule for
the expression head.
"""
from __future__ import annotations

import logging
from typing import List, Mapping, Optional

from src.models.constraint import ConstraintSet
from src.models.program import Definition, Let, Program
from src.models.signature import AnnotatedSignature
from src.syntax.typecheck import simple_typecheck
from src.typesystem.context import TypingContext
from src.typesystem.derivation import COSTED, Derivation, Judgement
from src.typesystem.let_rules import emit_let
from src.typesystem.rules import RuleEnvironment, emit_syntax_directed
from src.typesystem.signatures import SignaturePair, build_signature_table
from src.typesystem.structural import apply_structural, auto_share, drop_unused
from src.typesystem.tactics import Tactics
from src.utils.config import Settings
from src.utils.errors import TacticError

logger = logging.getLogger(__name__)


def derive(
    program: Program,
    annotated: Mapping[str, AnnotatedSignature],
    tactics: Optional[Tactics] = None,
    settings: Optional[Settings] = None,
) -> Derivation:
    """Constraints under which every definition of a normalised program is well-typed."""
    program = simple_typecheck(program)
    tactics = tactics if tactics is not None else Tactics()
    unknown = tactics.functions() - set(program.names())
    if unknown:
        raise TacticError(f"tactics mention undefined function(s): {', '.join(sorted(unknown))}")

    derivation = Derivation(big_m=settings.big_m if settings is not None else 1000)
    table = build_signature_table(program, annotated, derivation)
    derivation.signatures = table
    env = RuleEnvironment(program, table)
    driver = _Driver(derivation, env, tactics)
    for definition in program.definitions:
        for pair in table[definition.name].pairs():
            driver.derive_definition(definition, pair)

    tactics.check_consumed(derivation.admitted_paths())
    unknowns, constraints = derivation.constraints.stats()
    logger.info(
        f"Derived {len(program.definitions)} definition(s): {unknowns} unknown(s), "
        f"{constraints} constraint(s), {len(derivation.constraints.implications)} implication(s)"
    )
    return derivation


def function_constraints(derivation: Derivation, function: str) -> ConstraintSet:
    """The part of the system generated for one function body."""
    return derivation.constraints.restrict(f"{function}.")


class _Driver:
    def __init__(self, derivation: Derivation, env: RuleEnvironment, tactics: Tactics):
        self.derivation = derivation
        self.env = env
        self.tactics = tactics

    def derive_definition(self, definition: Definition, pair: SignaturePair) -> None:
        assert definition.signature is not None
        context = TypingContext(tuple(zip(definition.params, definition.signature.arguments)))
        root = Judgement(
            definition.name,
            pair.scope,
            pair.scope == COSTED,
            context,
            definition.body,
            (),
            pair.argument,
            pair.result,
            definition.signature.result,
        )
        logger.debug(f"Deriving {definition.name} in scope {pair.scope}")
        pending: List[Judgement] = [root]
        while pending:
            judgement = pending.pop()
            premises = self.judge(judgement, definition)
            pending.extend(reversed(premises))

    def judge(self, judgement: Judgement, definition: Definition) -> List[Judgement]:
        directives = self.tactics.at(judgement.function, judgement.path)
        if any(directive.kind == "admit" for directive in directives):
            for directive in directives:
                self.tactics.consume(directive)
            self.derivation.admitted.append(
                (judgement.function, judgement.scope, judgement.path)
            )
            self.derivation.record(judgement, "admit")
            return []

        judgement = drop_unused(self.derivation, judgement)
        for directive in directives:
            judgement = apply_structural(self.derivation, directive, judgement, definition.body)
            self.tactics.consume(directive)
        judgement = auto_share(self.derivation, judgement)

        if isinstance(judgement.expr, Let):
            return emit_let(self.derivation, judgement)
        return emit_syntax_directed(self.derivation, judgement, self.env)
