"""
Empirical check of an annotated signature on random search trees

For every sample the inputs are drawn, the function is run and
Phi(inputs | Q) - Phi(result | Q') - cost is compared against -tolerance. Cost-free
pairs are checked with cost zero. Samples that run out of fuel are skipped.
"""
from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from src.models.annotation import Annotation
from src.models.program import BaseType, BoolType, Definition, Program, TreeType
from src.models.value import LEAF, BaseValue, BoolValue, LeafValue, NodeValue, TreeValue, Value
from src.potential.functions import potential_of
from src.semantics.evaluator import DEFAULT_FUEL, run_function
from src.semantics.generator import gen_random_search_tree, gen_search_key
from src.utils.errors import EvaluationError, EvaluationTimeout

logger = logging.getLogger(__name__)

TOLERANCE = 1e-9
DEFAULT_SAMPLES = 10_000
DEFAULT_MAX_SIZE = 64
DEFAULT_SEED = 42
MAX_WITNESSES = 5


@dataclass
class Sample:
    arguments: List[Value]
    result: Value
    cost: int
    potential_in: float
    potential_out: float

    @property
    def slack(self) -> float:
        return self.potential_in - self.potential_out - self.cost


@dataclass
class ValidationOutcome:
    attempted: int = 0
    skipped: int = 0
    passed: int = 0
    failed: int = 0
    worst_slack: Optional[float] = None
    witnesses: List[Sample] = field(default_factory=list)
    seconds: float = 0.0


def draw_arguments(definition: Definition, max_size: int, rng: random.Random) -> List[Value]:
    """One random argument per parameter: search trees of 1..max_size leaves and keys near them."""
    if definition.signature is None:
        raise ValueError(f"definition {definition.name} has no signature yet")
    trees: List[TreeValue] = []
    arguments: List[Optional[Value]] = []
    for type_ in definition.signature.arguments:
        if isinstance(type_, TreeType):
            tree = gen_random_search_tree(rng.randint(1, max_size), rng=rng)
            trees.append(tree)
            arguments.append(tree)
        else:
            arguments.append(None)

    pool = trees[0] if trees else LEAF
    drawn: List[Value] = []
    for type_, argument in zip(definition.signature.arguments, arguments):
        if argument is not None:
            drawn.append(argument)
        elif isinstance(type_, BaseType):
            drawn.append(BaseValue(gen_search_key(pool, rng)))
        elif isinstance(type_, BoolType):
            drawn.append(BoolValue(rng.random() < 0.5))
        else:
            raise ValueError(f"cannot draw an argument of type {type_}")
    return drawn


def validate_pair(
    program: Program,
    function: str,
    argument: Annotation[Fraction],
    result: Annotation[Fraction],
    costed: bool,
    samples: int = DEFAULT_SAMPLES,
    max_size: int = DEFAULT_MAX_SIZE,
    seed: int = DEFAULT_SEED,
    fuel: int = DEFAULT_FUEL,
) -> ValidationOutcome:
    """Sample the pair (argument, result) of function; program must be simply typed."""
    if samples < 1 or max_size < 1:
        raise ValueError("samples and max size must be positive")
    definition = program.get(function)
    rng = random.Random(seed)
    outcome = ValidationOutcome()
    started = time.monotonic()

    for _ in range(samples):
        outcome.attempted += 1
        arguments = draw_arguments(definition, max_size, rng)
        try:
            value, cost = run_function(program, function, arguments, fuel)
        except EvaluationTimeout:
            outcome.skipped += 1
            continue
        except EvaluationError:
            logger.error(f"{function} failed on {_show(arguments)}", exc_info=True)
            raise

        sample = Sample(
            arguments,
            value,
            cost if costed else 0,
            potential_of(argument, _trees(arguments)),
            potential_of(result, _trees([value])),
        )
        slack = sample.slack
        if outcome.worst_slack is None or slack < outcome.worst_slack:
            outcome.worst_slack = slack
        if slack >= -TOLERANCE:
            outcome.passed += 1
            continue
        outcome.failed += 1
        if len(outcome.witnesses) < MAX_WITNESSES:
            outcome.witnesses.append(sample)

    outcome.seconds = time.monotonic() - started
    logger.info(
        f"Validated {function} ({'costed' if costed else 'cost-free'}): "
        f"{outcome.passed} passed, {outcome.failed} failed, {outcome.skipped} skipped, "
        f"worst slack {outcome.worst_slack}"
    )
    return outcome


def _trees(values: Sequence[Value]) -> List[TreeValue]:
    return [value for value in values if isinstance(value, (LeafValue, NodeValue))]


def _show(values: Sequence[Value]) -> str:
    return " ".join(str(value) for value in values)
