"""State of a type derivation: judgements, the constraint set they fill and what was recorded."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Dict, Iterable, List, Optional, Sequence, Tuple

from src.linearize.farkas import FarkasCertificate
from src.models.annotation import Annotation, Index, format_index, index_key
from src.models.constraint import ConstraintSet, LinExpr
from src.models.program import Expr, Path, SimpleType, TreeType, format_path
from src.potential.algebra import index_universe
from src.typesystem.context import TypingContext

if TYPE_CHECKING:
    from src.typesystem.signatures import FunctionSignatures

logger = logging.getLogger(__name__)

COSTED = "cost"
COST_FREE_PREFIX = "free"


def result_arity(type_: SimpleType) -> int:
    return 1 if isinstance(type_, TreeType) else 0


@dataclass(frozen=True)
class Judgement:
    """Q ; ctx |- expr : type | Q' at a path of a function body, in one scope."""

    function: str
    scope: str
    costed: bool
    context: TypingContext
    expr: Expr
    path: Path
    annotation: Annotation[LinExpr]
    result: Annotation[LinExpr]
    result_type: SimpleType

    @property
    def tag(self) -> str:
        return f"{self.function}.{self.scope}{format_path(self.path)}"

    def with_(self, **changes: object) -> "Judgement":
        return replace(self, **changes)  # type: ignore[arg-type]

    def child(
        self,
        step: int,
        context: TypingContext,
        expr: Expr,
        annotation: Annotation[LinExpr],
        result: Optional[Annotation[LinExpr]] = None,
        result_type: Optional[SimpleType] = None,
        scope: Optional[str] = None,
        costed: Optional[bool] = None,
    ) -> "Judgement":
        return Judgement(
            self.function,
            self.scope if scope is None else scope,
            self.costed if costed is None else costed,
            context,
            expr,
            self.path + (step,),
            annotation,
            self.result if result is None else result,
            self.result_type if result_type is None else result_type,
        )


@dataclass
class JudgementRecord:
    function: str
    scope: str
    path: Path
    rule: str
    trees: Tuple[str, ...]
    annotation: Annotation[LinExpr]
    result: Annotation[LinExpr]


@dataclass
class WeakeningRecord:
    """A weakening step and the certificates produced for both of its comparisons."""

    function: str
    scope: str
    path: Path
    context: Tuple[str, ...]
    certificates: List[FarkasCertificate] = field(default_factory=list)


@dataclass
class Derivation:
    """Everything produced while deriving the annotated signatures of a program."""

    constraints: ConstraintSet = field(default_factory=ConstraintSet)
    records: List[JudgementRecord] = field(default_factory=list)
    weakenings: List[WeakeningRecord] = field(default_factory=list)
    admitted: List[Tuple[str, str, Path]] = field(default_factory=list)
    checked: List[Tuple[str, str, Path]] = field(default_factory=list)
    signatures: Dict[str, "FunctionSignatures"] = field(default_factory=dict)
    big_m: int = 1000

    def fresh_annotation(
        self,
        tag: str,
        side: str,
        arity: int,
        indices: Optional[Sequence[Index]] = None,
    ) -> Annotation[LinExpr]:
        """Annotation whose coefficients are fresh unknowns, over the template by default."""
        annotation: Annotation[LinExpr] = Annotation(arity)
        for index in index_universe(arity) if indices is None else indices:
            annotation[index] = self.constraints.fresh(
                f"{tag}.{side}.{index}", f"{side} {format_index(index)}"
            )
        return annotation

    def fresh(self, tag: str, side: str, note: str = "") -> LinExpr:
        return self.constraints.fresh(f"{tag}.{side}", note or side)

    def record(self, judgement: Judgement, rule: str) -> None:
        self.records.append(
            JudgementRecord(
                judgement.function,
                judgement.scope,
                judgement.path,
                rule,
                judgement.context.trees(),
                judgement.annotation,
                judgement.result,
            )
        )
        logger.debug(f"{judgement.tag}: {rule} over ({', '.join(judgement.context.trees())})")

    def admitted_paths(self, function: Optional[str] = None) -> List[Tuple[str, Path]]:
        return [
            (fn, path) for fn, _, path in self.admitted if function is None or fn == function
        ]

    def branch_statuses(self, function: str) -> Dict[str, str]:
        """Terminal paths of the costed derivation of function: checked or admitted."""
        statuses: Dict[str, str] = {}
        for fn, scope, path in self.checked:
            if fn == function and scope == COSTED:
                statuses[format_path(path)] = "checked"
        for fn, scope, path in self.admitted:
            if fn == function and scope == COSTED:
                statuses[format_path(path)] = "admitted"
        return dict(sorted(statuses.items()))


def equate(
    cs: ConstraintSet,
    left: Annotation[LinExpr],
    right: Annotation[LinExpr],
    origin: str,
    indices: Optional[Iterable[Index]] = None,
) -> None:
    """left[i] = right[i] on the given indices, or on every index either one mentions."""
    chosen = set(left.indices()) | set(right.indices()) if indices is None else set(indices)
    for index in sorted(chosen, key=index_key):
        cs.equal(left.get(index), right.get(index), f"{origin} {index}")
