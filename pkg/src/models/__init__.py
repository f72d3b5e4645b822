from .annotation import Annotation, LogIndex, RankIndex
from .constraint import Constraint, ConstraintSet, LinExpr
from .program import Definition, Program
from .signature import AnnotatedPair, AnnotatedSignature
from .value import LEAF, BaseValue, LeafValue, NodeValue

__all__ = [
    "Annotation",
    "LogIndex",
    "RankIndex",
    "Constraint",
    "ConstraintSet",
    "LinExpr",
    "Definition",
    "Program",
    "AnnotatedPair",
    "AnnotatedSignature",
    "LEAF",
    "BaseValue",
    "LeafValue",
    "NodeValue",
]
