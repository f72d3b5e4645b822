"""
Reader and writer for .coef annotation files

    fn splay
    with-cost:
      q* = 1
      q(1 | 0) = 3
    result:
      q* = 1
    cost-free:
      q(1 | 0) = 1
    result:
      q(1 | 0) = 1

`q*` is the rank coefficient of a single tree, `q<i>` the rank of the i-th tree
and `q(a1 ... am | b)` the coefficient of log(a1|t1| + ... + am|tm| + b).
Omitted coefficients are zero.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from src.models.annotation import Annotation, Index, LogIndex, RankIndex, format_index
from src.models.signature import AnnotatedPair, AnnotatedSignature
from src.utils.errors import ProgramSyntaxError

logger = logging.getLogger(__name__)

Arities = Mapping[str, Tuple[int, int]]

_FN = re.compile(r"^fn\s+([a-z_][A-Za-z0-9_']*)$")
_SECTION = re.compile(r"^(with-cost|cost-free|result):$")
_STAR = re.compile(r"^q\*\s*=\s*(\S+)$")
_RANK = re.compile(r"^q(\d+)\s*=\s*(\S+)$")
_LOG = re.compile(r"^q\(\s*([\d\s]*)\|\s*(\d+)\s*\)\s*=\s*(\S+)$")


@dataclass
class _Entry:
    star: bool
    index: Index
    value: Fraction
    line: int


@dataclass
class _Section:
    kind: str
    line: int
    argument: List[_Entry] = field(default_factory=list)
    result: Optional[List[_Entry]] = None


@dataclass
class _Block:
    name: str
    line: int
    sections: List[_Section] = field(default_factory=list)


def parse_coef(
    text: str, arities: Optional[Arities] = None, source: Optional[str] = None
) -> Dict[str, AnnotatedSignature]:
    """
    Parse a .coef file into signatures keyed by function name.

    arities maps a function to (tree arguments, result trees); without it the
    arities are inferred from the largest index mentioned.
    """
    blocks = _read_blocks(text, source)
    signatures: Dict[str, AnnotatedSignature] = {}
    for block in blocks:
        if block.name in signatures:
            raise ProgramSyntaxError(f"duplicate block for {block.name}", block.line, 1, source)
        signatures[block.name] = _build_signature(block, arities, source)
    logger.info(f"Read annotations for {len(signatures)} function(s) from {source or '<text>'}")
    return signatures


def _read_blocks(text: str, source: Optional[str]) -> List[_Block]:
    blocks: List[_Block] = []
    block: Optional[_Block] = None
    section: Optional[_Section] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("--", 1)[0].strip()
        if not line:
            continue

        match = _FN.match(line)
        if match:
            block = _Block(match.group(1), number)
            blocks.append(block)
            section = None
            continue
        if block is None:
            raise ProgramSyntaxError("expected 'fn <name>' before annotations", number, 1, source)

        match = _SECTION.match(line)
        if match:
            kind = match.group(1)
            if kind == "result":
                if section is None or section.result is not None:
                    raise ProgramSyntaxError(
                        "'result:' must follow a with-cost or cost-free section", number, 1, source
                    )
                section.result = []
            else:
                if kind == "with-cost" and any(s.kind == kind for s in block.sections):
                    raise ProgramSyntaxError(
                        f"second with-cost section for {block.name}", number, 1, source
                    )
                section = _Section(kind, number)
                block.sections.append(section)
            continue
        if section is None:
            raise ProgramSyntaxError("coefficient outside a section", number, 1, source)

        entry = _read_entry(line, number, source)
        target = section.argument if section.result is None else section.result
        if any(existing.index == entry.index for existing in target):
            name = line.split("=")[0].strip()
            raise ProgramSyntaxError(f"coefficient {name} given twice", number, 1, source)
        target.append(entry)
    return blocks


def _read_entry(line: str, number: int, source: Optional[str]) -> _Entry:
    match = _STAR.match(line)
    if match:
        return _Entry(True, RankIndex(1), _rational(match.group(1), number, source), number)
    match = _RANK.match(line)
    if match:
        position = int(match.group(1))
        if position < 1:
            raise ProgramSyntaxError("rank positions start at 1", number, 1, source)
        return _Entry(False, RankIndex(position), _rational(match.group(2), number, source), number)
    match = _LOG.match(line)
    if match:
        vector = tuple(int(a) for a in match.group(1).split())
        constant = int(match.group(2))
        if not any(vector) and constant == 0:
            raise ProgramSyntaxError("log(0) is not a coefficient index", number, 1, source)
        return _Entry(
            False, LogIndex(vector, constant), _rational(match.group(3), number, source), number
        )
    raise ProgramSyntaxError(f"cannot read coefficient line {line!r}", number, 1, source)


def _rational(text: str, number: int, source: Optional[str]) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ProgramSyntaxError(f"not a rational number: {text!r}", number, 1, source) from exc
    if value < 0:
        raise ProgramSyntaxError(f"coefficients must be nonnegative: {text}", number, 1, source)
    return value


def _build_signature(
    block: _Block, arities: Optional[Arities], source: Optional[str]
) -> AnnotatedSignature:
    if arities is not None:
        if block.name not in arities:
            raise ProgramSyntaxError(
                f"annotations for unknown function {block.name}", block.line, 1, source
            )
        argument_arity, result_arity = arities[block.name]
    else:
        argument_arity = max(
            (_implied_arity(e) for s in block.sections for e in s.argument), default=0
        )
        result_arity = max(
            (_implied_arity(e) for s in block.sections for e in s.result or []), default=0
        )

    signature = AnnotatedSignature(block.name, argument_arity, result_arity)
    for section in block.sections:
        pair: AnnotatedPair[Fraction] = AnnotatedPair(
            _annotation(section.argument, argument_arity, source),
            _annotation(section.result or [], result_arity, source),
        )
        if section.kind == "with-cost":
            signature.costed = pair
        else:
            signature.cost_free.append(pair)
    return signature


def _implied_arity(entry: _Entry) -> int:
    if isinstance(entry.index, RankIndex):
        return entry.index.position
    return entry.index.arity


def _annotation(entries: List[_Entry], arity: int, source: Optional[str]) -> Annotation[Fraction]:
    annotation: Annotation[Fraction] = Annotation(arity)
    for entry in entries:
        if entry.star and arity != 1:
            raise ProgramSyntaxError(
                f"q* needs exactly one tree, this annotation has {arity}", entry.line, 1, source
            )
        try:
            annotation[entry.index] = entry.value
        except ValueError as exc:
            raise ProgramSyntaxError(str(exc), entry.line, 1, source) from exc
    return annotation


def render_coef(signatures: Iterable[AnnotatedSignature]) -> str:
    """Render signatures back into .coef text; zero coefficients are left out."""
    lines: List[str] = []
    for signature in signatures:
        if lines:
            lines.append("")
        lines.append(f"fn {signature.name}")
        if signature.costed is not None:
            lines.extend(_render_pair("with-cost", signature.costed))
        for pair in signature.cost_free:
            lines.extend(_render_pair("cost-free", pair))
    return "\n".join(lines) + "\n"


def _render_pair(kind: str, pair: AnnotatedPair[Fraction]) -> List[str]:
    lines = [f"{kind}:"]
    lines.extend(_render_annotation(pair.argument))
    lines.append("result:")
    lines.extend(_render_annotation(pair.result))
    return lines


def _render_annotation(annotation: Annotation[Fraction]) -> List[str]:
    star = annotation.arity == 1
    return [
        f"  {format_index(index, star)} = {value}"
        for index, value in annotation.items()
        if value != 0
    ]
