"""
Tactic files place the structural rules the derivation cannot guess

    splay @ /1/1/0/1/1/0/1/1 : weaken
    insert @ /1 : share t
    delete @ / : wvar x
    splay @ /0 : admit
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

from src.models.program import Path, format_path, parse_path
from src.utils.errors import ProgramSyntaxError, TacticError

logger = logging.getLogger(__name__)

DIRECTIVES = ("weaken", "share", "wvar", "shift", "admit")
_NEEDS_VARIABLE = ("share", "wvar")

_LINE = re.compile(
    r"^(?P<fn>[a-z_][A-Za-z0-9_']*)\s*@\s*(?P<path>\S+)\s*:\s*(?P<kind>[a-z]+)(?:\s+(?P<var>\S+))?$"
)


@dataclass(frozen=True)
class Directive:
    function: str
    path: Path
    kind: str
    variable: Optional[str] = None
    line: int = 0

    def __str__(self) -> str:
        target = f" {self.variable}" if self.variable else ""
        return f"{self.function} @ {format_path(self.path)} : {self.kind}{target}"


@dataclass
class Tactics:
    """Directives by (function, path), plus the bookkeeping of which were applied."""

    directives: List[Directive] = field(default_factory=list)
    consumed: Set[Directive] = field(default_factory=set)

    def at(self, function: str, path: Path) -> List[Directive]:
        return [d for d in self.directives if d.function == function and d.path == path]

    def admitted(self, function: str, path: Path) -> bool:
        return any(d.kind == "admit" for d in self.at(function, path))

    def consume(self, directive: Directive) -> None:
        self.consumed.add(directive)

    def functions(self) -> Set[str]:
        return {d.function for d in self.directives}

    def unconsumed(self, admitted: Iterable[Tuple[str, Path]] = ()) -> List[Directive]:
        """Directives never applied, ignoring those inside an admitted subtree."""
        pruned = list(admitted)
        return [
            d
            for d in self.directives
            if d not in self.consumed
            and not any(
                d.function == fn and d.path[: len(path)] == path and d.path != path
                for fn, path in pruned
            )
        ]

    def check_consumed(self, admitted: Iterable[Tuple[str, Path]] = ()) -> None:
        leftover = self.unconsumed(admitted)
        if leftover:
            listing = "; ".join(f"line {d.line}: {d}" for d in leftover)
            raise TacticError(f"{len(leftover)} directive(s) never applied: {listing}")


def parse_tactics(text: str, source: Optional[str] = None) -> Tactics:
    directives: List[Directive] = []
    seen: Dict[Directive, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("--", 1)[0].strip()
        if not line:
            continue
        match = _LINE.match(line)
        if not match:
            raise ProgramSyntaxError(f"cannot read tactic line {line!r}", number, 1, source)
        kind = match.group("kind")
        variable = match.group("var")
        if kind not in DIRECTIVES:
            raise ProgramSyntaxError(f"unknown directive {kind!r}", number, 1, source)
        if kind in _NEEDS_VARIABLE and variable is None:
            raise ProgramSyntaxError(f"{kind} needs a variable", number, 1, source)
        if kind not in _NEEDS_VARIABLE and variable is not None:
            raise ProgramSyntaxError(f"{kind} takes no variable", number, 1, source)
        try:
            path = parse_path(match.group("path"))
        except ValueError as exc:
            raise ProgramSyntaxError(str(exc), number, match.start("path") + 1, source) from exc
        directive = Directive(match.group("fn"), path, kind, variable, number)
        key = Directive(directive.function, path, kind, variable)
        if key in seen and kind in ("admit", "shift", "weaken"):
            logger.warning(f"Repeated directive {directive} (first on line {seen[key]})")
        seen.setdefault(key, number)
        directives.append(directive)
    logger.info(f"Read {len(directives)} tactic directive(s) from {source or '<text>'}")
    return Tactics(directives)
