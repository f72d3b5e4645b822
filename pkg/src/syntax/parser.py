"""
Parser for .core programs and value literals

A definition starts on a line whose first column begins `name params =`;
continuation lines are indented. Each definition (or `name : type` declaration)
is parsed on its own with the LALR grammar below.
"""
from __future__ import annotations

import logging
import re
from typing import Dict, List, Optional, Tuple, Union

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from src.models.program import (
    BASE,
    BOOL,
    TREE,
    Cmp,
    Definition,
    Expr,
    FalseLit,
    FunApp,
    FunctionType,
    If,
    Leaf,
    Let,
    Match,
    Node,
    NodePattern,
    Program,
    SimpleType,
    TrueLit,
    Var,
)
from src.models.value import LEAF, BaseValue, BoolValue, LeafValue, NodeValue, Value
from src.utils.errors import ProgramSyntaxError

logger = logging.getLogger(__name__)

GRAMMAR = r"""
definition: NAME param* "=" expr
param: NAME

declaration: NAME ":" arg_types "->" simple_type
arg_types: simple_type ("*" simple_type)*
simple_type: "Tree" -> tree_type
           | "Base" -> base_type
           | "Bool" -> bool_type

?expr: let_expr
     | if_expr
     | match_expr
     | compare_expr

let_expr: "let" NAME "=" expr "in" expr
if_expr: "if" expr "then" expr "else" expr
match_expr: "match" expr "with" arm+
arm: "|" pattern "->" expr
?pattern: leaf_pattern | node_pattern
leaf_pattern: "leaf"
node_pattern: "(" NAME "," NAME "," NAME ")"

?compare_expr: app_expr
             | comparison
comparison: app_expr compare_op app_expr
!compare_op: "<" | ">" | "="

?app_expr: atom
         | fun_app
fun_app: NAME atom+

?atom: var
     | leaf
     | true_lit
     | false_lit
     | node
     | "(" expr ")"
var: NAME
leaf: "leaf"
true_lit: "true"
false_lit: "false"
node: "(" expr "," expr "," expr ")"

?value: leaf_value
      | int_value
      | true_value
      | false_value
      | node_value
leaf_value: "leaf"
int_value: SIGNED_INT
true_value: "true"
false_value: "false"
node_value: "(" value "," value "," value ")"

NAME: /[a-z_][A-Za-z0-9_']*/
COMMENT: /--[^\n]*/

%import common.SIGNED_INT
%import common.WS
%ignore WS
%ignore COMMENT
"""

_PARSER = Lark(
    GRAMMAR,
    parser="lalr",
    start=["definition", "declaration", "value"],
    propagate_positions=True,
)

_KEYWORDS = ("let", "in", "if", "then", "else", "match", "with", "leaf", "true", "false")
_HEADER = re.compile(r"^([a-z_][A-Za-z0-9_']*)(\s+[a-z_][A-Za-z0-9_']*)*\s*[=:]")
_DECLARATION = re.compile(r"^[a-z_][A-Za-z0-9_']*\s*:")


def parse_program(text: str, source: Optional[str] = None) -> Program:
    """Parse a whole .core file into a (possibly sugared) Program."""
    definitions: List[Definition] = []
    declarations: Dict[str, FunctionType] = {}
    for start_line, chunk in _split_chunks(text):
        if _DECLARATION.match(chunk):
            name, signature = _parse_declaration(chunk, start_line, source)
            if name in declarations:
                raise ProgramSyntaxError(f"duplicate declaration of {name}", start_line, 1, source)
            declarations[name] = signature
            continue
        definition = _parse_definition(chunk, start_line, source)
        if any(existing.name == definition.name for existing in definitions):
            raise ProgramSyntaxError(
                f"duplicate definition of {definition.name}", start_line, 1, source
            )
        definitions.append(definition)

    logger.info(f"Parsed {len(definitions)} definition(s) from {source or '<text>'}")
    return Program(tuple(definitions), declarations)


def parse_expression(text: str) -> Expr:
    """Parse a single expression by wrapping it in a nullary definition."""
    definition = _parse_definition(f"_expr =\n {text}", 0, None)
    return definition.body


def parse_value(text: str) -> Value:
    """Parse a value literal: leaf, integers, true/false and (l, k, r) nodes."""
    try:
        tree = _PARSER.parse(text, start="value")
    except UnexpectedInput as exc:
        raise ProgramSyntaxError(
            f"malformed value literal {text!r}",
            getattr(exc, "line", None),
            getattr(exc, "column", None),
        ) from exc
    return _build_value(tree)


def _split_chunks(text: str) -> List[Tuple[int, str]]:
    chunks: List[Tuple[int, List[str]]] = []
    for number, line in enumerate(text.expandtabs(4).splitlines(), start=1):
        header = _HEADER.match(line)
        if header and header.group(1) not in _KEYWORDS:
            chunks.append((number, [line]))
        elif chunks:
            chunks[-1][1].append(line)
        elif line.strip() and not line.strip().startswith("--"):
            raise ProgramSyntaxError("expected a definition at the start of the line", number, 1)
    return [(start, "\n".join(lines)) for start, lines in chunks]


def _parse_chunk(chunk: str, start: str, line_offset: int, source: Optional[str]) -> Tree:
    try:
        return _PARSER.parse(chunk, start=start)
    except (UnexpectedToken, UnexpectedCharacters) as exc:
        line = exc.line + line_offset - 1 if exc.line is not None and exc.line > 0 else None
        raise ProgramSyntaxError(_describe(exc), line, exc.column, source) from exc
    except UnexpectedEOF as exc:
        raise ProgramSyntaxError("unexpected end of definition", line_offset, None, source) from exc


def _describe(exc: UnexpectedInput) -> str:
    if isinstance(exc, UnexpectedToken):
        return f"unexpected token {exc.token!r}"
    if isinstance(exc, UnexpectedCharacters):
        return f"unexpected character {exc.char!r}"
    return "syntax error"


def _parse_definition(chunk: str, line_offset: int, source: Optional[str]) -> Definition:
    tree = _parse_chunk(chunk, "definition", line_offset, source)
    builder = _AstBuilder(line_offset)
    name = str(tree.children[0])
    params = tuple(str(child.children[0]) for child in tree.children[1:-1])
    if len(set(params)) != len(params):
        raise ProgramSyntaxError(f"repeated parameter in {name}", line_offset, 1, source)
    body = builder.build(tree.children[-1])
    return Definition(name, params, body, loc=(line_offset, 1))


def _parse_declaration(
    chunk: str, line_offset: int, source: Optional[str]
) -> Tuple[str, FunctionType]:
    tree = _parse_chunk(chunk, "declaration", line_offset, source)
    name = str(tree.children[0])
    arguments = tuple(_simple_type(child) for child in tree.children[1].children)
    return name, FunctionType(arguments, _simple_type(tree.children[2]))


def _simple_type(tree: Tree) -> SimpleType:
    return {"tree_type": TREE, "base_type": BASE, "bool_type": BOOL}[str(tree.data)]


class _AstBuilder:
    """Converts lark parse trees into Expr nodes with source locations."""

    def __init__(self, line_offset: int):
        self.line_offset = line_offset

    def _loc(self, tree: Union[Tree, Token]) -> Optional[Tuple[int, int]]:
        if isinstance(tree, Token):
            line, column = tree.line, tree.column
        elif tree.meta.empty:
            return None
        else:
            line, column = tree.meta.line, tree.meta.column
        if line is None:
            return None
        return (line + self.line_offset - 1, column)

    def build(self, tree: Union[Tree, Token]) -> Expr:
        if isinstance(tree, Token):
            where = self._loc(tree) or (None, None)
            raise ProgramSyntaxError(f"unexpected token {tree!r}", *where)
        handler = getattr(self, f"_build_{tree.data}")
        return handler(tree)

    def _build_var(self, tree: Tree) -> Expr:
        return Var(str(tree.children[0]), self._loc(tree))

    def _build_leaf(self, tree: Tree) -> Expr:
        return Leaf(self._loc(tree))

    def _build_true_lit(self, tree: Tree) -> Expr:
        return TrueLit(self._loc(tree))

    def _build_false_lit(self, tree: Tree) -> Expr:
        return FalseLit(self._loc(tree))

    def _build_node(self, tree: Tree) -> Expr:
        left, label, right = (self.build(child) for child in tree.children)
        return Node(left, label, right, self._loc(tree))

    def _build_fun_app(self, tree: Tree) -> Expr:
        name = str(tree.children[0])
        arguments = tuple(self.build(child) for child in tree.children[1:])
        return FunApp(name, arguments, self._loc(tree))

    def _build_comparison(self, tree: Tree) -> Expr:
        left, operator, right = tree.children
        return Cmp(self.build(left), str(operator.children[0]), self.build(right), self._loc(tree))

    def _build_let_expr(self, tree: Tree) -> Expr:
        name, bound, body = tree.children
        return Let(str(name), self.build(bound), self.build(body), self._loc(tree))

    def _build_if_expr(self, tree: Tree) -> Expr:
        cond, then_branch, else_branch = (self.build(child) for child in tree.children)
        return If(cond, then_branch, else_branch, self._loc(tree))

    def _build_match_expr(self, tree: Tree) -> Expr:
        scrutinee = self.build(tree.children[0])
        leaf_branch: Optional[Expr] = None
        pattern: Optional[NodePattern] = None
        node_branch: Optional[Expr] = None
        for arm in tree.children[1:]:
            arm_pattern, arm_body = arm.children
            if arm_pattern.data == "leaf_pattern":
                if leaf_branch is not None:
                    where = self._loc(arm) or (None, None)
                    raise ProgramSyntaxError("duplicate leaf arm", *where)
                leaf_branch = self.build(arm_body)
            else:
                if node_branch is not None:
                    where = self._loc(arm) or (None, None)
                    raise ProgramSyntaxError("duplicate node arm", *where)
                binders = tuple(str(token) for token in arm_pattern.children)
                if len(set(binders)) != 3:
                    raise ProgramSyntaxError(
                        "node pattern binds a name twice", *(self._loc(arm) or (None, None))
                    )
                pattern = NodePattern(*binders)
                node_branch = self.build(arm_body)
        return Match(scrutinee, leaf_branch, pattern, node_branch, self._loc(tree))


def _build_value(tree: Tree) -> Value:
    kind = str(tree.data)
    if kind == "leaf_value":
        return LEAF
    if kind == "int_value":
        return BaseValue(int(tree.children[0]))
    if kind == "true_value":
        return BoolValue(True)
    if kind == "false_value":
        return BoolValue(False)
    left, label, right = (_build_value(child) for child in tree.children)
    if not isinstance(label, BaseValue):
        raise ProgramSyntaxError(f"node label must be an integer, got {label}")
    trees = (LeafValue, NodeValue)
    if not isinstance(left, trees) or not isinstance(right, trees):
        raise ProgramSyntaxError("node children must be trees")
    return NodeValue(left, label, right)
