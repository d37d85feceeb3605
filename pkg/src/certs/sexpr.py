"""S-expression reader that keeps source positions"""

import re
from dataclasses import dataclass, field
from typing import List, Union

from src.utils.error_handler import ErrorCode, ParseError


@dataclass
class Atom:
    value: str
    line: int
    col: int
    start: int
    end: int


@dataclass
class Text:
    value: str
    line: int
    col: int
    start: int
    end: int


@dataclass
class SList:
    items: List["Node"] = field(default_factory=list)
    line: int = 0
    col: int = 0
    start: int = 0
    end: int = 0

    @property
    def head(self) -> str:
        if self.items and isinstance(self.items[0], Atom):
            return self.items[0].value
        return ""


Node = Union[Atom, Text, SList]

_DELIMITERS = set('()";') | {" ", "\t", "\n", "\r"}
_NUMERIC = re.compile(r"^-?\d+(/\d+)?$")


def read(text: str) -> List[Node]:
    """Read every top-level form"""
    stack: List[SList] = []
    forms: List[Node] = []
    line, col, i = 1, 1, 0
    length = len(text)

    def emit(node: Node):
        if stack:
            stack[-1].items.append(node)
        else:
            forms.append(node)

    while i < length:
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch in " \t\r":
            col, i = col + 1, i + 1
            continue
        if ch == ";":
            while i < length and text[i] != "\n":
                i += 1
            continue
        if ch == "(":
            stack.append(SList([], line, col, i, i))
            col, i = col + 1, i + 1
            continue
        if ch == ")":
            if not stack:
                raise ParseError(ErrorCode.PARSE_SYNTAX, "unbalanced ')'", line, col)
            node = stack.pop()
            node.end = i + 1
            emit(node)
            col, i = col + 1, i + 1
            continue
        if ch == '"':
            start, start_col = i, col
            i, col = i + 1, col + 1
            chars = []
            while i < length and text[i] != '"':
                if text[i] == "\n":
                    raise ParseError(ErrorCode.PARSE_SYNTAX, "unterminated string", line, start_col)
                chars.append(text[i])
                i, col = i + 1, col + 1
            if i >= length:
                raise ParseError(ErrorCode.PARSE_SYNTAX, "unterminated string", line, start_col)
            i, col = i + 1, col + 1
            emit(Text("".join(chars), line, start_col, start, i))
            continue
        start, start_col = i, col
        while i < length and text[i] not in _DELIMITERS:
            i, col = i + 1, col + 1
        emit(Atom(text[start:i], line, start_col, start, i))

    if stack:
        open_form = stack[-1]
        raise ParseError(ErrorCode.PARSE_SYNTAX, "unbalanced '('", open_form.line, open_form.col)
    return forms


def walk_atoms(node: Node, path=()):
    """Yield (atom, heads) for every atom, heads being the enclosing form heads outermost first"""
    if isinstance(node, Atom):
        yield node, path
    elif isinstance(node, SList):
        label = node.head
        if label == "step" and len(node.items) > 1 and isinstance(node.items[1], Atom):
            label = f"step:{node.items[1].value}"
        heads = path + (label,)
        for index, child in enumerate(node.items):
            if index == 0 and isinstance(child, Atom) and not _NUMERIC.match(child.value):
                continue
            yield from walk_atoms(child, heads)
