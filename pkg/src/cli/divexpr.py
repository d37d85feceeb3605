"""
Divisor mini-language for the command line.

    expr    := term ("+" term)*  |  "@" WITNESS
    term    := [coef "*"] atom
    atom    := CURVE  |  "pull(" NAME ")"
    coef    := INT | INT "/" INT

CURVE is an upstairs rigid name (E1, H13, T22, ...); pull() takes a downstairs name.
Pulling back a branch curve doubles its coefficient on the reduced preimage.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from src.geometry import surface
from src.geometry.bicover import DOWNSTAIRS_NAMES, UPSTAIRS_NAMES, CurveX, QDivisorX, curve, pull
from src.geometry.lct import WITNESSES
from src.utils.error_handler import ErrorCode, ExpressionError, GeometryError

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<sym>[+*()]))")


@dataclass
class ParsedDivisor:
    divisor: Optional[QDivisorX] = None
    witness: Optional[str] = None


def _tokens(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            column = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExpressionError(ErrorCode.EXPR_SYNTAX, f"unexpected character '{text[column - 1]}'", column)
        kind = match.lastgroup
        out.append((kind, match.group(kind), match.start(kind) + 1))
        pos = match.end()
    return out


class _Reader:
    def __init__(self, text: str, path: Optional[str]):
        self.text = text
        self.path = path
        self.tokens = _tokens(text)
        self.index = 0

    def peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def take(self, kind: str, value: Optional[str] = None) -> Tuple[str, str, int]:
        token = self.peek()
        if token is None:
            raise ExpressionError(ErrorCode.EXPR_SYNTAX, "unexpected end of expression", len(self.text) + 1)
        if token[0] != kind or (value is not None and token[1] != value):
            expected = value or kind
            raise ExpressionError(ErrorCode.EXPR_SYNTAX, f"expected {expected}, found '{token[1]}'", token[2])
        self.index += 1
        return token

    def atom(self) -> Tuple[CurveX, int]:
        """Curve and the factor its coefficient is multiplied by"""
        _, name, column = self.take("name")
        if name == "pull":
            self.take("sym", "(")
            _, inner, inner_col = self.take("name")
            self.take("sym", ")")
            if inner in UPSTAIRS_NAMES:
                up = curve(UPSTAIRS_NAMES[inner], self.path)
                return up, up.ram
            try:
                down = surface.lookup(inner, self.path)
            except GeometryError:
                raise ExpressionError(ErrorCode.EXPR_UNKNOWN_NAME, f"unknown downstairs name '{inner}'", inner_col) from None
            return pull(down.cls, f"pull({inner})"), 1
        if name not in DOWNSTAIRS_NAMES:
            raise ExpressionError(ErrorCode.EXPR_UNKNOWN_NAME, f"unknown curve '{name}'", column)
        return curve(name, self.path), 1

    def term(self) -> Tuple[CurveX, Fraction]:
        token = self.peek()
        coefficient = Fraction(1)
        if token is not None and token[0] == "num":
            self.index += 1
            coefficient = Fraction(token[1])
            self.take("sym", "*")
        found, factor = self.atom()
        return found, coefficient * factor

    def expression(self) -> QDivisorX:
        coeffs = {}
        while True:
            found, value = self.term()
            coeffs[found] = coeffs.get(found, Fraction(0)) + value
            token = self.peek()
            if token is None:
                break
            self.take("sym", "+")
        return QDivisorX.of(coeffs)


def parse_divisor(text: str, path: Optional[str] = None) -> ParsedDivisor:
    """
    Parse a divisor expression or a named witness

    Args:
        text: Expression such as "4*H13 + 2*E3" or "@D1-odd"
        path: Optional catalog file

    Returns:
        ParsedDivisor with either a divisor or a witness name

    Raises:
        ExpressionError: syntax error or unknown name, with a 1-based column
    """
    stripped = text.strip()
    if not stripped:
        raise ExpressionError(ErrorCode.EXPR_SYNTAX, "empty expression", 1)
    if stripped.startswith("@"):
        name = stripped[1:]
        if name not in WITNESSES:
            column = text.index("@") + 1
            raise ExpressionError(ErrorCode.EXPR_UNKNOWN_NAME, f"unknown witness '@{name}'", column)
        return ParsedDivisor(witness=name)
    return ParsedDivisor(divisor=_Reader(text, path).expression())
