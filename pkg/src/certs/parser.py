"""
Parser for certificate files.

Names are resolved as they are read: upstairs curve names until a pushforward step,
downstairs names after it, and variables only once a decomposition declares them.
Every error carries the line and column of the offending form.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Set

import sympy as sp

from src.certs.model import (
    N,
    THEOREMS,
    AdjunctionStep,
    Certificate,
    ContradictionStep,
    Decomposition,
    DivExpr,
    GlctStep,
    IxnStep,
    JiangZouStep,
    LinearStep,
    Locus,
    MultStep,
    Position,
    ProductStep,
    PushforwardStep,
    SplitCase,
    SplitLocusStep,
    SplitNStep,
    Step,
    Term,
    theorem_for_id,
)
from src.certs.sexpr import Atom, Node, SList, Text, read
from src.geometry import surface
from src.geometry.bicover import DOWNSTAIRS_NAMES, UPSTAIRS_NAMES
from src.geometry.picard import DivClass
from src.utils.error_handler import ErrorCode, ParseError

logger = logging.getLogger(__name__)

NUMBER_RE = re.compile(r"^-?\d+(/\d+)?$")
VARIABLE_RE = re.compile(r"^[a-z][A-Za-z0-9_]*$")
UPSTAIRS_CURVES = frozenset(DOWNSTAIRS_NAMES)
DOWNSTAIRS_RIGID = frozenset(UPSTAIRS_NAMES)
DOWNSTAIRS_MOBILE = frozenset({"l", "t1", "t2", "t3", "t4"})
RESERVED = frozenset({"n", "D", "d", "inf", "mult"})
RELATIONS = ("<=", "<", ">=", ">")


@dataclass
class Scope:
    """Names visible at a point of the certificate"""

    level: str = "up"
    variables: Set[str] = field(default_factory=set)
    residuals: Set[str] = field(default_factory=set)

    def copy(self) -> "Scope":
        return Scope(self.level, set(self.variables), set(self.residuals))


def _pos(node: Node) -> Position:
    return Position(node.line, node.col)


def _fail(node: Node, code: str, message: Optional[str] = None):
    raise ParseError(code, message, node.line, node.col)


def _atom(node: Node, what: str) -> str:
    if not isinstance(node, Atom):
        _fail(node, ErrorCode.PARSE_STRUCTURE, f"expected {what}")
    return node.value


def _form(node: Node, head: str) -> SList:
    if not isinstance(node, SList) or node.head != head:
        _fail(node, ErrorCode.PARSE_STRUCTURE, f"expected ({head} ...)")
    return node


def parse_number(node: Node) -> Fraction:
    value = _atom(node, "a number")
    if not NUMBER_RE.match(value):
        _fail(node, ErrorCode.PARSE_MALFORMED_EXPRESSION, f"malformed expression: expected a number, got '{value}'")
    return Fraction(value)


class CertificateParser:
    """Turns certificate text into a Certificate"""

    def __init__(self, text: str, source: str = "<text>"):
        self.text = text
        self.source = source

    # Names

    def curve_name(self, node: Node, scope: Scope) -> str:
        name = _atom(node, "a curve name")
        allowed = UPSTAIRS_CURVES if scope.level == "up" else DOWNSTAIRS_RIGID
        if name not in allowed:
            _fail(node, ErrorCode.PARSE_UNKNOWN_CURVE, f"unknown curve '{name}'")
        return name

    def item_name(self, node: Node, scope: Scope) -> str:
        """A curve name or a declared residual"""
        name = _atom(node, "a curve or residual name")
        if name in scope.residuals:
            return name
        return self.curve_name(node, scope)

    # Expressions

    def expression(self, node: Node, scope: Scope) -> sp.Expr:
        if isinstance(node, Atom):
            value = node.value
            if NUMBER_RE.match(value):
                fraction = Fraction(value)
                return sp.Rational(fraction.numerator, fraction.denominator)
            if value == "n":
                return N
            if value in scope.variables:
                return sp.Symbol(value)
            if VARIABLE_RE.match(value) or value[:1].isalpha():
                _fail(node, ErrorCode.PARSE_UNDECLARED_VARIABLE, f"undeclared variable '{value}'")
            _fail(node, ErrorCode.PARSE_MALFORMED_EXPRESSION, f"malformed expression '{value}'")
        if isinstance(node, Text) or not node.items:
            _fail(node, ErrorCode.PARSE_MALFORMED_EXPRESSION)
        head = node.head
        args = node.items[1:]
        if head == "+" and args:
            return sp.Add(*[self.expression(a, scope) for a in args])
        if head == "*" and args:
            return sp.Mul(*[self.expression(a, scope) for a in args])
        if head == "-" and len(args) == 1:
            return -self.expression(args[0], scope)
        if head == "-" and len(args) == 2:
            return self.expression(args[0], scope) - self.expression(args[1], scope)
        if head == "mult" and len(args) == 1:
            name = _atom(args[0], "a residual name")
            if name not in scope.residuals:
                _fail(args[0], ErrorCode.PARSE_UNDECLARED_VARIABLE, f"undeclared residual '{name}'")
            return sp.Symbol(f"mult.{name}")
        _fail(node, ErrorCode.PARSE_MALFORMED_EXPRESSION, f"malformed expression ({head} ...)")

    def divisor(self, node: Node, scope: Scope) -> DivExpr:
        text = self.text[node.start:node.end]
        if isinstance(node, Atom):
            name = node.value
            if name == ("D" if scope.level == "up" else "d"):
                return DivExpr(target=Fraction(1), text=text)
            if scope.level == "down" and name in DOWNSTAIRS_MOBILE:
                return DivExpr(pulled=surface.lookup(name).cls, text=text)
            return DivExpr(curves={self.curve_name(node, scope): Fraction(1)}, text=text)
        if not isinstance(node, SList) or not node.items:
            _fail(node, ErrorCode.PARSE_MALFORMED_EXPRESSION, "malformed divisor")
        head, args = node.head, node.items[1:]
        if head == "pull" and len(args) == 1 and scope.level == "up":
            name = _atom(args[0], "a downstairs name")
            if name not in DOWNSTAIRS_RIGID and name not in DOWNSTAIRS_MOBILE:
                _fail(args[0], ErrorCode.PARSE_UNKNOWN_CURVE, f"unknown curve '{name}'")
            return DivExpr(pulled=surface.lookup(name).cls, text=text)
        if head == "*" and len(args) == 2:
            scale = parse_number(args[0])
            inner = self.divisor(args[1], scope)
            return DivExpr(
                target=scale * inner.target,
                curves={k: scale * v for k, v in inner.curves.items()},
                pulled=scale * inner.pulled,
                text=text,
            )
        if head == "+" and args:
            total = DivExpr(text=text)
            for arg in args:
                part = self.divisor(arg, scope)
                total.target += part.target
                for k, v in part.curves.items():
                    total.curves[k] = total.curves.get(k, Fraction(0)) + v
                total.pulled = total.pulled + part.pulled
            return total
        _fail(node, ErrorCode.PARSE_MALFORMED_EXPRESSION, f"malformed divisor ({head} ...)")

    # Header

    def locus(self, node: SList, scope: Scope) -> Locus:
        locus = Locus()
        for part in node.items[1:]:
            if isinstance(part, Atom) and part.value == "off-branch":
                locus.off_branch = True
                continue
            if isinstance(part, SList) and part.head in ("in", "not-in"):
                names = [self.curve_name(x, scope) for x in part.items[1:]]
                (locus.inside if part.head == "in" else locus.outside).extend(names)
                continue
            _fail(part, ErrorCode.PARSE_STRUCTURE, "expected (in ...), (not-in ...) or off-branch")
        if locus.off_branch and (locus.inside or locus.outside):
            _fail(node, ErrorCode.PARSE_STRUCTURE, "off-branch locus cannot list curves")
        return locus

    def decomposition(self, node: SList, scope: Scope) -> Decomposition:
        items = node.items[1:]
        if not items:
            _fail(node, ErrorCode.PARSE_STRUCTURE, "empty decomposition")
        target = _atom(items[0], "D or d")
        expected = "D" if scope.level == "up" else "d"
        if target != expected:
            _fail(items[0], ErrorCode.PARSE_STRUCTURE, f"expected target '{expected}'")
        rest = items[1:]
        system = None
        if scope.level == "up":
            if not rest or not isinstance(rest[0], SList) or rest[0].head not in ("class", "system"):
                _fail(node, ErrorCode.PARSE_STRUCTURE, "expected (class 2K) or (system even|odd i)")
            kind = rest[0]
            words = [_atom(x, "a system word") for x in kind.items[1:]]
            if kind.head == "class" and words == ["2K"]:
                system = ("class", "2K")
            elif kind.head == "system" and len(words) == 2 and words[0] in ("even", "odd") and words[1] in "0123":
                system = ("system", words[0], int(words[1]))
            else:
                _fail(kind, ErrorCode.PARSE_STRUCTURE, "expected (class 2K) or (system even|odd i)")
            rest = rest[1:]

        terms: List[Term] = []
        residual, exclude = None, []
        for part in rest:
            if isinstance(part, SList) and part.head == "term":
                terms.append(self.term(part, scope))
            elif isinstance(part, SList) and part.head == "residual":
                if residual is not None:
                    _fail(part, ErrorCode.PARSE_STRUCTURE, "duplicate residual")
                if len(part.items) < 2:
                    _fail(part, ErrorCode.PARSE_STRUCTURE, "residual needs a name")
                residual = _atom(part.items[1], "a residual name")
                if residual in RESERVED or residual in scope.variables or residual in scope.residuals:
                    _fail(part.items[1], ErrorCode.PARSE_STRUCTURE, f"name '{residual}' is already in use")
                for extra in part.items[2:]:
                    form = _form(extra, "exclude")
                    exclude.extend(self.curve_name(x, scope) for x in form.items[1:])
            else:
                _fail(part, ErrorCode.PARSE_STRUCTURE, "expected (term ...) or (residual ...)")
        if residual is None:
            _fail(node, ErrorCode.PARSE_STRUCTURE, "decomposition needs a residual")
        scope.residuals.add(residual)
        return Decomposition(target, system, terms, residual, exclude, _pos(node))

    def term(self, node: SList, scope: Scope) -> Term:
        if len(node.items) != 4:
            _fail(node, ErrorCode.PARSE_STRUCTURE, "expected (term VAR CURVE (>= VAR NUM))")
        var = _atom(node.items[1], "a variable")
        if not VARIABLE_RE.match(var) or var in RESERVED:
            _fail(node.items[1], ErrorCode.PARSE_STRUCTURE, f"invalid variable name '{var}'")
        if var in scope.variables:
            _fail(node.items[1], ErrorCode.PARSE_STRUCTURE, f"variable '{var}' declared twice")
        curve = self.curve_name(node.items[2], scope)
        bound = _form(node.items[3], ">=")
        if len(bound.items) != 3 or _atom(bound.items[1], "a variable") != var:
            _fail(bound, ErrorCode.PARSE_STRUCTURE, f"expected (>= {var} NUM)")
        lower = parse_number(bound.items[2])
        scope.variables.add(var)
        return Term(var, curve, lower, _pos(node))

    # Steps

    def steps(self, nodes: List[Node], scope: Scope, prefix: str) -> List[Step]:
        out = []
        for index, node in enumerate(nodes, start=1):
            out.append(self.step(node, scope, f"{prefix}{index}"))
        return out

    def step(self, node: Node, scope: Scope, step_id: str) -> Step:
        form = _form(node, "step")
        if len(form.items) < 2:
            _fail(form, ErrorCode.PARSE_STRUCTURE, "step needs a kind")
        kind = _atom(form.items[1], "a step kind")
        args = form.items[2:]
        pos = _pos(form)

        if kind == "ixn":
            if len(args) != 3:
                _fail(form, ErrorCode.PARSE_STRUCTURE, "expected (step ixn A B q)")
            return IxnStep(step_id, pos, self.divisor(args[0], scope), self.divisor(args[1], scope),
                           self.expression(args[2], scope))
        if kind == "adjunction":
            if len(args) not in (2, 3):
                _fail(form, ErrorCode.PARSE_STRUCTURE, "expected (step adjunction C (residue ...) [(form mult)])")
            curve = self.curve_name(args[0], scope)
            residue = _form(args[1], "residue")
            items = [self.item_name(x, scope) for x in residue.items[1:]]
            mult_form = False
            if len(args) == 3:
                extra = _form(args[2], "form")
                if [_atom(x, "a form name") for x in extra.items[1:]] != ["mult"]:
                    _fail(extra, ErrorCode.PARSE_STRUCTURE, "only (form mult) is supported")
                mult_form = True
            return AdjunctionStep(step_id, pos, curve, items, mult_form)
        if kind == "mult":
            return MultStep(step_id, pos)
        if kind == "product":
            if len(args) != 2:
                _fail(form, ErrorCode.PARSE_STRUCTURE, "expected (step product e1 e2)")
            return ProductStep(step_id, pos, self.expression(args[0], scope), self.expression(args[1], scope))
        if kind == "jiang-zou":
            if len(args) != 2:
                _fail(form, ErrorCode.PARSE_STRUCTURE, "expected (step jiang-zou (bprime ...) (c ...))")
            bprime = _form(args[0], "bprime")
            other = _form(args[1], "c")
            return JiangZouStep(step_id, pos, [self.item_name(x, scope) for x in bprime.items[1:]],
                                [self.item_name(x, scope) for x in other.items[1:]])
        if kind == "pushforward":
            if len(args) != 1 or scope.level != "up":
                _fail(form, ErrorCode.PARSE_STRUCTURE, "pushforward takes one downstairs decomposition, once")
            scope.level = "down"
            decomposition = self.decomposition(_form(args[0], "decompose"), scope)
            return PushforwardStep(step_id, pos, decomposition)
        if kind == "glct":
            return GlctStep(step_id, pos)
        if kind == "contradiction":
            return ContradictionStep(step_id, pos)
        if kind == "split-n":
            cases = []
            for k, case in enumerate(args, start=1):
                case = _form(case, "case")
                if len(case.items) < 2:
                    _fail(case, ErrorCode.PARSE_STRUCTURE, "case needs a range")
                rng = _form(case.items[1], "range")
                if len(rng.items) != 3:
                    _fail(rng, ErrorCode.PARSE_STRUCTURE, "expected (range lo hi)")
                lo = parse_number(rng.items[1])
                hi_atom = _atom(rng.items[2], "a bound")
                hi = None if hi_atom == "inf" else parse_number(rng.items[2])
                if lo.denominator != 1 or (hi is not None and hi.denominator != 1):
                    _fail(rng, ErrorCode.PARSE_STRUCTURE, "range bounds must be integers")
                branch = scope.copy()
                body = self.steps(case.items[2:], branch, f"{step_id}.{k}.")
                cases.append(SplitCase(int(lo), None if hi is None else int(hi), body))
            if not cases:
                _fail(form, ErrorCode.PARSE_STRUCTURE, "split-n needs cases")
            return SplitNStep(step_id, pos, cases)
        if kind == "split-locus":
            if len(args) != 3:
                _fail(form, ErrorCode.PARSE_STRUCTURE, "expected (step split-locus C (case in ...) (case not-in ...))")
            curve = self.curve_name(args[0], scope)
            bodies = {}
            for k, case in enumerate(args[1:], start=1):
                case = _form(case, "case")
                label = _atom(case.items[1], "in or not-in") if len(case.items) > 1 else ""
                if label not in ("in", "not-in") or label in bodies:
                    _fail(case, ErrorCode.PARSE_STRUCTURE, "expected (case in ...) and (case not-in ...)")
                bodies[label] = self.steps(case.items[2:], scope.copy(), f"{step_id}.{k}.")
            return SplitLocusStep(step_id, pos, curve, bodies["in"], bodies["not-in"])
        if kind == "linear":
            if len(args) != 2:
                _fail(form, ErrorCode.PARSE_STRUCTURE, "expected (step linear (REL lhs rhs) (farkas ...))")
            claim = args[0]
            if not isinstance(claim, SList) or claim.head not in RELATIONS or len(claim.items) != 3:
                _fail(claim, ErrorCode.PARSE_MALFORMED_EXPRESSION, "expected (<=|<|>=|> lhs rhs)")
            farkas = _form(args[1], "farkas")
            multipliers = []
            for entry in farkas.items[1:]:
                if not isinstance(entry, SList) or len(entry.items) != 2:
                    _fail(entry, ErrorCode.PARSE_STRUCTURE, "expected (coef label)")
                multipliers.append((parse_number(entry.items[0]), _atom(entry.items[1], "a label")))
            return LinearStep(step_id, pos, claim.head, self.expression(claim.items[1], scope),
                              self.expression(claim.items[2], scope), multipliers)
        _fail(form.items[1], ErrorCode.PARSE_STRUCTURE, f"unknown step kind '{kind}'")

    # Certificate

    def parse(self) -> Certificate:
        forms = read(self.text)
        if len(forms) != 1:
            where = forms[1] if len(forms) > 1 else None
            line, col = (where.line, where.col) if where else (1, 1)
            raise ParseError(ErrorCode.PARSE_STRUCTURE, "expected exactly one (certificate ...) form", line, col)
        root = _form(forms[0], "certificate")
        if len(root.items) < 2 or not isinstance(root.items[1], Text):
            _fail(root, ErrorCode.PARSE_STRUCTURE, "certificate needs a quoted id")
        cert_id = root.items[1].value

        theorem = theorem_for_id(cert_id)
        scope = Scope()
        domain_lo, domain_seen, threshold = None, False, None
        locus, decomposition = None, None
        step_nodes: List[Node] = []

        for part in root.items[2:]:
            head = part.head if isinstance(part, SList) else ""
            if head == "step":
                step_nodes.append(part)
                continue
            if step_nodes:
                _fail(part, ErrorCode.PARSE_STRUCTURE, "header forms must precede the steps")
            if head == "theorem":
                tag = _atom(part.items[1], "a theorem tag") if len(part.items) == 2 else ""
                if tag not in THEOREMS:
                    _fail(part, ErrorCode.PARSE_STRUCTURE, f"unknown theorem tag '{tag}'")
                theorem = THEOREMS[tag]
            elif head == "domain":
                domain_seen = True
                if len(part.items) == 2:
                    bound = _form(part.items[1], ">=")
                    if len(bound.items) != 3 or _atom(bound.items[1], "n") != "n":
                        _fail(bound, ErrorCode.PARSE_STRUCTURE, "expected (>= n k)")
                    value = parse_number(bound.items[2])
                    if value.denominator != 1:
                        _fail(bound, ErrorCode.PARSE_STRUCTURE, "domain bound must be an integer")
                    domain_lo = int(value)
                elif len(part.items) != 1:
                    _fail(part, ErrorCode.PARSE_STRUCTURE, "expected (domain) or (domain (>= n k))")
            elif head == "threshold":
                if len(part.items) != 2:
                    _fail(part, ErrorCode.PARSE_STRUCTURE, "expected (threshold expr)")
                threshold = self.expression(part.items[1], scope)
            elif head == "locus":
                locus = self.locus(part, scope)
            elif head == "decompose":
                decomposition = self.decomposition(part, scope)
            else:
                _fail(part, ErrorCode.PARSE_STRUCTURE, f"unexpected form ({head} ...)")

        if theorem is None:
            _fail(root, ErrorCode.PARSE_STRUCTURE, f"cannot tell the theorem of '{cert_id}'")
        for value, name in ((domain_seen, "domain"), (threshold is not None, "threshold"),
                            (locus is not None, "locus"), (decomposition is not None, "decompose")):
            if not value:
                _fail(root, ErrorCode.PARSE_STRUCTURE, f"missing ({name} ...)")
        if not step_nodes:
            _fail(root, ErrorCode.PARSE_EMPTY)

        steps = self.steps(step_nodes, scope, "s")
        logger.debug(f"Parsed {cert_id}: {len(steps)} steps, {len(decomposition.terms)} variables")
        return Certificate(cert_id, theorem, domain_lo, threshold, locus, decomposition, steps, self.source)


def parse(text: str, source: str = "<text>") -> Certificate:
    """Parse certificate text"""
    return CertificateParser(text, source).parse()


def parse_file(path: str) -> Certificate:
    with open(path, "r", encoding="utf-8") as handle:
        return parse(handle.read(), path)
