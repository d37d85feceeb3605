"""
Constraint store for certificate checking.

Facts are sympy expressions compared against zero. Residual intersections such as
Omega.H13 are kept as definitions and substituted when the store is linearized, so a
fact may mention a residual before the step that defines it. Monomials of degree two
or more become opaque columns for Fourier-Motzkin.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import sympy as sp

from src.arith.fourier_motzkin import FMResult, fm_infeasible
from src.arith.linear import GE, GT, LinearConstraint
from src.certs.model import N

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Fact:
    """expr REL 0"""

    label: str
    expr: sp.Expr
    rel: str

    @property
    def strict(self) -> bool:
        return self.rel == GT

    def __str__(self) -> str:
        return f"{self.label}: {self.expr} {self.rel} 0"


def to_fraction(value) -> Fraction:
    value = sp.sympify(value)
    if not isinstance(value, sp.Rational):
        raise ValueError(f"not a rational constant: {value}")
    return Fraction(int(value.p), int(value.q))


@dataclass
class Store:
    """Facts, residual definitions and the current range of n"""

    facts: List[Fact] = field(default_factory=list)
    definitions: Dict[sp.Symbol, sp.Expr] = field(default_factory=dict)
    n_lo: Optional[int] = None
    n_hi: Optional[int] = None

    def copy(self) -> "Store":
        return Store(list(self.facts), dict(self.definitions), self.n_lo, self.n_hi)

    @property
    def n_value(self) -> Optional[int]:
        if self.n_lo is not None and self.n_lo == self.n_hi:
            return self.n_lo
        return None

    # Building

    def add(self, label: str, expr: sp.Expr, rel: str = GE) -> Fact:
        fact = Fact(label, sp.expand(expr), rel)
        self.facts.append(fact)
        logger.debug(f"Store += {fact}")
        return fact

    def define(self, symbol: sp.Symbol, value: sp.Expr):
        self.definitions[symbol] = sp.expand(value)

    def restrict_n(self, lo: Optional[int], hi: Optional[int]):
        """Replace the domain facts of n"""
        self.n_lo, self.n_hi = lo, hi
        self.facts = [f for f in self.facts if f.label not in ("dom.n", "dom.n.hi")]
        if lo is not None:
            self.facts.insert(0, Fact("dom.n", N - lo, GE))
        if hi is not None:
            self.facts.insert(1 if lo is not None else 0, Fact("dom.n.hi", hi - N, GE))

    def fact(self, label: str) -> Optional[Fact]:
        for fact in reversed(self.facts):
            if fact.label == label:
                return fact
        return None

    # Linearization

    def substitute(self, expr: sp.Expr) -> sp.Expr:
        expr = sp.sympify(expr)
        for _ in range(4):
            if not expr.free_symbols & set(self.definitions):
                break
            expr = expr.xreplace(self.definitions)
        if self.n_value is not None:
            expr = expr.xreplace({N: sp.Integer(self.n_value)})
        return sp.expand(expr)

    def linearize(self, expr: sp.Expr) -> Tuple[Dict[str, Fraction], Fraction]:
        """Column coefficients and constant of expr after substitution"""
        coeffs: Dict[str, Fraction] = {}
        const = Fraction(0)
        for monomial, value in self.substitute(expr).as_coefficients_dict().items():
            value = to_fraction(value)
            if monomial == 1:
                const += value
            else:
                name = str(monomial)
                coeffs[name] = coeffs.get(name, Fraction(0)) + value
        return {k: v for k, v in coeffs.items() if v != 0}, const

    def row(self, expr: sp.Expr, rel: str) -> LinearConstraint:
        coeffs, const = self.linearize(expr)
        return LinearConstraint.build(coeffs, const, rel)

    def rows(self) -> List[LinearConstraint]:
        return [self.row(f.expr, f.rel) for f in self.facts]

    # Decisions

    def infeasible(self, extra: Tuple[Tuple[sp.Expr, str], ...] = ()) -> FMResult:
        rows = self.rows() + [self.row(expr, rel) for expr, rel in extra]
        return fm_infeasible(rows)

    def entails(self, expr: sp.Expr, strict: bool = False) -> bool:
        """Whether every point of the store satisfies expr >= 0 (or > 0)"""
        negation = (-expr, GE) if strict else (-expr, GT)
        return self.infeasible((negation,)).infeasible

    def is_constant(self, expr: sp.Expr) -> Optional[Fraction]:
        coeffs, const = self.linearize(expr)
        return None if coeffs else const

    def same_polynomial(self, left: sp.Expr, right: sp.Expr) -> bool:
        """Equality as polynomials in n, without using the current value of n"""
        return sp.expand(sp.sympify(left) - sp.sympify(right)) == 0


def relation_of(strict: bool) -> str:
    return GT if strict else GE
