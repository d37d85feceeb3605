"""
Fourier-Motzkin elimination over exact rationals.

Equalities are substituted away first. Inequalities are then eliminated one variable
at a time, picking the variable with the smallest pairing growth, and pruning
derived rows with Imbert's history criterion. A feasible system yields a witness by
back-substitution; an infeasible one yields the contradictory derived row.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from src.arith.linear import EQ, GE, GT, LinearConstraint

logger = logging.getLogger(__name__)


@dataclass
class FMResult:
    """Outcome of an elimination run"""

    infeasible: bool
    witness: Optional[Dict[str, Fraction]] = None
    conflict: Optional[LinearConstraint] = None
    eliminated: List[str] = field(default_factory=list)


def _combine(pos: LinearConstraint, neg: LinearConstraint, var: str) -> LinearConstraint:
    """Positive combination of two rows that cancels var"""
    p = pos.coefficient(var)
    q = -neg.coefficient(var)
    terms: Dict[str, Fraction] = {}
    for name, value in pos.coeffs:
        terms[name] = terms.get(name, Fraction(0)) + q * value
    for name, value in neg.coeffs:
        terms[name] = terms.get(name, Fraction(0)) + p * value
    terms.pop(var, None)
    rel = GT if (pos.strict or neg.strict) else GE
    return LinearConstraint.build(terms, q * pos.const + p * neg.const, rel, pos.history | neg.history)


def _normalize(constraint: LinearConstraint) -> LinearConstraint:
    """Scale so the first coefficient has absolute value 1"""
    if not constraint.coeffs:
        return constraint
    scale = abs(constraint.coeffs[0][1])
    if scale == 1:
        return constraint
    terms = {v: c / scale for v, c in constraint.coeffs}
    return LinearConstraint.build(terms, constraint.const / scale, constraint.rel, constraint.history)


def _dedupe(rows: Sequence[LinearConstraint]) -> List[LinearConstraint]:
    """Keep the tightest row per coefficient vector"""
    best: Dict[Tuple, LinearConstraint] = {}
    order: List[Tuple] = []
    for row in rows:
        row = _normalize(row)
        key = row.coeffs
        current = best.get(key)
        if current is None:
            best[key] = row
            order.append(key)
        elif row.const < current.const or (row.const == current.const and row.strict and not current.strict):
            best[key] = row
    return [best[key] for key in order]


def _substitute(row: LinearConstraint, var: str, expr: Dict[str, Fraction], const: Fraction) -> LinearConstraint:
    """Replace var by sum(expr) + const"""
    c = row.coefficient(var)
    if c == 0:
        return row
    terms = {name: value for name, value in row.coeffs if name != var}
    for name, value in expr.items():
        terms[name] = terms.get(name, Fraction(0)) + c * value
    return LinearConstraint.build(terms, row.const + c * const, row.rel, row.history)


def _pick_variable(rows: Sequence[LinearConstraint]) -> str:
    counts: Dict[str, List[int]] = {}
    for row in rows:
        for name, value in row.coeffs:
            slot = counts.setdefault(name, [0, 0])
            slot[0 if value > 0 else 1] += 1
    return min(counts, key=lambda v: (counts[v][0] * counts[v][1] - counts[v][0] - counts[v][1], v))


def _bounds(rows: Sequence[LinearConstraint], var: str, assignment: Dict[str, Fraction]) -> Fraction:
    """Choose a value for var inside the interval the rows allow"""
    lower: Optional[Tuple[Fraction, bool]] = None
    upper: Optional[Tuple[Fraction, bool]] = None
    for row in rows:
        c = row.coefficient(var)
        if c == 0:
            continue
        rest = row.const
        for name, value in row.coeffs:
            if name != var:
                rest += value * assignment.setdefault(name, Fraction(0))
        bound = -rest / c
        if c > 0:
            if lower is None or bound > lower[0] or (bound == lower[0] and row.strict):
                lower = (bound, row.strict)
        else:
            if upper is None or bound < upper[0] or (bound == upper[0] and row.strict):
                upper = (bound, row.strict)
    if lower is None and upper is None:
        return Fraction(0)
    if lower is None:
        return upper[0] - 1 if upper[1] else upper[0]
    if upper is None:
        return lower[0] + 1 if lower[1] else lower[0]
    if lower[1] or upper[1]:
        return (lower[0] + upper[0]) / 2
    return lower[0]


def fm_infeasible(constraints: Sequence[LinearConstraint]) -> FMResult:
    """
    Decide rational feasibility of a finite affine system.

    Args:
        constraints: Rows of the form expr >= 0, expr > 0 or expr == 0

    Returns:
        FMResult with infeasible=True and the conflicting derived row, or a witness
        assignment satisfying every input row
    """
    original = list(constraints)
    eliminated: List[str] = []

    for row in original:
        if row.is_trivial_violation():
            return FMResult(infeasible=True, conflict=row)

    # Equalities first
    equalities = [row for row in original if row.rel == EQ and row.coeffs]
    rows = [row for row in original if row.rel != EQ and row.coeffs]
    substitutions: List[Tuple[str, Dict[str, Fraction], Fraction]] = []
    while equalities:
        eq = equalities.pop()
        if not eq.coeffs:
            if eq.const != 0:
                return FMResult(infeasible=True, conflict=eq, eliminated=eliminated)
            continue
        var, c = eq.coeffs[0]
        expr = {name: -value / c for name, value in eq.coeffs if name != var}
        const = -eq.const / c
        substitutions.append((var, expr, const))
        eliminated.append(var)
        equalities = [_substitute(r, var, expr, const) for r in equalities]
        rows = [_substitute(r, var, expr, const) for r in rows]
        for r in equalities + rows:
            if r.is_trivial_violation():
                return FMResult(infeasible=True, conflict=r, eliminated=eliminated)
        equalities = [r for r in equalities if r.coeffs]
        rows = [r for r in rows if r.coeffs or r.is_trivial_violation()]

    rows = [LinearConstraint.build(r.terms, r.const, r.rel, frozenset({k})) for k, r in enumerate(rows)]
    rows = _dedupe(rows)
    stages: List[Tuple[str, List[LinearConstraint]]] = []
    fm_steps = 0

    while rows:
        var = _pick_variable(rows)
        involved = [r for r in rows if r.coefficient(var) != 0]
        untouched = [r for r in rows if r.coefficient(var) == 0]
        positive = [r for r in involved if r.coefficient(var) > 0]
        negative = [r for r in involved if r.coefficient(var) < 0]
        stages.append((var, involved))
        eliminated.append(var)
        fm_steps += 1

        derived = []
        for p in positive:
            for q in negative:
                combined = _combine(p, q, var)
                if combined.is_trivial_violation():
                    logger.debug(f"FM conflict after eliminating {eliminated}: {combined}")
                    return FMResult(infeasible=True, conflict=combined, eliminated=eliminated)
                if not combined.coeffs:
                    continue
                # Imbert: more than fm_steps + 1 ancestors means redundant
                if len(combined.history) > fm_steps + 1:
                    continue
                derived.append(combined)
        rows = _dedupe(untouched + derived)

    # Back-substitution
    assignment: Dict[str, Fraction] = {}
    for var, involved in reversed(stages):
        assignment[var] = _bounds(involved, var, assignment)
    for var, expr, const in reversed(substitutions):
        assignment[var] = const + sum(value * assignment.setdefault(name, Fraction(0))
                                      for name, value in expr.items())
    for row in original:
        for name in row.variables:
            assignment.setdefault(name, Fraction(0))

    failed = [row for row in original if not row.holds(assignment)]
    if failed:
        raise RuntimeError(f"Back-substitution produced a non-solution for {failed[0]}")
    return FMResult(infeasible=False, witness=assignment, eliminated=eliminated)
