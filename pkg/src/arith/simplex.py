"""
Exact two-phase simplex over Fraction with Bland's rule.

Serves as the feasibility oracle for cone membership on Y and as the independent
cross-check for Fourier-Motzkin elimination.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from src.arith.linear import EQ, GT, LinearConstraint

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class SimplexTableau:
    """Dense tableau; the last column is the right-hand side"""

    def __init__(self, rows: List[List[Fraction]], basis: List[int]):
        self.rows = rows
        self.basis = basis
        self.objective: List[Fraction] = []

    @property
    def width(self) -> int:
        return len(self.rows[0]) - 1 if self.rows else 0

    def pivot(self, r: int, c: int):
        pivot = self.rows[r][c]
        self.rows[r] = [v / pivot for v in self.rows[r]]
        row_r = self.rows[r]
        for i, row in enumerate(self.rows):
            if i != r and row[c] != 0:
                factor = row[c]
                self.rows[i] = [a - factor * b for a, b in zip(row, row_r)]
        if self.objective[c] != 0:
            factor = self.objective[c]
            self.objective = [a - factor * b for a, b in zip(self.objective, row_r)]
        self.basis[r] = c

    def set_objective(self, costs: Sequence[Fraction]):
        """Load 'maximize costs.x' and price out the basic columns"""
        self.objective = [-Fraction(c) for c in costs] + [Fraction(0)]
        for r, col in enumerate(self.basis):
            factor = self.objective[col]
            if factor != 0:
                self.objective = [a - factor * b for a, b in zip(self.objective, self.rows[r])]

    def optimize(self, allowed: Sequence[bool]) -> str:
        """Bland's rule: lowest entering index, ties in the ratio test by lowest basic index"""
        while True:
            entering = next(
                (j for j in range(self.width) if allowed[j] and self.objective[j] < 0), None
            )
            if entering is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                if row[entering] > 0:
                    key = (row[-1] / row[entering], self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], entering)

    @property
    def value(self) -> Fraction:
        return self.objective[-1]

    def solution(self, count: int) -> List[Fraction]:
        values = [Fraction(0)] * count
        for r, col in enumerate(self.basis):
            if col < count:
                values[col] = self.rows[r][-1]
        return values


class LinearProgram:
    """
    maximize c.x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0

    Args:
        num_vars: Number of non-negative variables
    """

    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        self._rows: List[List[Fraction]] = []
        self._rhs: List[Fraction] = []
        self._is_eq: List[bool] = []
        self.status: Optional[str] = None
        self.value: Optional[Fraction] = None
        self.x: Optional[List[Fraction]] = None

    def add_inequality(self, coeffs: Sequence, rhs):
        self._add(coeffs, rhs, False)

    def add_equality(self, coeffs: Sequence, rhs):
        self._add(coeffs, rhs, True)

    def _add(self, coeffs: Sequence, rhs, equality: bool):
        if len(coeffs) != self.num_vars:
            raise ValueError(f"Expected {self.num_vars} coefficients, got {len(coeffs)}")
        self._rows.append([Fraction(c) for c in coeffs])
        self._rhs.append(Fraction(rhs))
        self._is_eq.append(equality)

    def _build(self):
        n = self.num_vars
        slacks = [i for i, eq in enumerate(self._is_eq) if not eq]
        slack_col = {row: n + k for k, row in enumerate(slacks)}
        needs_artificial = []
        for i, eq in enumerate(self._is_eq):
            if eq or self._rhs[i] < 0:
                needs_artificial.append(i)
        art_col = {row: n + len(slacks) + k for k, row in enumerate(needs_artificial)}
        width = n + len(slacks) + len(needs_artificial)

        rows, basis = [], []
        for i, coeffs in enumerate(self._rows):
            row = list(coeffs) + [Fraction(0)] * (width - n) + [self._rhs[i]]
            if i in slack_col:
                row[slack_col[i]] = Fraction(1)
            if self._rhs[i] < 0:
                row = [-v for v in row]
            if i in art_col:
                row[art_col[i]] = Fraction(1)
                basis.append(art_col[i])
            else:
                basis.append(slack_col[i])
            rows.append(row)
        return SimplexTableau(rows, basis), width, set(art_col.values())

    def maximize(self, costs: Optional[Sequence] = None) -> str:
        """Solve; returns OPTIMAL, INFEASIBLE or UNBOUNDED and records value and x"""
        costs = [Fraction(c) for c in (costs or [0] * self.num_vars)]
        tableau, width, artificials = self._build()

        if artificials:
            tableau.set_objective([Fraction(-1) if j in artificials else Fraction(0)
                                   for j in range(width)])
            tableau.optimize([True] * width)
            if tableau.value != 0:
                self.status = INFEASIBLE
                return self.status
            self._drive_out(tableau, artificials)

        allowed = [j not in artificials for j in range(width)]
        tableau.set_objective(list(costs) + [Fraction(0)] * (width - self.num_vars))
        self.status = tableau.optimize(allowed)
        if self.status == OPTIMAL:
            self.value = tableau.value
            self.x = tableau.solution(self.num_vars)
        return self.status

    @staticmethod
    def _drive_out(tableau: SimplexTableau, artificials: set):
        """Pivot zero-level artificials out of the basis; drop redundant rows"""
        r = 0
        while r < len(tableau.rows):
            if tableau.basis[r] in artificials:
                row = tableau.rows[r]
                col = next((j for j in range(tableau.width)
                            if j not in artificials and row[j] != 0), None)
                if col is None:
                    del tableau.rows[r]
                    del tableau.basis[r]
                    continue
                tableau.pivot(r, col)
            r += 1

    def is_feasible(self) -> bool:
        return self.maximize() != INFEASIBLE


def find_point(constraints: Sequence[LinearConstraint]) -> Optional[Dict[str, Fraction]]:
    """
    Exact rational point satisfying every constraint, or None.

    Free variables are split as x = p - q; strict rows get a shared margin t
    (capped at 1) which is maximized.
    """
    names = sorted({v for c in constraints for v in c.variables})
    index = {name: k for k, name in enumerate(names)}
    count = 2 * len(names) + 1
    margin = count - 1
    program = LinearProgram(num_vars=count)
    has_strict = False

    for constraint in constraints:
        if constraint.is_trivial_violation():
            return None
        if not constraint.coeffs:
            continue
        row = [Fraction(0)] * count
        for name, value in constraint.coeffs:
            row[2 * index[name]] = -value
            row[2 * index[name] + 1] = value
        # expr >= 0  <=>  -sum(c x) <= const
        if constraint.rel == EQ:
            program.add_equality([-v for v in row], -constraint.const)
        else:
            if constraint.rel == GT:
                row[margin] = Fraction(1)
                has_strict = True
            program.add_inequality(row, constraint.const)

    cap = [Fraction(0)] * count
    cap[margin] = Fraction(1)
    program.add_inequality(cap, 1)
    costs = [Fraction(0)] * count
    costs[margin] = Fraction(1)

    status = program.maximize(costs)
    if status != "optimal":
        return None
    if has_strict and program.value <= 0:
        return None
    x = program.x
    return {name: x[2 * k] - x[2 * k + 1] for name, k in index.items()}
