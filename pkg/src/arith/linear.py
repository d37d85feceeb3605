"""Affine constraints over named rational variables"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Mapping, Tuple

# Relations, read as "expr REL 0"
GE = ">="
GT = ">"
EQ = "=="
RELATIONS = (GE, GT, EQ)


@dataclass(frozen=True)
class LinearConstraint:
    """sum(coeffs[v] * v) + const REL 0"""

    coeffs: Tuple[Tuple[str, Fraction], ...]
    const: Fraction
    rel: str
    history: FrozenSet[int] = field(default=frozenset(), compare=False)

    @classmethod
    def build(cls, coeffs: Mapping[str, object], const=0, rel: str = GE,
              history: FrozenSet[int] = frozenset()) -> "LinearConstraint":
        if rel not in RELATIONS:
            raise ValueError(f"Unknown relation: {rel}")
        cleaned = tuple(sorted(
            (name, Fraction(value)) for name, value in coeffs.items() if Fraction(value) != 0
        ))
        return cls(cleaned, Fraction(const), rel, history)

    @property
    def terms(self) -> Dict[str, Fraction]:
        return dict(self.coeffs)

    @property
    def strict(self) -> bool:
        return self.rel == GT

    @property
    def variables(self) -> FrozenSet[str]:
        return frozenset(name for name, _ in self.coeffs)

    def coefficient(self, name: str) -> Fraction:
        for var, value in self.coeffs:
            if var == name:
                return value
        return Fraction(0)

    def evaluate(self, assignment: Mapping[str, Fraction]) -> Fraction:
        return self.const + sum(c * Fraction(assignment.get(v, 0)) for v, c in self.coeffs)

    def holds(self, assignment: Mapping[str, Fraction]) -> bool:
        value = self.evaluate(assignment)
        if self.rel == GE:
            return value >= 0
        if self.rel == GT:
            return value > 0
        return value == 0

    def is_trivial_violation(self) -> bool:
        """A variable-free constraint that is false"""
        if self.coeffs:
            return False
        if self.rel == GE:
            return self.const < 0
        if self.rel == GT:
            return self.const <= 0
        return self.const != 0

    def __str__(self) -> str:
        parts = [f"{c}*{v}" for v, c in self.coeffs]
        if self.const or not parts:
            parts.append(str(self.const))
        return f"{' + '.join(parts)} {self.rel} 0"
