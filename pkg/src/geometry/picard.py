"""
Exact arithmetic in the Picard lattice of Y, the blow-up of P^2 at four general points.

Classes are stored as raw signed coefficient vectors in the basis (l, e1, e2, e3, e4),
so 3l + e1 - 3e2 - e3 - e4 is simply (3, 1, -3, -1, -1). The intersection form is
diag(1, -1, -1, -1, -1).
"""

import itertools
import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import sympy as sp

from src.arith.simplex import LinearProgram
from src.utils.error_handler import ErrorCode, GeometryError

logger = logging.getLogger(__name__)

RANK = 5
BASIS_NAMES = ("l", "e1", "e2", "e3", "e4")
FORM = (1, -1, -1, -1, -1)


def form(u: Sequence, v: Sequence):
    """Intersection form on raw coefficient sequences (works for sympy entries too)"""
    return sum(s * a * b for s, a, b in zip(FORM, u, v))


@dataclass(frozen=True)
class DivClass:
    """Element of Pic(Y) tensor Q"""

    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != RANK:
            raise ValueError(f"DivClass needs {RANK} coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def of(cls, *values) -> "DivClass":
        return cls(tuple(values))

    @classmethod
    def zero(cls) -> "DivClass":
        return cls((0,) * RANK)

    def __add__(self, other: "DivClass") -> "DivClass":
        return DivClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DivClass") -> "DivClass":
        return DivClass(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "DivClass":
        return DivClass(tuple(-a for a in self.coeffs))

    def __mul__(self, scalar) -> "DivClass":
        scalar = Fraction(scalar)
        return DivClass(tuple(scalar * a for a in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "DivClass":
        return self * (1 / Fraction(scalar))

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, index: int) -> Fraction:
        return self.coeffs[index]

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __str__(self) -> str:
        parts = []
        for name, c in zip(BASIS_NAMES, self.coeffs):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = name if mag == 1 else f"{mag}{name}"
            parts.append((sign, body))
        if not parts:
            return "0"
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def basis_vector(index: int) -> DivClass:
    values = [0] * RANK
    values[index] = 1
    return DivClass(tuple(values))


L = basis_vector(0)
E = {i: basis_vector(i) for i in range(1, 5)}


def line_through(i: int, j: int) -> DivClass:
    """h_ij: strict transform of the line through P_i and P_j"""
    return L - E[i] - E[j]


def pencil_line(i: int) -> DivClass:
    """t_i: a line through P_i"""
    return L - E[i]


def pair(a: DivClass, b: DivClass) -> Fraction:
    """Intersection number of two classes"""
    return Fraction(form(a.coeffs, b.coeffs))


def canonical_class() -> DivClass:
    """K_Y = -3l + e1 + e2 + e3 + e4"""
    return DivClass.of(-3, 1, 1, 1, 1)


def anticanonical_class() -> DivClass:
    return -canonical_class()


# Reduction order: e1..e4 then h12, h13, h14, h23, h24, h34
NEGATIVE_CURVE_NAMES = ("e1", "e2", "e3", "e4", "h12", "h13", "h14", "h23", "h24", "h34")


def negative_curves() -> List[DivClass]:
    """The ten (-1)-curves, in reduction order"""
    curves = [E[i] for i in range(1, 5)]
    curves.extend(line_through(i, j) for i, j in itertools.combinations(range(1, 5), 2))
    return curves


def is_nef(c: DivClass) -> bool:
    """Nef on Y means non-negative against every (-1)-curve"""
    return all(pair(c, curve) >= 0 for curve in negative_curves())


# Nef ray cache (double-checked locking)
_nef_rays: Optional[List[DivClass]] = None
_nef_lock = threading.Lock()


def _primitive(vector: Iterable) -> DivClass:
    values = [Fraction(int(sp.Rational(v).p), int(sp.Rational(v).q)) for v in vector]
    scale = math.lcm(*[v.denominator for v in values])
    integers = [int(v * scale) for v in values]
    divisor = math.gcd(*integers) or 1
    return DivClass(tuple(Fraction(v // divisor) for v in integers))


def to_sympy(c: DivClass) -> sp.Matrix:
    return sp.Matrix([sp.Rational(v.numerator, v.denominator) for v in c.coeffs])


def _compute_nef_rays() -> List[DivClass]:
    """Extreme rays of the dual cone of the (-1)-curves by exact double description"""
    gram = sp.diag(*FORM)
    rows = [(gram * to_sympy(curve)).T for curve in negative_curves()]
    rays = []
    for subset in itertools.combinations(rows, RANK - 1):
        matrix = sp.Matrix.vstack(*subset)
        if matrix.rank() != RANK - 1:
            continue
        kernel = matrix.nullspace()[0]
        for candidate in (kernel, -kernel):
            values = [(row * candidate)[0, 0] for row in rows]
            if all(v >= 0 for v in values):
                ray = _primitive(candidate)
                if ray not in rays:
                    rays.append(ray)
    rays.sort(key=lambda r: tuple(-c for c in r.coeffs))
    logger.debug(f"Computed {len(rays)} nef extremal rays")
    return rays


def nef_rays() -> List[DivClass]:
    """Extreme rays of the nef cone, computed once and cached"""
    global _nef_rays
    if _nef_rays is None:
        with _nef_lock:
            if _nef_rays is None:
                _nef_rays = _compute_nef_rays()
    return list(_nef_rays)


def _in_negative_curve_cone(c: DivClass) -> bool:
    curves = negative_curves()
    program = LinearProgram(num_vars=len(curves))
    for k in range(RANK):
        program.add_equality([curve[k] for curve in curves], c[k])
    return program.is_feasible()


def _reduce(c: DivClass) -> Optional[DivClass]:
    """
    Strip (-1)-curves that c meets negatively.

    Returns:
        The terminal class, or None once c is seen to be non-effective
    """
    anti = anticanonical_class()
    curves = negative_curves()
    current = c
    while True:
        if pair(current, anti) < 0:
            return None
        if current.is_zero:
            return current
        negative = next((curve for curve in curves if pair(current, curve) < 0), None)
        if negative is None:
            return current
        current = current - negative


def is_effective(c: DivClass, method: str = "lp") -> bool:
    """
    Effectivity of a class on Y.

    Args:
        c: Class to test
        method: "lp" for cone membership over Q, "reduction" for the (-1)-curve
            reduction (integral classes only)

    Returns:
        True if c lies in the effective cone
    """
    if method == "lp":
        return _in_negative_curve_cone(c)
    if method == "reduction":
        if not c.is_integral:
            raise GeometryError(ErrorCode.GEO_NON_INTEGRAL, "reduction requires an integral class")
        terminal = _reduce(c)
        if terminal is None:
            return False
        return all(pair(terminal, ray) >= 0 for ray in nef_rays())
    raise ValueError(f"Unknown effectivity method: {method}")


def riemann_roch(c: DivClass) -> Fraction:
    """chi(c) = 1 + (c.c - c.K)/2"""
    return 1 + (pair(c, c) - pair(c, canonical_class())) / 2


def h0(c: DivClass) -> int:
    """Dimension of H^0(Y, c) for an integral class"""
    if not c.is_integral:
        raise GeometryError(ErrorCode.GEO_NON_INTEGRAL)
    if not is_effective(c):
        return 0
    terminal = _reduce(c)
    if terminal is None:
        return 0
    value = riemann_roch(terminal)
    return int(value)
