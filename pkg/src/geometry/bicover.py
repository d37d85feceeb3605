"""
Numerical calculus on the Z/2 x Z/2 cover X -> Y.

Pic(X) is modelled through pulled-back coordinates: a curve upstairs is recorded by
the downstairs class it lies over divided by its ramification, so that
ixn(C, C') = 4 * pair(C.down, C'.down) / (C.ram * C'.ram).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union

from src.geometry import surface
from src.geometry.picard import (
    DivClass,
    anticanonical_class,
    canonical_class,
    h0,
    pair,
)
from src.utils.error_handler import ErrorCode, GeometryError

logger = logging.getLogger(__name__)

COVER_DEGREE = 4

# Upstairs names for the rigid curves of the catalog
UPSTAIRS_NAMES = {
    "e1": "E1", "e2": "E2", "e3": "E3", "e4": "E4",
    "h12": "H12", "h13": "H13", "h14": "H14", "h23": "H23", "h24": "H24", "h34": "H34",
    "t11": "T11", "t22": "T22", "t33": "T33",
}
DOWNSTAIRS_NAMES = {up: down for down, up in UPSTAIRS_NAMES.items()}


@dataclass(frozen=True)
class CurveX:
    """A curve on X: a reduced preimage of a catalog curve, or the pull-back of a class"""

    name: str
    down: DivClass
    ram: int = 1

    @property
    def vector(self) -> DivClass:
        return self.down / self.ram


def curve(name: str, path: Optional[str] = None) -> CurveX:
    """Upstairs curve by name (E1..E4, H12..H34, T11..T33); E4 is the full pull-back of e4"""
    down_name = DOWNSTAIRS_NAMES.get(name)
    if down_name is None:
        raise GeometryError(ErrorCode.GEO_UNKNOWN_CURVE, f"unknown curve: {name}")
    down = surface.lookup(down_name, path)
    return CurveX(name, down.cls, 2 if down.branch else 1)


def pull(cls: DivClass, name: Optional[str] = None) -> CurveX:
    """phi^* of a downstairs class"""
    return CurveX(name or f"pull({cls})", cls, 1)


@dataclass(frozen=True)
class Residual:
    """Symbolic effective remainder of a decomposition"""

    name: str = "Omega"
    exclude: FrozenSet[str] = frozenset()
    lower: Tuple[Tuple[str, Fraction], ...] = ()


@dataclass
class QDivisorX:
    """Formal rational combination of curves on X"""

    coeffs: Dict[CurveX, Fraction] = field(default_factory=dict)
    residual: Optional[Residual] = None

    @classmethod
    def of(cls, terms: Mapping[CurveX, object]) -> "QDivisorX":
        return cls({c: Fraction(v) for c, v in terms.items() if Fraction(v) != 0})

    @classmethod
    def from_names(cls, terms: Mapping[str, object], path: Optional[str] = None) -> "QDivisorX":
        return cls.of({curve(name, path): value for name, value in terms.items()})

    def __add__(self, other: "QDivisorX") -> "QDivisorX":
        merged = dict(self.coeffs)
        for c, v in other.coeffs.items():
            merged[c] = merged.get(c, Fraction(0)) + v
        return QDivisorX({c: v for c, v in merged.items() if v != 0}, self.residual or other.residual)

    def __mul__(self, scalar) -> "QDivisorX":
        scalar = Fraction(scalar)
        return QDivisorX({c: scalar * v for c, v in self.coeffs.items()}, self.residual)

    __rmul__ = __mul__

    def coefficient(self, name: str) -> Fraction:
        return sum((v for c, v in self.coeffs.items() if c.name == name), Fraction(0))

    def vector(self) -> DivClass:
        total = DivClass.zero()
        for c, v in self.coeffs.items():
            total = total + v * c.vector
        return total

    def names(self) -> Dict[str, Fraction]:
        out: Dict[str, Fraction] = {}
        for c, v in self.coeffs.items():
            out[c.name] = out.get(c.name, Fraction(0)) + v
        return out

    def __str__(self) -> str:
        parts = [f"{v}*{c.name}" if v != 1 else c.name for c, v in sorted(self.coeffs.items(), key=lambda kv: kv[0].name)]
        if self.residual:
            parts.append(self.residual.name)
        return " + ".join(parts) or "0"


Divisorish = Union[CurveX, QDivisorX]


def _as_divisor(value: Divisorish) -> QDivisorX:
    if isinstance(value, CurveX):
        return QDivisorX({value: Fraction(1)})
    if value.residual is not None:
        raise GeometryError(ErrorCode.GEO_RESIDUAL)
    return value


def ixn(a: Divisorish, b: Divisorish) -> Fraction:
    """Intersection number on X"""
    return COVER_DEGREE * pair(_as_divisor(a).vector(), _as_divisor(b).vector())


def canonical_divisor() -> QDivisorX:
    """K_X = pull(-K_Y)/2"""
    return QDivisorX({pull(anticanonical_class(), "pull(-K_Y)"): Fraction(1, 2)})


@dataclass
class Invariants:
    K2: Fraction
    pg: int
    chi: Fraction
    q: Fraction


def invariants(path: Optional[str] = None) -> Invariants:
    """K^2, p_g, chi(O_X) and q of the cover"""
    K = canonical_class()
    k_x = canonical_divisor()
    K2 = ixn(k_x, k_x)
    L_classes = [surface.DISPLAYED_L_CLASSES[i] for i in surface.BRANCH_INDICES]
    pg = h0(K) + sum(h0(Li + K) for Li in L_classes)
    chi = COVER_DEGREE * 1 + sum(pair(Li, Li + K) / 2 for Li in L_classes)
    q = 1 + pg - chi
    logger.debug(f"Invariants: K2={K2} pg={pg} chi={chi} q={q}")
    return Invariants(K2, pg, chi, q)


def ramification_divisor(index: int, path: Optional[str] = None) -> List[CurveX]:
    """R_i: reduced preimages of the components of B_i"""
    return [curve(UPSTAIRS_NAMES[c.name], path) for c in surface.load_catalog(path).branch_curves(index)]


def fixed_curves(parity: str, index: int, path: Optional[str] = None) -> List[CurveX]:
    """Fixed part of the eigen-subsystem of |mK_X| with the given parity and index"""
    if parity == "even":
        if index == 0:
            return []
        others = [j for j in surface.BRANCH_INDICES if j != index]
        return ramification_divisor(others[0], path) + ramification_divisor(others[1], path)
    if parity == "odd":
        if index == 0:
            return [c for j in surface.BRANCH_INDICES for c in ramification_divisor(j, path)]
        return ramification_divisor(index, path)
    raise ValueError(f"Unknown parity: {parity}")


def mobile_class(m: int, index: int) -> DivClass:
    """Downstairs class whose pull-back is the mobile part of |mK_X|_index"""
    F = anticanonical_class()
    if m % 2 == 0:
        n = m // 2
        base = n * F  # n(2K_Y + B)
        return base if index == 0 else base - surface.DISPLAYED_L_CLASSES[index]
    n = (m - 1) // 2
    base = (n - 1) * F  # (2n+1)K_Y + nB
    return base if index == 0 else base + surface.DISPLAYED_L_CLASSES[index]


@dataclass
class EigenSystem:
    """One of the four eigen-subsystems of |mK_X|"""

    m: int
    index: int
    fixed: QDivisorX
    mobile_class: DivClass
    dim: int


def eigen_system(m: int, index: int, path: Optional[str] = None) -> EigenSystem:
    if m < 1:
        raise GeometryError(ErrorCode.GEO_PARAMETER, f"m must be positive, got {m}")
    if index not in (0, 1, 2, 3):
        raise GeometryError(ErrorCode.GEO_PARAMETER, f"eigen index must be 0..3, got {index}")
    parity = "even" if m % 2 == 0 else "odd"
    fixed = QDivisorX.of({c: 1 for c in fixed_curves(parity, index, path)})
    mobile = mobile_class(m, index)
    return EigenSystem(m, index, fixed, mobile, h0(mobile))


def plurigenus(m: int, path: Optional[str] = None) -> int:
    """P_m as the sum of the four eigen-subsystem dimensions"""
    if m < 2:
        raise GeometryError(ErrorCode.GEO_PARAMETER, f"plurigenus needs m >= 2, got {m}")
    return sum(eigen_system(m, i, path).dim for i in range(4))


def class_of_member(D: QDivisorX) -> DivClass:
    """Pulled-back coordinate class of a residual-free divisor"""
    return _as_divisor(D).vector()


def is_member(D: QDivisorX, m: int, index: int, path: Optional[str] = None) -> bool:
    """Whether D has the class of mK_X and contains the fixed part of |mK_X|_index"""
    if any(v < 0 for v in D.coeffs.values()):
        return False
    if class_of_member(D) != Fraction(m, 2) * anticanonical_class():
        return False
    system = eigen_system(m, index, path)
    return all(D.coefficient(c.name) >= v for c, v in system.fixed.coeffs.items())
