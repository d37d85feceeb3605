"""
Log canonical thresholds of divisors supported on the rigid catalog.

Only local models with at most two smooth transversal branches are handled; anything
else raises rather than approximating.
"""

import asyncio
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy as sp

from src.geometry import surface
from src.geometry.bicover import (
    DOWNSTAIRS_NAMES,
    UPSTAIRS_NAMES,
    QDivisorX,
    curve,
    fixed_curves,
)
from src.geometry.picard import DivClass, anticanonical_class, is_effective, pair
from src.utils.error_handler import ErrorCode, GeometryError, SearchError

logger = logging.getLogger(__name__)

INFINITY = sp.oo

# Coefficient order used for the lexicographic tie-break of the upper-bound search
SEARCH_ORDER = ("h12", "h13", "h14", "h23", "h24", "h34", "t11", "t22", "t33", "e1", "e2", "e3", "e4")

# How lct_divisor picks the reported point among equal local values
POINT_TIE_RULE = "lexicographically least minimizer, crossings before smooth points"


@dataclass(frozen=True)
class LocalModel:
    """One smooth branch, or two transversal ones, with their coefficients"""

    coefficients: Tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(Fraction(c) for c in self.coefficients)
        if len(values) not in (1, 2):
            raise GeometryError(ErrorCode.GEO_PARAMETER, "a local model has one or two branches")
        if any(c < 0 for c in values):
            raise GeometryError(ErrorCode.GEO_NEGATIVE_COEFFICIENT)
        object.__setattr__(self, "coefficients", values)


def lct_local(model: LocalModel) -> Union[Fraction, "sp.Expr"]:
    """lct of a1*L1 (+ a2*L2) at the origin: 1/max(a_i), infinite when all vanish"""
    top = max(model.coefficients)
    if top == 0:
        return INFINITY
    return 1 / top


@dataclass
class LctResult:
    value: Fraction
    point: Tuple[str, ...]
    minimizers: List[Tuple[str, ...]] = field(default_factory=list)


def lct_divisor(D: QDivisorX, path: Optional[str] = None) -> LctResult:
    """
    Minimum of the local lct over all configuration points of supp(D).

    Crossings of two support curves use both total coefficients; every support curve
    also contributes its general smooth point. The reported point is the
    lexicographically least minimizer, crossings first.
    """
    if D.residual is not None:
        raise GeometryError(ErrorCode.GEO_RESIDUAL)
    totals = {name: v for name, v in D.names().items() if v != 0}
    if not totals:
        raise GeometryError(ErrorCode.GEO_PARAMETER, "lct of the zero divisor is infinite")
    if any(v < 0 for v in totals.values()):
        raise GeometryError(ErrorCode.GEO_NEGATIVE_COEFFICIENT)
    for name in totals:
        if name not in DOWNSTAIRS_NAMES:
            raise GeometryError(ErrorCode.GEO_MOBILE_SUPPORT)

    down = {DOWNSTAIRS_NAMES[name]: name for name in totals}
    crossings = surface.points(down.keys(), path)

    candidates: List[Tuple[Fraction, int, Tuple[str, ...]]] = []
    for a, b in crossings:
        pt = tuple(sorted((down[a], down[b])))
        value = lct_local(LocalModel((totals[pt[0]], totals[pt[1]])))
        candidates.append((value, 0, pt))
    for name, coefficient in totals.items():
        candidates.append((lct_local(LocalModel((coefficient,))), 1, (name,)))

    best = min(value for value, _, _ in candidates)
    minimizers = sorted((kind, pt) for value, kind, pt in candidates if value == best)
    return LctResult(best, minimizers[0][1], [pt for _, pt in minimizers])


# Named witnesses, coefficients polynomial in n
_n = sp.Symbol("n")
WITNESSES: Dict[str, Dict[str, object]] = {
    "D1-even": {
        "system": ("even", 1),
        "domain": 2,
        "extra": {"H12": 4 * _n - 4, "H34": 2 * _n - 2, "E1": 2 * _n, "E2": 2 * _n - 4},
        "closed_form": 1 / (4 * _n - 3),
    },
    "D0-odd": {
        "system": ("odd", 0),
        "domain": 1,
        "extra": {"H13": 4 * _n - 4, "E3": 2 * _n - 2, "E1": 2 * _n - 2, "H24": 2 * _n - 2},
        "closed_form": 1 / (4 * _n - 3),
    },
    "D1-odd": {
        "system": ("odd", 1),
        "domain": 1,
        "extra": {"H12": 4 * _n, "H34": 2 * _n, "E1": 2 * _n - 2, "E2": 2 * _n + 2},
        "closed_form": 1 / (4 * _n),
    },
}


def _to_fraction(value) -> Fraction:
    rational = sp.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def witness_divisor(name: str, n: int, path: Optional[str] = None) -> Tuple[QDivisorX, int, int]:
    """
    Instantiate a named witness.

    Returns:
        (divisor, m, index) with D in |mK_X|_index
    """
    entry = WITNESSES.get(name)
    if entry is None:
        raise GeometryError(ErrorCode.GEO_PARAMETER, f"unknown witness: @{name}")
    if n < entry["domain"]:
        raise GeometryError(ErrorCode.GEO_PARAMETER, f"@{name} needs n >= {entry['domain']}, got {n}")
    parity, index = entry["system"]
    coeffs: Dict[str, Fraction] = {c.name: Fraction(1) for c in fixed_curves(parity, index, path)}
    for curve_name, expr in entry["extra"].items():
        coeffs[curve_name] = coeffs.get(curve_name, Fraction(0)) + _to_fraction(expr.subs(_n, n))
    divisor = QDivisorX.from_names(coeffs, path)
    m = 2 * n if parity == "even" else 2 * n + 1
    return divisor, m, index


def witness_closed_form(name: str, n: int) -> Fraction:
    return _to_fraction(WITNESSES[name]["closed_form"].subs(_n, n))


@dataclass
class SearchResult:
    bound: Fraction
    witness: Dict[str, int]
    pullback: QDivisorX
    point: Tuple[str, ...]
    decompositions: int


def pullback_of(decomposition: Dict[str, int], path: Optional[str] = None) -> QDivisorX:
    """phi^* of a combination of rigid curves: branch coefficients double"""
    coeffs = {}
    for name, k in decomposition.items():
        if k == 0:
            continue
        up = curve(UPSTAIRS_NAMES[name], path)
        coeffs[up] = Fraction(k * up.ram)
    return QDivisorX.of(coeffs)


def _decompositions(target: DivClass, classes: Sequence[DivClass], max_coeff: int,
                    start: int, prefix: List[int]):
    """Non-negative integer combinations of classes[start:] equal to target"""
    anti = anticanonical_class()
    if start == len(classes):
        if target.is_zero:
            yield list(prefix)
        return
    degree = pair(target, anti)
    if degree < 0:
        return
    step = pair(classes[start], anti)
    limit = max_coeff if step <= 0 else min(max_coeff, int(degree // step))
    for k in range(limit + 1):
        prefix.append(k)
        yield from _decompositions(target - k * classes[start], classes, max_coeff, start + 1, prefix)
        prefix.pop()


def _search_branch(target: DivClass, first: int, max_coeff: int, path: Optional[str]):
    """Best (lct, vector) among decompositions with a fixed first coefficient"""
    cat = surface.load_catalog(path)
    classes = [cat.lookup(name).cls for name in SEARCH_ORDER]
    best = None
    count = 0
    remaining = target - first * classes[0]
    for tail in _decompositions(remaining, classes, max_coeff, 1, [first]):
        count += 1
        vector = tuple(tail)
        result = lct_divisor(pullback_of(dict(zip(SEARCH_ORDER, vector)), path), path)
        key = (result.value, vector)
        if best is None or key < best[0]:
            best = (key, result)
    return best, count


async def _search_parallel(target: DivClass, max_coeff: int, workers: int, path: Optional[str]):
    semaphore = asyncio.Semaphore(workers)

    async def run(first: int):
        async with semaphore:
            return await asyncio.to_thread(_search_branch, target, first, max_coeff, path)

    return await asyncio.gather(*[run(first) for first in range(max_coeff + 1)])


def glct_upper_search(target: DivClass, max_coeff: int, workers: int = 1,
                      path: Optional[str] = None) -> SearchResult:
    """
    Upper bound for the global lct of the class of phi^*(target) over the rigid catalog.

    Enumerates every decomposition of target into rigid curves with integer
    coefficients at most max_coeff, pulls it back and keeps the smallest lct
    (lexicographically least coefficient vector on ties).

    Args:
        target: Effective downstairs class
        max_coeff: Coefficient cap per curve
        workers: Threads used to split the search by the first coefficient
        path: Optional catalog file

    Raises:
        SearchError: target not effective, or nothing decomposes it within the cap
    """
    if max_coeff < 0:
        raise SearchError(ErrorCode.SEARCH_NO_DECOMPOSITION)
    if not is_effective(target):
        raise SearchError(ErrorCode.SEARCH_NOT_EFFECTIVE)

    if workers > 1:
        outcomes = asyncio.run(_search_parallel(target, max_coeff, workers, path))
    else:
        outcomes = [_search_branch(target, first, max_coeff, path) for first in range(max_coeff + 1)]

    best = None
    total = 0
    for outcome, count in outcomes:
        total += count
        if outcome is not None and (best is None or outcome[0] < best[0]):
            best = outcome
    if best is None:
        raise SearchError(ErrorCode.SEARCH_NO_DECOMPOSITION)

    (bound, vector), result = best
    witness = {name: k for name, k in zip(SEARCH_ORDER, vector) if k}
    logger.info(f"Upper-bound search over {total} decompositions: bound {bound} via {witness}")
    return SearchResult(bound, witness, pullback_of(witness, path), result.point, total)
