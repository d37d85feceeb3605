"""
Combinatorial model of Y: the named curve catalog, branch membership and incidence.

General position is encoded purely by the incidence table; there are no coordinates.
Distinct rigid curves that meet do so transversally at a single point, and no point
lies on three of them unless the catalog lists it under "concurrent".
"""

import itertools
import json
import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from src.config.settings import settings
from src.geometry.picard import (
    DivClass,
    L,
    E,
    anticanonical_class,
    canonical_class,
    line_through,
    pencil_line,
)
from src.utils.error_handler import CatalogError, ErrorCode, GeometryError

logger = logging.getLogger(__name__)

BRANCH_INDICES = (1, 2, 3)

# Classes as printed for the building data
DISPLAYED_BRANCH_CLASSES = {
    1: DivClass.of(3, 1, -3, -1, -1),
    2: DivClass.of(3, -1, 1, -3, -1),
    3: DivClass.of(3, -3, -1, 1, -1),
}
DISPLAYED_L_CLASSES = {
    1: DivClass.of(3, -2, 0, -1, -1),
    2: DivClass.of(3, -1, -2, 0, -1),
    3: DivClass.of(3, 0, -1, -2, -1),
}


@dataclass(frozen=True)
class CurveY:
    """A named curve on Y"""

    name: str
    cls: DivClass
    branch: Optional[int]  # 1, 2, 3 or None
    mobile: bool

    @property
    def branch_label(self) -> str:
        return f"B{self.branch}" if self.branch else "none"


@dataclass
class CheckResult:
    """Outcome of one building-data check"""

    name: str
    expected: str
    computed: str
    passed: bool


def expected_class(name: str) -> DivClass:
    """Class dictated by a curve's name"""
    if name == "l":
        return L
    kind, digits = name[0], name[1:]
    if kind == "e" and len(digits) == 1:
        return E[int(digits)]
    if kind == "h" and len(digits) == 2:
        return line_through(int(digits[0]), int(digits[1]))
    if kind == "t" and len(digits) in (1, 2):
        return pencil_line(int(digits[0]))
    raise GeometryError(ErrorCode.GEO_UNKNOWN_CURVE, f"unknown curve: {name}")


def _rigid_meets(a: str, b: str) -> bool:
    """Incidence rule for distinct rigid catalog curves"""
    ka, kb = a[0], b[0]
    if ka > kb:
        a, b, ka, kb = b, a, kb, ka
    ia = {int(ch) for ch in a[1:]}
    ib = {int(ch) for ch in b[1:]}
    if ka == "e" and kb == "e":
        return False
    if ka == "e" and kb == "h":
        return ia <= ib
    if ka == "e" and kb == "t":
        return ia == ib
    if ka == "h" and kb == "h":
        return not (ia & ib)
    if ka == "h" and kb == "t":
        return not (ia & ib)
    if ka == "t" and kb == "t":
        return ia != ib
    return False


class Catalog:
    """Loaded curve catalog with incidence queries"""

    def __init__(self, curves: List[CurveY], concurrent: List[FrozenSet[str]], source: str):
        self.curves = curves
        self.by_name: Dict[str, CurveY] = {c.name: c for c in curves}
        self.concurrent = concurrent
        self.source = source

    def lookup(self, name: str) -> CurveY:
        try:
            return self.by_name[name]
        except KeyError:
            raise GeometryError(ErrorCode.GEO_UNKNOWN_CURVE, f"unknown curve: {name}") from None

    def rigid_names(self) -> List[str]:
        return [c.name for c in self.curves if not c.mobile]

    def branch_curves(self, index: int) -> List[CurveY]:
        return [c for c in self.curves if c.branch == index]

    def branch_class(self, index: int) -> DivClass:
        total = DivClass.zero()
        for curve in self.branch_curves(index):
            total = total + curve.cls
        return total

    def meets(self, a: str, b: str) -> bool:
        first, second = self.lookup(a), self.lookup(b)
        if first.mobile or second.mobile:
            raise GeometryError(ErrorCode.GEO_MOBILE_INCIDENCE)
        if a == b:
            return False
        return _rigid_meets(a, b)

    def points(self, names: Iterable[str]) -> List[Tuple[str, str]]:
        """
        Configuration points carried by a set of rigid curves.

        Returns:
            Sorted list of meeting pairs, one per transversal point

        Raises:
            GeometryError: if a listed concurrent point carries three of the curves
        """
        support = sorted(set(names))
        for name in support:
            if self.lookup(name).mobile:
                raise GeometryError(ErrorCode.GEO_MOBILE_SUPPORT)
        chosen = set(support)
        for group in self.concurrent:
            if len(group & chosen) > 2:
                raise GeometryError(
                    ErrorCode.GEO_TRIPLE_POINT,
                    f"point on {', '.join(sorted(group & chosen))} carries more than two support curves",
                )
        return [(a, b) for a, b in itertools.combinations(support, 2) if self.meets(a, b)]


_catalogs: Dict[str, Catalog] = {}
_catalog_lock = threading.Lock()


def _parse_catalog(path: str) -> Catalog:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise CatalogError(ErrorCode.CATALOG_UNREADABLE, f"cannot read catalog {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CatalogError(ErrorCode.CATALOG_MALFORMED, f"invalid JSON in {path}: {exc}") from exc

    curves = []
    try:
        for entry in data["curves"]:
            cls = DivClass(tuple(Fraction(v) for v in entry["class"]))
            branch = entry.get("branch")
            if branch is not None and branch not in BRANCH_INDICES:
                raise ValueError(f"bad branch flag {branch!r} for {entry['name']}")
            curves.append(CurveY(entry["name"], cls, branch, bool(entry["mobile"])))
        concurrent = [frozenset(group) for group in data.get("concurrent", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise CatalogError(ErrorCode.CATALOG_MALFORMED, f"malformed catalog {path}: {exc}") from exc

    logger.debug(f"Loaded {len(curves)} curves from {path}")
    return Catalog(curves, concurrent, path)


def load_catalog(path: Optional[str] = None) -> Catalog:
    """Catalog from a JSON file (defaults to settings.CATALOG_FILE), cached per path"""
    path = path or settings.CATALOG_FILE
    cached = _catalogs.get(path)
    if cached is None:
        with _catalog_lock:
            cached = _catalogs.get(path)
            if cached is None:
                cached = _parse_catalog(path)
                _catalogs[path] = cached
    return cached


def catalog(path: Optional[str] = None) -> List[CurveY]:
    """All named curves with classes, branch flags and mobility flags"""
    return list(load_catalog(path).curves)


def lookup(name: str, path: Optional[str] = None) -> CurveY:
    return load_catalog(path).lookup(name)


def meets(a: str, b: str, path: Optional[str] = None) -> bool:
    """Whether two distinct rigid curves meet"""
    return load_catalog(path).meets(a, b)


def points(names: Iterable[str], path: Optional[str] = None) -> List[Tuple[str, str]]:
    return load_catalog(path).points(names)


def validate_building_data(path: Optional[str] = None) -> List[CheckResult]:
    """
    Check the branch data by exact class arithmetic.

    (i) each B_i sums to its displayed class, (ii) 2L_i = B_j + B_k,
    (iii) 2K_Y + B = -K_Y, (iv) every catalog class matches its name.
    """
    cat = load_catalog(path)
    results: List[CheckResult] = []

    branch = {i: cat.branch_class(i) for i in BRANCH_INDICES}
    for i in BRANCH_INDICES:
        expected = DISPLAYED_BRANCH_CLASSES[i]
        results.append(CheckResult(f"B{i} class", str(expected), str(branch[i]), branch[i] == expected))

    for i in BRANCH_INDICES:
        j, k = [x for x in BRANCH_INDICES if x != i]
        doubled = 2 * DISPLAYED_L_CLASSES[i]
        total = branch[j] + branch[k]
        results.append(CheckResult(f"2L{i} = B{j} + B{k}", str(doubled), str(total), doubled == total))

    total_branch = branch[1] + branch[2] + branch[3]
    lhs = 2 * canonical_class() + total_branch
    results.append(CheckResult("2K_Y + B = -K_Y", str(anticanonical_class()), str(lhs), lhs == anticanonical_class()))

    mismatched = []
    for curve in cat.curves:
        try:
            if expected_class(curve.name) != curve.cls:
                mismatched.append(curve.name)
        except GeometryError:
            mismatched.append(curve.name)
    results.append(CheckResult(
        "catalog classes match names",
        "all match",
        "all match" if not mismatched else "mismatch: " + ", ".join(mismatched),
        not mismatched,
    ))

    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.warning(f"Building data checks failed: {failed}")
    return results
