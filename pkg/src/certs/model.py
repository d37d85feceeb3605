"""Parsed certificate objects"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import sympy as sp

from src.geometry.picard import DivClass

N = sp.Symbol("n")


@dataclass(frozen=True)
class TheoremSpec:
    """Threshold, n-domain and eigen-system fixed by a theorem tag"""

    tag: str
    prefix: str
    threshold: sp.Expr
    domain_lo: Optional[int]
    system: Tuple  # ("class", "2K") or ("system", parity, index)

    @property
    def multiple(self) -> sp.Expr:
        """D is numerically phi^*(multiple * (-K_Y))"""
        if self.system[0] == "class":
            return sp.Integer(1)
        return N if self.system[1] == "even" else N + sp.Rational(1, 2)

    @property
    def glct_multiple(self) -> sp.Expr:
        """Multiple of -K_Y fed to the del Pezzo glct bound off the branch locus"""
        if self.system[0] == "class":
            return sp.Integer(1)
        parity, index = self.system[1], self.system[2]
        if index == 0:
            return N if parity == "even" else N - 1
        return self.multiple


THEOREMS: Dict[str, TheoremSpec] = {
    spec.tag: spec
    for spec in (
        TheoremSpec("Thm1", "thm1", sp.Integer(4), None, ("class", "2K")),
        TheoremSpec("Thm2-inv", "thm2-inv", 4 * N, 2, ("system", "even", 0)),
        TheoremSpec("Thm2-anti", "thm2-anti", 4 * N - 3, 2, ("system", "even", 1)),
        TheoremSpec("Thm3-inv", "thm3-inv", 4 * N - 3, 1, ("system", "odd", 0)),
        TheoremSpec("Thm3-anti", "thm3-anti", 4 * N, 1, ("system", "odd", 1)),
    )
}


def theorem_for_id(cert_id: str) -> Optional[TheoremSpec]:
    """Tag from the id prefix; longest prefix wins"""
    matches = [s for s in THEOREMS.values() if cert_id.startswith(s.prefix + "-")]
    return max(matches, key=lambda s: len(s.prefix)) if matches else None


@dataclass
class Position:
    line: int
    col: int


@dataclass
class DivExpr:
    """target * D + sum(curves) + pull-back of a downstairs class"""

    target: Fraction = Fraction(0)
    curves: Dict[str, Fraction] = field(default_factory=dict)
    pulled: DivClass = field(default_factory=DivClass.zero)
    text: str = ""

    def is_target(self) -> bool:
        return self.target == 1 and not self.curves and self.pulled.is_zero

    def single_curve(self) -> Optional[str]:
        if self.target == 0 and self.pulled.is_zero and len(self.curves) == 1:
            name, value = next(iter(self.curves.items()))
            if value == 1:
                return name
        return None


@dataclass
class Term:
    var: str
    curve: str
    lower: Fraction
    pos: Position


@dataclass
class Decomposition:
    target: str  # "D" upstairs, "d" downstairs
    system: Optional[Tuple]
    terms: List[Term]
    residual: str
    exclude: List[str]
    pos: Position

    def term_for(self, curve_name: str) -> Optional[Term]:
        return next((t for t in self.terms if t.curve == curve_name), None)


@dataclass
class Locus:
    inside: List[str] = field(default_factory=list)
    outside: List[str] = field(default_factory=list)
    off_branch: bool = False


@dataclass
class Step:
    step_id: str
    pos: Position

    kind = "step"


@dataclass
class IxnStep(Step):
    left: DivExpr = None
    right: DivExpr = None
    value: sp.Expr = None
    kind = "ixn"


@dataclass
class AdjunctionStep(Step):
    curve: str = ""
    residue: List[str] = field(default_factory=list)
    mult_form: bool = False
    kind = "adjunction"


@dataclass
class MultStep(Step):
    kind = "mult"


@dataclass
class ProductStep(Step):
    left: sp.Expr = None
    right: sp.Expr = None
    kind = "product"


@dataclass
class JiangZouStep(Step):
    bprime: List[str] = field(default_factory=list)
    c: List[str] = field(default_factory=list)
    kind = "jiang-zou"


@dataclass
class PushforwardStep(Step):
    decomposition: Decomposition = None
    kind = "pushforward"


@dataclass
class GlctStep(Step):
    kind = "glct"


@dataclass
class SplitCase:
    lo: int
    hi: Optional[int]  # None means unbounded
    steps: List[Step]


@dataclass
class SplitNStep(Step):
    cases: List[SplitCase] = field(default_factory=list)
    kind = "split-n"


@dataclass
class SplitLocusStep(Step):
    curve: str = ""
    inside: List[Step] = field(default_factory=list)
    outside: List[Step] = field(default_factory=list)
    kind = "split-locus"


@dataclass
class LinearStep(Step):
    rel: str = "<="
    lhs: sp.Expr = None
    rhs: sp.Expr = None
    farkas: List[Tuple[Fraction, str]] = field(default_factory=list)
    kind = "linear"


@dataclass
class ContradictionStep(Step):
    kind = "contradiction"


@dataclass
class Certificate:
    cert_id: str
    theorem: TheoremSpec
    domain_lo: Optional[int]
    threshold: sp.Expr
    locus: Locus
    decomposition: Decomposition
    steps: List[Step]
    source: str = ""

    def step_count(self) -> int:
        return len(self.steps)

    def variables(self) -> List[str]:
        return [t.var for t in self.decomposition.terms]
