"""
Certificate checker.

Replays a certificate step by step. A step's conclusion enters the store only after
its rule validates, and the first rejected step ends the run with an INVALID verdict
naming that step. Upstairs arithmetic is on X (D ~ m * phi^*(-K_Y), intersections
scaled by the cover degree); after a pushforward step it is on Y (d ~ m * (-K_Y)).
"""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import sympy as sp

from src.arith.linear import EQ, GE, GT
from src.certs.model import (
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
    ProductStep,
    PushforwardStep,
    SplitCase,
    SplitLocusStep,
    SplitNStep,
    Step,
)
from src.certs.store import Store, relation_of
from src.geometry import bicover, surface
from src.geometry.picard import DivClass, anticanonical_class, is_nef, pair
from src.utils.error_handler import BurniatError, CheckError, ErrorCode

logger = logging.getLogger(__name__)

MULTIPLICITY_READING = "multiplicity-reading"


@dataclass
class Verdict:
    """Outcome of checking one certificate"""

    cert_id: str
    valid: bool
    step_id: Optional[str] = None
    reason: str = ""
    code: Optional[str] = None
    counterexample: Optional[Dict[str, str]] = None
    flags: List[str] = field(default_factory=list)
    steps_checked: int = 0
    source: str = ""
    seconds: float = 0.0

    @property
    def status(self) -> str:
        return "VALID" if self.valid else "INVALID"

    def to_dict(self) -> Dict:
        data = {"id": self.cert_id, "status": self.status, "steps_checked": self.steps_checked}
        if self.flags:
            data["flags"] = list(self.flags)
        if not self.valid:
            data.update({"step": self.step_id, "code": self.code, "reason": self.reason})
            if self.counterexample:
                data["counterexample"] = dict(self.counterexample)
        return data

    def __str__(self) -> str:
        if self.valid:
            return f"{self.cert_id}: VALID"
        where = f" at {self.step_id}" if self.step_id else ""
        return f"{self.cert_id}: INVALID{where} ({self.reason})"


@dataclass
class Frame:
    """State of one proof branch"""

    store: Store
    locus: Locus
    decomposition: Decomposition
    level: str = "up"
    mult_used: bool = False
    closed: bool = False

    def copy(self) -> "Frame":
        locus = Locus(list(self.locus.inside), list(self.locus.outside), self.locus.off_branch)
        return Frame(self.store.copy(), locus, self.decomposition, self.level, self.mult_used)


def _rational(value: Fraction) -> sp.Rational:
    return sp.Rational(value.numerator, value.denominator)


def _range_text(case: SplitCase) -> str:
    return f"{case.lo}..{'inf' if case.hi is None else case.hi}"


class CertificateChecker:
    """Checks one parsed certificate"""

    def __init__(self, certificate: Certificate, n: Optional[int] = None, catalog_path: Optional[str] = None):
        self.cert = certificate
        self.theorem = certificate.theorem
        self.tau = sp.expand(self.theorem.threshold)
        self.m = self.theorem.multiple
        self.n = n
        self.catalog_path = catalog_path
        self.catalog = surface.load_catalog(catalog_path)
        system = self.theorem.system
        fixed = bicover.fixed_curves(system[1], system[2], catalog_path) if system[0] == "system" else []
        self.fix: Dict[str, Fraction] = {c.name: Fraction(1) for c in fixed}
        self.flags: List[str] = []
        self.steps_checked = 0
        self.handlers: Dict[str, Callable[[Frame, Step], None]] = {
            "ixn": self._ixn,
            "adjunction": self._adjunction,
            "mult": self._mult,
            "product": self._product,
            "jiang-zou": self._jiang_zou,
            "pushforward": self._pushforward,
            "glct": self._glct,
            "split-n": self._split_n,
            "split-locus": self._split_locus,
            "linear": self._linear,
            "contradiction": self._contradiction,
        }

    # Names and incidence

    @staticmethod
    def _down(name: str) -> str:
        return bicover.DOWNSTAIRS_NAMES.get(name, name)

    @staticmethod
    def _up(name: str) -> str:
        return bicover.UPSTAIRS_NAMES.get(name, name)

    def _meets(self, a: str, b: str) -> bool:
        return self.catalog.meets(self._down(a), self._down(b))

    def _concurrent(self, names) -> bool:
        chosen = {self._down(x) for x in names}
        return any(chosen <= group for group in self.catalog.concurrent)

    def misses(self, frame: Frame, name: str) -> bool:
        """Whether the locus rules out that the curve passes through the point"""
        curve = self._up(name)
        inside = frame.locus.inside
        if curve in inside:
            return False
        if curve in frame.locus.outside:
            return True
        if any(not self._meets(curve, other) for other in inside):
            return True
        return len(inside) == 2 and not self._concurrent(inside + [curve])

    # Coefficients

    def fix_of(self, frame: Frame, name: str) -> Fraction:
        return self.fix.get(name, Fraction(0)) if frame.level == "up" else Fraction(0)

    def total(self, frame: Frame, name: str) -> sp.Expr:
        term = frame.decomposition.term_for(name)
        value = _rational(self.fix_of(frame, name))
        return value + sp.Symbol(term.var) if term else value

    def support(self, frame: Frame) -> List[str]:
        names = [t.curve for t in frame.decomposition.terms]
        if frame.level == "up":
            names = sorted(self.fix) + [x for x in names if x not in self.fix]
        return names

    def residual_symbol(self, frame: Frame, name: str) -> sp.Symbol:
        return sp.Symbol(f"{frame.decomposition.residual}.{name}")

    # Intersections

    def _vector(self, name: str, level: str) -> DivClass:
        if level == "up":
            return bicover.curve(name, self.catalog_path).vector
        return self.catalog.lookup(name).cls

    def _rigid(self, expr: DivExpr, level: str) -> DivClass:
        total = expr.pulled
        for name, value in expr.curves.items():
            total = total + self._vector(name, level) * value
        return total

    def ixn(self, a: DivExpr, b: DivExpr, level: str) -> sp.Expr:
        """Intersection number of two divisor expressions, polynomial in n"""
        scale = bicover.COVER_DEGREE if level == "up" else 1
        F = anticanonical_class()
        va, vb = self._rigid(a, level), self._rigid(b, level)
        ta, tb = _rational(a.target), _rational(b.target)
        value = (
            ta * tb * self.m ** 2 * _rational(pair(F, F))
            + ta * self.m * _rational(pair(F, vb))
            + tb * self.m * _rational(pair(va, F))
            + _rational(pair(va, vb))
        )
        return sp.expand(scale * value)

    def curve_ixn(self, a: str, b: str, level: str) -> sp.Rational:
        return self.ixn(DivExpr(curves={a: Fraction(1)}), DivExpr(curves={b: Fraction(1)}), level)

    # Driver

    def _fail(self, code: str, message: str, step: Optional[Step] = None):
        raise CheckError(code, message, step.step_id if step else None)

    def initial_frame(self) -> Frame:
        cert = self.cert
        if sp.expand(cert.threshold - self.theorem.threshold) != 0:
            self._fail(ErrorCode.CHECK_HEADER,
                       f"threshold {cert.threshold} does not match {self.theorem.tag} ({self.theorem.threshold})")
        if cert.domain_lo != self.theorem.domain_lo:
            expected = "none" if self.theorem.domain_lo is None else f"n >= {self.theorem.domain_lo}"
            self._fail(ErrorCode.CHECK_HEADER, f"domain does not match {self.theorem.tag} ({expected})")
        decomposition = cert.decomposition
        if decomposition.system != self.theorem.system:
            self._fail(ErrorCode.CHECK_HEADER, f"decomposition system does not match {self.theorem.tag}")

        locus = cert.locus
        inside = locus.inside
        if len(inside) > 2 or len(set(inside)) != len(inside):
            self._fail(ErrorCode.CHECK_HEADER, "a point lies on at most two distinct curves of the locus")
        if len(inside) == 2 and not self._meets(*inside):
            self._fail(ErrorCode.CHECK_HEADER, f"{inside[0]} and {inside[1]} do not meet")
        if set(inside) & set(locus.outside):
            self._fail(ErrorCode.CHECK_HEADER, "a curve is both in and not-in the locus")

        store = Store()
        if cert.domain_lo is not None:
            store.restrict_n(cert.domain_lo, None)
            if self.n is not None:
                if self.n < cert.domain_lo:
                    self._fail(ErrorCode.CHECK_HEADER, f"n = {self.n} lies outside n >= {cert.domain_lo}")
                store.restrict_n(self.n, self.n)

        frame = Frame(store, Locus(list(inside), list(locus.outside), locus.off_branch), decomposition)
        self._declare_terms(frame, decomposition, upstairs=True)
        return frame

    def _declare_terms(self, frame: Frame, decomposition: Decomposition, upstairs: bool, step: Optional[Step] = None):
        seen = set()
        code = ErrorCode.CHECK_HEADER if upstairs else ErrorCode.CHECK_RULE
        for term in decomposition.terms:
            if term.curve in seen:
                self._fail(code, f"curve {term.curve} has two terms", step)
            seen.add(term.curve)
            if term.curve not in decomposition.exclude:
                self._fail(code, f"residual must exclude term curve {term.curve}", step)
            if upstairs and term.lower != 0:
                self._fail(code, f"lower bound of {term.var} must be 0 beyond the fixed part", step)
            if not upstairs:
                ram = bicover.curve(self._up(term.curve), self.catalog_path).ram
                fixed = self.fix.get(self._up(term.curve), Fraction(0))
                if term.lower < 0 or term.lower * ram > fixed:
                    self._fail(code, f"lower bound {term.lower} on {term.curve} is not implied by the fixed part", step)
            frame.store.add(f"lb.{term.var}", sp.Symbol(term.var) - _rational(term.lower), GE)
        # Omega . X >= 0 is only sound for curves whose coefficient is a term
        for name in decomposition.exclude:
            if name not in seen:
                self._fail(code, f"residual excludes {name}, which has no term", step)

    def check_step(self, frame: Frame, step: Step):
        """Apply one rule to a frame, raising CheckError when it does not hold"""
        handler = self.handlers.get(step.kind)
        if handler is None:
            self._fail(ErrorCode.CHECK_RULE, f"no rule for step kind '{step.kind}'", step)
        handler(frame, step)
        self.steps_checked += 1
        logger.debug(f"{self.cert.cert_id} {step.step_id} ({step.kind}) ok")

    def run_steps(self, frame: Frame, steps: List[Step]):
        for step in steps:
            if frame.closed:
                self._fail(ErrorCode.CHECK_RULE, "step follows a closed branch", step)
            self.check_step(frame, step)
        if not frame.closed:
            last = steps[-1] if steps else None
            self._fail(ErrorCode.CHECK_OPEN_BRANCH, "branch does not end in a contradiction or glct closure", last)

    def check(self) -> Verdict:
        started = time.perf_counter()
        verdict = Verdict(self.cert.cert_id, True, source=self.cert.source)
        try:
            self.run_steps(self.initial_frame(), self.cert.steps)
        except CheckError as exc:
            verdict.valid = False
            verdict.step_id = exc.step_id
            verdict.reason = exc.reason
            verdict.code = exc.code
            verdict.counterexample = exc.counterexample
        except BurniatError as exc:
            verdict.valid = False
            verdict.reason = exc.message
            verdict.code = exc.code
        verdict.flags = sorted(set(self.flags))
        verdict.steps_checked = self.steps_checked
        verdict.seconds = time.perf_counter() - started
        logger.debug(f"Checked {verdict} in {verdict.seconds:.3f}s")
        return verdict

    # Rules

    def _ixn(self, frame: Frame, step: IxnStep):
        computed = self.ixn(step.left, step.right, frame.level)
        if not frame.store.same_polynomial(computed, step.value):
            self._fail(ErrorCode.CHECK_IDENTITY,
                       f"{step.left.text} . {step.right.text} is {computed}, not {step.value}", step)
        for target, other in ((step.left, step.right), (step.right, step.left)):
            if target.is_target() and other.target == 0:
                self._residual_relation(frame, step, other, step.value)
                return

    def _residual_relation(self, frame: Frame, step: IxnStep, other: DivExpr, value: sp.Expr):
        """Omega . X from D . X = Fix . X + sum a_v C_v . X + Omega . X"""
        level = frame.level
        w = value
        for name in self.support(frame):
            part = self.ixn(DivExpr(curves={name: Fraction(1)}), other, level)
            if part != 0:
                w = w - self.total(frame, name) * part
        exclude = frame.decomposition.exclude
        single = other.single_curve()
        if single is not None:
            symbol = self.residual_symbol(frame, single)
            frame.store.define(symbol, w)
            if single in exclude:
                frame.store.add(step.step_id, symbol, GE)
            return
        admissible = all(v >= 0 and name in exclude for name, v in other.curves.items()) and is_nef(other.pulled)
        if admissible:
            frame.store.add(step.step_id, w, GE)

    def _term_in_locus(self, frame: Frame, step: Step, name: str):
        decomposition = frame.decomposition
        if self._up(name) not in frame.locus.inside:
            self._fail(ErrorCode.CHECK_RULE, f"{name} is not a curve through the point", step)
        term = decomposition.term_for(name)
        if term is None:
            self._fail(ErrorCode.CHECK_RULE, f"{name} has no term in the decomposition", step)
        if name not in decomposition.exclude:
            self._fail(ErrorCode.CHECK_RULE, f"residual does not exclude {name}", step)
        return term

    def _residue_terms(self, frame: Frame, step: AdjunctionStep) -> List[str]:
        residual = frame.decomposition.residual
        if residual not in step.residue:
            self._fail(ErrorCode.CHECK_RULE, f"residue must list {residual}", step)
        kept = [x for x in step.residue if x != residual]
        if len(set(kept)) != len(kept) or step.curve in kept:
            self._fail(ErrorCode.CHECK_RULE, "residue repeats a curve or lists the adjunction curve", step)
        for name in kept:
            if frame.decomposition.term_for(name) is None:
                self._fail(ErrorCode.CHECK_RULE, f"residue curve {name} has no term", step)
        for term in frame.decomposition.terms:
            name = term.curve
            if name == step.curve or name in kept:
                continue
            if self._meets(name, step.curve) and not self.misses(frame, name):
                self._fail(ErrorCode.CHECK_RULE, f"omitted term {name} meets {step.curve} and may pass through the point", step)
        return kept

    def _adjunction(self, frame: Frame, step: AdjunctionStep):
        if frame.level == "down":
            self._adjunction_down(frame, step)
            return
        C = step.curve
        self._term_in_locus(frame, step, C)
        if not frame.store.entails(self.tau - self.total(frame, C)):
            self._fail(ErrorCode.CHECK_GUARD, f"store does not entail coefficient of {C} <= {self.tau}", step)
        kept = self._residue_terms(frame, step)

        local = [
            _rational(self.fix[F]) * self.curve_ixn(C, F, "up")
            for F in self.fix
            if F != C and self._meets(C, F) and not self.misses(frame, F)
        ]
        lhs = sum((sp.Symbol(frame.decomposition.term_for(v).var) * self.curve_ixn(C, v, "up") for v in kept),
                  sp.Integer(0))
        lhs = lhs + max(local, default=sp.Integer(0)) + self.residual_symbol(frame, C)
        frame.store.add(step.step_id, lhs - self.tau, GT)

        if step.mult_form:
            mult = sp.Symbol(f"mult.{frame.decomposition.residual}")
            certain = sum((self.total(frame, I) for I in frame.locus.inside if I != C), sp.Integer(0)) + mult
            upper = sum((self.total(frame, G) for G in self.support(frame)
                         if G != C and not self.misses(frame, G)), sp.Integer(0)) + mult
            frame.store.add(f"{step.step_id}:mult", mult, GE)
            frame.store.add(f"{step.step_id}:certain", lhs - certain, GE)
            frame.store.add(f"{step.step_id}:upper", upper - self.tau, GT)
            self.flags.append(MULTIPLICITY_READING)

    def _adjunction_down(self, frame: Frame, step: AdjunctionStep):
        c = step.curve
        term = self._term_in_locus(frame, step, c)
        if not self.catalog.lookup(c).branch:
            self._fail(ErrorCode.CHECK_RULE, f"{c} is not a branch curve", step)
        if not frame.store.entails(self.tau / 2 - sp.Symbol(term.var)):
            self._fail(ErrorCode.CHECK_GUARD, f"store does not entail {term.var} <= ({self.tau})/2", step)
        for other in self.catalog.curves:
            if other.branch and other.name != c and self._meets(other.name, c) and not self.misses(frame, other.name):
                self._fail(ErrorCode.CHECK_RULE, f"branch curve {other.name} meets {c} and may pass through the point", step)
        kept = self._residue_terms(frame, step)
        lhs = sum((sp.Symbol(frame.decomposition.term_for(v).var) * self.curve_ixn(c, v, "down") for v in kept),
                  sp.Integer(0))
        frame.store.add(step.step_id, lhs + self.residual_symbol(frame, c) - self.tau, GT)

    def _mult(self, frame: Frame, step: MultStep):
        if frame.level != "up":
            self._fail(ErrorCode.CHECK_RULE, "mult applies upstairs only", step)
        if frame.mult_used:
            self._fail(ErrorCode.CHECK_RULE, "mult is licensed once per branch", step)
        frame.mult_used = True
        mult = sp.Symbol(f"mult.{frame.decomposition.residual}")
        through = [G for G in self.support(frame) if not self.misses(frame, G)]
        bound = sum((self.total(frame, G) for G in through), sp.Integer(0)) + mult
        frame.store.add(step.step_id, bound - self.tau, GT)
        frame.store.add(f"{step.step_id}:mult", mult, GE)

    def _product(self, frame: Frame, step: ProductStep):
        store = frame.store
        for factor in (step.left, step.right):
            if not store.entails(factor):
                self._fail(ErrorCode.CHECK_GUARD, f"store does not entail {factor} >= 0", step)
        strict = store.entails(step.left, strict=True) and store.entails(step.right, strict=True)
        store.add(step.step_id, sp.expand(step.left * step.right), relation_of(strict))

    def _jiang_zou(self, frame: Frame, step: JiangZouStep):
        if frame.level != "up":
            self._fail(ErrorCode.CHECK_RULE, "jiang-zou applies upstairs only", step)
        residual = frame.decomposition.residual
        if (residual in step.bprime) == (residual in step.c):
            self._fail(ErrorCode.CHECK_RULE, f"{residual} must be on exactly one side", step)
        bprime = [x for x in step.bprime if x != residual]
        other = [x for x in step.c if x != residual]
        named = bprime + other
        if len(set(named)) != len(named):
            self._fail(ErrorCode.CHECK_RULE, "a curve is listed twice", step)
        support = self.support(frame)
        for name in named:
            if name not in support:
                self._fail(ErrorCode.CHECK_RULE, f"{name} is not in the support of D", step)
        for name in support:
            if name not in named and not self.misses(frame, name):
                self._fail(ErrorCode.CHECK_RULE, f"{name} may pass through the point but is on neither side", step)
        for name in bprime:
            if name not in frame.locus.inside:
                self._fail(ErrorCode.CHECK_RULE, f"{name} is not a curve through the point", step)
        free_side = other if residual in bprime else bprime
        for name in free_side:
            if name not in frame.decomposition.exclude:
                self._fail(ErrorCode.CHECK_RULE, f"residual does not exclude {name}", step)

        m = sum((self.total(frame, u) for u in bprime), sp.Integer(0))
        if residual in step.bprime:
            mult = sp.Symbol(f"mult.{residual}")
            frame.store.add(f"{step.step_id}:mult", mult, GE)
            m = m + mult
        bound = sp.Integer(0)
        for u in bprime:
            for v in other:
                bound += self.total(frame, u) * self.total(frame, v) * self.curve_ixn(u, v, "up")
        for v in free_side:
            bound += self.total(frame, v) * self.residual_symbol(frame, v)

        store = frame.store
        if not store.entails(self.tau - m):
            self._fail(ErrorCode.CHECK_GUARD, f"store does not entail {m} <= {self.tau}", step)
        if not store.entails(m, strict=True):
            self._fail(ErrorCode.CHECK_GUARD, f"store does not entail {m} > 0", step)
        store.add(step.step_id, sp.expand(bound - self.tau * m), GT)

    def _pushforward(self, frame: Frame, step: PushforwardStep):
        if frame.level != "up":
            self._fail(ErrorCode.CHECK_RULE, "pushforward applies once", step)
        frame.level = "down"
        frame.decomposition = step.decomposition
        self._declare_terms(frame, step.decomposition, upstairs=False, step=step)

    def _glct(self, frame: Frame, step: GlctStep):
        if not frame.locus.off_branch:
            self._fail(ErrorCode.CHECK_RULE, "glct closes off-branch loci only", step)
        bound = self.theorem.glct_multiple
        if not frame.store.entails(self.tau - 2 * bound):
            self._fail(ErrorCode.CHECK_GUARD, f"store does not entail {self.tau} >= 2*({bound})", step)
        frame.closed = True

    def _split_n(self, frame: Frame, step: SplitNStep):
        lo, hi = frame.store.n_lo, frame.store.n_hi
        declared = self.cert.domain_lo
        if lo is None or declared is None:
            self._fail(ErrorCode.CHECK_COVERAGE, "split-n needs a parameter domain", step)
        cases = sorted(step.cases, key=lambda c: c.lo)
        # The ranges partition the declared domain, whatever n is being checked
        for before, case in zip([None] + cases, cases):
            if case.hi is not None and case.hi < case.lo:
                self._fail(ErrorCode.CHECK_COVERAGE, f"empty range {_range_text(case)}", step)
            if case.lo < declared:
                self._fail(ErrorCode.CHECK_COVERAGE,
                           f"range {_range_text(case)} starts below the domain n >= {declared}", step)
            if before is not None and (before.hi is None or case.lo <= before.hi):
                self._fail(ErrorCode.CHECK_COVERAGE,
                           f"ranges {_range_text(before)} and {_range_text(case)} overlap", step)
        cursor = lo
        for case in cases:
            if case.lo > cursor and (hi is None or cursor <= hi):
                self._fail(ErrorCode.CHECK_COVERAGE, f"n = {cursor} is not covered", step)
            if case.hi is None:
                cursor = None
                break
            cursor = max(cursor, case.hi + 1)
        if cursor is not None and (hi is None or cursor <= hi):
            self._fail(ErrorCode.CHECK_COVERAGE, f"n >= {cursor} is not covered", step)

        for case in step.cases:
            case_lo = max(lo, case.lo)
            case_hi = case.hi if hi is None else (hi if case.hi is None else min(hi, case.hi))
            if case_hi is not None and case_hi < case_lo:
                logger.debug(f"{step.step_id}: range {case.lo}..{case.hi} lies outside the domain, skipped")
                continue
            branch = frame.copy()
            branch.store.restrict_n(case_lo, case_hi)
            self.run_steps(branch, case.steps)
        frame.closed = True

    def _split_locus(self, frame: Frame, step: SplitLocusStep):
        curve = self._up(step.curve)
        locus = frame.locus
        if locus.off_branch:
            self._fail(ErrorCode.CHECK_RULE, "off-branch locus has no curves to split on", step)
        if curve in locus.inside or curve in locus.outside:
            self._fail(ErrorCode.CHECK_RULE, f"locus already decides {step.curve}", step)
        if len(locus.inside) >= 2 or any(not self._meets(curve, other) for other in locus.inside):
            self._fail(ErrorCode.CHECK_RULE, f"the point cannot lie on {step.curve} as well", step)
        on_curve = frame.copy()
        on_curve.locus.inside.append(curve)
        self.run_steps(on_curve, step.inside)
        off_curve = frame.copy()
        off_curve.locus.outside.append(curve)
        self.run_steps(off_curve, step.outside)
        frame.closed = True

    def _linear(self, frame: Frame, step: LinearStep):
        if step.rel in ("<=", "<"):
            claim = step.rhs - step.lhs
        else:
            claim = step.lhs - step.rhs
        strict = step.rel in ("<", ">")
        combination = sp.Integer(0)
        strict_used = False
        for coefficient, label in step.farkas:
            fact = frame.store.fact(label)
            if fact is None:
                self._fail(ErrorCode.CHECK_FARKAS, f"unknown fact label {label}", step)
            if fact.rel != EQ and coefficient < 0:
                self._fail(ErrorCode.CHECK_FARKAS, f"negative multiplier on inequality {label}", step)
            combination += _rational(coefficient) * fact.expr
            strict_used = strict_used or (fact.strict and coefficient > 0)
        rest = frame.store.is_constant(claim - combination)
        if rest is None:
            self._fail(ErrorCode.CHECK_FARKAS, "multipliers leave a non-constant remainder", step)
        # The claim is the combination itself, never a weakening of it
        if rest != 0:
            self._fail(ErrorCode.CHECK_FARKAS, f"claim differs from the combination by {rest}", step)
        if strict and not strict_used:
            self._fail(ErrorCode.CHECK_FARKAS, "a strict claim needs a strict fact with a positive multiplier", step)
        frame.store.add(step.step_id, claim, relation_of(strict))

    def _contradiction(self, frame: Frame, step: ContradictionStep):
        result = frame.store.infeasible()
        if not result.infeasible:
            witness = {k: str(v) for k, v in sorted(result.witness.items())}
            raise CheckError(ErrorCode.CHECK_FEASIBLE, "store is satisfiable", step.step_id, witness)
        logger.debug(f"{step.step_id}: infeasible, derived {result.conflict}")
        frame.closed = True


def check_certificate(certificate: Certificate, n: Optional[int] = None,
                      catalog_path: Optional[str] = None) -> Verdict:
    """
    Check a parsed certificate

    Args:
        certificate: Parsed certificate
        n: Optional concrete value of the parameter
        catalog_path: Optional catalog file override

    Returns:
        Verdict naming the first rejected step, if any
    """
    return CertificateChecker(certificate, n, catalog_path).check()
