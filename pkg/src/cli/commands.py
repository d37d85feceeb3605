"""
Command implementations behind scripts/burniat.py.

Each command returns a Report; printing and exit codes are left to the caller.
"""

import logging
import time
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from src.certs.corpus import Corpus, check_paths
from src.certs.mutation import mutate_paths
from src.cli.divexpr import parse_divisor
from src.cli.report import Report
from src.config.settings import settings
from src.geometry import bicover, surface
from src.geometry.lct import POINT_TIE_RULE, glct_upper_search, lct_divisor, witness_closed_form, witness_divisor
from src.geometry.picard import anticanonical_class
from src.utils.error_handler import BurniatError, ErrorCode, ExpressionError, error_entry, log_error

logger = logging.getLogger(__name__)

# K_X against the named curves of X
INTERSECTION_TABLE = (
    [(f"E{i}", Fraction(1)) for i in (1, 2, 3)]
    + [("E4", Fraction(2)), ("pull(l)", Fraction(6))]
    + [(f"pull(t{i})", Fraction(4)) for i in (1, 2, 3, 4)]
    + [(name, Fraction(1)) for name in ("H12", "H13", "H14", "H23", "H24", "H34")]
    + [(name, Fraction(2)) for name in ("T11", "T22", "T33")]
)

EXPECTED_INVARIANTS = {"K^2": Fraction(5), "p_g": 0, "chi": Fraction(1), "q": Fraction(0)}

# Bound the search reaches once the cap is large enough
GLCT_2K_BOUND = Fraction(1, 4)
GLCT_FULL_CAP = 4


def _citations() -> Dict[str, str]:
    return Corpus().citations


def _timed(report: Report, started: float) -> Report:
    report.seconds = time.perf_counter() - started
    return report


def _record(report: Report, exc: Exception):
    """Add a failure to the report; unexpected exceptions get their traceback logged"""
    if isinstance(exc, BurniatError):
        logger.error(f"{report.command} failed: [{exc.code}] {exc.message}")
    else:
        log_error(exc, ErrorCode.INTERNAL, {"command": report.command})
    report.error(error_entry(exc))


def _named_curve(name: str, path: Optional[str]):
    if name.startswith("pull("):
        down = surface.lookup(name[5:-1], path)
        return bicover.pull(down.cls, name)
    return bicover.curve(name, path)


def cmd_invariants(catalog_path: Optional[str] = None) -> Report:
    """K^2, p_g, chi, q, the K_X intersection table and the building-data checks"""
    started = time.perf_counter()
    report = Report("invariants", _citations())
    try:
        inv = bicover.invariants(catalog_path)
        computed = {"K^2": inv.K2, "p_g": inv.pg, "chi": inv.chi, "q": inv.q}
        for key, expected in EXPECTED_INVARIANTS.items():
            report.add(key, computed[key], "invariants", expected)

        k_x = bicover.canonical_divisor()
        for name, expected in INTERSECTION_TABLE:
            value = bicover.ixn(k_x, _named_curve(name, catalog_path))
            report.add(f"K_X . {name}", value, "intersection-table", expected)

        for check in surface.validate_building_data(catalog_path):
            report.add(check.name, check.computed, "building-data", check.expected, check.passed)
    except Exception as exc:
        _record(report, exc)
    return _timed(report, started)


def cmd_lct(expression: str, n: Optional[int] = None, catalog_path: Optional[str] = None) -> Report:
    """lct of an expression or a named witness, with its minimizing point"""
    started = time.perf_counter()
    report = Report("lct", _citations())
    report.details["expression"] = expression
    try:
        parsed = parse_divisor(expression, catalog_path)
        if parsed.witness is not None:
            if n is None:
                raise ExpressionError(ErrorCode.EXPR_MISSING_N, f"@{parsed.witness} needs --n",
                                      expression.index("@") + 1)
            divisor, m, index = witness_divisor(parsed.witness, n, catalog_path)
            result = lct_divisor(divisor, catalog_path)
            report.details.update({"divisor": str(divisor), "system": f"|{m}K_X|_{index}", "n": n})
            report.add("lct", result.value, f"witness-{parsed.witness}", witness_closed_form(parsed.witness, n))
            report.add("member of the eigen-system", bicover.is_member(divisor, m, index, catalog_path),
                       f"witness-{parsed.witness}", True)
        else:
            result = lct_divisor(parsed.divisor, catalog_path)
            report.details["divisor"] = str(parsed.divisor)
            report.add("lct", result.value, "lct-two-lines")
        report.details["point"] = " . ".join(result.point)
        report.details["minimizers"] = [" . ".join(p) for p in result.minimizers]
        report.details["tie_rule"] = POINT_TIE_RULE
    except Exception as exc:
        _record(report, exc)
    return _timed(report, started)


def cmd_glct_upper(max_coeff: Optional[int] = None, workers: Optional[int] = None,
                   catalog_path: Optional[str] = None) -> Report:
    """
    Upper bound for glct(X, 2K_X) over rigid decompositions of -K_Y, and the K_X bound

    Below the full coefficient cap the bound is relative to the search space, so it
    is reported without an expected value.
    """
    started = time.perf_counter()
    max_coeff = settings.GLCT_MAX_COEFF if max_coeff is None else max_coeff
    report = Report("glct-upper", _citations())
    report.details["max_coeff"] = max_coeff
    try:
        result = glct_upper_search(anticanonical_class(), max_coeff, workers or settings.CHECK_WORKERS,
                                   catalog_path)
        full = max_coeff >= GLCT_FULL_CAP
        report.add("glct(X, 2K_X) <=", result.bound, "upper-bound-witness",
                   GLCT_2K_BOUND if full else None)
        report.add("glct(X, K_X) <=", 2 * result.bound, "upper-bound-witness",
                   2 * GLCT_2K_BOUND if full else None)
        report.details.update({
            "witness": " + ".join(f"{k}*{name}" if k != 1 else name for name, k in result.witness.items()),
            "pullback": str(result.pullback),
            "point": " . ".join(result.point),
            "decompositions": result.decompositions,
        })
        if not full:
            report.details["note"] = f"bound is relative to coefficients <= {max_coeff}"
    except Exception as exc:
        _record(report, exc)
    return _timed(report, started)


def cmd_eigensystem(m: int, catalog_path: Optional[str] = None) -> Report:
    """Dimensions of the four eigen-subsystems of |mK_X| against the plurigenus formula"""
    started = time.perf_counter()
    report = Report("eigensystem", _citations())
    report.details["m"] = m
    try:
        systems = [bicover.eigen_system(m, i, catalog_path) for i in range(4)]
        report.details["systems"] = [
            f"|{m}K_X|_{s.index}: dim {s.dim}, fixed {s.fixed}, mobile pull({s.mobile_class})" for s in systems
        ]
        total = sum(s.dim for s in systems)
        expected = 1 + 5 * m * (m - 1) // 2 if m >= 2 else None
        report.add(f"P_{m}", total, "eigen-decomposition", expected)
        if m == 2:
            report.add("dims of |2K_X|_1..3", ",".join(str(s.dim) for s in systems[1:]),
                       "eigen-decomposition", "0,0,0")
    except Exception as exc:
        _record(report, exc)
    return _timed(report, started)


def cmd_check(paths: Sequence[str] = (), check_all: bool = False, mutate: bool = False,
              n: Optional[int] = None, workers: Optional[int] = None) -> Report:
    """Check certificates, or run the mutation harness over them"""
    started = time.perf_counter()
    corpus = Corpus()
    report = Report("check --mutate" if mutate else "check", corpus.citations)
    try:
        targets: List[str] = list(paths)
        if check_all:
            shipped = corpus.paths()
            targets = shipped + [p for p in targets if p not in shipped]
        if not targets:
            raise BurniatError(ErrorCode.IO_NOT_FOUND, "no certificate paths given")
        if n is not None:
            report.details["n"] = n

        if mutate:
            summaries = mutate_paths(targets, workers)
            for summary in summaries:
                killed = sum(1 for o in summary.outcomes if o.killed)
                report.add(f"{summary.cert_id} mutations", f"{killed}/{len(summary.outcomes)} killed",
                           "mutation", passed=summary.passed)
            report.details["mutations"] = {s.cert_id: s.to_dict()["by_category"] for s in summaries}
            survivors = [f"{s.cert_id}: {o.mutation.describe()}" for s in summaries for o in s.survivors]
            if survivors:
                report.details["survivors"] = survivors
        else:
            verdicts = check_paths(targets, n, workers)
            described = corpus.index.get("certificates", {})
            failures = []
            for verdict in verdicts:
                report.add(verdict.cert_id, verdict.status, "certificate", "VALID")
                if not verdict.valid:
                    where = f" at {verdict.step_id}" if verdict.step_id else ""
                    failures.append(f"{verdict.cert_id}{where}: [{verdict.code}] {verdict.reason}")
                    if verdict.counterexample:
                        failures.append(f"  counterexample: {verdict.counterexample}")
            flagged = [v.cert_id for v in verdicts if v.flags]
            if failures:
                report.details["failures"] = failures
            if flagged:
                report.details["multiplicity-reading"] = flagged
            if len(verdicts) == 1 and verdicts[0].cert_id in described:
                report.details["case"] = described[verdicts[0].cert_id].get("case", "")
    except Exception as exc:
        _record(report, exc)
    return _timed(report, started)
