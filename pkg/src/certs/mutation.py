"""
Mutation harness for the checker.

Every numeric constant of a certificate is perturbed by +1 and -1 in the source text.
The perturbed text is re-parsed and re-checked. A mutation is killed when parsing or
checking rejects it. Intersection values and thresholds are facts about the surface,
so every mutation of those must be killed; the other categories are only reported.
"""

import logging
import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from src.certs.checker import check_certificate
from src.certs.corpus import run_concurrently
from src.certs.parser import NUMBER_RE, parse
from src.certs.sexpr import read, walk_atoms
from src.utils.error_handler import BurniatError

logger = logging.getLogger(__name__)

REQUIRED = ("ixn", "threshold")

# Innermost enclosing form decides the category
_CATEGORY_OF_HEAD = {
    "threshold": "threshold",
    "domain": "domain",
    "range": "split",
    "farkas": "linear",
    "step:linear": "linear",
    "term": "lower-bound",
    "step:product": "product",
    "step:ixn": "ixn",
}


@dataclass(frozen=True)
class Mutation:
    cert_id: str
    category: str
    line: int
    col: int
    original: str
    replacement: str
    text: str

    def describe(self) -> str:
        return f"{self.category} {self.line}:{self.col} {self.original} -> {self.replacement}"


@dataclass
class MutationOutcome:
    mutation: Mutation
    killed: bool
    stage: str  # "parse", "check" or "survived"
    step_id: Optional[str] = None
    reason: str = ""


@dataclass
class MutationSummary:
    """Outcomes for one certificate"""

    cert_id: str
    outcomes: List[MutationOutcome] = field(default_factory=list)

    @property
    def survivors(self) -> List[MutationOutcome]:
        return [o for o in self.outcomes if not o.killed]

    @property
    def required_survivors(self) -> List[MutationOutcome]:
        return [o for o in self.survivors if o.mutation.category in REQUIRED]

    @property
    def passed(self) -> bool:
        """No ixn/threshold mutation survives and at least one mutation is killed"""
        return not self.required_survivors and any(o.killed for o in self.outcomes)

    def counts(self) -> Dict[str, Tuple[int, int]]:
        """category -> (killed, total)"""
        total = Counter(o.mutation.category for o in self.outcomes)
        killed = Counter(o.mutation.category for o in self.outcomes if o.killed)
        return {category: (killed[category], total[category]) for category in sorted(total)}

    def to_dict(self) -> Dict:
        return {
            "id": self.cert_id,
            "passed": self.passed,
            "killed": sum(1 for o in self.outcomes if o.killed),
            "total": len(self.outcomes),
            "by_category": {k: {"killed": a, "total": b} for k, (a, b) in self.counts().items()},
            "survivors": [o.mutation.describe() for o in self.survivors],
        }


def category_of(heads: Sequence[str]) -> str:
    for head in reversed(heads):
        if head in _CATEGORY_OF_HEAD:
            return _CATEGORY_OF_HEAD[head]
        if head.startswith("step:"):
            return "other"
    return "other"


def _format(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def mutations(text: str, cert_id: str) -> List[Mutation]:
    """All +-1 perturbations of the numeric atoms of a certificate text"""
    out = []
    for form in read(text):
        for atom, heads in walk_atoms(form):
            if not NUMBER_RE.match(atom.value):
                continue
            value = Fraction(atom.value)
            category = category_of(heads)
            for delta in (1, -1):
                replacement = _format(value + delta)
                mutated = text[: atom.start] + replacement + text[atom.end:]
                out.append(Mutation(cert_id, category, atom.line, atom.col, atom.value, replacement, mutated))
    return out


def run_mutation(mutation: Mutation) -> MutationOutcome:
    try:
        certificate = parse(mutation.text, f"<{mutation.cert_id} mutant>")
    except BurniatError as exc:
        return MutationOutcome(mutation, True, "parse", reason=exc.message)
    verdict = check_certificate(certificate)
    if verdict.valid:
        logger.debug(f"{mutation.cert_id}: mutation survived: {mutation.describe()}")
        return MutationOutcome(mutation, False, "survived")
    return MutationOutcome(mutation, True, "check", verdict.step_id, verdict.reason)


def mutate_text(text: str, cert_id: str) -> MutationSummary:
    summary = MutationSummary(cert_id)
    summary.outcomes = [run_mutation(m) for m in mutations(text, cert_id)]
    return summary


def mutate_file(path: str) -> MutationSummary:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    cert_id = os.path.splitext(os.path.basename(path))[0]
    summary = mutate_text(text, cert_id)
    if summary.required_survivors:
        logger.warning(f"{cert_id}: {len(summary.required_survivors)} ixn/threshold mutations survived")
    return summary


def mutate_paths(paths: Sequence[str], workers: Optional[int] = None) -> List[MutationSummary]:
    """Run the harness over several certificates concurrently, sorted by id"""
    summaries = run_concurrently(mutate_file, list(paths), workers)
    summaries.sort(key=lambda s: s.cert_id)
    killed = sum(len(s.outcomes) - len(s.survivors) for s in summaries)
    total = sum(len(s.outcomes) for s in summaries)
    logger.info(f"Mutation harness: {killed}/{total} mutations killed over {len(summaries)} certificates")
    return summaries
