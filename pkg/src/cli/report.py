"""Command reports: items with expected/computed values and citation tags"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from src import __version__
from src.utils.error_handler import BurniatError, ErrorCode

logger = logging.getLogger(__name__)

PASS_MARK = "✓"
FAIL_MARK = "✗"
INFO_MARK = "ℹ"


@dataclass
class ReportItem:
    name: str
    computed: str
    citation: str
    expected: Optional[str] = None
    passed: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "expected": self.expected,
            "computed": self.computed,
            "passed": self.passed,
            "citation": self.citation,
        }


@dataclass
class Report:
    """
    Result of one command.

    Items compare an expected value with a computed one; an item without an expected
    value is informational and always passes. Citation tags are checked against the
    tags the corpus index declares when those are given.
    """

    command: str
    citations: Optional[Dict[str, str]] = None
    items: List[ReportItem] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    errors: List[Dict[str, Any]] = field(default_factory=list)
    seconds: float = 0.0

    def add(self, name: str, computed, citation: str, expected=None, passed: Optional[bool] = None) -> ReportItem:
        if self.citations is not None and citation not in self.citations:
            raise BurniatError(ErrorCode.IO_MALFORMED_INDEX, f"citation tag '{citation}' is not in the corpus index")
        computed_text = str(computed)
        expected_text = None if expected is None else str(expected)
        if passed is None:
            passed = expected_text is None or expected_text == computed_text
        item = ReportItem(name, computed_text, citation, expected_text, bool(passed))
        self.items.append(item)
        if not item.passed:
            logger.warning(f"{self.command}: {name} expected {expected_text}, computed {computed_text}")
        return item

    def error(self, entry: Dict[str, Any]):
        self.errors.append(entry)

    @property
    def passed(self) -> bool:
        return not self.errors and all(item.passed for item in self.items)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def payload(self) -> Dict[str, Any]:
        """Deterministic content, without the wall time"""
        data = {
            "command": self.command,
            "version": __version__,
            "passed": self.passed,
            "items": [item.to_dict() for item in self.items],
        }
        if self.details:
            data["details"] = self.details
        if self.errors:
            data["errors"] = self.errors
        return data

    def to_dict(self) -> Dict[str, Any]:
        data = self.payload()
        data["wall_time_seconds"] = round(self.seconds, 3)
        return data

    def render_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False, default=str)

    def render_text(self) -> str:
        lines = ["=" * 80, f"{self.command} (engine {__version__})", "=" * 80]
        for item in self.items:
            if item.expected is None:
                lines.append(f"{INFO_MARK} {item.name}: {item.computed}  [{item.citation}]")
            else:
                mark = PASS_MARK if item.passed else FAIL_MARK
                lines.append(f"{mark} {item.name}: {item.computed} (expected {item.expected})  [{item.citation}]")
        for key, value in self.details.items():
            if isinstance(value, list):
                lines.append(f"{key}:")
                lines.extend(f"  - {entry}" for entry in value)
            elif isinstance(value, dict):
                lines.append(f"{key}:")
                lines.extend(f"  {k}: {v}" for k, v in value.items())
            else:
                lines.append(f"{key}: {value}")
        for entry in self.errors:
            lines.append(f"{FAIL_MARK} [{entry.get('error_code')}] {entry.get('error')}")
        passed = sum(1 for item in self.items if item.passed)
        lines.append("=" * 80)
        lines.append(f"{'PASS' if self.passed else 'FAIL'}: {passed}/{len(self.items)} items passed "
                     f"in {self.seconds:.2f}s")
        return "\n".join(lines)

    def render(self, fmt: str) -> str:
        return self.render_json() if fmt == "json" else self.render_text()
