"""
Error handling utilities for the engine and the command-line front end

Every failure the engine can report is a BurniatError carrying a stable error
code. The CLI turns these into report entries and exit codes, and logs the
full traceback to the log file.
"""

import logging
import traceback
from typing import Optional, Dict, Any

logger = logging.getLogger(__name__)


# Error codes for different error types
class ErrorCode:
    """Error code constants"""
    # Geometry errors (1000-1999)
    GEO_NON_INTEGRAL = "GEO_001"
    GEO_MOBILE_INCIDENCE = "GEO_002"
    GEO_MOBILE_SUPPORT = "GEO_003"
    GEO_TRIPLE_POINT = "GEO_004"
    GEO_NEGATIVE_COEFFICIENT = "GEO_005"
    GEO_UNKNOWN_CURVE = "GEO_006"
    GEO_RESIDUAL = "GEO_007"
    GEO_PARAMETER = "GEO_008"

    # Catalog errors (2000-2999)
    CATALOG_UNREADABLE = "CAT_001"
    CATALOG_MALFORMED = "CAT_002"

    # Divisor expression errors (3000-3999)
    EXPR_SYNTAX = "EXPR_001"
    EXPR_UNKNOWN_NAME = "EXPR_002"
    EXPR_MISSING_N = "EXPR_003"

    # Certificate parse errors (4000-4999)
    PARSE_SYNTAX = "PARSE_001"
    PARSE_UNKNOWN_CURVE = "PARSE_002"
    PARSE_UNDECLARED_VARIABLE = "PARSE_003"
    PARSE_MALFORMED_EXPRESSION = "PARSE_004"
    PARSE_EMPTY = "PARSE_005"
    PARSE_STRUCTURE = "PARSE_006"

    # Certificate check errors (5000-5999)
    CHECK_HEADER = "CHK_001"
    CHECK_IDENTITY = "CHK_002"
    CHECK_GUARD = "CHK_003"
    CHECK_RULE = "CHK_004"
    CHECK_FARKAS = "CHK_005"
    CHECK_FEASIBLE = "CHK_006"
    CHECK_COVERAGE = "CHK_007"
    CHECK_OPEN_BRANCH = "CHK_008"

    # Search errors (6000-6999)
    SEARCH_NOT_EFFECTIVE = "SRCH_001"
    SEARCH_NO_DECOMPOSITION = "SRCH_002"

    # Input/output errors (7000-7999)
    IO_NOT_FOUND = "IO_001"
    IO_MALFORMED_INDEX = "IO_002"

    # Anything else (9000-9999)
    INTERNAL = "SRV_001"


# Human-readable messages
ERROR_MESSAGES = {
    ErrorCode.GEO_NON_INTEGRAL: "h0 requires an integral class",
    ErrorCode.GEO_MOBILE_INCIDENCE: "incidence undefined for general members",
    ErrorCode.GEO_MOBILE_SUPPORT: "lct undefined for general members",
    ErrorCode.GEO_TRIPLE_POINT: "a configuration point carries more than two support curves",
    ErrorCode.GEO_NEGATIVE_COEFFICIENT: "coefficients must be non-negative",
    ErrorCode.GEO_UNKNOWN_CURVE: "unknown curve",
    ErrorCode.GEO_RESIDUAL: "use bound operations for symbolic divisors",
    ErrorCode.GEO_PARAMETER: "invalid parameter",

    ErrorCode.CATALOG_UNREADABLE: "curve catalog file could not be read",
    ErrorCode.CATALOG_MALFORMED: "curve catalog file is malformed",

    ErrorCode.EXPR_SYNTAX: "malformed divisor expression",
    ErrorCode.EXPR_UNKNOWN_NAME: "unknown name in divisor expression",
    ErrorCode.EXPR_MISSING_N: "parameterized witness requires --n",

    ErrorCode.PARSE_SYNTAX: "certificate syntax error",
    ErrorCode.PARSE_UNKNOWN_CURVE: "unknown curve",
    ErrorCode.PARSE_UNDECLARED_VARIABLE: "undeclared variable",
    ErrorCode.PARSE_MALFORMED_EXPRESSION: "malformed expression",
    ErrorCode.PARSE_EMPTY: "certificate proves nothing",
    ErrorCode.PARSE_STRUCTURE: "malformed certificate block",

    ErrorCode.CHECK_HEADER: "certificate header does not match its theorem",
    ErrorCode.CHECK_IDENTITY: "intersection identity does not hold",
    ErrorCode.CHECK_GUARD: "guard not entailed by the constraint store",
    ErrorCode.CHECK_RULE: "step violates its rule",
    ErrorCode.CHECK_FARKAS: "Farkas multipliers do not reproduce the claim",
    ErrorCode.CHECK_FEASIBLE: "constraint store is feasible",
    ErrorCode.CHECK_COVERAGE: "case split does not cover the domain",
    ErrorCode.CHECK_OPEN_BRANCH: "branch does not end in a contradiction",

    ErrorCode.SEARCH_NOT_EFFECTIVE: "target class is not effective",
    ErrorCode.SEARCH_NO_DECOMPOSITION: "no decomposition found",

    ErrorCode.IO_NOT_FOUND: "file not found",
    ErrorCode.IO_MALFORMED_INDEX: "corpus index is malformed",

    ErrorCode.INTERNAL: "internal error",
}


class BurniatError(Exception):
    """Base class for engine errors; carries a stable error code"""

    def __init__(self, code: str, message: Optional[str] = None):
        self.code = code
        self.message = message or get_error_message(code)
        super().__init__(self.message)


class GeometryError(BurniatError):
    """Invalid request against the surface model"""


class CatalogError(BurniatError):
    """Curve catalog file problems"""


class ExpressionError(BurniatError):
    """Divisor mini-language error with a column"""

    def __init__(self, code: str, message: Optional[str] = None, column: int = 0):
        self.column = column
        super().__init__(code, f"{message or get_error_message(code)} (column {column})")


class ParseError(BurniatError):
    """Certificate grammar error with a source position"""

    def __init__(self, code: str, message: Optional[str] = None, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        self.reason = message or get_error_message(code)
        super().__init__(code, f"{line}:{column}: {self.reason}")


class CheckError(BurniatError):
    """A certificate step was rejected"""

    def __init__(self, code: str, message: Optional[str] = None, step_id: Optional[str] = None,
                 counterexample: Optional[Dict[str, str]] = None):
        self.step_id = step_id
        self.counterexample = counterexample
        self.reason = message or get_error_message(code)
        prefix = f"step {step_id}: " if step_id else ""
        super().__init__(code, prefix + self.reason)


class SearchError(BurniatError):
    """Upper-bound search failures"""


def get_error_message(error_code: str, default: Optional[str] = None) -> str:
    """
    Get the message for an error code

    Args:
        error_code: Error code constant
        default: Default message if code not found

    Returns:
        Message text
    """
    return ERROR_MESSAGES.get(error_code, default or "An error occurred.")


def log_error(
    error: Exception,
    error_code: str,
    context: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """
    Log error with full context for debugging

    Args:
        error: Exception object
        error_code: Error code constant
        context: Additional context dictionary

    Returns:
        Structured error entry suitable for a report
    """
    info = {
        "error_code": error_code,
        "error_type": type(error).__name__,
        "error_message": str(error),
    }

    if context:
        info.update(context)

    logger.error(
        f"Error [{error_code}]: {str(error)}\n"
        f"Context: {info}\n"
        f"Traceback:\n{traceback.format_exc()}"
    )
    return info


def error_entry(error: Exception) -> Dict[str, Any]:
    """
    Turn an exception into a report entry without logging a traceback

    Args:
        error: Exception object

    Returns:
        Dictionary with code and message
    """
    if isinstance(error, BurniatError):
        return {"error_code": error.code, "error": error.message}
    return {"error_code": ErrorCode.INTERNAL, "error": f"{type(error).__name__}: {error}"}
