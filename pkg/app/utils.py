"""Exception hierarchy, error classification and CLI error reporting"""

import json
import logging
import sys
from typing import Any, List, Optional, Sequence, TextIO

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE_ERROR = 2


class GarsideException(Exception):
    """Base exception for garside errors with CLI exit codes"""

    def __init__(
        self,
        detail: str,
        error_code: str = "internal_error",
        exit_code: int = EXIT_DOMAIN_ERROR,
        witness: Optional[Sequence[Any]] = None,
    ):
        self.detail = detail
        self.error_code = error_code
        self.exit_code = exit_code
        self.witness = list(witness) if witness is not None else None
        super().__init__(detail)

    def to_dict(self) -> dict:
        payload = {"error_code": self.error_code, "detail": self.detail}
        if self.witness is not None:
            payload["witness"] = self.witness
        return payload


class UsageError(GarsideException):
    """Malformed command line (exit 2)"""
    def __init__(self, detail: str):
        super().__init__(detail=detail, error_code="usage_error", exit_code=EXIT_USAGE_ERROR)


class ParseError(GarsideException):
    """Germ file or word text that cannot be parsed"""
    def __init__(self, detail: str, witness: Optional[Sequence[Any]] = None):
        super().__init__(detail=detail, error_code="parse_error", witness=witness)


class GermValidationError(GarsideException):
    """Germ data violating one or more axioms; carries every violation found"""
    def __init__(self, germ_name: str, violations: List[Any]):
        self.violations = violations
        kinds = sorted({v.kind.value for v in violations})
        super().__init__(
            detail=f"Germ '{germ_name}' failed validation: {len(violations)} violation(s) ({', '.join(kinds)})",
            error_code="validation_error",
            witness=[v.model_dump(mode="json") for v in violations],
        )


class UnknownSimple(GarsideException):
    """A name or index that is not a simple of the germ"""
    def __init__(self, name: Any, germ_name: str):
        super().__init__(
            detail=f"Unknown simple {name!r} in germ '{germ_name}'",
            error_code="unknown_simple",
            witness=[str(name)],
        )


class NotADivisor(GarsideException):
    """Division requested where the divisibility relation fails"""
    def __init__(self, a: str, b: str, side: str = "left"):
        super().__init__(
            detail=f"{a} does not {side}-divide {b}",
            error_code="not_a_divisor",
            witness=[a, b, side],
        )


class GermMismatch(GarsideException):
    """Operands built over different germs"""
    def __init__(self, left: str, right: str):
        super().__init__(
            detail=f"Operands belong to different germs: '{left}' and '{right}'",
            error_code="germ_mismatch",
            witness=[left, right],
        )


class RankTooLarge(GarsideException):
    """Builder request beyond the configured desk-scale guard"""
    def __init__(self, family: str, rank: int, limit: int):
        super().__init__(
            detail=f"{family}{rank} exceeds the configured limit {limit}",
            error_code="rank_too_large",
            witness=[family, rank, limit],
        )


class BudgetExceeded(GarsideException):
    """Memoized recursion created more nodes than its budget allows"""
    def __init__(self, budget_name: str, limit: int):
        super().__init__(
            detail=f"Node budget '{budget_name}' exhausted after {limit} nodes (raise GARSIDE_NODE_BUDGET)",
            error_code="budget_exceeded",
            witness=[budget_name, limit],
        )


class ComputationTimeout(GarsideException):
    """Concurrent reduction batch exceeded GARSIDE_MAX_PROCESSING_SECONDS"""
    def __init__(self, what: str, seconds: float):
        super().__init__(
            detail=f"{what} exceeded {seconds:g}s",
            error_code="computation_timeout",
        )


class InvariantViolation(GarsideException):
    """A checked structural property failed; indicates an implementation bug"""
    def __init__(self, detail: str, witness: Optional[Sequence[Any]] = None, error_code: str = "invariant_violation"):
        super().__init__(detail=detail, error_code=error_code, witness=witness)


class OrientationViolation(InvariantViolation):
    """Geodesic whose Morse profile is not down* up*"""
    def __init__(self, detail: str, witness: Optional[Sequence[Any]] = None):
        super().__init__(detail=detail, witness=witness, error_code="orientation_violation")


class SimplexViolation(InvariantViolation):
    """Centers that are not pairwise adjacent"""
    def __init__(self, detail: str, witness: Optional[Sequence[Any]] = None):
        super().__init__(detail=detail, witness=witness, error_code="simplex_violation")


def classify_error(exception: Exception) -> tuple:
    """
    Classify an exception and return an appropriate exit code.

    Returns:
        Tuple of (exit_code, error_code, detail)
    """
    if isinstance(exception, GarsideException):
        return exception.exit_code, exception.error_code, exception.detail

    if isinstance(exception, KeyError):
        return EXIT_DOMAIN_ERROR, "unknown_key", f"Unknown key: {exception}"

    if isinstance(exception, ValueError):
        return EXIT_DOMAIN_ERROR, "invalid_value", str(exception)

    if isinstance(exception, (OSError, json.JSONDecodeError)):
        return EXIT_DOMAIN_ERROR, "io_error", str(exception)

    return EXIT_DOMAIN_ERROR, "internal_error", f"Internal error: {exception}"


def report_error(exception: Exception, as_json: bool = False, stream: Optional[TextIO] = None) -> int:
    """Write an exception to standard error and return the matching exit code."""
    stream = stream or sys.stderr
    exit_code, error_code, detail = classify_error(exception)
    if isinstance(exception, GarsideException):
        payload = exception.to_dict()
    else:
        payload = {"error_code": error_code, "detail": detail}
    witness = payload.get("witness")

    if as_json:
        stream.write(json.dumps(payload, ensure_ascii=False) + "\n")
    else:
        stream.write(f"error [{error_code}]: {detail}\n")
        if witness:
            stream.write(f"witness: {json.dumps(witness, ensure_ascii=False)}\n")

    if exit_code == EXIT_DOMAIN_ERROR and not isinstance(exception, GarsideException):
        logger.error(f"Error [{error_code}]: {detail}")
    return exit_code
