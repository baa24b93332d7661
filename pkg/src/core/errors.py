"""
Errors - Exception hierarchy for the QGT lab.

Every error raised by the library derives from QGTError.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from ..recovery.recover import RecoveryReport


class QGTError(Exception):
    """Base class for all lab errors."""


class InvalidParamsError(QGTError, ValueError):
    """Instance parameters violate 0 < k < n, m >= 1."""


class InvalidSpecError(QGTError, ValueError):
    """An experiment spec or instance document failed validation."""


class IndexOutOfRangeError(QGTError, IndexError):
    """An item index is outside [0, n)."""


class OutcomeOutOfRangeError(QGTError, ValueError):
    """Some outcome y_j lies outside [0, k]."""


class ExactCapExceededError(QGTError, ValueError):
    """Exact rational elimination requested above the configured dimension cap."""


class InconsistentSystemError(QGTError, ValueError):
    """Pinned solve requested on an inconsistent reduced system."""


class MissingPinError(QGTError, KeyError):
    """A free column was left without a pinned value."""


class NotEnoughItemsError(QGTError, ValueError):
    """top_t asked for more items than remain after exclusion."""


class BaseOutputTooLargeError(QGTError, ValueError):
    """The base algorithm of Then-Thresholding returned more than k items."""


class DegenerateSplitError(QGTError, ValueError):
    """split_rows left fewer than k observed rows."""


class TooLargeError(QGTError, ValueError):
    """Brute-force enumeration guard tripped."""


class DomainError(QGTError, ValueError):
    """A closed-form bound was evaluated outside its domain."""


class RecoveryError(QGTError):
    """Recovery failure that still carries the diagnostics gathered so far."""

    def __init__(self, message: str, report: RecoveryReport | None = None, **context: Any) -> None:
        super().__init__(message)
        self.report = report
        self.context = context


class FreeVariableBudgetExceededError(RecoveryError):
    """More free variables than the enumeration budget allows."""


class NoBinarySolutionError(RecoveryError):
    """Enumeration finished without a weight-k binary solution inside S."""
