"""
Thresholds - Leading-order test-count thresholds in the sublinear regime k = n**theta.

Natural logarithms throughout; theta = ln k / ln n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..core.errors import DomainError

_HALF_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ThresholdParams:
    n: int
    k: int

    def __post_init__(self) -> None:
        if not 1 < self.k < self.n:
            raise DomainError(f"thresholds need 1 < k < n, got n={self.n}, k={self.k}")

    @property
    def theta(self) -> float:
        return math.log(self.k) / math.log(self.n)


def beta(theta: float) -> float:
    """
    (theta - 1 + sqrt(theta (1 - theta))) / (2 theta - 1), and 1/2 at theta = 1/2.

    Evaluated as (1 - theta) / (sqrt(theta (1 - theta)) + 1 - theta), the same
    value without the cancellation near theta = 1/2.
    """
    if not 0 < theta < 1:
        raise DomainError(f"beta needs 0 < theta < 1, got {theta}")
    if abs(theta - 0.5) < _HALF_TOLERANCE:
        return 0.5
    return (1 - theta) / (math.sqrt(theta * (1 - theta)) + 1 - theta)


def alpha(theta: float) -> float:
    return 1.0 / beta(theta)


def m_threshold(p: ThresholdParams) -> float:
    """k * alpha**2 * ln(n / k): above it m-Thresholding keeps every defective w.h.p."""
    return p.k * alpha(p.theta) ** 2 * math.log(p.n / p.k)


def info_lower_bound(p: ThresholdParams) -> float:
    """2k ln(n/k) / ln k, the counting bound on the number of tests."""
    if p.k < 2:
        raise DomainError("information bound needs k >= 2")
    return 2 * p.k * math.log(p.n / p.k) / math.log(p.k)


def info_threshold(p: ThresholdParams) -> float:
    """Leading order of the information-theoretic threshold; matches the lower bound."""
    return info_lower_bound(p)
