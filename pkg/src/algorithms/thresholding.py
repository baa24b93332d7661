"""
Thresholding - Keep the top items by psi (or phi for Basic-Thresholding).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..core.bitmatrix import BitMatrix
from ..core.errors import InvalidParamsError
from ..core.model import ItemSet
from .scores import phi_basic_scores, psi_scores, top_t


class RuleKind(str, Enum):
    TOP_K = "top_k"
    TOP_2K = "top_2k"
    TOP_M = "top_m"
    TOP_T = "top_t"


@dataclass(frozen=True)
class SelectionRule:
    """How many top-psi items to keep."""

    kind: RuleKind
    t: int | None = None

    def __post_init__(self) -> None:
        if (self.kind is RuleKind.TOP_T) != (self.t is not None):
            raise InvalidParamsError("only TopT carries an explicit size")
        if self.t is not None and self.t < 0:
            raise InvalidParamsError("TopT size must be non-negative")

    @classmethod
    def top_t(cls, t: int) -> SelectionRule:
        return cls(RuleKind.TOP_T, t)

    def resolve(self, n: int, k: int, m: int) -> int:
        """Number of items to keep on an instance of n items, k defectives, m tests."""
        if self.kind is RuleKind.TOP_K:
            return k
        if self.kind is RuleKind.TOP_2K:
            return min(2 * k, n)
        if self.kind is RuleKind.TOP_M:
            return min(m, n)
        return int(self.t)  # type: ignore[arg-type]


TOP_K = SelectionRule(RuleKind.TOP_K)
TOP_2K = SelectionRule(RuleKind.TOP_2K)
TOP_M = SelectionRule(RuleKind.TOP_M)


def threshold_select(A: BitMatrix, y: np.ndarray, k: int, rule: SelectionRule) -> ItemSet:
    size = rule.resolve(A.cols, k, A.rows)
    return top_t(psi_scores(A, y, k), size)


def basic_thresholding(A: BitMatrix, y: np.ndarray, k: int) -> ItemSet:
    """Top-k items by phi."""
    return top_t(phi_basic_scores(A, y), k)


def all_items(A: BitMatrix, y: np.ndarray, k: int) -> ItemSet:
    return ItemSet.full(A.cols)
