"""
Registry - Algorithm ids and the selector objects behind them.

Ids: k_thresh, two_k_thresh, m_thresh, basic_thresh, all_items, iterative,
iterative_then_thresh, k_thresh_then_thresh, basic_then_thresh and
split_rows(<base>,<c_prime>) for any base id.
"""

from __future__ import annotations

import re
from collections.abc import Callable

import numpy as np

from ..core.bitmatrix import BitMatrix
from ..core.errors import InvalidSpecError
from ..core.model import ItemSet
from .base import SubsetSelector
from .iterative import iterative_thresholding
from .thresholding import TOP_2K, TOP_K, TOP_M, SelectionRule, all_items, basic_thresholding, threshold_select
from .wrappers import split_rows, then_thresholding


class ThresholdSelector(SubsetSelector):
    def __init__(self, algorithm_id: str, rule: SelectionRule) -> None:
        super().__init__(algorithm_id, name=f"{rule.kind.value} thresholding")
        self.rule = rule

    def select(self, A: BitMatrix, y: np.ndarray, k: int) -> ItemSet:
        return threshold_select(A, y, k, self.rule)


class FunctionSelector(SubsetSelector):
    """Wraps a plain (A, y, k) -> ItemSet function."""

    def __init__(self, algorithm_id: str, fn: Callable[[BitMatrix, np.ndarray, int], ItemSet]) -> None:
        super().__init__(algorithm_id, name=fn.__name__)
        self.fn = fn

    def select(self, A: BitMatrix, y: np.ndarray, k: int) -> ItemSet:
        return self.fn(A, y, k)


class ThenThresholdSelector(SubsetSelector):
    def __init__(self, algorithm_id: str, base: SubsetSelector) -> None:
        super().__init__(algorithm_id, name=f"{base.name} then thresholding")
        self.base = base

    def select(self, A: BitMatrix, y: np.ndarray, k: int) -> ItemSet:
        return then_thresholding(self.base, A, y, k)


class SplitRowsSelector(SubsetSelector):
    def __init__(self, base: SubsetSelector, c_prime: float = 1.0) -> None:
        super().__init__(f"split_rows({base.algorithm_id},{c_prime:g})", name=f"split {base.name}")
        self.base = base
        self.c_prime = c_prime

    def select(self, A: BitMatrix, y: np.ndarray, k: int) -> ItemSet:
        return split_rows(self.base, A, y, k, self.c_prime)


_SIMPLE: dict[str, Callable[[], SubsetSelector]] = {
    "k_thresh": lambda: ThresholdSelector("k_thresh", TOP_K),
    "two_k_thresh": lambda: ThresholdSelector("two_k_thresh", TOP_2K),
    "m_thresh": lambda: ThresholdSelector("m_thresh", TOP_M),
    "basic_thresh": lambda: FunctionSelector("basic_thresh", basic_thresholding),
    "all_items": lambda: FunctionSelector("all_items", all_items),
    "iterative": lambda: FunctionSelector("iterative", iterative_thresholding),
}

# QGT algorithms (size-k output) that can be padded by Then-Thresholding.
_THEN_BASES = {
    "iterative_then_thresh": "iterative",
    "k_thresh_then_thresh": "k_thresh",
    "basic_then_thresh": "basic_thresh",
}

_SPLIT = re.compile(r"^split_rows\(\s*(?P<base>[a-z0-9_]+)\s*(?:,\s*(?P<c>[-+0-9.eE]+)\s*)?\)$")


def available_algorithms() -> list[str]:
    return [*_SIMPLE, *_THEN_BASES, "split_rows(<base>,<c_prime>)"]


def get_selector(algorithm_id: str) -> SubsetSelector:
    """Parse an algorithm id into a selector."""
    key = algorithm_id.strip()
    if key in _SIMPLE:
        return _SIMPLE[key]()
    if key in _THEN_BASES:
        return ThenThresholdSelector(key, _SIMPLE[_THEN_BASES[key]]())

    match = _SPLIT.match(key)
    if match:
        base = get_selector(match.group("base"))
        c_prime = float(match.group("c")) if match.group("c") else 1.0
        if c_prime < 0:
            raise InvalidSpecError(f"c_prime must be non-negative in {algorithm_id!r}")
        return SplitRowsSelector(base, c_prime)

    raise InvalidSpecError(f"unknown algorithm {algorithm_id!r}; known: {available_algorithms()}")


def is_wrapper(algorithm_id: str) -> bool:
    """Wrappers need m >= k on every grid point."""
    key = algorithm_id.strip()
    return key in _THEN_BASES or key.startswith("split_rows")
