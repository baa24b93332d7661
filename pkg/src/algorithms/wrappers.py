"""
Wrappers - Turn a QGT algorithm or a Subset Select algorithm into another one.

then_thresholding pads a size-k answer with the best residual items;
split_rows runs a selector on a prefix of the tests only.
"""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
import structlog

from ..core.bitmatrix import BitMatrix
from ..core.errors import BaseOutputTooLargeError, DegenerateSplitError, InvalidParamsError
from ..core.model import ItemSet
from .scores import residual_scores, top_t

logger = structlog.get_logger()

Selector = Callable[[BitMatrix, np.ndarray, int], ItemSet]


def then_thresholding(
    base: Selector,
    A: BitMatrix,
    y: np.ndarray,
    k: int,
    size: int | None = None,
) -> ItemSet:
    """
    S_dagger = base(A, y, k), then fill up to `size` (default m) items by
    residual score w.r.t. S_dagger, excluding S_dagger.
    """
    target = A.rows if size is None else size
    if target < k:
        raise InvalidParamsError(f"need m >= k, got m={target}, k={k}")
    base_out = base(A, y, k)
    if len(base_out) > k:
        raise BaseOutputTooLargeError(f"base returned {len(base_out)} items, more than k={k}")
    extra = min(target, A.cols) - len(base_out)
    fill = top_t(residual_scores(A, y, base_out), extra, exclude=base_out)
    return base_out.union(fill)


def split_point(m: int, n: int, c_prime: float) -> int:
    """m1 = max(1, m - ceil(c' sqrt(m ln n)))."""
    if c_prime < 0:
        raise InvalidParamsError("c_prime must be non-negative")
    return max(1, m - math.ceil(c_prime * math.sqrt(m * math.log(n))))


def split_rows(
    base: Selector,
    A: BitMatrix,
    y: np.ndarray,
    k: int,
    c_prime: float = 1.0,
) -> ItemSet:
    """Run `base` on the first m1 tests; the output depends on those rows only."""
    m1 = split_point(A.rows, A.cols, c_prime)
    if m1 < k:
        raise DegenerateSplitError(f"split leaves m1={m1} < k={k} tests")
    logger.debug("Split rows", m=A.rows, m1=m1, c_prime=c_prime)
    head = np.asarray(y, dtype=np.int64)[:m1]
    return base(A.head_rows(m1), head, k)
