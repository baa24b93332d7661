"""
Iterative-Thresholding - Greedy residual selection.

Each round adds the item with the largest residual score
<A_i, y - A 1_S> / |A_i| and removes its column from the residual.
"""

from __future__ import annotations

import numpy as np

from ..core.bitmatrix import BitMatrix
from ..core.errors import InvalidParamsError
from ..core.model import ItemSet
from .scores import exact_argmax, residual_scores


def iterative_thresholding(
    A: BitMatrix,
    y: np.ndarray,
    k: int,
    incremental: bool = True,
) -> ItemSet:
    """
    Run k greedy rounds and return the chosen items.

    With `incremental` the residual correlations are updated by subtracting
    <A_c, A_i*> for the chosen column; otherwise they are recomputed.
    """
    if not 0 <= k <= A.cols:
        raise InvalidParamsError(f"need 0 <= k <= n, got k={k}, n={A.cols}")

    weights = A.column_weights
    den = np.where(weights == 0, 1, weights)
    chosen = np.zeros(A.cols, dtype=bool)
    picked: list[int] = []
    num = residual_scores(A, y, ItemSet()).num.copy()

    for _ in range(k):
        if not incremental:
            num = residual_scores(A, y, ItemSet.of(picked)).num.copy()
        masked = np.where(weights == 0, 0, num)
        best = exact_argmax(masked, den, chosen)
        chosen[best] = True
        picked.append(best)
        if incremental:
            num -= A.column_overlaps(best)

    return ItemSet.of(picked)
