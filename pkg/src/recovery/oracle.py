"""
Oracle - Brute-force enumeration of every weight-k solution of A z = y.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from ..core.bitmatrix import BitMatrix
from ..core.errors import InvalidParamsError, TooLargeError
from ..core.model import ItemSet

MAX_CANDIDATES = 10**7


def brute_force_qgt(
    A: BitMatrix,
    y: np.ndarray,
    k: int,
    limit: int = MAX_CANDIDATES,
) -> list[ItemSet]:
    """All weight-k sets T with outcome(A, T) = y, in lexicographic order."""
    n = A.cols
    if not 0 <= k <= n:
        raise InvalidParamsError(f"need 0 <= k <= n, got k={k}")
    total = math.comb(n, k)
    if total > limit:
        raise TooLargeError(f"C({n},{k}) = {total} candidates exceed the limit {limit}")

    target = np.asarray(y, dtype=np.int64)
    if target.shape != (A.rows,):
        raise InvalidParamsError(f"outcome vector must have length {A.rows}")
    if target.size and (int(target.min()) < 0 or int(target.max()) > k):
        return []

    dense = A.dense.astype(np.int64)
    chunk = max(1, (1 << 20) // max(1, A.rows * max(k, 1)))
    combos = itertools.combinations(range(n), k)
    found: list[ItemSet] = []
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            break
        index = np.asarray(block, dtype=np.int64).reshape(len(block), k)
        sums = dense[:, index].sum(axis=2)
        hits = np.flatnonzero(np.all(sums == target[:, None], axis=0))
        found.extend(ItemSet(tuple(int(i) for i in block[h])) for h in hits)
    return found
