"""
Scores - Exact per-item scores and the top-t selection rule.

All scores are integer ratios num/den with den > 0, evaluated by popcount
kernels on the packed matrix. Comparison is exact; ties go to the lower index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..core.bitmatrix import BitMatrix
from ..core.errors import IndexOutOfRangeError, InvalidParamsError, NotEnoughItemsError, OutcomeOutOfRangeError
from ..core.model import ItemSet


@dataclass(frozen=True, eq=False)
class ScoreVector:
    num: np.ndarray
    den: np.ndarray

    def __post_init__(self) -> None:
        if self.num.shape != self.den.shape or self.num.ndim != 1:
            raise InvalidParamsError("numerator and denominator must be equal-length vectors")
        if self.den.size and int(self.den.min()) <= 0:
            raise InvalidParamsError("score denominators must be positive")

    @classmethod
    def integers(cls, values: np.ndarray) -> ScoreVector:
        num = np.asarray(values, dtype=np.int64)
        return cls(num=num, den=np.ones_like(num))

    @classmethod
    def ratios(cls, num: np.ndarray, den: np.ndarray) -> ScoreVector:
        """Build num/den, mapping zero denominators to the score 0/1."""
        num = np.asarray(num, dtype=np.int64).copy()
        den = np.asarray(den, dtype=np.int64).copy()
        empty = den == 0
        num[empty] = 0
        den[empty] = 1
        return cls(num=num, den=den)

    def __len__(self) -> int:
        return int(self.num.size)

    @property
    def is_integral(self) -> bool:
        return bool(np.all(self.den == 1))

    def value(self, i: int) -> Fraction:
        return Fraction(int(self.num[i]), int(self.den[i]))

    def as_fractions(self) -> list[Fraction]:
        return [Fraction(int(a), int(b)) for a, b in zip(self.num, self.den)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScoreVector):
            return NotImplemented
        return len(self) == len(other) and bool(
            np.all(self.num * other.den == other.num * self.den)
        )

    __hash__ = None  # type: ignore[assignment]


def _outcomes(A: BitMatrix, y: np.ndarray) -> np.ndarray:
    values = np.asarray(y, dtype=np.int64)
    if values.shape != (A.rows,):
        raise InvalidParamsError(f"outcome vector must have length {A.rows}")
    return values


def psi_scores(A: BitMatrix, y: np.ndarray, k: int) -> ScoreVector:
    """
    psi_i = sum_j A_ji y_j + (1 - A_ji)(k - y_j).

    Evaluated on both the tests and the complementary tests, then checked
    against the closed form sum_j (2 A_ji - 1) y_j + k (m - |A_i|).
    """
    values = _outcomes(A, y)
    if values.size and (int(values.min()) < 0 or int(values.max()) > k):
        raise OutcomeOutOfRangeError(f"outcomes must lie in [0, {k}]")
    complement = k - values
    direct = A.weighted_column_sums(values) + int(complement.sum()) - A.weighted_column_sums(complement)
    closed = psi_closed_form(A, values, k)
    if not np.array_equal(direct, closed):
        raise RuntimeError("psi evaluation orders disagree")
    return ScoreVector.integers(direct)


def psi_closed_form(A: BitMatrix, y: np.ndarray, k: int) -> np.ndarray:
    values = _outcomes(A, y)
    return 2 * A.weighted_column_sums(values) - int(values.sum()) + k * (A.rows - A.column_weights)


def phi_basic_scores(A: BitMatrix, y: np.ndarray) -> ScoreVector:
    """phi_i = <A_i, y> / |A_i|; zero-weight columns score 0."""
    return ScoreVector.ratios(A.weighted_column_sums(_outcomes(A, y)), A.column_weights)


def residual(A: BitMatrix, y: np.ndarray, S: ItemSet) -> np.ndarray:
    """r = y - A 1_S as signed integers."""
    return _outcomes(A, y) - A.masked_row_sums(S.indicator(A.cols))


def residual_scores(A: BitMatrix, y: np.ndarray, S: ItemSet) -> ScoreVector:
    """<A_i, y - A 1_S> / |A_i|; zero-weight columns score 0."""
    return ScoreVector.ratios(A.weighted_column_sums(residual(A, y, S)), A.column_weights)


def top_t(scores: ScoreVector, t: int, exclude: ItemSet = ItemSet()) -> ItemSet:
    """The t highest-scoring items outside `exclude`, ties to the lower index."""
    n = len(scores)
    if t < 0:
        raise InvalidParamsError("t must be non-negative")
    blocked = np.zeros(n, dtype=bool)
    if len(exclude):
        if exclude.items[-1] >= n:
            raise IndexOutOfRangeError(f"excluded item {exclude.items[-1]} outside [0, {n})")
        blocked[exclude.as_array()] = True
    candidates = np.flatnonzero(~blocked)
    if t > candidates.size:
        raise NotEnoughItemsError(f"asked for {t} items, only {candidates.size} available")
    if t == 0:
        return ItemSet()

    if scores.is_integral:
        # lexsort: last key is primary
        order = np.lexsort((candidates, -scores.num[candidates]))
        return ItemSet.of(candidates[order[:t]].tolist())

    ranked = sorted(
        candidates.tolist(),
        key=lambda i: (-Fraction(int(scores.num[i]), int(scores.den[i])), i),
    )
    return ItemSet.of(ranked[:t])


def exact_argmax(num: np.ndarray, den: np.ndarray, blocked: np.ndarray) -> int:
    """
    Index of the largest num/den among unblocked entries, lowest index on ties.

    A float pass narrows the field; the survivors are compared as Fractions.
    """
    open_idx = np.flatnonzero(~blocked)
    if open_idx.size == 0:
        raise NotEnoughItemsError("no items left to choose from")
    approx = num[open_idx] / den[open_idx]
    best = approx.max()
    slack = 1e-9 * max(1.0, abs(float(best)))
    near = open_idx[approx >= best - slack]
    return min(near.tolist(), key=lambda i: (-Fraction(int(num[i]), int(den[i])), i))
