"""
RREF - Exact reduced row echelon form, rank and pinned solving.

Mod-p elimination runs right-looking over column panels: pivots of a panel
are found on a small copy, then the whole trailing block is updated with one
field matmul. Rational elimination is fraction-free Gauss-Jordan on Python
integers. Both return the unique RREF of the augmented system [M | v].
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from ..core.errors import InconsistentSystemError, InvalidParamsError, MissingPinError
from .field import DEFAULT_FIELD, MAX_PANEL, ExactRational, ModP

FieldValue = int | Fraction


@dataclass(frozen=True, eq=False)
class RrefResult:
    """Reduced system (B | v) with pivot and free column bookkeeping."""

    reduced: np.ndarray
    rhs: np.ndarray
    pivot_cols: tuple[int, ...]
    free_cols: tuple[int, ...]
    consistent: bool
    mode: ModP | ExactRational

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.reduced.shape  # type: ignore[return-value]

    def satisfied_by(self, z: Sequence[FieldValue] | np.ndarray) -> bool:
        """Whether B z = v holds row by row in the result's field."""
        modp = isinstance(self.mode, ModP)
        values = [int(x) if modp else Fraction(x) for x in z]
        for q in range(self.reduced.shape[0]):
            row = [int(x) if modp else x for x in self.reduced[q]]
            diff = sum((b * x for b, x in zip(row, values)), start=0) - self.rhs[q]
            if modp:
                if int(diff) % self.mode.prime:  # type: ignore[union-attr]
                    return False
            elif diff != 0:
                return False
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RrefResult):
            return NotImplemented
        return (
            self.pivot_cols == other.pivot_cols
            and self.free_cols == other.free_cols
            and self.consistent == other.consistent
            and self.mode == other.mode
            and np.array_equal(self.reduced, other.reduced)
            and np.array_equal(self.rhs, other.rhs)
        )

    __hash__ = None  # type: ignore[assignment]


def _as_matrix(M: Any) -> np.ndarray:
    array = np.asarray(M)
    if array.ndim != 2:
        raise InvalidParamsError("matrix must be two-dimensional")
    return array


def rref(M: Any, v: Any = None, mode: ModP | ExactRational = DEFAULT_FIELD) -> RrefResult:
    """
    Reduce [M | v] over the chosen field.

    Pivots are taken column by column, each at the first remaining row
    (top-down) with a nonzero entry. If the system is inconsistent the rhs
    column becomes a pivot column of the augmented form.
    """
    matrix = _as_matrix(M)
    rows, cols = matrix.shape
    rhs = np.zeros(rows, dtype=np.int64) if v is None else np.asarray(v)
    if rhs.shape != (rows,):
        raise InvalidParamsError(f"rhs must have length {rows}, got shape {rhs.shape}")
    if isinstance(mode, ExactRational):
        mode.check_dimension(rows, cols)
        return _rref_exact(matrix, rhs, mode)
    return _rref_modp(matrix, rhs, mode)


def rank(M: Any, mode: ModP | ExactRational = DEFAULT_FIELD) -> int:
    """
    Rank of M over the chosen field.

    The mod-p rank never exceeds the rational rank; for random binary
    matrices the two agree with high probability.
    """
    return rref(M, None, mode).rank


# -- mod p ----------------------------------------------------------------------


def _panel_pivots(panel: np.ndarray, field: ModP) -> tuple[list[int], list[int]]:
    """Pivot (row, column) pairs of a panel, in column order, without row swaps."""
    Y = panel.copy()
    p = field.prime
    taken = np.zeros(Y.shape[0], dtype=bool)
    pivot_rows: list[int] = []
    pivot_cols: list[int] = []
    for q in range(Y.shape[1]):
        candidates = np.flatnonzero((Y[:, q] != 0) & ~taken)
        if candidates.size == 0:
            continue
        r = int(candidates[0])
        Y[r] = (Y[r] * field.inverse(Y[r, q])) % p
        taken[r] = True
        column = Y[:, q].copy()
        column[taken] = 0
        hit = np.flatnonzero(column)
        if hit.size:
            Y[hit] = (Y[hit] - np.outer(column[hit], Y[r])) % p
        pivot_rows.append(r)
        pivot_cols.append(q)
    return pivot_rows, pivot_cols


def _inverse_modp(G: np.ndarray, field: ModP) -> np.ndarray:
    s = G.shape[0]
    p = field.prime
    aug = np.concatenate([G.copy(), np.identity(s, dtype=np.int64).astype(field.dtype)], axis=1)
    for c in range(s):
        r = c + int(np.flatnonzero(aug[c:, c] != 0)[0])
        if r != c:
            aug[[c, r]] = aug[[r, c]]
        aug[c] = (aug[c] * field.inverse(aug[c, c])) % p
        column = aug[:, c].copy()
        column[c] = 0
        hit = np.flatnonzero(column)
        if hit.size:
            aug[hit] = (aug[hit] - np.outer(column[hit], aug[c])) % p
    return aug[:, s:]


def _rref_modp(matrix: np.ndarray, v: np.ndarray, field: ModP) -> RrefResult:
    if matrix.dtype == object or v.dtype == object:
        X = field.reduce(np.column_stack([matrix.astype(object), v.astype(object)]))
    else:
        X = field.reduce(np.column_stack([matrix.astype(np.int64), v.astype(np.int64)]))
    rows, width = X.shape
    cols = width - 1
    p = field.prime

    used = np.zeros(rows, dtype=bool)
    pivot_rows: list[int] = []
    pivot_cols: list[int] = []
    for c0 in range(0, cols, MAX_PANEL):
        open_rows = np.flatnonzero(~used)
        if open_rows.size == 0:
            break
        c1 = min(c0 + MAX_PANEL, cols)
        local_rows, local_cols = _panel_pivots(X[open_rows, c0:c1], field)
        if not local_rows:
            continue
        Rp = open_rows[local_rows]
        Cp = c0 + np.asarray(local_cols, dtype=np.int64)

        G_inv = _inverse_modp(X[np.ix_(Rp, Cp)], field)
        X[Rp, c0:] = field.matmul(G_inv, X[Rp, c0:])

        others = np.flatnonzero(~np.isin(np.arange(rows), Rp))
        if others.size:
            factors = X[np.ix_(others, Cp)]
            touched = others[np.any(factors != 0, axis=1)]
            if touched.size:
                update = field.matmul(X[np.ix_(touched, Cp)], X[Rp, c0:])
                X[touched, c0:] = (X[touched, c0:] - update) % p

        used[Rp] = True
        pivot_rows.extend(int(r) for r in Rp)
        pivot_cols.extend(int(c) for c in Cp)

    order = pivot_rows + [int(r) for r in np.flatnonzero(~used)]
    X = X[order]
    reduced = X[:, :cols].copy()
    rhs = X[:, cols].copy()
    consistent = _canonical_rhs(rhs, len(pivot_cols))
    return RrefResult(
        reduced=reduced,
        rhs=rhs,
        pivot_cols=tuple(pivot_cols),
        free_cols=_free(cols, pivot_cols),
        consistent=consistent,
        mode=field,
    )


def _canonical_rhs(rhs: np.ndarray, rank_: int) -> bool:
    """Normalise the rhs column in place; returns consistency."""
    if not any(rhs[rank_:] != 0):
        return True
    rhs[:] = 0
    rhs[rank_] = 1
    return False


def _free(cols: int, pivot_cols: Sequence[int]) -> tuple[int, ...]:
    pivots = set(pivot_cols)
    return tuple(c for c in range(cols) if c not in pivots)


# -- exact rational -----------------------------------------------------------------


def _integer_row(values: Sequence[Any]) -> list[int]:
    """Scale a row of integers or Fractions to integers by the lcm of its denominators."""
    fractions = [x if isinstance(x, Fraction) else Fraction(int(x)) for x in values]
    scale = math.lcm(*(f.denominator for f in fractions)) if fractions else 1
    return [int(f * scale) for f in fractions]


def _rref_exact(matrix: np.ndarray, v: np.ndarray, mode: ExactRational) -> RrefResult:
    rows, cols = matrix.shape
    a = [_integer_row([*matrix[i].tolist(), v[i]]) for i in range(rows)]

    prev = 1
    used = [False] * rows
    pivot_rows: list[int] = []
    pivot_cols: list[int] = []
    for c in range(cols):
        r = next((i for i in range(rows) if not used[i] and a[i][c] != 0), None)
        if r is None:
            continue
        pv = a[r][c]
        pivot = a[r]
        for i in range(rows):
            if i == r:
                continue
            f = a[i][c]
            row = a[i]
            # Bareiss: exact division by the previous pivot.
            a[i] = [(pv * x - f * y) // prev for x, y in zip(row, pivot)]
        prev = pv
        used[r] = True
        pivot_rows.append(r)
        pivot_cols.append(c)

    order = pivot_rows + [i for i in range(rows) if not used[i]]
    reduced = np.empty((rows, cols), dtype=object)
    rhs = np.empty(rows, dtype=object)
    for out, i in enumerate(order):
        if out < len(pivot_cols):
            lead = a[i][pivot_cols[out]]
            reduced[out] = [Fraction(x, lead) for x in a[i][:cols]]
            rhs[out] = Fraction(a[i][cols], lead)
        else:
            reduced[out] = [Fraction(0)] * cols
            rhs[out] = Fraction(a[i][cols])

    consistent = _canonical_rhs(rhs, len(pivot_cols))
    if not consistent:
        rhs[:] = [Fraction(int(x)) for x in rhs]
    return RrefResult(
        reduced=reduced,
        rhs=rhs,
        pivot_cols=tuple(pivot_cols),
        free_cols=_free(cols, pivot_cols),
        consistent=consistent,
        mode=mode,
    )


# -- solving --------------------------------------------------------------------------


def solve_pinned(result: RrefResult, pin: Mapping[int, FieldValue]) -> np.ndarray:
    """
    The unique solution of the reduced system with every free variable pinned.

    Pivot variable of row q is rhs_q - sum over free f of B[q, f] * pin[f].
    """
    if not result.consistent:
        raise InconsistentSystemError("cannot solve an inconsistent system")
    missing = [f for f in result.free_cols if f not in pin]
    if missing:
        raise MissingPinError(f"free columns without a pin: {missing}")
    stray = sorted(set(pin) - set(result.free_cols))
    if stray:
        raise InvalidParamsError(f"pins on non-free columns: {stray}")

    cols = result.reduced.shape[1]
    modp = result.mode if isinstance(result.mode, ModP) else None
    z: list[FieldValue] = [0] * cols
    for f in result.free_cols:
        z[f] = int(pin[f]) % modp.prime if modp else Fraction(pin[f])
    for q, c in enumerate(result.pivot_cols):
        if modp:
            acc = int(result.rhs[q]) - sum(int(result.reduced[q, f]) * int(z[f]) for f in result.free_cols)
            z[c] = acc % modp.prime
        else:
            z[c] = result.rhs[q] - sum((result.reduced[q, f] * z[f] for f in result.free_cols), start=Fraction(0))

    if modp and modp.fast:
        return np.asarray(z, dtype=np.int64)
    return np.asarray(z, dtype=object)


def verify_integer(M: Any, z: Any, v: Any) -> bool:
    """True iff M z = v over the integers, with arbitrary-precision accumulation."""
    matrix = _as_matrix(M).astype(object)
    vector = np.asarray(z, dtype=object)
    target = np.asarray(v, dtype=object)
    if vector.shape != (matrix.shape[1],) or target.shape != (matrix.shape[0],):
        raise InvalidParamsError("dimension mismatch in verify_integer")
    if any(Fraction(x).denominator != 1 for x in vector):
        return False
    lifted = np.asarray([int(x) for x in vector], dtype=object)
    product = matrix.dot(lifted) if matrix.size else np.zeros(matrix.shape[0], dtype=object)
    return all(int(a) == int(b) for a, b in zip(product, target))
