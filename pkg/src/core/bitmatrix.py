"""
BitMatrix - Bit-packed m x n binary test matrix.

Rows are packed little-endian: entry (j, i) is bit (i mod 8) of byte i // 8
of row j. Trailing bits of the last byte are always zero, so equality is
byte equality. A column-packed copy is kept for the popcount kernels.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import IndexOutOfRangeError, InvalidParamsError


def _freeze(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _pack(dense: np.ndarray) -> np.ndarray:
    return np.packbits(dense.astype(np.uint8, copy=False), axis=1, bitorder="little")


@dataclass(frozen=True, eq=False)
class BitMatrix:
    """Immutable bit-packed binary matrix."""

    rows: int
    cols: int
    packed: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise InvalidParamsError(f"BitMatrix needs rows >= 1 and cols >= 1, got {self.rows}x{self.cols}")
        width = (self.cols + 7) // 8
        if self.packed.shape != (self.rows, width) or self.packed.dtype != np.uint8:
            raise InvalidParamsError("packed storage has the wrong shape or dtype")
        spare = width * 8 - self.cols
        if spare and np.any(self.packed[:, -1] >> (8 - spare)):
            raise InvalidParamsError("non-canonical packing: trailing bits must be zero")
        _freeze(self.packed)

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_dense(cls, dense: np.ndarray | Sequence[Sequence[int]]) -> BitMatrix:
        array = np.asarray(dense)
        if array.ndim != 2:
            raise InvalidParamsError("dense matrix must be two-dimensional")
        if array.size and not np.isin(array, (0, 1)).all():
            raise InvalidParamsError("dense matrix entries must be 0 or 1")
        rows, cols = array.shape
        return cls(rows=rows, cols=cols, packed=_pack(array))

    @classmethod
    def from_bits(cls, rows: int, cols: int, bits: np.ndarray) -> BitMatrix:
        """Build from a flat row-major bit stream of length rows * cols."""
        return cls.from_dense(np.asarray(bits, dtype=np.uint8).reshape(rows, cols))

    @classmethod
    def ones(cls, rows: int, cols: int) -> BitMatrix:
        return cls.from_dense(np.ones((rows, cols), dtype=np.uint8))

    # -- views ----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @cached_property
    def dense(self) -> np.ndarray:
        """Read-only uint8 array of shape (rows, cols)."""
        unpacked = np.unpackbits(self.packed, axis=1, count=self.cols, bitorder="little")
        return _freeze(unpacked)

    @cached_property
    def packed_columns(self) -> np.ndarray:
        """Column-major packing: shape (cols, ceil(rows / 8))."""
        return _freeze(_pack(self.dense.T))

    def to_dense(self) -> np.ndarray:
        return self.dense.copy()

    def entry(self, j: int, i: int) -> int:
        self._check_row(j)
        self._check_col(i)
        return int((self.packed[j, i >> 3] >> (i & 7)) & 1)

    def row(self, j: int) -> np.ndarray:
        self._check_row(j)
        return self.dense[j]

    def column(self, i: int) -> np.ndarray:
        self._check_col(i)
        return self.dense[:, i]

    def head_rows(self, count: int) -> BitMatrix:
        """The sub-matrix of the first `count` rows."""
        if not 1 <= count <= self.rows:
            raise InvalidParamsError(f"cannot take {count} of {self.rows} rows")
        return BitMatrix(rows=count, cols=self.cols, packed=self.packed[:count].copy())

    def select_columns(self, items: Iterable[int]) -> np.ndarray:
        """Dense int64 sub-matrix A|_S, columns in the given order."""
        index = np.fromiter(items, dtype=np.int64)
        if index.size:
            self._check_col(int(index.min()))
            self._check_col(int(index.max()))
        return self.dense[:, index].astype(np.int64)

    def complement(self) -> BitMatrix:
        """The matrix 1 - A, with canonical trailing bits."""
        return BitMatrix.from_dense(1 - self.dense)

    # -- popcount kernels -----------------------------------------------------

    @cached_property
    def column_weights(self) -> np.ndarray:
        """||A_i||_1 for every column."""
        return _freeze(np.bitwise_count(self.packed_columns).sum(axis=1, dtype=np.int64))

    def masked_row_sums(self, mask: np.ndarray) -> np.ndarray:
        """popcount(row_j AND mask) for every row; mask is a 0/1 vector of length cols."""
        packed_mask = np.packbits(np.asarray(mask, dtype=np.uint8), bitorder="little")
        return np.bitwise_count(self.packed & packed_mask).sum(axis=1, dtype=np.int64)

    def weighted_column_sums(self, weights: np.ndarray) -> np.ndarray:
        """
        Exact <A_i, w> for every column i and an integer weight vector w over rows.

        w is split into sign and binary bit-planes; each plane contributes
        2**b * popcount(column AND plane).
        """
        w = np.asarray(weights, dtype=np.int64)
        if w.shape != (self.rows,):
            raise InvalidParamsError(f"weights must have length {self.rows}")
        total = np.zeros(self.cols, dtype=np.int64)
        for sign, part in ((1, np.maximum(w, 0)), (-1, np.maximum(-w, 0))):
            plane = 0
            while part.any():
                bits = (part & 1).astype(np.uint8)
                if bits.any():
                    packed_plane = np.packbits(bits, bitorder="little")
                    hits = np.bitwise_count(self.packed_columns & packed_plane).sum(axis=1, dtype=np.int64)
                    total += sign * (hits << plane)
                part = part >> 1
                plane += 1
        return total

    def column_overlaps(self, i: int) -> np.ndarray:
        """<A_c, A_i> for every column c."""
        self._check_col(i)
        return np.bitwise_count(self.packed_columns & self.packed_columns[i]).sum(axis=1, dtype=np.int64)

    # -- equality / hex -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.packed, other.packed)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.packed.tobytes()))

    def to_hex_rows(self) -> list[str]:
        """Lowercase hex per row: bit i is bit (i mod 4) of digit i // 4."""
        digits = (self.cols + 3) // 4
        out = []
        for row in self.packed:
            text = "".join(f"{b & 0xF:x}{b >> 4:x}" for b in row.tolist())
            out.append(text[:digits])
        return out

    @classmethod
    def from_hex_rows(cls, hex_rows: Sequence[str], cols: int) -> BitMatrix:
        digits = (cols + 3) // 4
        width = (cols + 7) // 8
        packed = np.zeros((len(hex_rows), width), dtype=np.uint8)
        for j, text in enumerate(hex_rows):
            if len(text) != digits:
                raise InvalidParamsError(f"row {j} has {len(text)} hex digits, expected {digits}")
            nibbles = [int(ch, 16) for ch in text.lower()]
            if len(nibbles) % 2:
                nibbles.append(0)
            packed[j] = [lo | (hi << 4) for lo, hi in zip(nibbles[0::2], nibbles[1::2])]
        return cls(rows=len(hex_rows), cols=cols, packed=packed)

    def _check_row(self, j: int) -> None:
        if not 0 <= j < self.rows:
            raise IndexOutOfRangeError(f"row {j} outside [0, {self.rows})")

    def _check_col(self, i: int) -> None:
        if not 0 <= i < self.cols:
            raise IndexOutOfRangeError(f"column {i} outside [0, {self.cols})")
