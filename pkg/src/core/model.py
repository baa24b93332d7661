"""
Model - QGT instances and their seeded generation.

An instance is a Bernoulli(1/2) test matrix A, a planted weight-k defective
set D (the support of x) and the outcome vector y = Ax. Items are 0-indexed.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np
import structlog
from pydantic import BaseModel, Field, ValidationError, model_validator

from .bitmatrix import BitMatrix
from .errors import IndexOutOfRangeError, InvalidParamsError, InvalidSpecError, OutcomeOutOfRangeError
from .rng import MASK64, SplitMix64

logger = structlog.get_logger()


@dataclass(frozen=True)
class ItemSet:
    """Strictly increasing tuple of item indices."""

    items: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for a, b in zip(self.items, self.items[1:]):
            if a >= b:
                raise InvalidParamsError("ItemSet indices must be strictly increasing")
        if self.items and self.items[0] < 0:
            raise IndexOutOfRangeError("ItemSet indices must be non-negative")

    @classmethod
    def of(cls, items: Iterable[int], n: int | None = None) -> ItemSet:
        """Sort and de-duplicate; optionally bound-check against n."""
        values = tuple(sorted({int(i) for i in items}))
        if n is not None and values and (values[0] < 0 or values[-1] >= n):
            raise IndexOutOfRangeError(f"item index outside [0, {n})")
        return cls(values)

    @classmethod
    def full(cls, n: int) -> ItemSet:
        return cls(tuple(range(n)))

    def __iter__(self) -> Iterator[int]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, item: object) -> bool:
        return item in set(self.items)

    def issubset(self, other: ItemSet | Iterable[int]) -> bool:
        return set(self.items) <= set(other)

    def union(self, other: Iterable[int]) -> ItemSet:
        return ItemSet.of((*self.items, *other))

    def indicator(self, n: int) -> np.ndarray:
        x = np.zeros(n, dtype=np.int64)
        if self.items:
            if self.items[-1] >= n:
                raise IndexOutOfRangeError(f"item {self.items[-1]} outside [0, {n})")
            x[list(self.items)] = 1
        return x

    def as_array(self) -> np.ndarray:
        return np.asarray(self.items, dtype=np.int64)


def _freeze(vector: np.ndarray) -> np.ndarray:
    vector.setflags(write=False)
    return vector


@dataclass(frozen=True, eq=False)
class Instance:
    """A full QGT problem instance."""

    matrix: BitMatrix
    n: int
    k: int
    m: int
    defectives: ItemSet
    outcome: np.ndarray = field(repr=False)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.matrix.shape != (self.m, self.n):
            raise InvalidParamsError("matrix shape does not match (m, n)")
        if len(self.defectives) != self.k:
            raise InvalidParamsError("|defectives| must equal k")
        if self.defectives.items and self.defectives.items[-1] >= self.n:
            raise IndexOutOfRangeError("defective index outside [0, n)")
        _freeze(self.outcome)

    @property
    def x(self) -> np.ndarray:
        """Indicator vector of the defective set."""
        return self.defectives.indicator(self.n)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            (self.n, self.k, self.m, self.seed) == (other.n, other.k, other.m, other.seed)
            and self.matrix == other.matrix
            and self.defectives == other.defectives
            and np.array_equal(self.outcome, other.outcome)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.k, self.m, self.seed, self.matrix, self.defectives))


def validate_params(n: int, k: int, m: int) -> None:
    if k <= 0 or k >= n:
        raise InvalidParamsError(f"need 0 < k < n, got k={k}, n={n}")
    if m <= 0:
        raise InvalidParamsError(f"need m >= 1, got m={m}")


def generate_instance(n: int, k: int, m: int, seed: int) -> Instance:
    """
    Generate a seeded instance.

    The first ceil(m*n/64) stream words fill A row-major, one bit per entry;
    the following words drive a partial Fisher-Yates shuffle of [0, n) whose
    first k slots are the defectives.
    """
    validate_params(n, k, m)
    stream = SplitMix64(seed)
    matrix = BitMatrix.from_bits(m, n, stream.bits(m * n))

    perm = list(range(n))
    for i in range(k):
        j = i + stream.below(n - i)
        perm[i], perm[j] = perm[j], perm[i]
    defectives = ItemSet.of(perm[:k])

    y = outcome(matrix, defectives)
    logger.debug("Instance generated", n=n, k=k, m=m, seed=seed)
    return Instance(matrix=matrix, n=n, k=k, m=m, defectives=defectives, outcome=y, seed=seed & MASK64)


def outcome(matrix: BitMatrix, x_set: ItemSet | Iterable[int]) -> np.ndarray:
    """y_j = sum over i in x_set of A[j, i], via popcount of masked rows."""
    items = x_set if isinstance(x_set, ItemSet) else ItemSet.of(x_set)
    if items.items and (items.items[0] < 0 or items.items[-1] >= matrix.cols):
        raise IndexOutOfRangeError(f"item index outside [0, {matrix.cols})")
    return matrix.masked_row_sums(items.indicator(matrix.cols))


def check_outcome_range(y: np.ndarray, k: int) -> None:
    if y.size and (int(y.min()) < 0 or int(y.max()) > k):
        raise OutcomeOutOfRangeError(f"outcomes must lie in [0, {k}]")


def complementary(matrix: BitMatrix, y: np.ndarray, k: int) -> tuple[BitMatrix, np.ndarray]:
    """The complementary tests (1 - A) and their outcomes k - y."""
    y = np.asarray(y, dtype=np.int64)
    if y.shape != (matrix.rows,):
        raise InvalidParamsError("outcome length must equal the number of tests")
    check_outcome_range(y, k)
    return matrix.complement(), k - y


def estimate_k(y: Iterable[int]) -> int:
    """round(2 * mean(y)) with ties to even; E[y_j] = k/2 under Bernoulli(1/2) tests."""
    values = [int(v) for v in y]
    if not values:
        raise InvalidParamsError("estimate_k needs at least one outcome")
    return round(Fraction(2 * sum(values), len(values)))


# -- JSON -----------------------------------------------------------------------


class InstanceDocument(BaseModel):
    """Wire form of an Instance."""

    n: int = Field(gt=1)
    k: int = Field(gt=0)
    m: int = Field(gt=0)
    seed: int = Field(ge=0, le=MASK64)
    matrix: list[str]
    defectives: list[int]
    outcome: list[int]

    @model_validator(mode="after")
    def _shape(self) -> InstanceDocument:
        if len(self.matrix) != self.m:
            raise ValueError("matrix must have m hex rows")
        if len(self.outcome) != self.m:
            raise ValueError("outcome must have m entries")
        if len(self.defectives) != self.k:
            raise ValueError("defectives must have k entries")
        if sorted(set(self.defectives)) != self.defectives:
            raise ValueError("defectives must be strictly increasing")
        return self


def instance_to_dict(inst: Instance) -> dict[str, Any]:
    return InstanceDocument(
        n=inst.n,
        k=inst.k,
        m=inst.m,
        seed=inst.seed,
        matrix=inst.matrix.to_hex_rows(),
        defectives=list(inst.defectives),
        outcome=[int(v) for v in inst.outcome],
    ).model_dump()


def instance_to_json(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst))


def instance_from_dict(data: dict[str, Any]) -> Instance:
    try:
        doc = InstanceDocument.model_validate(data)
        matrix = BitMatrix.from_hex_rows(doc.matrix, doc.n)
    except (ValidationError, ValueError) as e:
        raise InvalidSpecError(f"invalid instance document: {e}") from e

    defectives = ItemSet.of(doc.defectives, doc.n)
    y = np.asarray(doc.outcome, dtype=np.int64)
    if not np.array_equal(outcome(matrix, defectives), y):
        raise InvalidSpecError("stored outcome does not equal A x")
    return Instance(matrix=matrix, n=doc.n, k=doc.k, m=doc.m, defectives=defectives, outcome=y, seed=doc.seed)


def instance_from_json(text: str) -> Instance:
    return instance_from_dict(json.loads(text))
