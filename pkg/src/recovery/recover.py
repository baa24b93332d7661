"""
Recover - Full QGT recovery from a Subset Select output.

The system A|_S z = y is reduced once; binary assignments to the free
variables are enumerated in counter order (free columns ascending, bit b
of the counter pinning the b-th free column, the empty assignment first).
The first candidate that is 0/1 valued, has weight k and satisfies the
system over the integers is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field

from ..algorithms.base import SubsetSelector
from ..core.bitmatrix import BitMatrix
from ..core.errors import (
    FreeVariableBudgetExceededError,
    InvalidParamsError,
    NoBinarySolutionError,
)
from ..core.model import Instance, ItemSet
from ..linalg.field import ModP, FieldMode
from ..linalg.rref import RrefResult, rref, solve_pinned, verify_integer

logger = structlog.get_logger()


class RecoveryConfig(BaseModel):
    """Recovery knobs; the budget caps enumeration at 2**free_var_budget candidates."""

    model_config = ConfigDict(frozen=True)

    free_var_budget: int = Field(default=20, ge=0)
    field_mode: FieldMode = Field(default_factory=ModP)
    enumeration: Literal["binary_counter"] = "binary_counter"
    batch_size: int = Field(default=4096, ge=1)


@dataclass
class RecoveryReport:
    """Diagnostics of one recovery attempt."""

    solution: ItemSet | None
    free_var_count: int
    rank_deficit: int
    enumerated: int
    consistent: bool
    subset: ItemSet | None = None
    contains_defectives: bool | None = None
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "solution": list(self.solution) if self.solution is not None else None,
            "free_var_count": self.free_var_count,
            "rank_deficit": self.rank_deficit,
            "enumerated": self.enumerated,
            "consistent": self.consistent,
            "subset_size": len(self.subset) if self.subset is not None else None,
            "contains_defectives": self.contains_defectives,
            "warnings": list(self.warnings),
        }


def recover_from_submatrix(
    A: BitMatrix,
    y: np.ndarray,
    k: int,
    S: ItemSet,
    cfg: RecoveryConfig | None = None,
) -> RecoveryReport:
    """
    Recover a weight-k binary solution supported on S.

    Raises:
        FreeVariableBudgetExceededError: more free variables than the budget.
        NoBinarySolutionError: inconsistent system or no accepted candidate.
    """
    cfg = cfg or RecoveryConfig()
    if len(S) == 0:
        raise InvalidParamsError("recovery needs a nonempty subset")
    outcomes = np.asarray(y, dtype=np.int64)

    sub = A.select_columns(S)
    reduced = rref(sub, outcomes, cfg.field_mode)
    report = RecoveryReport(
        solution=None,
        free_var_count=len(reduced.free_cols),
        rank_deficit=len(S) - reduced.rank,
        enumerated=0,
        consistent=reduced.consistent,
    )
    if len(S) > A.rows:
        report.warnings.append(f"|S|={len(S)} exceeds m={A.rows}")
        logger.warning("Subset larger than test count", subset=len(S), m=A.rows)

    if not reduced.consistent:
        raise NoBinarySolutionError("system restricted to S is inconsistent", report=report)
    if report.free_var_count > cfg.free_var_budget:
        raise FreeVariableBudgetExceededError(
            f"{report.free_var_count} free variables exceed budget {cfg.free_var_budget}",
            report=report,
            budget=cfg.free_var_budget,
        )

    mode = reduced.mode
    if isinstance(mode, ModP) and mode.fast:
        hit = _enumerate_batched(reduced, sub, outcomes, k, cfg.batch_size, report)
    else:
        hit = _enumerate_generic(reduced, sub, outcomes, k, report)

    if hit is None:
        raise NoBinarySolutionError(
            f"no weight-{k} binary solution inside S after {report.enumerated} candidates",
            report=report,
        )
    report.solution = ItemSet.of(S.items[i] for i in np.flatnonzero(hit))
    logger.debug(
        "Recovery completed",
        free_vars=report.free_var_count,
        rank_deficit=report.rank_deficit,
        enumerated=report.enumerated,
    )
    return report


def _enumerate_batched(
    reduced: RrefResult,
    sub: np.ndarray,
    y: np.ndarray,
    k: int,
    batch_size: int,
    report: RecoveryReport,
) -> np.ndarray | None:
    """Counter-order search with vectorised pivot back-substitution mod p."""
    p = reduced.mode.prime  # type: ignore[union-attr]
    free = np.asarray(reduced.free_cols, dtype=np.int64)
    pivots = np.asarray(reduced.pivot_cols, dtype=np.int64)
    r = reduced.rank
    coupling = reduced.reduced[:r][:, free].astype(np.int64)
    base = reduced.rhs[:r].astype(np.int64)
    shifts = np.arange(free.size, dtype=np.int64)
    total = 1 << free.size

    for start in range(0, total, batch_size):
        counters = np.arange(start, min(total, start + batch_size), dtype=np.int64)
        bits = (counters[:, None] >> shifts) & 1
        values = np.mod(base[None, :] - bits @ coupling.T, p)
        binary = np.all(values <= 1, axis=1)
        weight = values.sum(axis=1) + bits.sum(axis=1)
        for row in np.flatnonzero(binary & (weight == k)):
            z = np.zeros(sub.shape[1], dtype=np.int64)
            z[pivots] = values[row]
            z[free] = bits[row]
            if verify_integer(sub, z, y):
                report.enumerated = int(counters[row]) + 1
                return z
        report.enumerated = int(counters[-1]) + 1
    return None


def _enumerate_generic(
    reduced: RrefResult,
    sub: np.ndarray,
    y: np.ndarray,
    k: int,
    report: RecoveryReport,
) -> np.ndarray | None:
    """Counter-order search through solve_pinned, for exact or wide-prime fields."""
    free = reduced.free_cols
    for counter in range(1 << len(free)):
        pin = {f: (counter >> b) & 1 for b, f in enumerate(free)}
        z = solve_pinned(reduced, pin)
        report.enumerated = counter + 1
        if not all(v == 0 or v == 1 for v in z):
            continue
        lifted = np.asarray([int(v) for v in z], dtype=np.int64)
        if int(lifted.sum()) == k and verify_integer(sub, lifted, y):
            return lifted
    return None


def solve_qgt(
    inst: Instance,
    subset_alg: SubsetSelector,
    cfg: RecoveryConfig | None = None,
    k: int | None = None,
) -> RecoveryReport:
    """
    Subset Select followed by recover_from_submatrix.

    `k` overrides the stored defective count (for example an estimate).
    The report records the subset and whether it contains every defective.
    """
    k_used = inst.k if k is None else k
    subset = subset_alg(inst.matrix, inst.outcome, k_used)
    contains = inst.defectives.issubset(subset)
    try:
        report = recover_from_submatrix(inst.matrix, inst.outcome, k_used, subset, cfg)
    except (NoBinarySolutionError, FreeVariableBudgetExceededError) as e:
        if e.report is not None:
            e.report.subset = subset
            e.report.contains_defectives = contains
        raise
    report.subset = subset
    report.contains_defectives = contains
    return report
