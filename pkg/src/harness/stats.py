"""
Stats - Success-rate intervals and sweep aggregation.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import asdict
from pathlib import Path
from typing import IO, TYPE_CHECKING

import pandas as pd
from scipy.stats import norm

from ..core.errors import InvalidParamsError

if TYPE_CHECKING:
    from .runner import TrialRecord
    from .spec import ExperimentSpec

CSV_COLUMNS = [
    "algorithm",
    "n",
    "k",
    "m",
    "trials",
    "subset_success_rate",
    "subset_ci_halfwidth",
    "full_recovery_rate",
    "mean_rank_deficit",
    "max_rank_deficit",
    "mean_free_vars",
    "master_seed",
]


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion as (center, half_width)."""
    if trials <= 0 or not 0 <= successes <= trials:
        raise InvalidParamsError(f"need 0 <= successes <= trials and trials > 0, got {successes}/{trials}")
    z = float(norm.ppf(1 - (1 - confidence) / 2))
    p_hat = successes / trials
    denom = 1 + z * z / trials
    center = (p_hat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p_hat * (1 - p_hat) / trials + z * z / (4 * trials * trials)) / denom
    return center, half


def records_frame(records: Sequence[TrialRecord]) -> pd.DataFrame:
    return pd.DataFrame([asdict(r) for r in records])


def aggregate(records: Sequence[TrialRecord], spec: ExperimentSpec) -> pd.DataFrame:
    """One row per (algorithm, m), in spec algorithm order and ascending m."""
    if not records:
        return pd.DataFrame(columns=CSV_COLUMNS)
    frame = records_frame(records)
    rows = []
    for algorithm in spec.algorithms:
        for m in spec.m_grid:
            cell = frame[(frame["algorithm"] == algorithm) & (frame["m"] == m)]
            if cell.empty:
                continue
            trials = len(cell)
            successes = int(cell["contains_defectives"].sum())
            rows.append(
                {
                    "algorithm": algorithm,
                    "n": spec.n,
                    "k": spec.k,
                    "m": m,
                    "trials": trials,
                    "subset_success_rate": successes / trials,
                    "subset_ci_halfwidth": wilson_interval(successes, trials)[1],
                    "full_recovery_rate": float(cell["recovered"].mean()),
                    "mean_rank_deficit": float(cell["rank_deficit"].mean()),
                    "max_rank_deficit": int(cell["rank_deficit"].max()),
                    "mean_free_vars": float(cell["free_vars"].mean()),
                    "master_seed": str(spec.master_seed),
                }
            )
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def empirical_threshold(
    rows: pd.DataFrame,
    algorithm: str,
    level: float = 0.9,
    column: str = "subset_success_rate",
) -> int | None:
    """Smallest grid m whose rate reaches `level`, or None."""
    cell = rows[(rows["algorithm"] == algorithm) & (rows[column] >= level)]
    if cell.empty:
        return None
    return int(cell["m"].min())


def write_csv(rows: pd.DataFrame, target: str | Path | IO[str]) -> None:
    rows.to_csv(target, index=False, float_format="%.6f", lineterminator="\n")
