"""
Runner - Seeded trial execution and m-sweeps.

Each (algorithm, m, trial) cell derives its own instance seed from the
master seed, so results do not depend on scheduling or worker count.
"""

from __future__ import annotations

import asyncio
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import pandas as pd
import structlog

from ..algorithms.registry import get_selector
from ..core.errors import FreeVariableBudgetExceededError, InvalidParamsError, NoBinarySolutionError
from ..core.model import Instance, generate_instance
from ..core.rng import derive_seed, stable_id
from ..linalg.rref import rank
from ..recovery.recover import RecoveryReport, recover_from_submatrix
from .spec import ExperimentSpec
from .stats import aggregate

logger = structlog.get_logger()


@dataclass
class TrialRecord:
    """Measurements of one trial."""

    algorithm: str
    n: int
    k: int
    m: int
    trial: int
    seed: int
    subset_size: int
    contains_defectives: bool
    rank_deficit: int
    free_vars: int
    recovered: bool
    wall_time_us: int = 0
    error: str | None = None

    def without_timing(self) -> dict[str, object]:
        values = dict(self.__dict__)
        values.pop("wall_time_us")
        return values


def trial_seed(spec: ExperimentSpec, algorithm: str, m: int, trial: int) -> int:
    """
    derive_seed(master_seed, algorithm component, m, trial).

    The algorithm component is a stable digest of the algorithm id. Paired
    specs use 0 instead, so every algorithm sees the same instance at a
    given (m, trial).
    """
    component = 0 if spec.paired else stable_id(algorithm)
    return derive_seed(spec.master_seed, component, m, trial)


def trial_instance(spec: ExperimentSpec, algorithm: str, m: int, trial: int) -> Instance:
    return generate_instance(spec.n, spec.k, m, trial_seed(spec, algorithm, m, trial))


def run_trial(spec: ExperimentSpec, algorithm: str, m: int, trial_idx: int) -> TrialRecord:
    """
    Run one seeded trial: select, measure the rank deficit, optionally recover.

    Recovery failures are recorded as recovered=False.
    """
    if not 0 <= trial_idx < spec.trials:
        raise InvalidParamsError(f"trial index {trial_idx} outside [0, {spec.trials})")

    selector = get_selector(algorithm)
    inst = trial_instance(spec, algorithm, m, trial_idx)
    start = time.perf_counter_ns()

    selection = selector.run(inst.matrix, inst.outcome, inst.k)
    subset = selection.items
    contains = selection.success and inst.defectives.issubset(subset)
    error = selection.errors[0] if selection.errors else None

    report: RecoveryReport | None = None
    deficit = 0
    if len(subset):
        if spec.run_recovery:
            try:
                report = recover_from_submatrix(inst.matrix, inst.outcome, inst.k, subset, spec.recovery)
            except (FreeVariableBudgetExceededError, NoBinarySolutionError) as e:
                report = e.report
                error = str(e)
            deficit = report.rank_deficit if report is not None else 0
        else:
            sub = inst.matrix.select_columns(subset)
            deficit = len(subset) - rank(sub, spec.recovery.field_mode)

    recovered = bool(report is not None and report.solution == inst.defectives)
    elapsed = (time.perf_counter_ns() - start) // 1000
    record = TrialRecord(
        algorithm=algorithm,
        n=spec.n,
        k=spec.k,
        m=m,
        trial=trial_idx,
        seed=inst.seed,
        subset_size=len(subset),
        contains_defectives=bool(contains),
        rank_deficit=deficit,
        free_vars=report.free_var_count if report is not None else deficit,
        recovered=recovered,
        wall_time_us=elapsed,
        error=error,
    )
    logger.debug(
        "Trial completed",
        algorithm=algorithm,
        m=m,
        trial=trial_idx,
        contains_defectives=record.contains_defectives,
        recovered=recovered,
    )
    return record


def _cells(spec: ExperimentSpec) -> list[tuple[str, int, int]]:
    return [(a, m, t) for a in spec.algorithms for m in spec.m_grid for t in range(spec.trials)]


async def sweep_records(spec: ExperimentSpec, workers: int = 1) -> list[TrialRecord]:
    """All trial records in (algorithm, m, trial) order."""
    cells = _cells(spec)
    logger.info("Sweep starting", name=spec.name, cells=len(cells), workers=workers)
    if workers <= 1:
        records = [run_trial(spec, a, m, t) for a, m, t in cells]
    else:
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [loop.run_in_executor(pool, run_trial, spec, a, m, t) for a, m, t in cells]
            records = list(await asyncio.gather(*futures))
    failures = sum(1 for r in records if r.error)
    logger.info("Sweep completed", name=spec.name, trials=len(records), with_errors=failures)
    return records


async def sweep(spec: ExperimentSpec, workers: int = 1) -> pd.DataFrame:
    """Aggregated rows, one per (algorithm, m)."""
    return aggregate(await sweep_records(spec, workers), spec)


def run_sweep(spec: ExperimentSpec, workers: int = 1) -> pd.DataFrame:
    """Blocking wrapper around sweep() for scripts and the CLI."""
    return asyncio.run(sweep(spec, workers))
