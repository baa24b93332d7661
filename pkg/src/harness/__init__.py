"""Experiment harness: sweeps, statistics and Monte Carlo validators."""

from ..rules.bound_rules import BoundCheckRanges, verify_bounds
from .montecarlo import mc_rank_lemma, mc_score_distribution, mc_singularity
from .runner import TrialRecord, run_sweep, run_trial, sweep, sweep_records, trial_seed
from .spec import ExperimentSpec, load_spec, parse_spec
from .stats import CSV_COLUMNS, aggregate, empirical_threshold, wilson_interval, write_csv

__all__ = [
    "CSV_COLUMNS",
    "BoundCheckRanges",
    "ExperimentSpec",
    "TrialRecord",
    "aggregate",
    "empirical_threshold",
    "load_spec",
    "mc_rank_lemma",
    "mc_score_distribution",
    "mc_singularity",
    "parse_spec",
    "run_sweep",
    "run_trial",
    "sweep",
    "sweep_records",
    "trial_seed",
    "verify_bounds",
    "wilson_interval",
    "write_csv",
]
