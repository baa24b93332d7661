"""Closed-form thresholds and inequality oracles."""

from .inequalities import (
    binom_exact,
    binomial_pmf_exact,
    binomial_upper_tail_exact,
    calibrate_c_tail,
    collision_bound,
    f2_rank_bound,
    l_far_union_term,
    point_mass_bound,
    singularity_estimate,
    stirling_binom_bound,
    tail_bound,
)
from .thresholds import ThresholdParams, alpha, beta, info_lower_bound, info_threshold, m_threshold

__all__ = [
    "ThresholdParams",
    "alpha",
    "beta",
    "binom_exact",
    "binomial_pmf_exact",
    "binomial_upper_tail_exact",
    "calibrate_c_tail",
    "collision_bound",
    "f2_rank_bound",
    "info_lower_bound",
    "info_threshold",
    "l_far_union_term",
    "m_threshold",
    "point_mass_bound",
    "singularity_estimate",
    "stirling_binom_bound",
    "tail_bound",
]
