"""Subset Select algorithms and their scores."""

from .base import SelectionResult, SubsetSelector
from .iterative import iterative_thresholding
from .registry import available_algorithms, get_selector
from .scores import ScoreVector, phi_basic_scores, psi_scores, residual_scores, top_t
from .thresholding import TOP_2K, TOP_K, TOP_M, SelectionRule, all_items, basic_thresholding, threshold_select
from .wrappers import split_rows, then_thresholding

__all__ = [
    "TOP_2K",
    "TOP_K",
    "TOP_M",
    "ScoreVector",
    "SelectionResult",
    "SelectionRule",
    "SubsetSelector",
    "all_items",
    "available_algorithms",
    "basic_thresholding",
    "get_selector",
    "iterative_thresholding",
    "phi_basic_scores",
    "psi_scores",
    "residual_scores",
    "split_rows",
    "then_thresholding",
    "threshold_select",
    "top_t",
]
