"""Recovery of the defective set from a selected subset."""

from .oracle import brute_force_qgt
from .recover import RecoveryConfig, RecoveryReport, recover_from_submatrix, solve_qgt

__all__ = [
    "RecoveryConfig",
    "RecoveryReport",
    "brute_force_qgt",
    "recover_from_submatrix",
    "solve_qgt",
]
