"""Exact linear algebra over F_p and Q."""

from .field import DEFAULT_FIELD, ExactRational, FieldMode, ModP, field_from_name
from .rref import RrefResult, rank, rref, solve_pinned, verify_integer

__all__ = [
    "DEFAULT_FIELD",
    "ExactRational",
    "FieldMode",
    "ModP",
    "RrefResult",
    "field_from_name",
    "rank",
    "rref",
    "solve_pinned",
    "verify_integer",
]
