"""Core QGT lab components."""

from .bitmatrix import BitMatrix
from .model import (
    Instance,
    ItemSet,
    complementary,
    estimate_k,
    generate_instance,
    instance_from_json,
    instance_to_json,
    outcome,
)
from .rng import SplitMix64, derive_seed
from .settings import LabSettings, load_settings

__all__ = [
    "BitMatrix",
    "Instance",
    "ItemSet",
    "LabSettings",
    "SplitMix64",
    "complementary",
    "derive_seed",
    "estimate_k",
    "generate_instance",
    "instance_from_json",
    "instance_to_json",
    "load_settings",
    "outcome",
]
