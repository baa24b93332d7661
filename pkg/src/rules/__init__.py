"""Rules engine for the bound verification suite."""

from .bound_rules import BoundCheckRanges, BoundRules, default_engine, verify_bounds
from .engine import EngineReport, Rule, RuleOutcome, RulesEngine, RuleSeverity

__all__ = [
    "BoundCheckRanges",
    "BoundRules",
    "EngineReport",
    "Rule",
    "RuleOutcome",
    "RuleSeverity",
    "RulesEngine",
    "default_engine",
    "verify_bounds",
]
