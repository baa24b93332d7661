"""
Rules Engine - Named checks evaluated against a shared context.

Each rule inspects a grid of cases from the context and reports how many it
checked and which ones violated the rule.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import structlog

logger = structlog.get_logger()

CheckResult = tuple[int, list[dict[str, Any]]]


class RuleSeverity(Enum):
    """What a triggered rule means for the overall verdict."""

    VIOLATION = "violation"
    WARNING = "warning"


@dataclass
class RuleOutcome:
    rule_id: str
    checked: int = 0
    violations: list[dict[str, Any]] = field(default_factory=list)
    severity: RuleSeverity = RuleSeverity.VIOLATION
    error: str | None = None
    skipped: bool = False

    @property
    def passed(self) -> bool:
        if self.skipped or self.severity is RuleSeverity.WARNING:
            return True
        return self.error is None and not self.violations

    def to_dict(self, max_violations: int = 5) -> dict[str, Any]:
        return {
            "rule_id": self.rule_id,
            "passed": self.passed,
            "checked": self.checked,
            "violation_count": len(self.violations),
            "violations": self.violations[:max_violations],
            "severity": self.severity.value,
            "error": self.error,
            "skipped": self.skipped,
        }


@dataclass
class Rule:
    """A single check."""

    id: str
    name: str
    description: str
    check: Callable[[dict[str, Any]], CheckResult]
    severity: RuleSeverity = RuleSeverity.VIOLATION
    enabled: bool = True
    priority: int = 0  # Higher = runs first

    def evaluate(self, context: dict[str, Any]) -> RuleOutcome:
        if not self.enabled:
            return RuleOutcome(rule_id=self.id, severity=self.severity, skipped=True)
        try:
            checked, violations = self.check(context)
        except Exception as e:
            logger.error("Rule evaluation error", rule_id=self.id, error=str(e))
            return RuleOutcome(rule_id=self.id, severity=self.severity, error=str(e))
        return RuleOutcome(
            rule_id=self.id,
            checked=checked,
            violations=violations,
            severity=self.severity,
        )


@dataclass
class EngineReport:
    domain: str
    outcomes: list[RuleOutcome]

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)

    def to_dict(self) -> dict[str, Any]:
        return {
            "domain": self.domain,
            "passed": self.passed,
            "rules": [o.to_dict() for o in self.outcomes],
        }


class RulesEngine:
    """Registers rules per domain and evaluates them in priority order."""

    def __init__(self) -> None:
        self._rules: dict[str, list[Rule]] = {}  # domain -> rules

    def register_rule(self, domain: str, rule: Rule) -> None:
        rules = self._rules.setdefault(domain, [])
        if any(r.id == rule.id for r in rules):
            raise ValueError(f"rule {rule.id!r} already registered in {domain!r}")
        rules.append(rule)
        rules.sort(key=lambda r: r.priority, reverse=True)
        logger.debug("Registered rule", domain=domain, rule_id=rule.id)

    def evaluate(self, domain: str, context: dict[str, Any]) -> EngineReport:
        outcomes = []
        for rule in self._rules.get(domain, []):
            outcome = rule.evaluate(context)
            if outcome.passed:
                logger.info("Rule passed", domain=domain, rule_id=rule.id, checked=outcome.checked)
            else:
                logger.warning(
                    "Rule violated",
                    domain=domain,
                    rule_id=rule.id,
                    rule_name=rule.name,
                    violations=len(outcome.violations),
                    error=outcome.error,
                )
            outcomes.append(outcome)
        return EngineReport(domain=domain, outcomes=outcomes)

    def list_rules(self, domain: str | None = None) -> list[dict[str, Any]]:
        """List all rules, optionally filtered by domain."""
        domains = [domain] if domain else list(self._rules)
        return [
            {
                "domain": d,
                "id": rule.id,
                "name": rule.name,
                "description": rule.description,
                "severity": rule.severity.value,
                "enabled": rule.enabled,
                "priority": rule.priority,
            }
            for d in domains
            for rule in self._rules.get(d, [])
        ]
