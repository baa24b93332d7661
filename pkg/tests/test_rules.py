"""Tests for the rules engine and the bound domination suite."""

from __future__ import annotations

import pytest

from src.rules.bound_rules import DOMAIN, BoundCheckRanges, BoundRules, default_engine, verify_bounds
from src.rules.engine import Rule, RuleSeverity, RulesEngine

SMALL = BoundCheckRanges(
    collision_n_max=128,
    point_mass_ns=[64, 128],
    tail_n_min=64,
    tail_n_max=96,
    tail_n_step=4,
    stirling_n_max=96,
    f2_m1_max=16,
    l_far_grid=[(1000, 31, 5, 400), (100, 4, 1, 10), (4096, 64, 2, 100)],
)


def _rule(rule_id: str, result, priority: int = 0, **kwargs) -> Rule:
    return Rule(id=rule_id, name=rule_id, description="", check=lambda ctx: result, priority=priority, **kwargs)


class TestRulesEngine:
    def test_priority_order(self):
        engine = RulesEngine()
        engine.register_rule("d", _rule("low", (1, []), priority=1))
        engine.register_rule("d", _rule("high", (1, []), priority=9))
        assert [r["id"] for r in engine.list_rules("d")] == ["high", "low"]
        assert [o.rule_id for o in engine.evaluate("d", {}).outcomes] == ["high", "low"]

    def test_duplicate_ids_are_rejected(self):
        engine = RulesEngine()
        engine.register_rule("d", _rule("a", (0, [])))
        with pytest.raises(ValueError):
            engine.register_rule("d", _rule("a", (0, [])))

    def test_violations_fail_the_report(self):
        engine = RulesEngine()
        engine.register_rule("d", _rule("ok", (3, [])))
        engine.register_rule("d", _rule("bad", (3, [{"case": 1}])))
        report = engine.evaluate("d", {})
        assert not report.passed
        assert report.to_dict()["rules"][1]["violation_count"] == 1

    def test_warnings_and_disabled_rules_pass(self):
        engine = RulesEngine()
        engine.register_rule("d", _rule("warn", (1, [{"x": 1}]), severity=RuleSeverity.WARNING))
        engine.register_rule("d", _rule("off", (1, [{"x": 1}]), enabled=False))
        report = engine.evaluate("d", {})
        assert report.passed
        assert report.outcomes[1].skipped

    def test_check_errors_are_captured(self):
        def broken(ctx):
            raise KeyError("missing")

        engine = RulesEngine()
        engine.register_rule("d", Rule(id="broken", name="broken", description="", check=broken))
        outcome = engine.evaluate("d", {}).outcomes[0]
        assert not outcome.passed
        assert "missing" in outcome.error

    def test_unknown_domain_is_empty(self):
        report = RulesEngine().evaluate("nothing", {})
        assert report.passed and report.outcomes == []


class TestBoundSuite:
    def test_small_ranges_pass(self):
        report = verify_bounds(SMALL)
        assert report.passed, report.to_dict()
        assert {o.rule_id for o in report.outcomes} == {
            "collision", "point_mass", "tail", "stirling", "f2_single_vector", "l_far_chain", "l_far_precision",
        }
        assert all(o.checked > 0 for o in report.outcomes)

    def test_corrupted_tail_constant_fails(self):
        report = verify_bounds(SMALL, c_tail=0.01)
        assert not report.passed
        failed = [o.rule_id for o in report.outcomes if not o.passed]
        assert failed == ["tail"]

    def test_c_tail_from_ranges(self):
        ranges = SMALL.model_copy(update={"c_tail": 0.01})
        assert not verify_bounds(ranges).passed

    def test_collision_rule_alone(self):
        outcome = BoundRules.collision_rule().evaluate(BoundCheckRanges().model_dump())
        assert outcome.passed
        assert outcome.checked == 511

    def test_engine_lists_every_bound(self):
        assert len(default_engine().list_rules(DOMAIN)) == 7

    def test_precision_drift_is_only_a_warning(self):
        report = verify_bounds(SMALL.model_copy(update={"mp_rel_tol": -1.0}))
        assert report.passed
        precision = next(o for o in report.outcomes if o.rule_id == "l_far_precision")
        assert precision.severity is RuleSeverity.WARNING
        assert len(precision.violations) == len(SMALL.l_far_grid)

    @pytest.mark.slow
    def test_full_default_suite(self):
        report = verify_bounds()
        assert report.passed, report.to_dict()
