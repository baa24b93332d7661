"""
Bound Rules - Exact-arithmetic domination checks for the closed-form bounds.

Every rule walks a grid taken from BoundCheckRanges and compares exact
binomial quantities (ints and Fractions) against the float bounds.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any

from mpmath import mp
from pydantic import BaseModel, Field

from ..bounds.inequalities import (
    DEFAULT_C_TAIL,
    binomial_pmf_exact,
    collision_bound,
    dominated,
    f2_rank_bound_exact,
    l_far_union_term,
    l_far_union_term_mp,
    point_mass_bound,
    single_vector_bound,
    stirling_binom_bound,
    tail_bound,
    tail_range,
    tail_start,
)
from .engine import CheckResult, EngineReport, Rule, RulesEngine, RuleSeverity

DOMAIN = "bounds"


class BoundCheckRanges(BaseModel):
    """Grids walked by the domination suite."""

    collision_n_min: int = Field(default=2, ge=1)
    collision_n_max: int = Field(default=512, ge=1)
    point_mass_ns: list[int] = Field(default_factory=lambda: list(range(64, 513, 64)))
    tail_n_min: int = Field(default=64, ge=4)
    tail_n_max: int = Field(default=512, ge=4)
    tail_n_step: int = Field(default=1, ge=1)
    c_tail: float = Field(default=DEFAULT_C_TAIL, gt=0)
    stirling_n_max: int = Field(default=512, ge=1)
    f2_m1_max: int = Field(default=40, ge=1)
    l_far_grid: list[tuple[int, int, int, int]] = Field(
        default_factory=lambda: [
            (n, k, l, m)
            for n in (100, 1000, 4096)
            for k in (4, 31, 64)
            for l in (1, 2, 5)
            for m in (1, 10, 100, 400)
            if l <= k <= n
        ]
    )
    mp_rel_tol: float = 1e-9


class BoundRules:
    """One rule per bound family."""

    @staticmethod
    def collision_rule() -> Rule:
        def check(ctx: dict[str, Any]) -> CheckResult:
            violations = []
            lo, hi = ctx["collision_n_min"], ctx["collision_n_max"]
            central = math.comb(2 * lo, lo)
            checked = 0
            for N in range(lo, hi + 1):
                if N > lo:
                    # C(2N, N) = C(2N-2, N-1) (2N)(2N-1) / N**2
                    central = central * (2 * N) * (2 * N - 1) // (N * N)
                exact = central / Fraction(4**N)
                checked += 1
                if not dominated(exact, collision_bound(N)):
                    violations.append({"N": N, "exact": float(exact), "bound": collision_bound(N)})
            return checked, violations

        return Rule(
            id="collision",
            name="Central binomial collision bound",
            description="C(2N, N) / 4**N <= e / (pi sqrt(2N))",
            check=check,
            priority=50,
        )

    @staticmethod
    def point_mass_rule() -> Rule:
        def check(ctx: dict[str, Any]) -> CheckResult:
            violations = []
            checked = 0
            for N in ctx["point_mass_ns"]:
                for t in tail_range(N):
                    if 2 * t >= N or N % 2:
                        continue
                    exact = binomial_pmf_exact(N, N // 2 + t)
                    bound = point_mass_bound(N, t)
                    checked += 1
                    if not dominated(exact, bound):
                        violations.append({"N": N, "t": t, "exact": float(exact), "bound": bound})
            return checked, violations

        return Rule(
            id="point_mass",
            name="Point-mass bound",
            description="Pr[X = N/2 + t] <= (e/2pi) sqrt(N/(N^2/4 - t^2)) exp(-2t^2/N)",
            check=check,
            priority=40,
        )

    @staticmethod
    def tail_rule(c_tail: float | None = None) -> Rule:
        """Pr[X > N/2 + t] <= c_tail (sqrt(N)/t) exp(-2t^2/N); c_tail falls back to the context."""

        def check(ctx: dict[str, Any]) -> CheckResult:
            constant = ctx["c_tail"] if c_tail is None else c_tail
            violations = []
            checked = 0
            for N in range(ctx["tail_n_min"], ctx["tail_n_max"] + 1, ctx["tail_n_step"]):
                row = [math.comb(N, i) for i in range(N + 1)]
                suffix = [0] * (N + 2)
                for j in range(N, -1, -1):
                    suffix[j] = suffix[j + 1] + row[j]
                for t in tail_range(N):
                    j = tail_start(N, t)
                    exact = (suffix[j] if j <= N else 0) / Fraction(1 << N)
                    bound = tail_bound(N, t, constant)
                    checked += 1
                    if not dominated(exact, bound):
                        violations.append({"N": N, "t": t, "exact": float(exact), "bound": bound})
            return checked, violations

        return Rule(
            id="tail",
            name="Binomial tail bound",
            description="Pr[X > N/2 + t] <= c_tail (sqrt(N)/t) exp(-2t^2/N)",
            check=check,
            priority=30,
        )

    @staticmethod
    def stirling_rule() -> Rule:
        def check(ctx: dict[str, Any]) -> CheckResult:
            violations = []
            checked = 0
            row = [1]
            for N in range(0, ctx["stirling_n_max"] + 1):
                if N > 0:
                    row = [1, *(row[i - 1] + row[i] for i in range(1, N)), 1]
                for M, exact in enumerate(row):
                    bound = stirling_binom_bound(N, M) if N else 1.0
                    checked += 1
                    if not dominated(exact, bound):
                        violations.append({"N": N, "M": M, "bound": bound})
            return checked, violations

        return Rule(
            id="stirling",
            name="Stirling binomial bound",
            description="C(N, M) <= (eN/M)**M",
            check=check,
            priority=20,
        )

    @staticmethod
    def f2_single_vector_rule() -> Rule:
        def check(ctx: dict[str, Any]) -> CheckResult:
            violations = []
            checked = 0
            for m1 in range(1, ctx["f2_m1_max"] + 1):
                for t in range(0, m1):
                    general = f2_rank_bound_exact(m1, t, t + 1, 1)
                    single = single_vector_bound(m1, t)
                    checked += 1
                    if general != single:
                        violations.append({"m1": m1, "t": t, "general": float(general), "single": single})
                    if f2_rank_bound_exact(m1, t, t, 1) != 0:
                        violations.append({"m1": m1, "t": t, "degenerate": True})
            return checked, violations

        return Rule(
            id="f2_single_vector",
            name="Single-vector case of the rank bound",
            description="f2_rank_bound(m1, t, t+1, 1) == 2**(t - m1) and k1 = k2 gives 0",
            check=check,
            priority=10,
        )

    @staticmethod
    def l_far_rule() -> Rule:
        def check(ctx: dict[str, Any]) -> CheckResult:
            violations = []
            checked = 0
            for n, k, l, m in ctx["l_far_grid"]:  # noqa: E741
                term = l_far_union_term(n, k, l, m)
                checked += 1
                if term.log_value > term.log_simplified + 1e-12 * abs(term.log_simplified):
                    violations.append({"case": (n, k, l, m), "chain": "simplified below product"})
            return checked, violations

        return Rule(
            id="l_far_chain",
            name="l-far union term chain",
            description="C(k,l) C(n,l) <= (e^2 k n / l^2)^l",
            check=check,
            priority=5,
        )

    @staticmethod
    def l_far_precision_rule() -> Rule:
        """Float log-space terms against 50-digit mpmath; drift is reported, not fatal."""

        def check(ctx: dict[str, Any]) -> CheckResult:
            violations = []
            checked = 0
            tol = ctx["mp_rel_tol"]
            for n, k, l, m in ctx["l_far_grid"]:  # noqa: E741
                term = l_far_union_term(n, k, l, m)
                checked += 1
                # log difference is the relative error to first order
                gap = abs(term.log_value - float(mp.log(l_far_union_term_mp(n, k, l, m))))
                if gap > tol:
                    violations.append({"case": (n, k, l, m), "relative_error": gap})
            return checked, violations

        return Rule(
            id="l_far_precision",
            name="l-far log-space precision",
            description="log-space union term agrees with big floats to mp_rel_tol",
            check=check,
            priority=1,
            severity=RuleSeverity.WARNING,
        )


def default_engine(c_tail: float | None = None) -> RulesEngine:
    engine = RulesEngine()
    engine.register_rule(DOMAIN, BoundRules.collision_rule())
    engine.register_rule(DOMAIN, BoundRules.point_mass_rule())
    engine.register_rule(DOMAIN, BoundRules.tail_rule(c_tail))
    engine.register_rule(DOMAIN, BoundRules.stirling_rule())
    engine.register_rule(DOMAIN, BoundRules.f2_single_vector_rule())
    engine.register_rule(DOMAIN, BoundRules.l_far_rule())
    engine.register_rule(DOMAIN, BoundRules.l_far_precision_rule())
    return engine


def verify_bounds(ranges: BoundCheckRanges | None = None, c_tail: float | None = None) -> EngineReport:
    """Run the full domination suite; the report fails on any violation."""
    ranges = ranges or BoundCheckRanges()
    engine = default_engine(c_tail)
    return engine.evaluate(DOMAIN, ranges.model_dump())
