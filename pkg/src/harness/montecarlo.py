"""
Monte Carlo - Empirical checks of the singularity, rank and score-moment lemmas.

All draws come from SplitMix64 streams, so every estimate is reproducible
from its seed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np
import structlog

from ..algorithms.scores import psi_scores
from ..bounds.inequalities import f2_rank_bound, singularity_estimate
from ..core.errors import InvalidParamsError
from ..core.model import generate_instance
from ..core.rng import SplitMix64, derive_seed
from ..linalg.field import DEFAULT_FIELD, ExactRational, ModP
from ..linalg.rref import rank

logger = structlog.get_logger()

EXHAUSTIVE_MAX_M = 4


@dataclass(frozen=True)
class SingularityEstimate:
    m: int
    singular: int
    total: int
    exhaustive: bool
    heuristic: float

    @property
    def fraction(self) -> float:
        return self.singular / self.total

    @property
    def exact(self) -> Fraction:
        return Fraction(self.singular, self.total)

    def to_dict(self) -> dict[str, Any]:
        return {
            "m": self.m,
            "singular": self.singular,
            "total": self.total,
            "fraction": self.fraction,
            "exhaustive": self.exhaustive,
            "heuristic_m2_2^-m": self.heuristic,
        }


def _permutation_signs(m: int) -> list[tuple[tuple[int, ...], int]]:
    signed = []
    for perm in itertools.permutations(range(m)):
        inversions = sum(1 for i in range(m) for j in range(i + 1, m) if perm[i] > perm[j])
        signed.append((perm, -1 if inversions % 2 else 1))
    return signed


def _exhaustive_singular(m: int) -> int:
    """Count singular m x m binary matrices by exact integer determinants (Leibniz)."""
    cells = m * m
    codes = np.arange(1 << cells, dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(cells, dtype=np.int64)) & 1).reshape(-1, m, m)
    det = np.zeros(codes.size, dtype=np.int64)
    rows = np.arange(m)
    for perm, sign in _permutation_signs(m):
        det += sign * np.prod(bits[:, rows, list(perm)], axis=1)
    return int(np.count_nonzero(det == 0))


def mc_singularity(
    m: int,
    trials: int,
    seed: int,
    exhaustive: bool = False,
    exact_cap: int = 64,
    screen: ModP = DEFAULT_FIELD,
) -> SingularityEstimate:
    """
    Fraction of m x m Bernoulli(1/2) matrices with rank < m.

    Sampled matrices are screened by their mod-p rank (full rank mod p
    implies full rank over Q); the rest are decided by exact rational rank.
    Exhaustive mode enumerates all 2**(m*m) matrices for m <= 4.
    """
    if m < 1:
        raise InvalidParamsError("m must be positive")
    if exhaustive:
        if m > EXHAUSTIVE_MAX_M:
            raise InvalidParamsError(f"exhaustive enumeration is limited to m <= {EXHAUSTIVE_MAX_M}")
        singular = _exhaustive_singular(m)
        return SingularityEstimate(m, singular, 1 << (m * m), True, singularity_estimate(m))

    if trials < 1:
        raise InvalidParamsError("trials must be positive")
    exact = ExactRational(cap=exact_cap)
    stream = SplitMix64(seed)
    singular = 0
    for _ in range(trials):
        M = stream.bits(m * m).reshape(m, m).astype(np.int64)
        if rank(M, screen) == m:
            continue
        if rank(M, exact) < m:
            singular += 1
    estimate = SingularityEstimate(m, singular, trials, False, singularity_estimate(m))
    logger.info("Singularity estimate", m=m, trials=trials, fraction=estimate.fraction)
    return estimate


@dataclass(frozen=True)
class RankLemmaEstimate:
    m1: int
    k1: int
    l: int  # noqa: E741
    k2: int
    hits: int
    trials: int
    bound: float

    @property
    def empirical(self) -> float:
        return self.hits / self.trials

    @property
    def stderr(self) -> float:
        p = self.empirical
        return math.sqrt(max(p * (1 - p), 1.0 / self.trials) / self.trials)

    def to_dict(self) -> dict[str, Any]:
        return {
            "m1": self.m1,
            "k1": self.k1,
            "l": self.l,
            "k2": self.k2,
            "empirical": self.empirical,
            "stderr": self.stderr,
            "bound": self.bound,
            "trials": self.trials,
        }


def mc_rank_lemma(
    m1: int,
    k1: int,
    l: int,  # noqa: E741
    k2: int,
    trials: int,
    seed: int,
    exact_cap: int = 64,
) -> RankLemmaEstimate:
    """
    Empirical Pr[dim(span(V, U)) < k2] next to f2_rank_bound.

    V is spanned by the first k1 standard basis vectors of Q**m1 and U holds
    l uniform binary vectors, so dim(span(V, U)) = k1 + rank of U restricted
    to the last m1 - k1 coordinates. Ranks are exact rational ranks.
    """
    if not 0 <= k1 <= k2 <= m1 or l < 0 or trials < 1:
        raise InvalidParamsError(f"need 0 <= k1 <= k2 <= m1, l >= 0, trials >= 1; got {(m1, k1, l, k2, trials)}")
    exact = ExactRational(cap=exact_cap)
    stream = SplitMix64(seed)
    width = m1 - k1
    hits = 0
    for _ in range(trials):
        U = stream.bits(l * m1).reshape(l, m1).astype(np.int64)
        extra = rank(U[:, k1:], exact) if (l and width) else 0
        if k1 + extra < k2:
            hits += 1
    estimate = RankLemmaEstimate(m1, k1, l, k2, hits, trials, f2_rank_bound(m1, k1, k2, l))
    logger.info("Rank lemma estimate", **estimate.to_dict())
    return estimate


@dataclass(frozen=True)
class MomentSummary:
    count: int
    mean: float
    variance: float
    expected_mean: float
    expected_variance: float
    stderr: float

    @property
    def z_score(self) -> float:
        return (self.mean - self.expected_mean) / self.stderr if self.stderr > 0 else 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "count": self.count,
            "mean": self.mean,
            "variance": self.variance,
            "expected_mean": self.expected_mean,
            "expected_variance": self.expected_variance,
            "stderr": self.stderr,
            "z_score": self.z_score,
        }


@dataclass(frozen=True)
class ScoreMoments:
    n: int
    k: int
    m: int
    trials: int
    defective: MomentSummary
    non_defective: MomentSummary

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "m": self.m,
            "trials": self.trials,
            "defective": self.defective.to_dict(),
            "non_defective": self.non_defective.to_dict(),
        }


def _summarise(per_trial: list[np.ndarray], expected_mean: float, expected_variance: float) -> MomentSummary:
    pooled = np.concatenate(per_trial).astype(np.float64)
    count = int(pooled.size)
    variance = float(pooled.var(ddof=1)) if count > 1 else 0.0
    if len(per_trial) > 1:
        # Scores inside one instance share y; per-instance means are the independent units.
        means = np.array([scores.mean() for scores in per_trial])
        stderr = float(means.std(ddof=1) / math.sqrt(len(per_trial)))
    else:
        stderr = math.sqrt(expected_variance / count) if count else 0.0
    return MomentSummary(count, float(pooled.mean()), variance, expected_mean, expected_variance, stderr)


def mc_score_distribution(n: int, k: int, m: int, trials: int, seed: int) -> ScoreMoments:
    """
    Empirical psi moments against mk/2, m(k+1)/2 and the binomial variances
    mk/4, m(k-1)/4 for non-defective and defective items.
    """
    if trials < 1:
        raise InvalidParamsError("trials must be positive")
    defective: list[np.ndarray] = []
    others: list[np.ndarray] = []
    for trial in range(trials):
        inst = generate_instance(n, k, m, derive_seed(seed, trial))
        psi = psi_scores(inst.matrix, inst.outcome, k).num
        mask = inst.x.astype(bool)
        defective.append(psi[mask])
        others.append(psi[~mask])

    moments = ScoreMoments(
        n=n,
        k=k,
        m=m,
        trials=trials,
        defective=_summarise(defective, m * (k + 1) / 2, m * (k - 1) / 4),
        non_defective=_summarise(others, m * k / 2, m * k / 4),
    )
    logger.info(
        "Score moments",
        defective_z=moments.defective.z_score,
        non_defective_z=moments.non_defective.z_score,
    )
    return moments
