"""
Inequalities - Binomial tail and rank bounds with exact reference quantities.

Closed forms return floats; the *_exact helpers return integers or Fractions
so that domination can be checked without rounding. Products that overflow
are evaluated in log space and cross-checked against mpmath.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from ..core.errors import DomainError

C_TAIL_CANDIDATES = (0.5, 1.0, 2.0, 4.0)
DEFAULT_C_TAIL = 0.5


# -- exact references ------------------------------------------------------------


def binom_exact(N: int, M: int) -> int:
    """C(N, M) by the multiplicative recurrence C(N, i) = C(N, i-1) (N-i+1) / i."""
    if N < 0 or not 0 <= M <= N:
        raise DomainError(f"binom_exact needs 0 <= M <= N, got N={N}, M={M}")
    M = min(M, N - M)
    value = 1
    for i in range(1, M + 1):
        value = value * (N - M + i) // i
    return value


def binomial_pmf_exact(N: int, j: int) -> Fraction:
    """Pr[X = j] for X ~ Bin(N, 1/2)."""
    if not 0 <= j <= N:
        return Fraction(0)
    return Fraction(binom_exact(N, j), 1 << N)


def binomial_upper_tail_exact(N: int, j: int) -> Fraction:
    """Pr[X >= j] for X ~ Bin(N, 1/2)."""
    start = max(j, 0)
    if start > N:
        return Fraction(0)
    return Fraction(sum(binom_exact(N, i) for i in range(start, N + 1)), 1 << N)


def tail_start(N: int, t: int) -> int:
    """Smallest j with j > N/2 + t."""
    return math.floor(Fraction(N, 2) + t) + 1


def dominated(exact: int | Fraction, bound: float) -> bool:
    """exact <= bound, compared exactly against the float's rational value."""
    if math.isinf(bound):
        return bound > 0
    return Fraction(exact) <= Fraction(bound)


# -- closed forms -------------------------------------------------------------------


def log_stirling_binom_bound(N: int, M: int) -> float:
    if not 0 <= M <= N:
        raise DomainError(f"Stirling bound needs 0 <= M <= N, got N={N}, M={M}")
    if M == 0:
        return 0.0
    return M * (1.0 + math.log(N) - math.log(M))


def stirling_binom_bound(N: int, M: int) -> float:
    """(e N / M)**M, evaluated in log space; M = 0 gives 1."""
    log_value = log_stirling_binom_bound(N, M)
    try:
        return math.exp(log_value)
    except OverflowError:
        return math.inf


def collision_bound(N: int) -> float:
    """e / (pi sqrt(2N)), an upper bound on C(2N, N) / 4**N."""
    if N < 1:
        raise DomainError(f"collision bound needs N >= 1, got {N}")
    return math.e / (math.pi * math.sqrt(2 * N))


def point_mass_bound(N: int, t: int) -> float:
    """(e / 2 pi) sqrt(N / (N**2/4 - t**2)) exp(-2 t**2 / N), for 0 <= t < N/2."""
    if N < 1 or t < 0 or 2 * t >= N:
        raise DomainError(f"point-mass bound needs 0 <= t < N/2, got N={N}, t={t}")
    return (
        math.e / (2 * math.pi)
        * math.sqrt(N / (N * N / 4 - t * t))
        * math.exp(-2 * t * t / N)
    )


def tail_bound(N: int, t: float, c_tail: float = DEFAULT_C_TAIL) -> float:
    """c_tail (sqrt(N) / t) exp(-2 t**2 / N), valid for sqrt(N) <= t <= N/2."""
    if N < 1 or t * t < N or 2 * t > N:
        raise DomainError(f"tail bound needs sqrt(N) <= t <= N/2, got N={N}, t={t}")
    return c_tail * (math.sqrt(N) / t) * math.exp(-2 * t * t / N)


def tail_range(N: int) -> range:
    """Integer t in [sqrt(N), N/4]."""
    return range(math.isqrt(N - 1) + 1 if N > 1 else 1, N // 4 + 1)


def calibrate_c_tail(
    N_values: Iterable[int],
    candidates: Sequence[float] = C_TAIL_CANDIDATES,
) -> float | None:
    """
    Smallest candidate c_tail whose tail_bound dominates Pr[X > N/2 + t]
    for every N given and every integer t in [sqrt(N), N/4].
    """
    cases: list[tuple[int, int, Fraction]] = []
    for N in N_values:
        counts = _upper_tail_counts(N)
        for t in tail_range(N):
            j = tail_start(N, t)
            cases.append((N, t, Fraction(counts[j] if j <= N else 0, 1 << N)))

    for c in sorted(candidates):
        if all(dominated(exact, tail_bound(N, t, c)) for N, t, exact in cases):
            return c
    return None


def _upper_tail_counts(N: int) -> list[int]:
    """counts[j] = sum_{i >= j} C(N, i)."""
    counts = [0] * (N + 2)
    row = [binom_exact(N, i) for i in range(N + 1)]
    for j in range(N, -1, -1):
        counts[j] = counts[j + 1] + row[j]
    return counts


# -- rank bounds ------------------------------------------------------------------------


def _check_rank_args(m1: int, k1: int, k2: int, l: int) -> None:  # noqa: E741
    if not 0 <= k1 <= k2 <= m1 or l < 0:
        raise DomainError(f"need 0 <= k1 <= k2 <= m1 and l >= 0, got {(m1, k1, k2, l)}")


def f2_rank_bound_exact(m1: int, k1: int, k2: int, l: int) -> Fraction:  # noqa: E741
    """
    C(l, k2-k1-1) 2**((k2-1-m1)(l-(k2-k1)+1)) as a Fraction.

    Bounds Pr[dim(span(V, u_1..u_l)) < k2] for dim V = k1 and l uniform
    vectors in {0,1}**m1. 1 when l < k2 - k1; 0 when k2 = k1.
    """
    _check_rank_args(m1, k1, k2, l)
    gap = k2 - k1
    if gap == 0:
        return Fraction(0)
    if l < gap:
        return Fraction(1)
    exponent = (k2 - 1 - m1) * (l - gap + 1)
    power = Fraction(2) ** exponent
    return math.comb(l, gap - 1) * power


def f2_rank_bound(m1: int, k1: int, k2: int, l: int) -> float:  # noqa: E741
    return float(f2_rank_bound_exact(m1, k1, k2, l))


def single_vector_bound(m1: int, t: int) -> float:
    """Pr[u in V] <= 2**(t - m1) for dim V = t and u uniform in {0,1}**m1."""
    if not 0 <= t <= m1:
        raise DomainError(f"need 0 <= t <= m1, got t={t}, m1={m1}")
    return math.ldexp(1.0, t - m1)


@dataclass(frozen=True)
class LFarTerm:
    """Union-bound term for weight-k vectors at Hamming distance 2l from x."""

    log_value: float
    log_simplified: float

    @property
    def value(self) -> float:
        return math.exp(self.log_value)

    @property
    def simplified(self) -> float:
        try:
            return math.exp(self.log_simplified)
        except OverflowError:
            return math.inf


def l_far_union_term(n: int, k: int, l: int, m: int) -> LFarTerm:  # noqa: E741
    """
    C(k, l) C(n, l) (e / (pi sqrt(2l)))**m in log space, together with the
    simplified bound (e**2 k n / l**2)**l (e / (pi sqrt(2l)))**m.
    """
    if not 1 <= l <= k <= n or m < 0:
        raise DomainError(f"need 1 <= l <= k <= n and m >= 0, got {(n, k, l, m)}")
    log_collision = m * math.log(collision_bound(l))
    log_choices = math.log(binom_exact(k, l)) + math.log(binom_exact(n, l))
    log_simple = l * (2.0 + math.log(k) + math.log(n) - 2 * math.log(l))
    return LFarTerm(log_value=log_choices + log_collision, log_simplified=log_simple + log_collision)


def l_far_union_term_mp(n: int, k: int, l: int, m: int, dps: int = 50) -> mpf:  # noqa: E741
    """Direct big-float product, for cross-checking the log-space value."""
    with mp.workdps(dps):
        collision = mp.e / (mp.pi * mp.sqrt(2 * l))
        return mp.binomial(k, l) * mp.binomial(n, l) * collision**m


def stirling_binom_bound_mp(N: int, M: int, dps: int = 50) -> mpf:
    with mp.workdps(dps):
        if M == 0:
            return mpf(1)
        return (mp.e * N / M) ** M


def singularity_estimate(m: int) -> float:
    """Heuristic m**2 2**-m for Pr[an m x m Bernoulli(1/2) matrix is singular]."""
    if m < 1:
        raise DomainError("m must be positive")
    return min(1.0, m * m * math.ldexp(1.0, -m))
