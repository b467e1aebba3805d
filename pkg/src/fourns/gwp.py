"""Exact exponent bookkeeping for the global-well-posedness iteration.

All identities are evaluated in rational arithmetic so threshold equalities
are exact. Exponent losses written "a-" are evaluated at a configurable
epsilon, default 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)  # binary floats convert exactly
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def _check_k(k: int) -> int:
    if k < 1 or int(k) != k:
        raise ValueError(f"k must be a positive integer, got {k}")
    return int(k)


def gwp_threshold(k: int) -> Fraction:
    """Regularity threshold 2 - 3/(4k) above which the iteration closes."""
    k = _check_k(k)
    return 2 - Fraction(3, 4 * k)


def case_split_point(k: int) -> Fraction:
    """2 - 1/(2k), where the polynomial-growth bound switches branch."""
    k = _check_k(k)
    return 2 - Fraction(1, 2 * k)


def second_exponent_threshold(k: int) -> Fraction:
    """2 - 2/(3k): below this the second iteration exponent is nonpositive."""
    k = _check_k(k)
    return 2 - Fraction(2, 3 * k)


def growth_exponents(k: int, s, eps=0) -> tuple[Fraction, Fraction]:
    """Iteration exponents (4ks - 8k + 3 - eps, 6ks - 12k + 4 - eps)."""
    k = _check_k(k)
    s = _frac(s)
    if not 0 < s <= 2:
        raise ValueError(f"s must lie in (0, 2], got {s}")
    eps = _frac(eps)
    e1 = 4 * k * s - 8 * k + 3 - eps
    e2 = 6 * k * s - 12 * k + 4 - eps
    return e1, e2


def existence_time(iu0_h2: float, k: int, c: float = 1.0, eps: float = 0.0) -> float:
    """Local-existence window c * ||I u0||_{H^2}^{-2k/(1-eps)}.

    A zero norm means an unbounded window and returns inf; callers clamp to
    their configured horizon.
    """
    k = _check_k(k)
    if iu0_h2 < 0:
        raise ValueError(f"norm must be nonnegative, got {iu0_h2}")
    if not 0 <= eps < 1:
        raise ValueError(f"eps must lie in [0, 1), got {eps}")
    if iu0_h2 == 0.0:
        return math.inf
    return c * iu0_h2 ** (-2.0 * k / (1.0 - eps))


def time_from_cutoff(k: int, s, n_cut: float, eps=0) -> float:
    """Reachable time T = N^{e1} + N^{e2} for cutoff N (epsilon losses dropped
    by default)."""
    if n_cut < 1:
        raise ValueError(f"cutoff must be >= 1, got {n_cut}")
    e1, e2 = growth_exponents(k, s, eps)
    return float(n_cut) ** float(e1) + float(n_cut) ** float(e2)


def growth_bound(k: int, s, eps=0) -> Fraction:
    """Polynomial-in-time exponent for the H^s norm: T^{(4-2s)/e1} up to the
    case split 2 - 1/(2k), T^{(4-2s)/e2} beyond; both branches agree there."""
    k = _check_k(k)
    s = _frac(s)
    thr = gwp_threshold(k)
    if s <= thr:
        raise ValueError(
            f"s = {s} violates the binding constraint s > 2 - 3/(4k) = {thr}"
        )
    if s >= 2:
        raise ValueError(f"growth bound needs s < 2, got {s}")
    eps = _frac(eps)
    e1, e2 = growth_exponents(k, s)
    split = case_split_point(k)
    if s == split:
        lo, hi = (4 - 2 * s) / e1, (4 - 2 * s) / e2
        if lo != hi:
            raise AssertionError(f"branch mismatch at the case split: {lo} != {hi}")
        return lo - eps
    if s < split:
        return (4 - 2 * s) / e1 - eps
    return (4 - 2 * s) / e2 - eps


@dataclass(frozen=True)
class ExponentReport:
    k: int
    s: Fraction
    threshold: Fraction
    split_point: Fraction
    second_threshold: Fraction
    e1: Fraction
    e2: Fraction
    e1_positive: bool
    e2_positive: bool
    in_flagged_window: bool


def exponent_report(k: int, s) -> ExponentReport:
    """Both positivity constraints for (k, s); flags the window
    2 - 3/(4k) < s <= 2 - 2/(3k) where only the first exponent is positive."""
    k = _check_k(k)
    s = _frac(s)
    e1, e2 = growth_exponents(k, s)
    thr = gwp_threshold(k)
    second = second_exponent_threshold(k)
    return ExponentReport(
        k=k,
        s=s,
        threshold=thr,
        split_point=case_split_point(k),
        second_threshold=second,
        e1=e1,
        e2=e2,
        e1_positive=e1 > 0,
        e2_positive=e2 > 0,
        in_flagged_window=thr < s <= second,
    )
