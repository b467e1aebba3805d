"""Frequency cutoff multiplier, the smoothing operator it generates, and
dyadic band projections.

The cutoff multiplier m is radial, non-increasing, identically 1 up to the
cutoff n_cut and exactly |xi|^(s-2) * n_cut^(2-s) above 2*n_cut. On the
transition band (n_cut, 2*n_cut] the sharp variant continues the outer power
law, m = (|xi|/n_cut)^(s-2), which keeps every monotonicity identity exact;
the smooth variant blends the two branches with a C^2 quintic in log|xi|.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .spectral import Field, apply_symbol

SHARP = "sharp"
SMOOTH = "smooth"


@dataclass(frozen=True)
class IMultiplier:
    """Cutoff parameters (s, n_cut) and interpolation variant."""

    s: float
    n_cut: float
    variant: str = SHARP

    def __post_init__(self):
        if not 0.0 < self.s < 2.0:
            raise ValueError(f"regularity s must lie in (0, 2), got {self.s}")
        if self.n_cut < 1.0:
            raise ValueError(f"cutoff must be >= 1, got {self.n_cut}")
        if self.variant not in (SHARP, SMOOTH):
            raise ValueError(f"unknown multiplier variant {self.variant!r}")


def _blend(tau: np.ndarray) -> np.ndarray:
    # Quintic with value/slope 0 at 0 and value/slope 1 at 1, zero curvature
    # at both ends: C^2 match of the constant and power-law branches.
    return tau**3 * (6.0 - 8.0 * tau + 3.0 * tau**2)


def m_eval(im: IMultiplier, xi_abs):
    """Evaluate the multiplier at |xi| >= 0 (scalar or array), in (0, 1]."""
    r = np.asarray(xi_abs, dtype=float)
    if (r < 0).any():
        raise ValueError("m_eval expects nonnegative |xi|")
    scalar = r.ndim == 0
    r = np.atleast_1d(r)
    s, n = im.s, im.n_cut
    out = np.ones_like(r)
    if im.variant == SHARP:
        hi = r > n
        out[hi] = (r[hi] / n) ** (s - 2.0)
    else:
        hi = r >= 2.0 * n
        out[hi] = (r[hi] / n) ** (s - 2.0)
        mid = (r > n) & ~hi
        tau = np.log2(r[mid] / n)
        out[mid] = np.exp((s - 2.0) * math.log(2.0) * _blend(tau))
    return float(out[0]) if scalar else out


def apply_I(im: IMultiplier, f: Field) -> Field:
    """Smoothing operator: multiply the spectrum by m(|xi|)."""
    return apply_symbol(f, lambda r: m_eval(im, r))


def smooth_bump(r):
    """Radial C-infinity profile: 1 on |xi| <= 1, supported in |xi| <= 2.

    Built from the standard exp(-1/x) partition step, exact at the branch
    points on grid values.
    """
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    out[r <= 1.0] = 1.0
    mid = (r > 1.0) & (r < 2.0)
    t = 2.0 - r[mid]  # in (0, 1)
    with np.errstate(over="ignore"):
        a = np.exp(-1.0 / t)
        b = np.exp(-1.0 / (1.0 - t))
    out[mid] = a / (a + b)
    return out


DYADIC = "dyadic"
LEQ = "leq"
GT = "gt"


@dataclass(frozen=True)
class LPProjector:
    """Dyadic band projector at level n_band = 2^j (j >= 0)."""

    n_band: float

    def __post_init__(self):
        if self.n_band < 1.0 or 2.0 ** round(math.log2(self.n_band)) != self.n_band:
            raise ValueError(f"band level must be dyadic >= 1, got {self.n_band}")


def project(lp: LPProjector, f: Field, which: str = DYADIC) -> Field:
    """Band projection of f: the dyadic shell, the low part, or the high part.

    The shell symbol bump(|xi|/N) - bump(2|xi|/N) vanishes for |xi| <= N/2 and
    |xi| >= 2N. A level whose shell lies entirely above the grid's resolved
    band produces a zero field with a warning.
    """
    n = lp.n_band
    kmax = float(f.grid.kmag.max())
    if which == DYADIC:
        if n / 2.0 > kmax:
            warnings.warn(
                f"dyadic band at level {n} is empty on this grid",
                RuntimeWarning,
                stacklevel=2,
            )
        return apply_symbol(f, lambda r: smooth_bump(r / n) - smooth_bump(2.0 * r / n))
    if which == LEQ:
        return apply_symbol(f, lambda r: smooth_bump(r / n))
    if which == GT:
        return apply_symbol(f, lambda r: 1.0 - smooth_bump(r / n))
    raise ValueError(f"unknown projection kind {which!r}")


def dyadic_levels(grid) -> list[float]:
    """Levels 1, 2, ..., 2^J with 2^J at or above the largest resolved |xi|,
    so that the low piece at level 1 plus all shells reconstructs exactly."""
    kmax = float(grid.kmag.max())
    top = max(1, math.ceil(math.log2(kmax)))
    return [float(2**j) for j in range(0, top + 1)]
