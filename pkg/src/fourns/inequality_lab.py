"""Randomized numerical checks of the pointwise multiplier inequalities and
dispersive-gain probes.

Frequency tuples live on the zero-sum hyperplane; the first coordinate is the
distinguished one (the conjugate/derivative slot, or for the T3* cases the
combined frequency of the nonlinear block) and equals minus the sum of the
others by construction. Case names T{1,2,3}C{1,2,3} follow the three
interaction regimes of the energy-increment estimate for each of its three
terms:

  C1:  n1 ~ M0 >~ N >> M1      (M0 >= M1 >= ... are the sorted tail sizes)
  C2:  M0 ~ M1 >~ N
  C3:  n1 ~ M0 >> M1 >~ N

with "~" meaning within a factor of 2, ">>" a ratio of at least 8, and ">~"
at least half. The checked left side is always
|1 - m(n1) / prod(m(tail))|; the dominating right side is M1/M0 for T1C1 and
T2C1, and m(n1)/prod(m(tail)) for every other case. Constants are measured,
never asserted a priori.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .multipliers import IMultiplier, m_eval
from .spectral import Field, Grid2D, apply_symbol, lp_norm, to_physical, _as_spectral

SIM_FACTOR = 2.0  # "~"  : within this factor
GG_FACTOR = 8.0  # ">>" : at least this ratio
GTRSIM_FACTOR = 2.0  # ">~" : at least 1/this

CASES = ("T1C1", "T1C2", "T1C3", "T2C1", "T2C2", "T2C3", "T3C1", "T3C2", "T3C3")

_CASE_SHAPE = {name: name[2:] for name in CASES}
_RHS_IS_SIZE_RATIO = {"T1C1", "T2C1"}

DEFAULT_CONSTANT = 4.0
RECORDED_CONSTANTS: dict[tuple, float] = {}


@dataclass(frozen=True)
class FrequencyTuple:
    """2k+2 planar frequencies summing to zero (last entry constructed)."""

    xi: np.ndarray

    def __post_init__(self):
        xi = np.ascontiguousarray(self.xi, dtype=float)
        if xi.ndim != 2 or xi.shape[1] != 2 or xi.shape[0] < 4 or xi.shape[0] % 2:
            raise ValueError(f"expected (2k+2, 2) frequencies, got shape {xi.shape}")
        scale = 1.0 + np.abs(xi).max()
        if np.abs(xi.sum(axis=0)).max() > 1e-6 * scale:
            raise ValueError("frequencies do not lie on the zero-sum hyperplane")
        xi.setflags(write=False)
        object.__setattr__(self, "xi", xi)

    @classmethod
    def from_free(cls, free: np.ndarray) -> "FrequencyTuple":
        free = np.asarray(free, dtype=float)
        return cls(np.vstack([free, -free.sum(axis=0)]))

    @property
    def k(self) -> int:
        return (self.xi.shape[0] - 2) // 2


# ---------------------------------------------------------------------------
# hyperplane estimate


def _weight(im: IMultiplier, r: np.ndarray) -> np.ndarray:
    # m(x) <x>^(2-s), the almost-increasing family behind the estimate
    return m_eval(im, r) * (1.0 + r**2) ** (0.5 * (2.0 - im.s))


def hyperplane_ratio_batch(xi: np.ndarray, im: IMultiplier) -> np.ndarray:
    """Ratio w(last) / prod(w(others)) with w = m <.>^(2-s), per sample.

    xi has shape (batch, 2k+2, 2); the last coordinate is the constructed one.
    """
    mags = np.linalg.norm(xi, axis=2)
    num = _weight(im, mags[:, -1])
    den = np.prod(_weight(im, mags[:, :-1]), axis=1)
    return num / den


def hyperplane_ratio(sample: FrequencyTuple, im: IMultiplier, k: int) -> float:
    if sample.k != k:
        raise ValueError(f"tuple has k = {sample.k}, expected {k}")
    return float(hyperplane_ratio_batch(sample.xi[None, :, :], im)[0])


def _angles(rng: np.random.Generator, shape) -> np.ndarray:
    """Angles with uniform marginals, enriched with aligned/anti-aligned
    configurations around a shared random rotation.

    The extremal tuples of the multiplier ratios are (anti)parallel; plain
    independent angles reach them too rarely for the sampled max to
    saturate, and a max estimate is valid under any full-support law.
    """
    theta0 = rng.uniform(0.0, 2.0 * np.pi, size=(shape[0], 1))
    jitter = rng.normal(0.0, 0.35, size=shape)
    u = rng.uniform(0.0, 1.0, size=shape)
    theta = theta0 + jitter
    theta = np.where(u < 0.25, theta + np.pi, theta)
    free = rng.uniform(0.0, 2.0 * np.pi, size=shape)
    return np.where(u < 0.5, theta, free)


def sample_hyperplane_tuples(
    rng: np.random.Generator, k: int, count: int, r_lo: float = 1.0, r_hi: float = 512.0
) -> np.ndarray:
    """Log-uniform radii in [r_lo, r_hi]; last entry constructed."""
    if r_lo <= 0 or r_hi <= r_lo:
        raise ValueError("need 0 < r_lo < r_hi")
    radii = np.exp(rng.uniform(math.log(r_lo), math.log(r_hi), size=(count, 2 * k + 1)))
    theta = _angles(rng, (count, 2 * k + 1))
    free = radii[:, :, None] * np.stack([np.cos(theta), np.sin(theta)], axis=2)
    return np.concatenate([free, -free.sum(axis=1, keepdims=True)], axis=1)


def sample_low_hyperplane_tuples(
    rng: np.random.Generator, k: int, count: int, im: IMultiplier
) -> np.ndarray:
    """Samples with every coordinate (constructed one included) below the cutoff."""
    r_hi = im.n_cut / (2 * k + 1)
    radii = rng.uniform(0.0, r_hi, size=(count, 2 * k + 1))
    theta = rng.uniform(0.0, 2.0 * np.pi, size=(count, 2 * k + 1))
    free = radii[:, :, None] * np.stack([np.cos(theta), np.sin(theta)], axis=2)
    return np.concatenate([free, -free.sum(axis=1, keepdims=True)], axis=1)


@dataclass(frozen=True)
class HyperplaneStats:
    k: int
    s: float
    n_cut: float
    samples: int
    max_ratio: float


def hyperplane_stats(
    k: int,
    im: IMultiplier,
    samples: int,
    rng: np.random.Generator,
    r_lo: float = 1.0,
    r_hi: float = 512.0,
) -> HyperplaneStats:
    xi = sample_hyperplane_tuples(rng, k, samples, r_lo, r_hi)
    ratios = hyperplane_ratio_batch(xi, im)
    return HyperplaneStats(k, im.s, im.n_cut, samples, float(ratios.max()))


# ---------------------------------------------------------------------------
# case-by-case multiplier bounds


def _tuple_parts(xi: np.ndarray):
    # distinguished magnitude and the sorted (descending) tail magnitudes
    mags = np.linalg.norm(xi, axis=2)
    n1 = mags[:, 0]
    tail = np.sort(mags[:, 1:], axis=1)[:, ::-1]
    return n1, tail


def _sim(a, b):
    return (a <= SIM_FACTOR * b) & (b <= SIM_FACTOR * a)


def _gg(a, b):
    return a >= GG_FACTOR * b


def _gtrsim(a, b):
    return GTRSIM_FACTOR * a >= b


def _constraints(shape: str, n1, tail, n_cut: float):
    m0, m1 = tail[:, 0], tail[:, 1]
    if shape == "C1":
        checks = [
            ("n1 ~ M0", _sim(n1, m0)),
            ("M0 >~ N", _gtrsim(m0, n_cut)),
            ("N >> M1", _gg(np.full_like(m1, n_cut), m1)),
        ]
    elif shape == "C2":
        checks = [
            ("M0 ~ M1", _sim(m0, m1)),
            ("M1 >~ N", _gtrsim(m1, n_cut)),
        ]
    elif shape == "C3":
        checks = [
            ("n1 ~ M0", _sim(n1, m0)),
            ("M0 >> M1", _gg(m0, m1)),
            ("M1 >~ N", _gtrsim(m1, n_cut)),
        ]
    else:  # pragma: no cover
        raise ValueError(shape)
    return checks


def _case_lhs_rhs(case: str, xi: np.ndarray, im: IMultiplier):
    n1, tail = _tuple_parts(xi)
    quot = m_eval(im, n1) / np.prod(m_eval(im, tail), axis=1)
    lhs = np.abs(1.0 - quot)
    if case in _RHS_IS_SIZE_RATIO:
        rhs = tail[:, 1] / tail[:, 0]
    else:
        rhs = quot
    return lhs, rhs


@dataclass(frozen=True)
class CaseCheck:
    case: str
    lhs: float
    rhs: float
    constant: float
    ok: bool


def recorded_constant(case: str, k: int, im: IMultiplier) -> float:
    return RECORDED_CONSTANTS.get((case, k, im.s, im.n_cut), DEFAULT_CONSTANT)


def case_bound_check(
    case: str,
    sample: FrequencyTuple,
    im: IMultiplier,
    k: int,
    constant: float | None = None,
) -> CaseCheck:
    """Evaluate one multiplier case bound on a constrained sample.

    Raises ValueError naming the violated ordering constraint if the sample
    does not satisfy the case's frequency regime.
    """
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; valid cases: {', '.join(CASES)}")
    if sample.k != k:
        raise ValueError(f"tuple has k = {sample.k}, expected {k}")
    xi = sample.xi[None, :, :]
    n1, tail = _tuple_parts(xi)
    for label, ok in _constraints(_CASE_SHAPE[case], n1, tail, im.n_cut):
        if not bool(ok[0]):
            raise ValueError(f"sample rejected for case {case}: constraint {label} fails")
    lhs, rhs = _case_lhs_rhs(case, xi, im)
    c = recorded_constant(case, k, im) if constant is None else constant
    return CaseCheck(case, float(lhs[0]), float(rhs[0]), c, bool(lhs[0] <= c * rhs[0]))


def _loguniform(rng, lo, hi, size):
    if hi <= lo:
        raise ValueError(f"empty sampling range [{lo}, {hi}]")
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size=size))


def _assemble(rng, mags):
    theta = _angles(rng, mags.shape)
    tail = mags[:, :, None] * np.stack([np.cos(theta), np.sin(theta)], axis=2)
    head = -tail.sum(axis=1, keepdims=True)
    return np.concatenate([head, tail], axis=1)


def sample_case_tuples(
    rng: np.random.Generator,
    case: str,
    k: int,
    im: IMultiplier,
    count: int,
    r_lo: float = 1.0,
    r_hi: float = 512.0,
    max_tries: int = 200,
) -> np.ndarray:
    """Constrained sampling: draw tail magnitudes targeting the case regime,
    attach uniform angles, construct the distinguished coordinate, then keep
    the samples that satisfy the regime exactly."""
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; valid cases: {', '.join(CASES)}")
    shape = _CASE_SHAPE[case]
    n_cut = im.n_cut
    n_tail = 2 * k + 1
    kept = []
    total = 0
    for _ in range(max_tries):
        batch = max(count, 1024)
        mags = np.empty((batch, n_tail))
        if shape == "C1":
            mags[:, 0] = _loguniform(rng, max(n_cut / 2.0, r_lo), r_hi, batch)
            mags[:, 1:] = _loguniform(
                rng, min(r_lo, n_cut / 64.0), n_cut / 8.0, (batch, n_tail - 1)
            )
        elif shape == "C2":
            mags[:, 0] = _loguniform(rng, max(n_cut, r_lo), max(2 * n_cut, r_hi / 2.0), batch)
            mags[:, 1] = mags[:, 0] * np.exp(rng.uniform(-math.log(2.0), 0.0, batch))
            if n_tail > 2:
                mags[:, 2:] = _loguniform(rng, min(r_lo, 1.0), n_cut, (batch, n_tail - 2))
        else:  # C3
            m1 = _loguniform(rng, max(n_cut / 2.0, r_lo), r_hi / GG_FACTOR, batch)
            mags[:, 1] = m1
            mags[:, 0] = m1 * np.exp(rng.uniform(math.log(GG_FACTOR), math.log(16.0), batch))
            if n_tail > 2:
                mags[:, 2:] = _loguniform(rng, min(r_lo, 1.0), n_cut / 2.0, (batch, n_tail - 2))
                mags[:, 2:] = np.minimum(mags[:, 2:], m1[:, None])
        xi = _assemble(rng, mags)
        n1, tail = _tuple_parts(xi)
        ok = np.ones(batch, dtype=bool)
        for _, flag in _constraints(shape, n1, tail, n_cut):
            ok &= flag
        kept.append(xi[ok])
        total += int(ok.sum())
        if total >= count:
            break
    if total < count:
        raise RuntimeError(
            f"case {case}: only {total}/{count} constrained samples after {max_tries} tries"
        )
    return np.concatenate(kept, axis=0)[:count]


def sample_low_case_tuples(
    rng: np.random.Generator, case: str, k: int, im: IMultiplier, count: int
) -> np.ndarray:
    """Case-constrained samples with every frequency at or below the cutoff.

    Only the C1 and C2 regimes admit such samples; C3 forces M0 >= 4N.
    """
    shape = _CASE_SHAPE[case]
    n = im.n_cut
    n_tail = 2 * k + 1
    mags = np.zeros((count, n_tail))
    if shape == "C1":
        mags[:, 0] = rng.uniform(0.6 * n, 0.8 * n, count)
        cap = min(n / 8.0, 0.2 * n / (2 * k))
        mags[:, 1:] = rng.uniform(0.0, cap, (count, n_tail - 1))
        xi = _assemble(rng, mags)
    elif shape == "C2":
        mags[:, 0] = rng.uniform(0.7 * n, 0.9 * n, count)
        mags[:, 1] = mags[:, 0] * rng.uniform(0.9, 1.0, count)
        if n_tail > 2:
            mags[:, 2:] = rng.uniform(0.0, n / (16.0 * k), (count, n_tail - 2))
        theta0 = rng.uniform(0.0, 2.0 * np.pi, count)
        theta = rng.uniform(0.0, 2.0 * np.pi, size=mags.shape)
        theta[:, 0] = theta0
        theta[:, 1] = theta0 + np.pi + rng.uniform(-0.05, 0.05, count)
        tail = mags[:, :, None] * np.stack([np.cos(theta), np.sin(theta)], axis=2)
        head = -tail.sum(axis=1, keepdims=True)
        xi = np.concatenate([head, tail], axis=1)
    else:
        raise ValueError(f"case {case}: the all-low regime is infeasible (M0 >= 4N)")
    n1, tail_mags = _tuple_parts(xi)
    ok = np.linalg.norm(xi, axis=2).max(axis=1) <= n
    for _, flag in _constraints(shape, n1, tail_mags, n):
        ok &= flag
    if not ok.all():
        xi = xi[ok]
    if xi.shape[0] == 0:
        raise RuntimeError(f"case {case}: low-sample construction produced nothing")
    return xi


@dataclass(frozen=True)
class CaseStats:
    case: str
    k: int
    s: float
    n_cut: float
    samples: int
    max_lhs: float
    max_ratio: float
    constant: float


def case_bound_stats(
    case: str,
    k: int,
    im: IMultiplier,
    samples: int,
    rng: np.random.Generator,
    r_lo: float = 1.0,
    r_hi: float = 512.0,
    record: bool = True,
) -> CaseStats:
    """Measure the case constant C = max(lhs/rhs) over constrained samples."""
    if samples == 0:
        return CaseStats(case, k, im.s, im.n_cut, 0, 0.0, 0.0, math.nan)
    xi = sample_case_tuples(rng, case, k, im, samples, r_lo, r_hi)
    lhs, rhs = _case_lhs_rhs(case, xi, im)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(rhs > 0.0, lhs / rhs, np.where(lhs == 0.0, 0.0, np.inf))
    stats = CaseStats(
        case,
        k,
        im.s,
        im.n_cut,
        samples,
        float(lhs.max()),
        float(ratio.max()),
        float(ratio.max()),
    )
    if record:
        RECORDED_CONSTANTS[(case, k, im.s, im.n_cut)] = stats.constant
    return stats


# ---------------------------------------------------------------------------
# monotone multiplier family


@dataclass(frozen=True)
class MonotoneReport:
    ok: bool
    violations: int
    worst_drop: float
    worst_x: float


def monotone_family_check(
    im: IMultiplier,
    p: float,
    r_max: float | None = None,
    num: int = 4096,
    rtol: float = 1e-12,
) -> MonotoneReport:
    """Scan m(x) x^p for decreases on a dense radial grid.

    A violation is a relative drop beyond roundoff tolerance between
    consecutive grid points. Exact (zero-violation) for the sharp variant
    whenever p >= 2 - s.
    """
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    if r_max is None:
        r_max = 256.0 * im.n_cut
    r = np.unique(
        np.concatenate(
            [
                np.geomspace(1e-2, r_max, num),
                [im.n_cut, 2.0 * im.n_cut],
            ]
        )
    )
    vals = m_eval(im, r) * r**p
    diffs = np.diff(vals)
    scale = np.maximum(vals[:-1], vals[1:])
    bad = diffs < -rtol * scale
    count = int(bad.sum())
    if count == 0:
        return MonotoneReport(True, 0, 0.0, math.nan)
    drops = np.where(bad, -diffs / scale, 0.0)
    i = int(np.argmax(drops))
    return MonotoneReport(False, count, float(drops[i]), float(r[i]))


# ---------------------------------------------------------------------------
# dispersive gain probe and admissible pairs


@dataclass(frozen=True)
class StrichartzProbeSpec:
    """Exponents (mu, p, q), horizon, and trial count for the free-flow probe.

    Requires the derivative-gain admissibility 4/q = 2(1/2 - 1/p) + mu with
    0 <= mu <= 1, 2/(1-mu) <= p <= inf, 2 <= q <= inf.
    """

    mu: float
    p: float
    q: float
    horizon: float = 1.0
    trials: int = 8

    def __post_init__(self):
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError(f"mu must lie in [0, 1], got {self.mu}")
        if self.q < 2.0:
            raise ValueError(f"q must be >= 2, got {self.q}")
        p_min = 2.0 / (1.0 - self.mu) if self.mu < 1.0 else math.inf
        if self.p < p_min:
            raise ValueError(f"p must be >= 2/(1-mu) = {p_min}, got {self.p}")
        lhs = 4.0 / self.q if self.q != math.inf else 0.0
        rhs = 2.0 * (0.5 - (1.0 / self.p if self.p != math.inf else 0.0)) + self.mu
        if abs(lhs - rhs) > 1e-12:
            raise ValueError(
                f"(mu, p, q) = ({self.mu}, {self.p}, {self.q}) violates "
                f"4/q = 2(1/2 - 1/p) + mu: {lhs} != {rhs}"
            )
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass(frozen=True)
class ProbeResult:
    ratio_max: float
    ratios: tuple


def strichartz_gain_probe(
    spec: StrichartzProbeSpec,
    grid: Grid2D,
    rng: np.random.Generator | None = None,
    n_time: int = 96,
    fields: list[Field] | None = None,
    band: float | None = None,
) -> ProbeResult:
    """Max over trial fields of ||free flow of |grad|^mu f||_{L^q_t L^p_x} / ||f||_2.

    The time norm uses trapezoidal quadrature on n_time + 1 nodes (>= 64
    required) over [0, horizon]; q = inf takes the max over nodes. A band
    makes the trial ensemble grid-independent (same seed, same field), which
    is what refinement studies compare.
    """
    if n_time < 64:
        raise ValueError(f"time quadrature needs at least 64 nodes, got {n_time}")
    if fields is None:
        if rng is None:
            raise ValueError("provide rng or explicit trial fields")
        from .initial_data import random_field, shared_mode_noise

        if band is not None:
            fields = [shared_mode_noise(grid, rng, band) for _ in range(spec.trials)]
        else:
            fields = [random_field(grid, rng, unit_l2=True) for _ in range(spec.trials)]
    times = np.linspace(0.0, spec.horizon, n_time + 1)
    ratios = []
    for f in fields:
        l2 = math.sqrt(
            float((np.abs(_as_spectral(f).data) ** 2).sum() * grid.spectral_weight)
        )
        g = apply_symbol(_as_spectral(f), lambda r: r**spec.mu)
        norms = np.empty(times.shape)
        for i, t in enumerate(times):
            evolved = g.with_data(g.data * np.exp(1j * t * grid.dispersion))
            norms[i] = lp_norm(to_physical(evolved), spec.p)
        if spec.q == math.inf:
            tnorm = float(norms.max())
        else:
            trapezoid = getattr(np, "trapezoid", None) or np.trapz
            tnorm = float(trapezoid(norms**spec.q, times)) ** (1.0 / spec.q)
        ratios.append(tnorm / l2)
    return ProbeResult(float(max(ratios)), tuple(ratios))


def admissible_pair_check(p: float, q: float, d: int) -> bool:
    """Fourth-order admissibility: 4/q = d(1/2 - 1/p) with the range rule
    p < 2d/(d-4) for d >= 4 (finite p when d = 4) and (p, q, d) != (inf, 2, 4)."""
    if d < 1 or int(d) != d:
        raise ValueError(f"dimension must be a positive integer, got {d}")
    if p < 2.0 or q < 2.0:
        return False
    if p == math.inf and q == 2.0 and d == 4:
        return False
    lhs = 4.0 / q if q != math.inf else 0.0
    rhs = d * (0.5 - (1.0 / p if p != math.inf else 0.0))
    if abs(lhs - rhs) > 1e-12:
        return False
    if d >= 5 and not p < 2.0 * d / (d - 4.0):
        return False
    if d == 4 and p == math.inf:
        return False
    return True
