"""Time integration of the fourth-order NLS flow i u_t + Lap^2 u - Lap u + |u|^{2k} u = 0.

Both sub-flows are exact: the linear propagator is a pointwise spectral phase
e^{i t (|xi|^4 + |xi|^2)}, the nonlinear sub-flow is the pointwise rotation
u -> u e^{i |u|^{2k} t}. Strang composition of the two conserves the discrete
mass to roundoff; the integrating-factor RK4 trades that for fourth order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import diagnostics
from .multipliers import SHARP, SMOOTH, IMultiplier
from .spectral import (
    PADDED,
    PHYSICAL,
    TWO_THIRDS,
    Field,
    RepresentationError,
    _as_physical,
    _as_spectral,
    nonlinear_product,
    to_physical,
    to_spectral,
)

STRANG = "strang"
IFRK4 = "ifrk4"


class BlowUpError(RuntimeError):
    """Numerical blow-up guard tripped; carries time and max |u|."""

    def __init__(self, t: float, max_abs: float):
        super().__init__(f"max|u| = {max_abs:.3e} exceeded the blow-up guard at t = {t:.6g}")
        self.t = t
        self.max_abs = max_abs


def _is_dyadic(n: float) -> bool:
    return n >= 1.0 and 2.0 ** round(math.log2(n)) == n


@dataclass(frozen=True)
class SimConfig:
    """Run parameters: nonlinearity power, stepping, dealiasing, diagnostics."""

    k: int = 1
    dt: float = 1e-3
    t_end: float = 0.1
    integrator: str = STRANG
    dealias: str = PADDED
    diag_every: int = 10
    i_cutoffs: tuple = (1.0, 2.0, 4.0)
    s: float = 1.5
    variant: str = SHARP
    linear_only: bool = False
    blowup_threshold: float = 1e6

    def __post_init__(self):
        if self.k < 1 or int(self.k) != self.k:
            raise ValueError(f"k must be a positive integer, got {self.k}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_end < 0:
            raise ValueError(f"t_end must be nonnegative, got {self.t_end}")
        if self.integrator not in (STRANG, IFRK4):
            raise ValueError(f"unknown integrator {self.integrator!r}")
        if self.dealias not in (PADDED, TWO_THIRDS):
            raise ValueError(f"unknown dealias mode {self.dealias!r}")
        if self.diag_every < 1:
            raise ValueError("diag_every must be >= 1")
        if not self.i_cutoffs:
            raise ValueError("i_cutoffs must be nonempty")
        bad = [n for n in self.i_cutoffs if not _is_dyadic(n)]
        if bad:
            raise ValueError(f"i_cutoffs must be dyadic numbers >= 1, got {bad}")
        if self.variant not in (SHARP, SMOOTH):
            raise ValueError(f"unknown multiplier variant {self.variant!r}")

    def multipliers(self) -> dict[float, IMultiplier]:
        return {n: IMultiplier(self.s, n, self.variant) for n in self.i_cutoffs}


@dataclass(frozen=True)
class StepperState:
    t: float
    u: Field
    step_count: int = 0


def linear_propagate(f: Field, t: float) -> Field:
    """Free flow: u_hat <- e^{i t (|xi|^4 + |xi|^2)} u_hat.

    Exactly unitary: |u_hat| is untouched pointwise (no Nyquist masking here).
    """
    if t == 0.0:
        return f
    fs = _as_spectral(f)
    out = fs.with_data(fs.data * np.exp(1j * t * f.grid.dispersion))
    return out if f.rep != PHYSICAL else to_physical(out)


def nonlinear_phase_step(f: Field, k: int, t: float) -> Field:
    """Exact nonlinear sub-flow: u <- u e^{i |u|^{2k} t}, modulus preserved."""
    if f.rep != PHYSICAL:
        raise RepresentationError("nonlinear_phase_step expects a physical-space field")
    u = f.data
    return f.with_data(u * np.exp(1j * t * np.abs(u) ** (2 * k)))


def _guard(u: Field, t: float, threshold: float) -> None:
    m = float(np.abs(u.data).max())
    if not np.isfinite(m) or m > threshold:
        raise BlowUpError(t, m)


def _advance(state: StepperState, cfg: SimConfig, dt: float | None) -> tuple[float, float, int]:
    # Signed dt overrides allow stepping backward; the uniform forward path
    # keeps t = step_count * cfg.dt exact.
    if dt is None:
        count = state.step_count + 1
        return cfg.dt, count * cfg.dt, count
    count = state.step_count + (1 if dt > 0 else -1)
    return dt, state.t + dt, count


def strang_step(state: StepperState, cfg: SimConfig, dt: float | None = None) -> StepperState:
    """Half linear, full nonlinear, half linear. Local error O(dt^3)."""
    dt, t, count = _advance(state, cfg, dt)
    u = linear_propagate(_as_physical(state.u), 0.5 * dt)
    if not cfg.linear_only:
        u = nonlinear_phase_step(u, cfg.k, dt)
    u = linear_propagate(u, 0.5 * dt)
    _guard(u, t, cfg.blowup_threshold)
    return StepperState(t, u, count)


def _rhs_hat(u_hat: np.ndarray, ref: Field, cfg: SimConfig) -> np.ndarray:
    # i F[|u|^{2k} u]; dealiased pseudo-spectral evaluation.
    if cfg.linear_only:
        return np.zeros_like(u_hat)
    u = to_physical(ref.with_data(u_hat))
    w = nonlinear_product(u, cfg.k, cfg.dealias)
    return 1j * to_spectral(w).data


def ifrk4_step(state: StepperState, cfg: SimConfig, dt: float | None = None) -> StepperState:
    """Classical RK4 in the rotating frame of the free flow.

    Exact for linear-only runs; mass drifts at O(dt^4) otherwise.
    """
    dt, t, count = _advance(state, cfg, dt)
    grid = state.u.grid
    e_half = np.exp(1j * (0.5 * dt) * grid.dispersion)
    e_full = e_half * e_half

    v = _as_spectral(state.u)
    v0 = v.data
    k1 = _rhs_hat(v0, v, cfg)
    k2 = _rhs_hat(e_half * (v0 + 0.5 * dt * k1), v, cfg) / e_half
    k3 = _rhs_hat(e_half * (v0 + 0.5 * dt * k2), v, cfg) / e_half
    k4 = _rhs_hat(e_full * (v0 + dt * k3), v, cfg) / e_full
    v1 = e_full * (v0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))

    u = to_physical(v.with_data(v1))
    _guard(u, t, cfg.blowup_threshold)
    return StepperState(t, u, count)


_STEPPERS = {STRANG: strang_step, IFRK4: ifrk4_step}


def n_steps_for(cfg: SimConfig) -> int:
    """Step count for t_end; t_end must be an integer multiple of dt."""
    if cfg.t_end == 0.0:
        return 0
    n = round(cfg.t_end / cfg.dt)
    if n < 1 or abs(n * cfg.dt - cfg.t_end) > 1e-9 * max(cfg.dt, cfg.t_end):
        raise ValueError(
            f"t_end = {cfg.t_end} is not an integer multiple of dt = {cfg.dt}"
        )
    return n


def run(cfg: SimConfig, u0: Field):
    """Step to t_end, yielding a DiagnosticsRecord every diag_every steps.

    Deterministic given cfg and u0. Records already yielded remain valid if a
    later step trips the blow-up guard.
    """
    if u0.rep != PHYSICAL:
        raise RepresentationError("run expects physical-space initial data")
    if not np.isfinite(u0.data).all():
        raise ValueError("initial data contains non-finite values")
    nyq = u0.grid.nyquist
    high = [n for n in cfg.i_cutoffs if n >= nyq]
    if high:
        raise ValueError(f"i_cutoffs {high} are not below the grid Nyquist {nyq:.6g}")

    ims = cfg.multipliers()
    step = _STEPPERS[cfg.integrator]
    state = StepperState(0.0, u0, 0)
    yield diagnostics.make_record(state.t, state.u, cfg, ims)
    total = n_steps_for(cfg)
    for i in range(1, total + 1):
        state = step(state, cfg)
        if i % cfg.diag_every == 0 or i == total:
            yield diagnostics.make_record(state.t, state.u, cfg, ims)


def final_state(cfg: SimConfig, u0: Field) -> StepperState:
    """Convenience driver returning only the end state."""
    if u0.rep != PHYSICAL:
        raise RepresentationError("final_state expects physical-space initial data")
    step = _STEPPERS[cfg.integrator]
    state = StepperState(0.0, u0, 0)
    for _ in range(n_steps_for(cfg)):
        state = step(state, cfg)
    return state
