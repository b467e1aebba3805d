"""Conserved-quantity evaluation and the cutoff-sweep experiment.

The energy of the nonlinear flow is
    E(u) = 1/2 int |Lap u|^2 + |grad u|^2 dx + 1/(2k+2) int |u|^{2k+2} dx,
all three pieces nonnegative (defocusing sign). Linear-only runs use the
free flow's energy, i.e. the potential term is dropped; that quantity is a
pointwise function of |u_hat| and is conserved exactly by the propagator.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import gwp
from .multipliers import IMultiplier, apply_I
from .spectral import Field, _as_physical, _as_spectral, lp_norm, sobolev_norm


def mass(f: Field) -> float:
    """int |u|^2 by quadrature (either representation)."""
    if f.rep == "physical":
        return float((np.abs(f.data) ** 2).sum() * f.grid.cell_area)
    return float((np.abs(f.data) ** 2).sum() * f.grid.spectral_weight)


def energy_parts(f: Field, k: int) -> tuple[float, float, float]:
    """(biharmonic, gradient, potential) pieces of the energy, each >= 0."""
    g = f.grid
    fs = _as_spectral(f)
    amp2 = np.abs(fs.data) ** 2 * g.spectral_weight
    biharm = 0.5 * float((g.k2**2 * amp2).sum())
    grad = 0.5 * float((g.k2 * amp2).sum())
    fp = _as_physical(f)
    pot = float((np.abs(fp.data) ** (2 * k + 2)).sum() * g.cell_area) / (2.0 * k + 2.0)
    return biharm, grad, pot


def energy(f: Field, k: int, include_potential: bool = True) -> float:
    biharm, grad, pot = energy_parts(f, k)
    return biharm + grad + (pot if include_potential else 0.0)


def modified_energy(f: Field, im: IMultiplier, k: int, include_potential: bool = True) -> float:
    """Energy of the smoothed state I u."""
    return energy(apply_I(im, f), k, include_potential)


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    mass: float
    energy: float
    h_s: float
    h2: float
    linf: float
    mod_energy: Mapping[float, float]

    def __post_init__(self):
        vals = [self.t, self.mass, self.energy, self.h_s, self.h2, self.linf]
        vals += list(self.mod_energy.values())
        if not all(math.isfinite(v) and v >= 0.0 for v in vals):
            raise ValueError(f"non-finite or negative diagnostics at t = {self.t}")


def make_record(t: float, u: Field, cfg, ims: Mapping[float, IMultiplier]) -> DiagnosticsRecord:
    include_pot = not cfg.linear_only
    up = _as_physical(u)
    us = _as_spectral(u)
    return DiagnosticsRecord(
        t=t,
        mass=mass(us),
        energy=energy(us, cfg.k, include_pot),
        h_s=sobolev_norm(us, cfg.s),
        h2=sobolev_norm(us, 2.0),
        linf=lp_norm(up, math.inf),
        mod_energy={
            n: modified_energy(us, im, cfg.k, include_pot) for n, im in ims.items()
        },
    )


def fit_loglog_slope(ns, vals) -> float:
    """Least-squares slope of log(vals) against log(ns).

    Values are floored at a tiny positive number so exact zeros (an exactly
    conserved quantity) give identical logs and hence slope 0.
    """
    ns = np.asarray(ns, dtype=float)
    vals = np.maximum(np.asarray(vals, dtype=float), 1e-300)
    if len(ns) < 2:
        raise ValueError("slope fit needs at least two points")
    if np.all(vals == vals[0]):
        return 0.0
    return float(np.polyfit(np.log(ns), np.log(vals), 1)[0])


@dataclass(frozen=True)
class SweepRow:
    n_cut: float
    delta_e: float
    sign: int


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    slope: float
    t_star: float

    def deltas(self) -> dict[float, float]:
        return {r.n_cut: r.delta_e for r in self.rows}


def almost_conservation_sweep(u0: Field, cfg, n_list, t_star: float | None = None) -> SweepResult:
    """Run one trajectory and tabulate |E(I_N u(t*)) - E(I_N u(0))| per cutoff N.

    The horizon defaults to one nominal local-existence window,
    min(0.1, c ||I_{Nmax} u0||_{H^2}^{-2k}), rounded to a whole number of
    steps; every N is evaluated on the same end state. The reported slope is
    fitted over the top half of n_list.
    """
    from . import dynamics  # deferred: dynamics imports this module

    n_list = [float(n) for n in n_list]
    if len(n_list) < 4:
        raise ValueError(f"n_list needs at least 4 entries for a slope fit, got {len(n_list)}")
    if sorted(n_list) != n_list or len(set(n_list)) != len(n_list):
        raise ValueError("n_list must be strictly ascending")
    nyq = u0.grid.nyquist
    bad = [n for n in n_list if not dynamics._is_dyadic(n) or n >= nyq]
    if bad:
        raise ValueError(f"n_list entries must be dyadic and below Nyquist {nyq:.6g}: {bad}")

    ims = {n: IMultiplier(cfg.s, n, cfg.variant) for n in n_list}
    include_pot = not cfg.linear_only

    if t_star is None:
        iu0_h2 = sobolev_norm(apply_I(ims[n_list[-1]], u0), 2.0)
        t_star = min(0.1, gwp.existence_time(iu0_h2, cfg.k))
    steps = max(1, round(t_star / cfg.dt))
    t_star = steps * cfg.dt

    e0 = {n: modified_energy(u0, im, cfg.k, include_pot) for n, im in ims.items()}
    u_end = dynamics.final_state(dataclasses.replace(cfg, t_end=t_star), u0).u

    rows = []
    for n in n_list:
        e1 = modified_energy(u_end, ims[n], cfg.k, include_pot)
        diff = e1 - e0[n]
        rows.append(SweepRow(n, abs(diff), int(np.sign(diff))))
    top = rows[len(rows) // 2 :]
    slope = fit_loglog_slope([r.n_cut for r in top], [r.delta_e for r in top])
    return SweepResult(tuple(rows), slope, t_star)
