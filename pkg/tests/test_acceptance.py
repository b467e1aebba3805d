"""Acceptance suite: one test per criterion, each printing a PASS line with
the measured numbers (run with -s or -rA to see them on success)."""

import json
import math
from fractions import Fraction

import numpy as np
import pytest

from fourns import gwp
from fourns import inequality_lab as lab
from fourns.cli import main
from fourns.diagnostics import almost_conservation_sweep, energy, mass
from fourns.dynamics import SimConfig, final_state, linear_propagate, run
from fourns.initial_data import gaussian, multi_bump, random_field, single_mode
from fourns.multipliers import IMultiplier, apply_I
from fourns.spectral import Grid2D, sobolev_norm


def _report(name: str, detail: str) -> None:
    print(f"ACCEPTANCE {name}: PASS ({detail})")


# ---------------------------------------------------------------------------
# exact bookkeeping


def test_exact_bookkeeping():
    for k in range(1, 11):
        assert gwp.gwp_threshold(k) == 2 - Fraction(3, 4 * k)
        e1, _ = gwp.growth_exponents(k, gwp.gwp_threshold(k))
        assert e1 == 0
    for k in range(1, 65):
        s = gwp.case_split_point(k)
        e1, e2 = gwp.growth_exponents(k, s)
        assert e1 == e2
        assert (4 - 2 * s) / e1 == (4 - 2 * s) / e2
    _report("exact-bookkeeping", "k = 1..10 thresholds exact, split continuity k <= 64")


# ---------------------------------------------------------------------------
# linear propagator


def test_linear_propagator_exactness(rng):
    g = Grid2D(128, 128, 2 * np.pi, 2 * np.pi)
    worst_phase = 0.0
    for mode in ((1, 0), (3, 2), (17, 9), (0, 40)):
        u = single_mode(g, 1.0 + 0.5j, mode)
        xi2 = float(g.kx[mode[0]] ** 2 + g.ky[mode[1]] ** 2)
        for t in (0.37, 2.0, 13.1):
            v = linear_propagate(u, t)
            hot = np.abs(u.data) > 0
            got = v.data[hot][0] / u.data[hot][0]
            err = abs(got - np.exp(1j * t * (xi2**2 + xi2)))
            worst_phase = max(worst_phase, err)
    assert worst_phase <= 1e-12

    worst_mass = 0.0
    for _ in range(10):
        u = random_field(g, rng)
        m0 = mass(u)
        worst_mass = max(worst_mass, abs(mass(linear_propagate(u, 1.234)) - m0) / m0)
    assert worst_mass <= 1e-13
    _report(
        "linear-propagator",
        f"phase err {worst_phase:.2e} <= 1e-12, mass drift {worst_mass:.2e} <= 1e-13",
    )


# ---------------------------------------------------------------------------
# conservation at the pinned configuration


def test_conservation_mass_and_energy_drift():
    g = Grid2D(256, 256)  # 32 pi box
    u0 = gaussian(g, 1.0, 2.0)

    m0 = mass(u0)
    cfg = SimConfig(k=1, dt=1e-3, t_end=1.0, diag_every=1000, i_cutoffs=(1.0,))
    mass_drift = abs(mass(final_state(cfg, u0).u) - m0) / m0
    assert mass_drift <= 1e-12

    e0 = energy(u0, 1)

    def drift(dt):
        cfg = SimConfig(k=1, dt=dt, t_end=0.1, diag_every=100, i_cutoffs=(1.0,))
        return max(abs(r.energy - e0) / e0 for r in run(cfg, u0))

    d1, d2 = drift(1e-4), drift(5e-5)
    assert d1 <= 1e-6
    assert 3.0 <= d1 / d2 <= 5.0
    _report(
        "conservation",
        f"mass drift {mass_drift:.2e} over 1e3 steps; energy drift {d1:.2e} "
        f"at dt=1e-4, halving ratio {d1 / d2:.2f}",
    )


# ---------------------------------------------------------------------------
# integrator orders


def _global_order(integrator, u0, dts, t_end):
    def l2err(a, b):
        return float(np.sqrt((np.abs(a.data - b.data) ** 2).sum() / (np.abs(b.data) ** 2).sum()))

    ref = final_state(SimConfig(k=1, dt=dts[-1] / 16, t_end=t_end, integrator=integrator), u0).u
    errs = [
        l2err(final_state(SimConfig(k=1, dt=dt, t_end=t_end, integrator=integrator), u0).u, ref)
        for dt in dts
    ]
    return float(np.polyfit(np.log(dts), np.log(errs), 1)[0]), errs


def test_integrator_orders():
    g = Grid2D(64, 64, 8 * np.pi, 8 * np.pi)
    strang_order, _ = _global_order("strang", gaussian(g, 2.0, 2.0), (4e-3, 2e-3, 1e-3), 0.24)
    assert 1.75 <= strang_order <= 2.25
    ifrk4_order, _ = _global_order("ifrk4", gaussian(g, 5.0, 2.0), (4e-3, 2e-3, 1e-3), 0.12)
    assert 3.5 <= ifrk4_order <= 4.5
    _report("integrator-orders", f"strang {strang_order:.3f}, ifrk4 {ifrk4_order:.3f}")


# ---------------------------------------------------------------------------
# almost-conservation trend


def _sweep_initial_doc():
    """Gaussian-family data: a large smooth core (which fixes the short
    local-existence window) plus a geometric ladder of small modulated bumps
    populating every octave up to the dealiasing edge."""
    bumps = [{"amplitude": 399.0, "width": 0.2, "center": [0.0, 0.0], "modulation": [0.0, 0.0]}]
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    ladder = (
        (10.0, 0.35, (1.0, 0.0)),
        (20.0, 0.35, (0.0, 1.0)),
        (40.0, 0.35, (inv_sqrt2, inv_sqrt2)),
        (76.0, 0.4, (1.0, 0.0)),
    )
    for j, (freq, width, direction) in enumerate(ladder):
        bumps.append(
            {
                "amplitude": 2000.0 * freq**-3.5,
                "width": width,
                "modulation": [freq * direction[0], freq * direction[1]],
                "center": [0.3 * j - 0.45, -0.2 * j + 0.3],
            }
        )
    return bumps


N_LIST = [8.0, 16.0, 32.0, 64.0]


def test_almost_conservation_trend(tmp_path):
    doc = {
        "grid": {"nx": 256, "ny": 256, "lx": 2 * math.pi, "ly": 2 * math.pi},
        "sim": {
            "k": 1,
            "dt": 4e-10,
            "t_end": 4e-8,
            "integrator": "ifrk4",
            "dealias": "two_thirds",
            "i_cutoffs": [8.0],
        },
        "multiplier": {"s": 1.5, "n_list": N_LIST},
        "initial_data": {"family": "multi_bump", "bumps": _sweep_initial_doc()},
        "output": {"directory": str(tmp_path / "sweep")},
    }
    cfg_path = tmp_path / "sweep.json"
    cfg_path.write_text(json.dumps(doc))
    assert main(["sweep-n", "--config", str(cfg_path)]) == 0

    lines = (tmp_path / "sweep" / "sweep.csv").read_text().strip().splitlines()
    rows = [line.split(",") for line in lines[1:] if not line.startswith("#")]
    deltas = {float(r[0]): float(r[1]) for r in rows}
    slope = float(rows[0][3])
    ordered = [deltas[n] for n in N_LIST]
    assert all(a >= b for a, b in zip(ordered, ordered[1:])), f"not monotone: {ordered}"
    assert slope <= -1.0
    footer = [l for l in lines if l.startswith("# fitted_slope,")]
    assert footer and float(footer[0].split(",")[1]) == slope
    _report(
        "almost-conservation-trend",
        f"deltas {['%.3e' % d for d in ordered]}, fitted slope {slope:.2f} "
        f"(gap to the -3 bound exponent: {slope - (-3.0):+.2f}; decay faster than the bound)",
    )


def test_almost_conservation_linear_flow():
    g = Grid2D(256, 256, 2 * np.pi, 2 * np.pi)
    u0 = gaussian(g, 1.0, 0.5)
    cfg = SimConfig(
        k=1, dt=2e-4, integrator="ifrk4", dealias="two_thirds", s=1.5,
        linear_only=True, i_cutoffs=(8.0,),
    )
    res = almost_conservation_sweep(u0, cfg, N_LIST)
    worst = max(r.delta_e for r in res.rows)
    assert worst <= 1e-12
    _report("almost-conservation-linear", f"max delta {worst:.2e} <= 1e-12 over N = {N_LIST}")


# ---------------------------------------------------------------------------
# multiplier inequality suite


def test_multiplier_inequality_suite():
    worst_change = 0.0
    for k in (1, 2):
        for s in (1.5, 1.8):
            for n in (16.0, 32.0):
                im = IMultiplier(s, n)
                rng = np.random.default_rng(20260810)
                xi = lab.sample_hyperplane_tuples(rng, k, 200000)
                ratios = lab.hyperplane_ratio_batch(xi, im)
                assert np.isfinite(ratios).all()
                m1, m2 = ratios[:100000].max(), ratios.max()
                worst_change = max(worst_change, abs(m2 - m1) / m1)
    assert worst_change < 0.10

    im = IMultiplier(1.5, 16.0)
    rng = np.random.default_rng(7)
    checked = 0
    for case in ("T1C1", "T2C1", "T3C1", "T1C2", "T2C2", "T3C2"):
        for row in lab.sample_low_case_tuples(rng, case, 1, im, 200):
            chk = lab.case_bound_check(case, lab.FrequencyTuple(row), im, 1)
            assert chk.lhs == 0.0
            checked += 1

    for s in (1.5, 1.8):
        for n in (16.0, 32.0):
            rep = lab.monotone_family_check(IMultiplier(s, n), 2.0 - s)
            assert rep.ok and rep.violations == 0

    _report(
        "multiplier-inequalities",
        f"hyperplane max change {100 * worst_change:.2f}% < 10% over 8 combos; "
        f"{checked} all-low samples with lhs exactly 0; monotone family clean",
    )


# ---------------------------------------------------------------------------
# dispersive gain probe


def test_strichartz_probe():
    g1 = Grid2D(128, 128, 2 * np.pi, 2 * np.pi)
    g2 = Grid2D(256, 256, 2 * np.pi, 2 * np.pi)

    spec0 = lab.StrichartzProbeSpec(0.0, 2.0, math.inf, horizon=1.0, trials=4)
    res0 = lab.strichartz_gain_probe(spec0, g1, np.random.default_rng(3))
    assert all(abs(r - 1.0) <= 1e-12 for r in res0.ratios)

    spec1 = lab.StrichartzProbeSpec(1.0, math.inf, 2.0, horizon=1.0, trials=6)
    r1 = lab.strichartz_gain_probe(spec1, g1, np.random.default_rng(11), band=40.0).ratio_max
    r2 = lab.strichartz_gain_probe(spec1, g2, np.random.default_rng(11), band=40.0).ratio_max
    change = abs(r2 - r1) / r1
    assert change <= 0.20
    _report(
        "strichartz-probe",
        f"(0,2,inf) ratio exactly 1; (1,inf,2) ratio {r1:.3f} -> {r2:.3f} "
        f"({100 * change:.1f}% across refinement)",
    )


# ---------------------------------------------------------------------------
# determinism


def test_determinism(tmp_path):
    sim_doc = {
        "grid": {"nx": 64, "ny": 64, "lx": 2 * math.pi, "ly": 2 * math.pi},
        "sim": {"dt": 1e-4, "t_end": 2e-3, "i_cutoffs": [2.0, 4.0], "diag_every": 4},
        "initial_data": {"width": 0.5, "amplitude": 2.0},
        "output": {"directory": str(tmp_path / "sim_out")},
    }
    lab_doc = {
        "multiplier": {"n": 16.0},
        "lab": {"seed": 424242, "samples": 20000, "cases": ["T1C1", "T2C2", "T3C3"]},
        "output": {"directory": str(tmp_path / "lab_out")},
    }
    payloads = {}
    for name, doc in (("sim", sim_doc), ("lab", lab_doc)):
        cfg_path = tmp_path / f"{name}.json"
        cfg_path.write_text(json.dumps(doc))
        cmd = "simulate" if name == "sim" else "lab"
        csv = "diagnostics.csv" if name == "sim" else "lab.csv"
        assert main([cmd, "--config", str(cfg_path)]) == 0
        first = (tmp_path / f"{name}_out" / csv).read_bytes()
        assert main([cmd, "--config", str(cfg_path)]) == 0
        second = (tmp_path / f"{name}_out" / csv).read_bytes()
        assert first == second
        payloads[name] = len(first)
    _report(
        "determinism",
        f"byte-identical reruns: diagnostics.csv ({payloads['sim']} B), "
        f"lab.csv ({payloads['lab']} B)",
    )
