import math

import numpy as np
import pytest

from fourns.diagnostics import (
    DiagnosticsRecord,
    almost_conservation_sweep,
    energy,
    energy_parts,
    fit_loglog_slope,
    mass,
    modified_energy,
)
from fourns.dynamics import SimConfig, run
from fourns.initial_data import gaussian, plane_wave, random_field, single_mode
from fourns.multipliers import IMultiplier
from fourns.spectral import Field, Grid2D, sobolev_norm, to_spectral


class TestMass:
    def test_gaussian_integral(self):
        g = Grid2D(256, 256)
        assert mass(gaussian(g, 1.0, 1.0)) == pytest.approx(math.pi, rel=1e-6)

    def test_constant_field(self, grid):
        f = Field(grid, np.full((64, 64), 2.0 - 1.0j))
        assert mass(f) == pytest.approx(5.0 * (2 * np.pi) ** 2, rel=1e-12)

    def test_equals_squared_sobolev_at_zero(self, grid, rng):
        u = random_field(grid, rng)
        assert mass(u) == pytest.approx(sobolev_norm(u, 0.0) ** 2, rel=1e-12)


class TestEnergy:
    def test_zero_field(self, grid):
        assert energy(Field(grid, np.zeros((64, 64))), 1) == 0.0

    @pytest.mark.parametrize("k", [1, 2])
    def test_plane_wave_closed_form(self, grid, k):
        amp, mode = 1.7, (3, 1)
        u = plane_wave(grid, amp, mode)
        xi2 = float(grid.kx[3] ** 2 + grid.ky[1] ** 2)
        area = (2 * np.pi) ** 2
        want = area * (0.5 * amp**2 * (xi2**2 + xi2) + amp ** (2 * k + 2) / (2 * k + 2))
        assert energy(u, k) == pytest.approx(want, rel=1e-10)

    def test_parts_are_nonnegative_along_a_run(self, wide_grid):
        cfg = SimConfig(k=1, dt=1e-3, t_end=0.01, i_cutoffs=(1.0,))
        for rec in run(cfg, gaussian(wide_grid, 2.0, 2.0)):
            assert rec.energy >= 0.0
        for t in (0.0, 0.005):
            parts = energy_parts(gaussian(wide_grid, 2.0, 2.0), 1)
            assert all(p >= 0.0 for p in parts)

    def test_conservation_short_run(self, wide_grid):
        u0 = gaussian(wide_grid, 2.0, 2.0)
        e0 = energy(u0, 1)
        cfg = SimConfig(k=1, dt=1e-4, t_end=0.01, diag_every=20, i_cutoffs=(1.0,))
        worst = max(abs(r.energy - e0) / e0 for r in run(cfg, u0))
        assert worst <= 1e-6


class TestModifiedEnergy:
    def test_low_frequency_equals_plain_energy_exactly(self, grid):
        u = single_mode(grid, 1.2, (3, 0))
        im = IMultiplier(1.5, 8.0)
        assert modified_energy(u, im, 1) == energy(u, 1)

    def test_cutoff_above_content_equals_energy(self, grid, rng):
        u = to_spectral(random_field(grid, rng, band=4.0))
        im = IMultiplier(1.5, 16.0)
        assert modified_energy(u, im, 1) == pytest.approx(energy(u, 1), rel=1e-12)

    def test_monotone_in_cutoff_on_high_mode(self, grid):
        u = single_mode(grid, 1.0, (24, 0))
        lo = modified_energy(u, IMultiplier(1.5, 2.0), 1)
        hi = modified_energy(u, IMultiplier(1.5, 8.0), 1)
        assert lo <= hi


class TestRecordValidation:
    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            DiagnosticsRecord(0.0, math.nan, 1.0, 1.0, 1.0, 1.0, {})
        with pytest.raises(ValueError):
            DiagnosticsRecord(0.0, 1.0, -1.0, 1.0, 1.0, 1.0, {})


class TestSlopeFit:
    def test_exact_power_law(self):
        ns = [8.0, 16.0, 32.0, 64.0]
        vals = [n**-3 for n in ns]
        assert fit_loglog_slope(ns, vals) == pytest.approx(-3.0, abs=1e-12)

    def test_identical_values_give_zero_slope(self):
        assert fit_loglog_slope([8.0, 16.0], [0.0, 0.0]) == 0.0
        assert fit_loglog_slope([8.0, 16.0], [3.5e-14, 3.5e-14]) == 0.0


class TestSweep:
    def test_requires_four_ascending_dyadic_cutoffs(self, grid, rng):
        u0 = random_field(grid, rng, band=4.0)
        cfg = SimConfig(k=1, dt=1e-3, i_cutoffs=(1.0,))
        with pytest.raises(ValueError, match="at least 4"):
            almost_conservation_sweep(u0, cfg, [8.0])
        with pytest.raises(ValueError, match="ascending"):
            almost_conservation_sweep(u0, cfg, [16.0, 8.0, 4.0, 2.0])
        with pytest.raises(ValueError, match="Nyquist"):
            almost_conservation_sweep(u0, cfg, [8.0, 16.0, 32.0, 64.0])

    def test_linear_flow_low_data_identical_deltas(self, grid, rng):
        # support below min(N): the smoothing operator is the identity on the
        # entire trajectory, so every cutoff sees the same float values
        u0 = random_field(grid, rng, band=1.9)
        cfg = SimConfig(k=1, dt=1e-3, linear_only=True, i_cutoffs=(1.0,))
        res = almost_conservation_sweep(u0, cfg, [2.0, 4.0, 8.0, 16.0], t_star=0.01)
        deltas = [r.delta_e for r in res.rows]
        assert max(deltas) <= 1e-14
        assert max(deltas) <= 1.25 * min(deltas)
        assert abs(res.slope) <= 0.25

    def test_linear_flow_deltas_at_roundoff(self, grid):
        u0 = gaussian(grid, 1.0, 0.5)
        cfg = SimConfig(k=1, dt=2e-4, linear_only=True, i_cutoffs=(1.0,))
        res = almost_conservation_sweep(u0, cfg, [2.0, 4.0, 8.0, 16.0])
        for row in res.rows:
            assert row.delta_e <= 1e-12

    def test_horizon_rounds_to_step_multiple(self, grid):
        u0 = gaussian(grid, 1.0, 0.8)
        cfg = SimConfig(k=1, dt=3e-4, linear_only=True, i_cutoffs=(1.0,))
        res = almost_conservation_sweep(u0, cfg, [2.0, 4.0, 8.0, 16.0])
        assert res.t_star / cfg.dt == pytest.approx(round(res.t_star / cfg.dt), abs=1e-9)

    def test_nonlinear_smoke_records_signs(self, grid):
        u0 = gaussian(grid, 2.0, 0.5)
        cfg = SimConfig(k=1, dt=1e-4, i_cutoffs=(1.0,), integrator="ifrk4")
        res = almost_conservation_sweep(u0, cfg, [2.0, 4.0, 8.0, 16.0], t_star=1e-3)
        assert len(res.rows) == 4
        for row in res.rows:
            assert row.sign in (-1, 0, 1)
            assert math.isfinite(row.delta_e)

    def test_delta_saturates_at_plain_energy_drift(self, grid, rng):
        # once the cutoff clears the resolved content, the smoothing operator
        # is the identity and the sweep reproduces |E(t*) - E(0)| exactly
        u0 = random_field(grid, rng, band=3.0)
        cfg = SimConfig(k=1, dt=1e-4, i_cutoffs=(1.0,), integrator="ifrk4")
        res = almost_conservation_sweep(u0, cfg, [1.0, 2.0, 4.0, 8.0], t_star=1e-3)
        from fourns.dynamics import final_state
        import dataclasses

        u_end = final_state(dataclasses.replace(cfg, t_end=res.t_star), u0).u
        plain = abs(energy(u_end, 1) - energy(u0, 1))
        assert res.rows[-1].delta_e == pytest.approx(plain, rel=1e-12)

    def test_slope_invariant_under_global_phase(self, grid):
        u0 = gaussian(grid, 2.0, 0.5)
        rotated = u0.with_data(u0.data * np.exp(1j * 0.7))
        cfg = SimConfig(k=1, dt=1e-4, i_cutoffs=(1.0,), integrator="ifrk4")
        a = almost_conservation_sweep(u0, cfg, [2.0, 4.0, 8.0, 16.0], t_star=1e-3)
        b = almost_conservation_sweep(rotated, cfg, [2.0, 4.0, 8.0, 16.0], t_star=1e-3)
        assert a.slope == pytest.approx(b.slope, rel=1e-6, abs=1e-9)
