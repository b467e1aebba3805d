"""Initial data families: Gaussians, their modulated variants, and bump sums."""

from __future__ import annotations

import numpy as np

from .spectral import PHYSICAL, SPECTRAL, Field, Grid2D, lp_norm


def gaussian(
    grid: Grid2D,
    amplitude: float = 1.0,
    width: float = 2.0,
    center=(0.0, 0.0),
    modulation=(0.0, 0.0),
) -> Field:
    """A e^{i K.x} e^{-|x-c|^2 / (2 width^2)} on the periodic box."""
    if width <= 0:
        raise ValueError(f"width must be positive, got {width}")
    xx = grid.x[:, None] - center[0]
    yy = grid.y[None, :] - center[1]
    envelope = np.exp(-(xx**2 + yy**2) / (2.0 * width**2))
    phase = np.exp(1j * (modulation[0] * (xx + center[0]) + modulation[1] * (yy + center[1])))
    return Field(grid, amplitude * envelope * phase, PHYSICAL)


def multi_bump(grid: Grid2D, bumps) -> Field:
    """Sum of modulated Gaussian bumps; each entry is a mapping with keys
    amplitude, width, center, modulation (all optional except width)."""
    if not bumps:
        raise ValueError("multi_bump requires at least one bump")
    total = np.zeros((grid.nx, grid.ny), dtype=np.complex128)
    for b in bumps:
        f = gaussian(
            grid,
            amplitude=b.get("amplitude", 1.0),
            width=b["width"],
            center=tuple(b.get("center", (0.0, 0.0))),
            modulation=tuple(b.get("modulation", (0.0, 0.0))),
        )
        total = total + f.data
    return Field(grid, total, PHYSICAL)


def plane_wave(grid: Grid2D, amplitude: float, mode=(1, 0)) -> Field:
    """A e^{i xi0.x} with xi0 the (mx, my) grid mode."""
    kx = 2.0 * np.pi * mode[0] / grid.lx
    ky = 2.0 * np.pi * mode[1] / grid.ly
    data = amplitude * np.exp(1j * (kx * grid.x[:, None] + ky * grid.y[None, :]))
    return Field(grid, data, PHYSICAL)


def random_field(
    grid: Grid2D,
    rng: np.random.Generator,
    band: float | None = None,
    unit_l2: bool = False,
) -> Field:
    """Complex Gaussian spectral noise, optionally limited to |xi| <= band.

    The unmatched Nyquist row/column is always zeroed.
    """
    shape = (grid.nx, grid.ny)
    coef = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    coef *= grid.nyquist_mask
    if band is not None:
        coef[grid.kmag > band] = 0.0
    f = Field(grid, np.fft.ifft2(coef), PHYSICAL)
    if unit_l2:
        n2 = lp_norm(f, 2)
        if n2 == 0.0:
            raise ValueError("empty band produced a zero field")
        f = f.with_data(f.data / n2)
    return f


def shared_mode_noise(
    grid: Grid2D, rng: np.random.Generator, band: float, unit_l2: bool = True
) -> Field:
    """Gaussian noise on the fixed mode set |xi| <= band, drawn in a
    grid-independent order.

    Two grids with the same box get identical coefficients from the same
    seed, so refinement studies compare the same underlying field.
    """
    mx_max = int(np.floor(band * grid.lx / (2.0 * np.pi)))
    my_max = int(np.floor(band * grid.ly / (2.0 * np.pi)))
    if mx_max >= grid.nx // 2 or my_max >= grid.ny // 2:
        raise ValueError(f"band {band} is not resolved on a {grid.nx}x{grid.ny} grid")
    ms_x = np.arange(-mx_max, mx_max + 1)
    ms_y = np.arange(-my_max, my_max + 1)
    draws = rng.standard_normal((ms_x.size, ms_y.size, 2))
    kx = 2.0 * np.pi * ms_x / grid.lx
    ky = 2.0 * np.pi * ms_y / grid.ly
    keep = kx[:, None] ** 2 + ky[None, :] ** 2 <= band**2
    coef = np.zeros((grid.nx, grid.ny), dtype=np.complex128)
    ix = ms_x[:, None] % grid.nx
    iy = ms_y[None, :] % grid.ny
    np.add.at(coef, (np.broadcast_to(ix, keep.shape)[keep], np.broadcast_to(iy, keep.shape)[keep]),
              draws[..., 0][keep] + 1j * draws[..., 1][keep])
    f = Field(grid, np.fft.ifft2(coef), PHYSICAL)
    if unit_l2:
        f = f.with_data(f.data / lp_norm(f, 2))
    return f


def single_mode(grid: Grid2D, amplitude: complex, index=(1, 0)) -> Field:
    """Field whose spectrum has exactly one nonzero entry at the given
    FFT-order mode index."""
    coef = np.zeros((grid.nx, grid.ny), dtype=np.complex128)
    coef[index[0] % grid.nx, index[1] % grid.ny] = amplitude * grid.nx * grid.ny
    return Field(grid, coef, SPECTRAL)
