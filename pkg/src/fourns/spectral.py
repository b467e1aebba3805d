"""Periodic 2D grid, complex fields, and Fourier-side primitives.

Conventions:
  - The box is [-lx/2, lx/2) x [-ly/2, ly/2) with nx x ny collocation points
    (powers of two). Angular wavenumbers are 2*pi*m/lx for m in the symmetric
    integer range, in standard FFT ordering.
  - Forward transform is the plain unnormalized sum (numpy fft2), the inverse
    carries 1/(nx*ny). Physical quadrature weight is dA = lx*ly/(nx*ny);
    spectral quadrature weight lx*ly/(nx*ny)**2 restores continuum Parseval.
  - The unmatched Nyquist row/column is zeroed whenever a symbol is applied,
    to avoid asymmetric artifacts from the lone -n/2 mode.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

PHYSICAL = "physical"
SPECTRAL = "spectral"

PADDED = "padded"
TWO_THIRDS = "two_thirds"


class RepresentationError(ValueError):
    """Raised when an operation receives a field in the wrong representation."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid2D:
    """Periodic computational box with cached wavenumber tables."""

    nx: int = 256
    ny: int = 256
    lx: float = 32.0 * math.pi
    ly: float = 32.0 * math.pi

    def __post_init__(self):
        for name, n in (("nx", self.nx), ("ny", self.ny)):
            if n < 8 or not _is_power_of_two(n):
                raise ValueError(f"{name} must be a power of two >= 8, got {n}")
        if self.lx <= 0 or self.ly <= 0:
            raise ValueError(f"box lengths must be positive, got {self.lx}, {self.ly}")

    @cached_property
    def x(self) -> np.ndarray:
        return -0.5 * self.lx + (self.lx / self.nx) * np.arange(self.nx)

    @cached_property
    def y(self) -> np.ndarray:
        return -0.5 * self.ly + (self.ly / self.ny) * np.arange(self.ny)

    @cached_property
    def kx(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.nx, d=self.lx / self.nx)

    @cached_property
    def ky(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.ny, d=self.ly / self.ny)

    @cached_property
    def k2(self) -> np.ndarray:
        """|xi|^2 on the full (nx, ny) mode table."""
        return self.kx[:, None] ** 2 + self.ky[None, :] ** 2

    @cached_property
    def kmag(self) -> np.ndarray:
        return np.sqrt(self.k2)

    @cached_property
    def dispersion(self) -> np.ndarray:
        """Linear-flow phase speed |xi|^4 + |xi|^2 per mode."""
        return self.k2 * (self.k2 + 1.0)

    @cached_property
    def nyquist_mask(self) -> np.ndarray:
        """1.0 everywhere except the unmatched Nyquist row/column."""
        mask = np.ones((self.nx, self.ny))
        mask[self.nx // 2, :] = 0.0
        mask[:, self.ny // 2] = 0.0
        return mask

    @property
    def cell_area(self) -> float:
        return (self.lx * self.ly) / (self.nx * self.ny)

    @property
    def spectral_weight(self) -> float:
        """Weight making sum(w*|fft2(u)|^2) equal the physical L2 quadrature."""
        return (self.lx * self.ly) / float(self.nx * self.ny) ** 2

    @property
    def nyquist(self) -> float:
        """Largest resolved |xi| along the weaker axis."""
        return min(np.pi * self.nx / self.lx, np.pi * self.ny / self.ly)


def dispersion_symbol(r):
    """Evaluation rule p(|xi|) = |xi|^4 + |xi|^2 of the linear flow."""
    r = np.asarray(r, dtype=float)
    return r**4 + r**2


@dataclass(frozen=True)
class Field:
    """Complex 2D state tied to a grid, in physical or spectral representation.

    Instances are value objects: the payload array is marked read-only and
    every operation returns a new Field.
    """

    grid: Grid2D
    data: np.ndarray
    rep: str = PHYSICAL

    def __post_init__(self):
        if self.rep not in (PHYSICAL, SPECTRAL):
            raise ValueError(f"unknown representation tag {self.rep!r}")
        data = np.ascontiguousarray(self.data, dtype=np.complex128)
        if data.shape != (self.grid.nx, self.grid.ny):
            raise ValueError(
                f"data shape {data.shape} does not match grid "
                f"({self.grid.nx}, {self.grid.ny})"
            )
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    def with_data(self, data: np.ndarray, rep: str | None = None) -> "Field":
        return Field(self.grid, data, self.rep if rep is None else rep)


def to_spectral(f: Field) -> Field:
    """Forward transform (unnormalized sum over collocation points)."""
    if f.rep != PHYSICAL:
        raise RepresentationError("to_spectral expects a physical-space field")
    return f.with_data(np.fft.fft2(f.data), SPECTRAL)


def to_physical(f: Field) -> Field:
    """Inverse transform, normalized by 1/(nx*ny)."""
    if f.rep != SPECTRAL:
        raise RepresentationError("to_physical expects a spectral-space field")
    return f.with_data(np.fft.ifft2(f.data), PHYSICAL)


def _as_spectral(f: Field) -> Field:
    return f if f.rep == SPECTRAL else to_spectral(f)


def _as_physical(f: Field) -> Field:
    return f if f.rep == PHYSICAL else to_physical(f)


def apply_symbol(f: Field, sym) -> Field:
    """Multiply the spectrum pointwise by a radial symbol sym(|xi|).

    The result mirrors the input representation. The unmatched Nyquist
    row/column is zeroed. Non-finite symbol values raise, naming the
    offending wavenumber.
    """
    g = f.grid
    vals = np.asarray(sym(g.kmag))
    if vals.shape != g.kmag.shape:
        raise ValueError("symbol must evaluate elementwise on the |xi| table")
    bad = ~np.isfinite(vals)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise ValueError(
            f"symbol is not finite at xi = ({g.kx[i]:.6g}, {g.ky[j]:.6g}): "
            f"value {vals[i, j]!r}"
        )
    fs = _as_spectral(f)
    out = fs.with_data(fs.data * vals * g.nyquist_mask)
    return out if f.rep == SPECTRAL else to_physical(out)


def _embed_indices(n: int, m: int) -> np.ndarray:
    # FFT-order frequency index of the small grid mapped into the big one.
    q = np.fft.fftfreq(n, d=1.0 / n).astype(int)
    return q % m


def nonlinear_product(f: Field, k: int, dealias: str = PADDED) -> Field:
    """Pointwise power nonlinearity |u|^(2k) u with dealiasing.

    padded: the product is evaluated on a grid zero-padded by factor (k+1)
    per dimension, which is exact for the degree-(2k+1) product, then
    truncated back. two_thirds: modes with either |kx| or |ky| above 2/3 of
    that axis' Nyquist are zeroed before and after the product.
    """
    if k < 1 or int(k) != k:
        raise ValueError(f"nonlinearity power k must be a positive integer, got {k}")
    if f.rep != PHYSICAL:
        raise RepresentationError("nonlinear_product expects a physical-space field")
    g = f.grid
    if dealias == PADDED:
        nxp, nyp = (k + 1) * g.nx, (k + 1) * g.ny
        ix = _embed_indices(g.nx, nxp)
        iy = _embed_indices(g.ny, nyp)
        big = np.zeros((nxp, nyp), dtype=np.complex128)
        big[np.ix_(ix, iy)] = np.fft.fft2(f.data)
        scale = (nxp * nyp) / (g.nx * g.ny)
        u_fine = np.fft.ifft2(big) * scale
        w_fine = np.abs(u_fine) ** (2 * k) * u_fine
        w_hat = np.fft.fft2(w_fine)[np.ix_(ix, iy)] / scale
        return f.with_data(np.fft.ifft2(w_hat))
    if dealias == TWO_THIRDS:
        keep_x = np.abs(g.kx) <= (2.0 / 3.0) * np.abs(g.kx).max()
        keep_y = np.abs(g.ky) <= (2.0 / 3.0) * np.abs(g.ky).max()
        mask = keep_x[:, None] & keep_y[None, :]
        u_hat = np.fft.fft2(f.data) * mask
        u_f = np.fft.ifft2(u_hat)
        w = np.abs(u_f) ** (2 * k) * u_f
        w_hat = np.fft.fft2(w) * mask
        return f.with_data(np.fft.ifft2(w_hat))
    raise ValueError(f"unknown dealias mode {dealias!r}")


def lp_norm(f: Field, p) -> float:
    """Discrete L^p norm (sum |u|^p dA)^(1/p); max norm for p = inf."""
    if f.rep != PHYSICAL:
        raise RepresentationError("lp_norm expects a physical-space field")
    absu = np.abs(f.data)
    if p == math.inf or p == "inf":
        return float(absu.max())
    p = float(p)
    if p < 1.0:
        raise ValueError(f"lp_norm requires p >= 1, got {p}")
    return float((absu**p).sum() * f.grid.cell_area) ** (1.0 / p)


def sobolev_norm(f: Field, s: float, homogeneous: bool = False) -> float:
    """H^s norm (sum w^(2s) |u_hat|^2)^(1/2) with w = <xi>, or |xi| if homogeneous.

    The homogeneous variant skips the zero mode; a field with all its mass
    there yields 0.0 with a warning.
    """
    g = f.grid
    fs = _as_spectral(f)
    amp2 = np.abs(fs.data) ** 2 * g.spectral_weight
    if homogeneous:
        w2s = np.zeros_like(g.k2)
        nz = g.k2 > 0
        w2s[nz] = g.k2[nz] ** s
        total = float((w2s * amp2).sum())
        if total == 0.0 and amp2.sum() > 0.0:
            warnings.warn(
                "homogeneous Sobolev norm of a field supported at xi = 0 is 0",
                RuntimeWarning,
                stacklevel=2,
            )
        return math.sqrt(total)
    return math.sqrt(float(((1.0 + g.k2) ** s * amp2).sum()))
