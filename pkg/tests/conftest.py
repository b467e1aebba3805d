import numpy as np
import pytest

from fourns.spectral import Grid2D


@pytest.fixture
def grid():
    """Small unit-box grid, cheap enough for every test."""
    return Grid2D(64, 64, 2 * np.pi, 2 * np.pi)


@pytest.fixture
def wide_grid():
    """Coarse grid on the nominal large box."""
    return Grid2D(64, 64, 32 * np.pi, 32 * np.pi)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
