import numpy as np
import pytest

from wigcol import Grid, M_EFF, double_barrier, free_space
from wigcol.spectral import diagonalize


@pytest.fixture(scope="session")
def grid():
    """Small fast grid with the same 819 nm span as the default."""
    return Grid(nx=2048, dx=0.4, x0=-409.6)


@pytest.fixture(scope="session")
def fine_grid():
    """The production grid (4096 x 0.2 nm)."""
    return Grid(nx=4096, dx=0.2, x0=-409.6)


@pytest.fixture(scope="session")
def free(grid):
    return free_space(grid)


@pytest.fixture(scope="session")
def paper_barrier(fine_grid):
    """The 2 nm / 0.3 eV / 16 nm structure."""
    return double_barrier(fine_grid, 2.0, 0.3, 16.0)


@pytest.fixture(scope="session")
def pinned_barrier(fine_grid):
    """Thick-barrier variant that pins the well states."""
    return double_barrier(fine_grid, 12.0, 0.3, 16.0)


@pytest.fixture(scope="session")
def free_basis(free):
    return diagonalize(free, M_EFF)


@pytest.fixture(scope="session")
def pinned_basis(pinned_barrier):
    return diagonalize(pinned_barrier, M_EFF)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260809)
