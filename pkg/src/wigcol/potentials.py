"""Potential profiles V(x) for the scattering scenarios."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Grid


@dataclass(frozen=True)
class PotentialProfile:
    """Real potential in eV sampled on a grid."""

    grid: Grid
    v: np.ndarray

    def __post_init__(self):
        if len(self.v) != self.grid.nx:
            raise ValueError("potential length does not match grid")
        if not np.all(np.isfinite(self.v)):
            raise ValueError("potential contains non-finite values")


def free_space(grid: Grid) -> PotentialProfile:
    """V identically zero."""
    return PotentialProfile(grid, np.zeros(grid.nx))


def double_barrier(grid: Grid, b_width: float, height: float,
                   well_width: float, center: float = 0.0) -> PotentialProfile:
    """Symmetric rectangular double barrier.

    Two barriers of width b_width (nm) and the given height (eV) separated
    by well_width (nm), mirror symmetric about `center`.  Cells are filled
    where well_width/2 <= |x - center| < well_width/2 + b_width, which
    snaps edges to the grid while keeping the integrated area exact.
    """
    x = grid.x
    inner = well_width / 2.0
    outer = inner + b_width
    if center - outer < x[0] + grid.dx or center + outer > x[-1] - grid.dx:
        raise ValueError("double-barrier structure does not fit inside the grid")
    r = np.abs(x - center)
    v = np.zeros(grid.nx)
    v[(r >= inner) & (r < outer)] = height
    return PotentialProfile(grid, v)


def save_csv(profile: PotentialProfile, path):
    """Two-column CSV (x_nm, V_eV)."""
    with open(path, "w") as fh:
        fh.write("x_nm,V_eV\n")
        for xi, vi in zip(profile.grid.x, profile.v):
            fh.write(f"{xi:.6g},{vi:.12g}\n")
