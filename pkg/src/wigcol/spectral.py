"""Eigenbasis of the discretized electron Hamiltonian and scattering tools.

H0 is the real symmetric tridiagonal matrix -hbar^2/(2m) D2 + diag(V) with
Dirichlet (box) boundaries one cell outside the grid.  The same matrix is
used by the Crank-Nicolson propagator, so eigenstates of a basis are exact
stationary states of that engine.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import minimize_scalar

from .core import HBAR, Grid, WaveFunction, norm2
from .potentials import PotentialProfile


def hopping(grid: Grid, mass: float) -> float:
    """Off-diagonal kinetic element t = hbar^2 / (2 m dx^2), eV."""
    return HBAR**2 / (2.0 * mass * grid.dx**2)


def apply_h0(psi: WaveFunction, profile: PotentialProfile, mass: float) -> np.ndarray:
    """H0 acting on the amplitudes (finite-difference kinetic)."""
    t = hopping(psi.grid, mass)
    a = psi.amp
    out = (2.0 * t + profile.v) * a
    out[:-1] -= t * a[1:]
    out[1:] -= t * a[:-1]
    return out


def mean_energy_quadrature(psi: WaveFunction, profile: PotentialProfile,
                           mass: float) -> float:
    """<psi|H0|psi> by direct quadrature, eV."""
    h = apply_h0(psi, profile, mass)
    return float(np.real(np.sum(np.conj(psi.amp) * h) * psi.grid.dx) / norm2(psi))


@dataclass(frozen=True)
class EnergyBasis:
    """Sorted eigenvalues (eV) and orthonormal real eigenvectors of H0.

    modes[:, n] is the n-th eigenvector, normalized so that
    sum |mode|^2 dx = 1.  Signs are fixed by making the first component
    positive, which for the free box gives +sin standing waves.
    """

    grid: Grid
    mass: float
    energies: np.ndarray
    modes: np.ndarray

    @property
    def size(self) -> int:
        return len(self.energies)


def diagonalize(profile: PotentialProfile, mass: float) -> EnergyBasis:
    """Full spectrum of the tridiagonal H0 for the given potential."""
    grid = profile.grid
    if grid.nx > 16384:
        raise ValueError("grid too large for a dense eigensolve (nx > 16384)")
    t = hopping(grid, mass)
    w, v = eigh_tridiagonal(2.0 * t + profile.v, np.full(grid.nx - 1, -t))
    sign = np.where(v[0, :] >= 0.0, 1.0, -1.0)
    modes = v * sign / np.sqrt(grid.dx)
    return EnergyBasis(grid=grid, mass=mass, energies=w, modes=modes)


@dataclass(frozen=True)
class EnergySpectrumCoeffs:
    """Complex coefficients a_n = <mode_n|psi> of a state in an EnergyBasis."""

    basis: EnergyBasis
    coeffs: np.ndarray


def project(psi: WaveFunction, basis: EnergyBasis) -> EnergySpectrumCoeffs:
    if psi.grid != basis.grid:
        raise ValueError("state and basis grids differ")
    c = basis.modes.T @ psi.amp * basis.grid.dx
    return EnergySpectrumCoeffs(basis=basis, coeffs=c)


def synthesize(coeffs: EnergySpectrumCoeffs) -> WaveFunction:
    basis = coeffs.basis
    return WaveFunction(basis.grid, basis.modes @ coeffs.coeffs)


def energy_spectrum_density(psi: WaveFunction, basis: EnergyBasis):
    """(E_n, |a_n|^2): the energy-axis projection of the state."""
    c = project(psi, basis).coeffs
    return basis.energies, np.abs(c) ** 2


def interior_mass(basis: EnergyBasis, x_lo: float, x_hi: float) -> np.ndarray:
    """Probability of each mode inside [x_lo, x_hi]."""
    mask = (basis.grid.x >= x_lo) & (basis.grid.x <= x_hi)
    return np.sum(np.abs(basis.modes[mask, :]) ** 2, axis=0) * basis.grid.dx


def well_states(basis: EnergyBasis, x_lo: float, x_hi: float,
                threshold: float = 0.5):
    """Indices of modes localized in [x_lo, x_hi] (quasi-bound well levels)."""
    mass = interior_mass(basis, x_lo, x_hi)
    return [int(i) for i in np.where(mass > threshold)[0]]


# ---------------------------------------------------------------------------
# transmission through the rendered piecewise-constant profile
# ---------------------------------------------------------------------------

def _regions(profile: PotentialProfile):
    """Maximal runs of constant V; interfaces at cell midpoints."""
    x = profile.grid.x
    v = profile.v
    edges = []
    values = [v[0]]
    for i in range(1, len(v)):
        if v[i] != v[i - 1]:
            edges.append(0.5 * (x[i - 1] + x[i]))
            values.append(v[i])
    return np.array(edges), np.array(values)


def transmission_coefficient(energy: float, profile: PotentialProfile,
                             mass: float) -> float:
    """|t|^2 for a left-incident plane wave, by transfer matrices."""
    if energy <= 0:
        raise ValueError(f"energy must be positive, got {energy}")
    edges, values = _regions(profile)
    if len(edges) == 0:
        return 1.0
    k = np.sqrt(2.0 * mass * (energy - values).astype(complex)) / HBAR
    m_tot = np.eye(2, dtype=complex)
    for i, xe in enumerate(edges):
        k1, k2 = k[i], k[i + 1]
        r = k2 / k1
        m_tot = m_tot @ np.array(
            [
                [0.5 * (1 + r) * np.exp(1j * (k2 - k1) * xe),
                 0.5 * (1 - r) * np.exp(-1j * (k2 + k1) * xe)],
                [0.5 * (1 - r) * np.exp(1j * (k2 + k1) * xe),
                 0.5 * (1 + r) * np.exp(-1j * (k2 - k1) * xe)],
            ]
        )
    t_amp = 1.0 / m_tot[0, 0]
    return float(abs(t_amp) ** 2 * (k[-1].real / k[0].real))


def find_resonances(profile: PotentialProfile, mass: float,
                    e_min: float, e_max: float, scan_points: int = 1200):
    """Energies of local maxima of T(E), golden-section refined to 1e-4 eV."""
    if not e_min < e_max:
        raise ValueError("empty scan range")
    energies = np.linspace(e_min, e_max, scan_points)
    t_scan = np.array([transmission_coefficient(e, profile, mass) for e in energies])
    out = []
    for i in range(1, scan_points - 1):
        if t_scan[i] > t_scan[i - 1] and t_scan[i] > t_scan[i + 1]:
            res = minimize_scalar(
                lambda e: -transmission_coefficient(e, profile, mass),
                bracket=(energies[i - 1], energies[i], energies[i + 1]),
                method="golden", options={"xtol": 1e-5},
            )
            out.append(float(res.x))
    return out
