"""Discrete Wigner-Weyl transform, its diagnostics, and the pure-state inverse.

Discretization: w(x_i, k_j) = (dx/pi) sum_m psi(x_i + m dx) psi*(x_i - m dx)
e^{-2 i k_j m dx} with integer offsets m in [-nx/2, nx/2) and psi = 0 outside
the domain.  The wavenumber grid is uniform with dk = pi/(nx dx) spanning
[-pi/(2 dx), pi/(2 dx)), which matches the half-resolution bandwidth of the
kernel.  Half-offsets keep x +- x'/2 on the grid, so both marginal
identities are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import HBAR, Grid, WaveFunction, norm2
from .potentials import PotentialProfile

_CHUNK = 256


@dataclass(frozen=True)
class KGrid:
    nk: int
    dk: float
    k0: float

    @property
    def k(self) -> np.ndarray:
        return self.k0 + self.dk * np.arange(self.nk)


@dataclass(frozen=True)
class WignerFunction:
    """Real phase-space density on (x, k); rows are x, columns k."""

    grid: Grid
    kgrid: KGrid
    w: np.ndarray

    def __post_init__(self):
        if self.w.shape != (self.grid.nx, self.kgrid.nk):
            raise ValueError("wigner array shape does not match grids")


def _kgrid_for(grid: Grid) -> KGrid:
    dk = np.pi / (grid.nx * grid.dx)
    return KGrid(nk=grid.nx, dk=dk, k0=-(grid.nx // 2) * dk)


def wigner_transform(psi: WaveFunction, norm_tolerance: float = 1e-8) -> WignerFunction:
    """Wigner function of a normalized pure state."""
    n = norm2(psi)
    if abs(n - 1.0) > norm_tolerance:
        raise ValueError(f"state norm {n} is not 1 within {norm_tolerance}")
    grid = psi.grid
    nx = grid.nx
    half = nx // 2
    pad = np.zeros(2 * nx, dtype=complex)
    pad[half:half + nx] = psi.amp

    mm = np.arange(nx)
    m_phys = np.where(mm < half, mm, mm - nx)
    twist = np.where(m_phys % 2 == 0, 1.0, -1.0)

    w = np.empty((nx, nx))
    worst_imag = 0.0
    for start in range(0, nx, _CHUNK):
        rows = np.arange(start, min(start + _CHUNK, nx))
        i = rows[:, None]
        c = pad[i + m_phys + half] * np.conj(pad[i - m_phys + half]) * twist
        block = np.fft.fft(c, axis=1) * (grid.dx / np.pi)
        worst_imag = max(worst_imag, float(np.abs(block.imag).max()))
        w[rows, :] = block.real
    if worst_imag > 1e-10:
        raise ValueError(f"imaginary residue {worst_imag:.2e} in the transform")
    return WignerFunction(grid=grid, kgrid=_kgrid_for(grid), w=w)


def wigner_of_ensemble(ensemble) -> WignerFunction:
    """Weighted sum of the members' Wigner transforms (linear in the mixture)."""
    total = sum(weight for _, weight in ensemble.members)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"ensemble weights sum to {total}, not 1")
    out = None
    for psi, weight in ensemble.members:
        w = wigner_transform(psi)
        if out is None:
            out = WignerFunction(w.grid, w.kgrid, weight * w.w)
        else:
            if w.grid != out.grid:
                raise ValueError("ensemble members live on different grids")
            out = WignerFunction(out.grid, out.kgrid, out.w + weight * w.w)
    if out is None:
        raise ValueError("empty ensemble")
    return out


def position_marginal(wf: WignerFunction) -> np.ndarray:
    """Q(x) = integral of w over k."""
    return wf.w.sum(axis=1) * wf.kgrid.dk


def momentum_marginal(wf: WignerFunction) -> np.ndarray:
    """P(k) = integral of w over x."""
    return wf.w.sum(axis=0) * wf.grid.dx


def check_positivity(wf: WignerFunction, epsilon: float = 1e-10):
    """Complete-positivity condition: the position marginal is non-negative."""
    q = position_marginal(wf)
    i = int(np.argmin(q))
    return {
        "min_Q": float(q[i]),
        "argmin_x": float(wf.grid.x[i]),
        "violated": bool(q[i] < -epsilon),
    }


def mean_energy(wf: WignerFunction, profile: PotentialProfile, mass: float) -> float:
    """Phase-space energy: integral of w(x,k) (hbar^2 k^2/2m + V(x))."""
    k = wf.kgrid.k
    kinetic = float(np.sum(momentum_marginal(wf) * HBAR**2 * k**2 / (2 * mass)) * wf.kgrid.dk)
    potential = float(np.sum(position_marginal(wf) * profile.v) * wf.grid.dx)
    return kinetic + potential


def check_energy_condition(w_before: WignerFunction, w_after: WignerFunction,
                           e_gamma: float, profile: PotentialProfile,
                           mass: float, tolerance: float = 0.02):
    """Signed residual of <E^s> = <E> + E_gamma (e_gamma carries the sign)."""
    if w_before.grid != w_after.grid:
        raise ValueError("wigner functions live on different grids")
    residual = (mean_energy(w_after, profile, mass)
                - mean_energy(w_before, profile, mass) - e_gamma)
    return {"residual": float(residual),
            "satisfied": bool(abs(residual) <= tolerance * abs(e_gamma))}


def purity(wf: WignerFunction) -> float:
    """Tr(rho^2) = 2 pi integral of w^2."""
    return float(2.0 * np.pi * np.sum(wf.w**2) * wf.grid.dx * wf.kgrid.dk)


def reconstruct_pure_state(wf: WignerFunction,
                           purity_tolerance: float = 0.05) -> WaveFunction:
    """Invert a pure-state Wigner function back to its wave function.

    Recovers psi(x) psi*(x_ref) from the correlation rows of the transform
    with the reference at argmax Q (not x = 0, which may be a node).  The
    integer-offset kernel only reaches the sublattice with x_ref's parity;
    the other half is filled by band-limited interpolation, valid for
    states inside the half-Nyquist bandwidth of the kernel.  The global
    phase is fixed so psi(x_ref) is real and positive.
    """
    p = purity(wf)
    if abs(p - 1.0) > purity_tolerance:
        raise ValueError(
            f"purity {p:.4f} is not 1 within {purity_tolerance}: a mixed-state "
            "Wigner function cannot be inverted to a single wave function"
        )
    grid = wf.grid
    nx = grid.nx
    half = nx // 2
    q = position_marginal(wf)
    i_ref = int(np.argmax(q))
    parity = i_ref % 2

    target = np.arange(parity, nx, 2)          # recoverable sublattice
    rows = (target + i_ref) // 2
    m_val = (target - i_ref) // 2
    mm = np.mod(m_val, nx)

    c_rows = np.fft.ifft(wf.w[rows, :].astype(complex) * (np.pi / grid.dx), axis=1)
    vals = c_rows[np.arange(len(rows)), mm] * np.where(m_val % 2 == 0, 1.0, -1.0)
    psi_half = vals / np.sqrt(q[i_ref])

    # band-limited x2 upsampling of the sublattice samples
    n2 = nx // 2
    h = n2 // 2
    f_half = np.fft.fft(psi_half)
    f_full = np.zeros(nx, dtype=complex)
    f_full[:h] = f_half[:h]
    f_full[-h:] = f_half[-h:]
    dense = np.fft.ifft(f_full) * 2.0           # samples at x[parity] + l dx

    amp = np.zeros(nx, dtype=complex)
    amp[parity:] = dense[:nx - parity]
    if parity:
        amp[0] = dense[-1]                      # periodic image of the first cell
    out = WaveFunction(grid, amp).normalized()
    phase = np.exp(-1j * np.angle(out.amp[i_ref]))
    return WaveFunction(grid, out.amp * phase)


# ---------------------------------------------------------------------------
# binary snapshot format: ASCII header + row-major float64
# ---------------------------------------------------------------------------

def write_wigner(wf: WignerFunction, path):
    """'WIG1 nx nk dx dk x0 k0\\n' followed by nx*nk little-endian float64."""
    header = (f"WIG1 {wf.grid.nx} {wf.kgrid.nk} {wf.grid.dx:.17g} "
              f"{wf.kgrid.dk:.17g} {wf.grid.x0:.17g} {wf.kgrid.k0:.17g}\n")
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(wf.w.astype("<f8").tobytes())


def read_wigner(path) -> WignerFunction:
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii").split()
        if header[0] != "WIG1":
            raise ValueError(f"{path}: not a WIG1 file")
        nx, nk = int(header[1]), int(header[2])
        dx, dk, x0, k0 = map(float, header[3:7])
        data = np.frombuffer(fh.read(), dtype="<f8").reshape(nx, nk)
    return WignerFunction(grid=Grid(nx=nx, dx=dx, x0=x0),
                          kgrid=KGrid(nk=nk, dk=dk, k0=k0), w=data.copy())


def write_wigner_csv(wf: WignerFunction, path):
    """Dense CSV (x_nm, k_inv_nm, w); intended for small grids."""
    x = wf.grid.x
    k = wf.kgrid.k
    with open(path, "w") as fh:
        fh.write("x_nm,k_inv_nm,w\n")
        for i in range(wf.grid.nx):
            for j in range(wf.kgrid.nk):
                fh.write(f"{x[i]:.6g},{k[j]:.6g},{wf.w[i, j]:.12g}\n")


def decimate(wf: WignerFunction, every: int) -> WignerFunction:
    """Keep every n-th sample in x and k (for compact dumps)."""
    if every <= 1:
        return wf
    sub = wf.w[::every, ::every].copy()
    g = Grid(nx=_next_pow2(sub.shape[0]), dx=wf.grid.dx * every, x0=wf.grid.x0)
    # Grid requires a power of two; fall back to a light container when the
    # decimated row count is not one.
    if g.nx != sub.shape[0]:
        raise ValueError("decimation factor must keep nx a power of two")
    kg = KGrid(nk=sub.shape[1], dk=wf.kgrid.dk * every, k0=wf.kgrid.k0)
    return WignerFunction(grid=g, kgrid=kg, w=sub)


def _next_pow2(n: int) -> int:
    p = 1
    while p < n:
        p *= 2
    return p
