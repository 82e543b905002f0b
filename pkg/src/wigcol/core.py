"""Unit system, spatial grid and wave-function container.

Everything in the package works in (nm, fs, eV) so that hbar and the
electron mass are O(1) numbers.  The FFT convention is e^{+ikx} for
synthesis, i.e. numpy's ifft; wavenumbers come from 2*pi*fftfreq(nx, dx).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# hbar in eV fs (CODATA)
HBAR = 0.6582119569
# free-electron rest mass in eV fs^2 / nm^2  (0.51099895 MeV / c^2, c = 299.792458 nm/fs)
M0 = 0.51099895e6 / 299.792458**2
# effective mass used in all double-barrier scenarios
M_EFF = 0.041 * M0


@dataclass(frozen=True)
class Grid:
    """Uniform spatial grid: nx points starting at x0 with spacing dx (nm)."""

    nx: int
    dx: float
    x0: float

    def __post_init__(self):
        if self.nx < 2 or (self.nx & (self.nx - 1)) != 0:
            raise ValueError(f"nx must be a power of two >= 2, got {self.nx}")
        if self.dx <= 0:
            raise ValueError(f"dx must be positive, got {self.dx}")

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.nx)

    @property
    def length(self) -> float:
        return self.nx * self.dx

    @property
    def k_fft(self) -> np.ndarray:
        """Wavenumbers in FFT order, nm^-1."""
        return 2.0 * np.pi * np.fft.fftfreq(self.nx, self.dx)

    @property
    def k_nyquist(self) -> float:
        return np.pi / self.dx


def default_grid() -> Grid:
    """4096 points, 0.2 nm spacing, centred on x = 0 (domain ~819 nm)."""
    return Grid(nx=4096, dx=0.2, x0=-4096 * 0.2 / 2.0)


@dataclass(frozen=True)
class WaveFunction:
    """Complex amplitudes on a grid, units nm^(-1/2).

    Constructors in this package return unit-norm states;  the channels of
    a coupled two-component state are the one exception (only their total
    norm is 1).
    """

    grid: Grid
    amp: np.ndarray

    def __post_init__(self):
        if len(self.amp) != self.grid.nx:
            raise ValueError("amplitude length does not match grid")

    def normalized(self) -> "WaveFunction":
        n = norm2(self)
        if n == 0:
            raise ValueError("cannot normalize a zero state")
        return WaveFunction(self.grid, self.amp / np.sqrt(n))


def _check_same_grid(a: WaveFunction, b: WaveFunction):
    if a.grid != b.grid:
        raise ValueError("wave functions live on different grids")


def norm2(psi: WaveFunction) -> float:
    """Total probability sum |amp|^2 dx."""
    return float(np.sum(np.abs(psi.amp) ** 2) * psi.grid.dx)


def inner(psi: WaveFunction, phi: WaveFunction) -> complex:
    """<psi|phi> = sum conj(psi) phi dx."""
    _check_same_grid(psi, phi)
    return complex(np.sum(np.conj(psi.amp) * phi.amp) * psi.grid.dx)


def fidelity(psi: WaveFunction, phi: WaveFunction) -> float:
    """|<psi|phi>|^2 for unit-norm states."""
    return abs(inner(psi, phi)) ** 2


def mean_position(psi: WaveFunction) -> float:
    g = psi.grid
    return float(np.sum(g.x * np.abs(psi.amp) ** 2) * g.dx / norm2(psi))


def mean_wavevector(psi: WaveFunction) -> float:
    """<k> via the FFT spectrum, nm^-1."""
    g = psi.grid
    spec = np.abs(np.fft.fft(psi.amp)) ** 2
    return float(np.sum(g.k_fft * spec) / np.sum(spec))


def momentum_density(psi: WaveFunction):
    """(k, |b(k)|^2) on the sorted FFT wavenumber grid, normalized to 1."""
    g = psi.grid
    b = np.fft.fft(psi.amp)
    dens = np.abs(b) ** 2
    dens /= np.sum(dens) * (2 * np.pi / g.length)
    order = np.argsort(g.k_fft)
    return g.k_fft[order], dens[order]


def energy_to_wavevector(energy: float, mass: float) -> float:
    """Free-dispersion wavevector k = sqrt(2 m E)/hbar (nm^-1)."""
    if energy < 0:
        raise ValueError(f"energy must be non-negative, got {energy}")
    return float(np.sqrt(2.0 * mass * energy) / HBAR)


def gaussian_packet(grid: Grid, x_c: float, sigma: float, k0: float) -> WaveFunction:
    """Normalized Gaussian packet exp(-(x-x_c)^2/(4 sigma^2)) exp(i k0 x).

    Rejects packets whose 5-sigma support leaves the domain or whose
    clipped tail mass exceeds 1e-8.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    x = grid.x
    left, right = x[0], x[-1]
    if x_c - 5 * sigma < left or x_c + 5 * sigma > right:
        raise ValueError(
            f"packet at x_c={x_c} with sigma={sigma} is closer than "
            f"5 sigma to a domain edge [{left}, {right}]"
        )
    amp = np.exp(-((x - x_c) ** 2) / (4.0 * sigma**2)).astype(complex)
    amp *= np.exp(1j * k0 * x)
    discrete = np.sum(np.abs(amp) ** 2) * grid.dx
    continuum = sigma * np.sqrt(2.0 * np.pi)
    if abs(discrete - continuum) / continuum > 1e-8:
        raise ValueError("packet is clipped by the domain edge (norm loss > 1e-8)")
    return WaveFunction(grid, amp / np.sqrt(discrete))
