"""Wave packets, the unit system, and the double-barrier resonances.

Everything runs in (nm, fs, eV).  A Gaussian packet with wavevector
k = sqrt(2 m E)/hbar carries the kinetic energy E plus a small spread
term hbar^2/(8 m sigma^2); the double-barrier structure from the
resonant-tunneling scenarios transmits perfectly at its quasi-bound
energies.
"""

import numpy as np

from wigcol import (HBAR, M_EFF, default_grid, double_barrier,
                    energy_to_wavevector, free_space, gaussian_packet,
                    mean_position, mean_wavevector, norm2)
from wigcol.spectral import (find_resonances, mean_energy_quadrature,
                             transmission_coefficient)

grid = default_grid()
print(f"grid: {grid.nx} points, dx = {grid.dx} nm, span {grid.length:.1f} nm")

k1 = energy_to_wavevector(0.023, M_EFF)
k2 = energy_to_wavevector(0.096, M_EFF)
print(f"k(0.023 eV) = {k1:.5f} nm^-1  ({k1*1e9:.4g} m^-1)")
print(f"k(0.096 eV) = {k2:.5f} nm^-1  ({k2*1e9:.4g} m^-1)")

psi = gaussian_packet(grid, x_c=-150.0, sigma=25.0, k0=k1)
print(f"\npacket: norm = {norm2(psi):.12f}, <x> = {mean_position(psi):.2f} nm, "
      f"<k> = {mean_wavevector(psi):.5f} nm^-1")
spread = HBAR**2 / (8 * M_EFF * 25.0**2)
e = mean_energy_quadrature(psi, free_space(grid), M_EFF)
print(f"<E> = {e:.5f} eV  (0.023 plus the spread term {spread:.2e} eV)")

barrier = double_barrier(grid, b_width=2.0, height=0.3, well_width=16.0)
print("\ntransmission through the 2 nm / 0.3 eV / 16 nm double barrier:")
for energy in (0.01, 0.0228, 0.05, 0.0932, 0.15):
    t = transmission_coefficient(energy, barrier, M_EFF)
    print(f"  T({energy:.4f} eV) = {t:.4f}")

resonances = find_resonances(barrier, M_EFF, 0.005, 0.25)
print(f"\nresonances below 0.25 eV: {[f'{e:.4f}' for e in resonances]}")
print("the first two sit at the quasi-bound well levels (~0.023 and ~0.096 eV)")
