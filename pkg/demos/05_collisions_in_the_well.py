"""The collision models disagree inside a double-barrier well.

The electron sits on the first well level.  Absorbing a photon should
lift it to the second level (one interior maximum becomes two).  The
energy-exchange model does exactly that.  The momentum-exchange model
multiplies by a plane-wave phase; for a standing state <k> ~ 0, so the
energy barely moves and the interior profile keeps one maximum: energy
conservation is violated because momentum and energy do not commute in
the presence of barriers.
"""

import numpy as np

from wigcol import (HBAR, M_EFF, WaveFunction, default_grid, double_barrier,
                    energy_to_wavevector)
from wigcol.collisions import (ENERGY, MOMENTUM, CollisionSchedule,
                               run_collision)
from wigcol.scenarios import count_well_maxima
from wigcol.spectral import diagonalize, mean_energy_quadrature, well_states

grid = default_grid()
pinned = double_barrier(grid, 12.0, 0.3, 16.0)
basis = diagonalize(pinned, M_EFF)
idx = well_states(basis, -8.0, 8.0)
p1 = WaveFunction(grid, basis.modes[:, idx[0]].astype(complex)).normalized()
spacing = basis.energies[idx[1]] - basis.energies[idx[0]]
e0 = mean_energy_quadrature(p1, pinned, M_EFF)
k1, k2 = energy_to_wavevector(0.023, M_EFF), energy_to_wavevector(0.096, M_EFF)

print(f"initial state: level 1, <E> = {e0:.5f} eV, "
      f"{count_well_maxima(np.abs(p1.amp)**2, grid, -8, 8)} interior maximum")
print(f"photon quantum: {spacing:.5f} eV\n")

for model, quantum in ((ENERGY, spacing), (MOMENTUM, HBAR * (k2 - k1))):
    sched = CollisionSchedule(t_start=5.0, n_steps=1, dwell=0.0,
                              quantum=quantum, sign=+1)
    samples = run_collision(p1, model, sched, pinned, M_EFF,
                            basis=basis if model == ENERGY else None,
                            dt=0.25, t_total=30.0, engine="cn")
    after = next(s for s in samples if s.applied == 1)
    e1 = mean_energy_quadrature(after.psi, pinned, M_EFF)
    n_max = count_well_maxima(np.abs(after.psi.amp) ** 2, grid, -8, 8)
    miss = abs(e1 - e0 - spacing) / spacing
    print(f"{model:>8} model: <E> -> {e1:.5f} eV "
          f"(misses the target by {miss:.1%}), interior maxima: {n_max}")

print("\nonly the energy-exchange model performs the level transition")
