"""Energy-exchange vs momentum-exchange collisions in free space.

In free space energy and momentum eigenstates coincide, so the two
collision models describe the same physical transition (here a phonon
absorption taking the electron from 0.023 to 0.096 eV over a 40-step,
6 fs-per-step schedule).  Their final packets overlap almost perfectly.
"""

from wigcol import (HBAR, M_EFF, default_grid, energy_to_wavevector, fidelity,
                    free_space, gaussian_packet, mean_wavevector)
from wigcol.collisions import (ENERGY, MOMENTUM, CollisionSchedule,
                               run_collision)
from wigcol.spectral import mean_energy_quadrature

grid = default_grid()
free = free_space(grid)
k1 = energy_to_wavevector(0.023, M_EFF)
k2 = energy_to_wavevector(0.096, M_EFF)
psi = gaussian_packet(grid, -150.0, 25.0, k1)

sched_e = CollisionSchedule(t_start=20.0, n_steps=40, dwell=6.0,
                            quantum=0.073, sign=+1)
sched_p = CollisionSchedule(t_start=20.0, n_steps=40, dwell=6.0,
                            quantum=HBAR * (k2 - k1), sign=+1)

run_e = run_collision(psi, ENERGY, sched_e, free, M_EFF,
                      dt=0.25, t_total=300.0, engine="split")
run_p = run_collision(psi, MOMENTUM, sched_p, free, M_EFF,
                      dt=0.25, t_total=300.0, engine="split")

final_e, final_p = run_e[-1].psi, run_p[-1].psi
print("after the scheduled absorption (0.023 -> 0.096 eV):")
for label, final in (("energy model  ", final_e), ("momentum model", final_p)):
    e = mean_energy_quadrature(final, free, M_EFF)
    print(f"  {label}: <E> = {e:.5f} eV, <k> = {mean_wavevector(final):.5f} nm^-1")
print(f"mutual fidelity |<psi_E|psi_p>|^2 = {fidelity(final_e, final_p):.4f}")
print("the models are equivalent in free space, as they must be")
