"""Wigner-function diagnostics: marginals, negativity, the positivity
check on blind collisions, and the pure-state inverse transform.
"""

import numpy as np

from wigcol import Grid, fidelity, gaussian_packet
from wigcol.collisions import momentum_exchange
from wigcol.ensembles import (CollisionDelta, MemberNotFound, apply_collision,
                              ensemble_of, presence_density)
from wigcol.wigner import (check_positivity, momentum_marginal,
                           position_marginal, purity, reconstruct_pure_state,
                           wigner_of_ensemble, wigner_transform)

grid = Grid(nx=1024, dx=0.4, x0=-204.8)

# --- a moving packet: marginals reproduce the densities exactly ---
psi = gaussian_packet(grid, -30.0, 8.0, 0.3)
wf = wigner_transform(psi)
q = position_marginal(wf)
p = momentum_marginal(wf)
print(f"x-marginal error: {np.abs(q - np.abs(psi.amp)**2).max():.2e}")
print(f"P(k) peaks at k = {wf.kgrid.k[np.argmax(p)]:.3f} nm^-1 (packet: 0.300)")
print(f"purity 2*pi*sum W^2 = {purity(wf):.6f} (pure state)")

# --- a cat state shows interference negativity between the blobs ---
amp = (gaussian_packet(grid, -40.0, 6.0, 0.0).amp
       + gaussian_packet(grid, 40.0, 6.0, 0.0).amp)
from wigcol import WaveFunction, norm2
cat = WaveFunction(grid, amp).normalized()
w_cat = wigner_transform(cat)
print(f"\ncat state: min W = {w_cat.w.min():.3f} (negative fringes), "
      f"min Q = {position_marginal(w_cat).min():.2e} (still a density)")

# --- blind collisions break positivity, strict ones cannot ---
a = gaussian_packet(grid, -80.0, 10.0, 0.2)
b = gaussian_packet(grid, 80.0, 10.0, -0.2)
ens = ensemble_of((a, 0.5), (b, 0.5))
outsider = gaussian_packet(grid, 0.0, 10.0, 0.0)
scattered = gaussian_packet(grid, 40.0, 10.0, 0.1)
delta = CollisionDelta(outsider, scattered, 0.25)
blind = apply_collision(ens, delta, strict=False)
report = check_positivity(wigner_of_ensemble(blind))
print(f"\nblind replacement of a non-member: min Q = {report['min_Q']:.4f} "
      f"at x = {report['argmin_x']:.0f} nm -> violated = {report['violated']}")
try:
    apply_collision(ens, delta, strict=True)
except MemberNotFound:
    print("strict replacement refuses: MemberNotFound")

# --- pure-state Wigner functions invert back to the wave function ---
kicked = momentum_exchange(psi, 0.15)
rec = reconstruct_pure_state(wigner_transform(kicked))
print(f"\nreconstruction fidelity (post-collision packet): "
      f"{fidelity(rec, kicked):.12f}")
mixed = wigner_of_ensemble(ens)
try:
    reconstruct_pure_state(mixed)
except ValueError as exc:
    print(f"mixture rejected: {exc}")
