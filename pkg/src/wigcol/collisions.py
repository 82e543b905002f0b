"""The two approximate collision models and the finite-duration schedule.

Energy exchange shifts the spectral content along the eigenvalue axis of a
supplied H0 basis, a^s(E) = a(E - E_gamma).  Momentum exchange multiplies
by the plane-wave phase e^{i dk x}.  In free space the two are related by
the dispersion E = hbar^2 k^2 / 2m, and the energy model is realized as a
wavevector boost along that dispersion (see free_dispersion_kick); on a
basis with bound or quasi-bound structure the spectral interpolation is
the operation that moves population between levels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import HBAR, WaveFunction, mean_wavevector, norm2
from .potentials import PotentialProfile
from .propagate import EdgeAbortError, edge_probability, make_stepper
from .spectral import EnergyBasis, EnergySpectrumCoeffs, project, synthesize

ENERGY = "energy"
MOMENTUM = "momentum"


@dataclass(frozen=True)
class CollisionSchedule:
    """Finite-duration exchange: n_steps equal substeps separated by dwell.

    quantum is the total exchange: E_gamma in eV for the energy model,
    p_gamma = hbar*dk in eV fs/nm for the momentum model.  sign is +1 for
    absorption and -1 for emission.  total duration = n_steps * dwell.
    """

    t_start: float
    n_steps: int = 40
    dwell: float = 6.0
    quantum: float = 0.073
    sign: int = +1

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError("n_steps must be >= 1")
        if self.dwell < 0:
            raise ValueError("dwell must be non-negative")
        if self.quantum < 0:
            raise ValueError("quantum must be non-negative (use sign)")
        if self.sign not in (+1, -1):
            raise ValueError("sign must be +1 (absorption) or -1 (emission)")

    @property
    def duration(self) -> float:
        return self.n_steps * self.dwell


def energy_exchange(psi: WaveFunction, basis: EnergyBasis, d_energy: float,
                    edge_tolerance: float = 0.01) -> WaveFunction:
    """Shift the spectral content by d_energy (eV): a'_n = a(E_n - dE).

    Linear interpolation of Re and Im of the coefficients against the
    non-uniform eigenvalue axis, zero outside the spectrum, renormalized.
    Raises if more than edge_tolerance of the probability would be pushed
    off the spectrum edge (under-resolved basis).
    """
    coeffs = project(psi, basis)
    e = basis.energies
    c = coeffs.coeffs
    # mass that has no image inside [e[0], e[-1]] after the shift
    source_lost = np.sum(np.abs(c[(e < e[0] + max(-d_energy, 0.0))
                                  | (e > e[-1] - max(d_energy, 0.0))]) ** 2)
    total = np.sum(np.abs(c) ** 2)
    if total > 0 and source_lost / total > edge_tolerance:
        raise ValueError(
            f"energy shift of {d_energy} eV pushes {source_lost/total:.2%} "
            "of the probability off the spectrum edge"
        )
    target = e - d_energy
    shifted = (np.interp(target, e, c.real, left=0.0, right=0.0)
               + 1j * np.interp(target, e, c.imag, left=0.0, right=0.0))
    out = synthesize(EnergySpectrumCoeffs(basis=basis, coeffs=shifted))
    return out.normalized()


def momentum_exchange(psi: WaveFunction, d_wavevector: float) -> WaveFunction:
    """Multiply by e^{i dk x}: rigid shift of the momentum content."""
    k_mean = mean_wavevector(psi)
    if abs(k_mean + d_wavevector) >= 0.8 * psi.grid.k_nyquist:
        raise ValueError(
            f"kick to <k> = {k_mean + d_wavevector:.3f} nm^-1 exceeds "
            f"0.8 of the Nyquist wavevector {psi.grid.k_nyquist:.3f}"
        )
    return WaveFunction(psi.grid, psi.amp * np.exp(1j * d_wavevector * psi.grid.x))


def free_dispersion_kick(psi: WaveFunction, d_energy: float, mass: float) -> WaveFunction:
    """Energy quantum applied along the free dispersion at the current <k>.

    Solves hbar^2 (k+dk)^2 / 2m = hbar^2 k^2 / 2m + dE at the packet's
    mean wavevector and applies the corresponding rigid boost.  This is
    the one-to-one energy/momentum correspondence that makes the two
    collision models agree in free space.
    """
    k0 = mean_wavevector(psi)
    sgn = 1.0 if k0 >= 0 else -1.0
    k_sq = k0**2 + 2.0 * mass * d_energy * sgn**2 / HBAR**2
    if k_sq < 0:
        raise ValueError(
            f"energy release {d_energy} eV exceeds the kinetic energy at <k>={k0:.4f}"
        )
    d_wavevector = sgn * (np.sqrt(k_sq) - abs(k0))
    return momentum_exchange(psi, d_wavevector)


def apply_exchange(psi: WaveFunction, model: str, quantum: float, mass: float,
                   basis: EnergyBasis = None) -> WaveFunction:
    """One exchange substep of the given signed quantum.

    Energy model: spectral shift when a basis is supplied, otherwise the
    free-dispersion boost.  Momentum model: quantum is hbar*dk (eV fs/nm).
    """
    if model == ENERGY:
        if basis is not None:
            return energy_exchange(psi, basis, quantum)
        return free_dispersion_kick(psi, quantum, mass)
    if model == MOMENTUM:
        return momentum_exchange(psi, quantum / HBAR)
    raise ValueError(f"unknown collision model {model!r}")


@dataclass(frozen=True)
class Sample:
    """Trajectory snapshot: time, exchange substeps applied so far, state."""

    t: float
    applied: int
    psi: WaveFunction


def run_collision(psi: WaveFunction, model: str, schedule: CollisionSchedule,
                  profile: PotentialProfile, mass: float,
                  basis: EnergyBasis = None, dt: float = 0.25,
                  t_total: float = None, engine: str = "split",
                  sample_stride: int = 40, edge_abort: float = None):
    """Propagate through a scheduled collision; returns a list of Samples.

    The trajectory runs to t_start, alternates [exchange of quantum/n_steps,
    dwell] n_steps times, then continues to t_total.  A sample is recorded
    every sample_stride propagation steps and immediately after every
    exchange substep.

    For the basis-driven energy model each substep targets the cumulative
    ramp E(0) + i/n * sign * quantum: the nominal shift is corrected by the
    measured interpolation residual of the previous substeps, so the
    staircase total equals the quantum exactly.  The dwell evolution is
    unitary and does not move <E>, hence the correction is the accumulated
    interpolation bias only; with n_steps = 1 it vanishes.
    """
    from .spectral import mean_energy_quadrature

    if t_total is None:
        t_total = schedule.t_start + schedule.duration
    if schedule.t_start + schedule.duration > t_total + 1e-9:
        raise ValueError("schedule does not fit inside the simulation window")
    stepper = make_stepper(profile, mass, dt, engine)
    quantum_sub = schedule.sign * schedule.quantum / schedule.n_steps
    track_energy = model == ENERGY and basis is not None

    state = {"t": 0.0, "psi": psi, "applied": 0, "since": 0}
    samples = [Sample(0.0, 0, psi)]
    e_initial = mean_energy_quadrature(psi, profile, mass) if track_energy else None

    def advance(target_t):
        while state["t"] < target_t - 1e-9:
            state["psi"] = stepper.step(state["psi"])
            state["t"] += dt
            state["since"] += 1
            if state["since"] >= sample_stride:
                samples.append(Sample(state["t"], state["applied"], state["psi"]))
                state["since"] = 0
                if edge_abort is not None:
                    m = edge_probability(state["psi"])
                    if m > edge_abort:
                        raise EdgeAbortError(state["t"], m)

    advance(schedule.t_start)
    for i in range(schedule.n_steps):
        if track_energy:
            target = e_initial + (i + 1) * quantum_sub
            here = mean_energy_quadrature(state["psi"], profile, mass)
            step_quantum = target - here
        else:
            step_quantum = quantum_sub
        state["psi"] = apply_exchange(state["psi"], model, step_quantum, mass, basis)
        state["applied"] += 1
        samples.append(Sample(state["t"], state["applied"], state["psi"]))
        state["since"] = 0
        if schedule.dwell > 0:
            advance(state["t"] + schedule.dwell)
    advance(t_total)
    if state["since"]:
        samples.append(Sample(state["t"], state["applied"], state["psi"]))
    return samples
