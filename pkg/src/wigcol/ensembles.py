"""Weighted pure-state ensembles and state-replacement collisions.

The density matrix is never materialized; an ensemble is the list of
(state, weight) pairs that build it.  A collision replaces one member by
its scattered version.  With knowledge of the members (strict mode) this
always yields a proper mixture; applied blindly (non-strict) it can
subtract a state that is not present, which is exactly the mechanism that
produces negative presence densities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import WaveFunction, fidelity, norm2
from .potentials import PotentialProfile
from .spectral import mean_energy_quadrature


class MemberNotFound(Exception):
    """Strict collision tried to remove a state that is not in the ensemble."""


@dataclass(frozen=True)
class Ensemble:
    """members: list of (psi, weight) with non-negative weights summing to 1."""

    members: tuple

    def __post_init__(self):
        _check_members(self.members, allow_negative=False)

    @property
    def grid(self):
        return self.members[0][0].grid


@dataclass(frozen=True)
class SignedEnsemble:
    """Ensemble-like object whose weights may be negative.

    Produced by blind (non-strict) collisions; its presence density is not
    guaranteed non-negative, which is the point.
    """

    members: tuple

    def __post_init__(self):
        _check_members(self.members, allow_negative=True)

    @property
    def grid(self):
        return self.members[0][0].grid


def _check_members(members, allow_negative):
    if not members:
        raise ValueError("ensemble needs at least one member")
    grid = members[0][0].grid
    total = 0.0
    for psi, weight in members:
        if psi.grid != grid:
            raise ValueError("ensemble members live on different grids")
        if not allow_negative and weight < 0:
            raise ValueError(f"negative weight {weight} in a proper ensemble")
        total += weight
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"weights sum to {total}, not 1")


def ensemble_of(*pairs) -> Ensemble:
    return Ensemble(members=tuple(pairs))


def from_coupled_state(state) -> Ensemble:
    """Two-member ensemble (psi_a, |psi_a|^2), (psi_b, |psi_b|^2).

    Channels with zero weight are dropped.
    """
    members = []
    for psi in (state.psi_a, state.psi_b):
        w = norm2(psi)
        if w > 1e-14:
            members.append((psi.normalized(), w))
    return Ensemble(members=tuple(members))


@dataclass(frozen=True)
class CollisionDelta:
    """Trace-preserving replacement: remove one state, add another."""

    removed: WaveFunction
    added: WaveFunction
    weight: float

    def __post_init__(self):
        if self.weight <= 0:
            raise ValueError("collision weight must be positive")


def presence_density(ens) -> np.ndarray:
    """Q(x) = sum_j weight_j |psi_j(x)|^2 (charge density up to the charge)."""
    out = np.zeros(ens.grid.nx)
    for psi, weight in ens.members:
        out += weight * np.abs(psi.amp) ** 2
    return out


def apply_collision(ens: Ensemble, delta: CollisionDelta, strict: bool = True):
    """Apply a state-replacement collision.

    Strict mode requires delta.removed to match a member (fidelity above
    1 - 1e-6) with enough weight; the result is a proper Ensemble.
    Non-strict applies the delta blindly and returns a SignedEnsemble that
    may carry a negative-weight component.
    """
    if delta.removed.grid != ens.grid or delta.added.grid != ens.grid:
        raise ValueError("collision delta lives on a different grid")
    if strict:
        for i, (psi, weight) in enumerate(ens.members):
            if fidelity(psi, delta.removed) >= 1.0 - 1e-6 and weight >= delta.weight - 1e-12:
                members = list(ens.members)
                remaining = weight - delta.weight
                if remaining > 1e-12:
                    members[i] = (psi, remaining)
                else:
                    del members[i]
                members.append((delta.added, delta.weight))
                return Ensemble(members=tuple(members))
        raise MemberNotFound(
            "removed state does not match any ensemble member with enough weight"
        )
    members = list(ens.members)
    members.append((delta.removed, -delta.weight))
    members.append((delta.added, +delta.weight))
    return SignedEnsemble(members=tuple(members))


def ensemble_energy(ens, profile: PotentialProfile, mass: float) -> float:
    """Tr(rho H0) = sum_j weight_j <psi_j|H0|psi_j>, eV."""
    return float(sum(w * mean_energy_quadrature(psi, profile, mass)
                     for psi, w in ens.members))


def delta_energy(delta: CollisionDelta, profile: PotentialProfile,
                 mass: float) -> float:
    """Tr(Delta rho H0): energy carried by the collision, eV."""
    return float(delta.weight * (mean_energy_quadrature(delta.added, profile, mass)
                                 - mean_energy_quadrature(delta.removed, profile, mass)))
