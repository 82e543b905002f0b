import numpy as np
import pytest

from wigcol import (M_EFF, WaveFunction, double_barrier, free_space,
                    gaussian_packet, norm2)
from wigcol.collisions import energy_exchange, momentum_exchange
from wigcol.ensembles import (CollisionDelta, Ensemble, MemberNotFound,
                              SignedEnsemble, apply_collision, delta_energy,
                              ensemble_energy, ensemble_of,
                              from_coupled_state, presence_density)
from wigcol.propagate import CoupledState
from wigcol.spectral import diagonalize, mean_energy_quadrature, well_states
from wigcol.wigner import position_marginal, wigner_of_ensemble


@pytest.fixture()
def two_packets(grid):
    a = gaussian_packet(grid, -120.0, 15.0, 0.2)
    b = gaussian_packet(grid, 120.0, 15.0, -0.2)
    return a, b


class TestEnsembleBasics:
    def test_single_member_density(self, grid, two_packets):
        a, _ = two_packets
        ens = ensemble_of((a, 1.0))
        assert np.abs(presence_density(ens) - np.abs(a.amp) ** 2).max() < 1e-15

    def test_disjoint_mix_is_half_height(self, grid, two_packets):
        a, b = two_packets
        ens = ensemble_of((a, 0.5), (b, 0.5))
        q = presence_density(ens)
        ia = np.argmin(np.abs(grid.x + 120.0))
        assert q[ia] == pytest.approx(0.5 * np.abs(a.amp[ia]) ** 2, rel=1e-9)
        assert np.sum(q) * grid.dx == pytest.approx(1.0, abs=1e-9)

    def test_density_matches_wigner_marginal(self, two_packets):
        a, b = two_packets
        ens = ensemble_of((a, 0.5), (b, 0.5))
        q_direct = presence_density(ens)
        q_wigner = position_marginal(wigner_of_ensemble(ens))
        assert np.abs(q_direct - q_wigner).max() < 1e-9

    def test_weight_validation(self, two_packets):
        a, b = two_packets
        with pytest.raises(ValueError):
            ensemble_of((a, 0.8), (b, 0.1))
        with pytest.raises(ValueError):
            ensemble_of((a, 1.5), (b, -0.5))

    def test_from_coupled_state(self, grid, two_packets):
        a, b = two_packets
        state = CoupledState(
            WaveFunction(grid, a.amp * np.sqrt(0.3)),
            WaveFunction(grid, b.amp * np.sqrt(0.7)))
        ens = from_coupled_state(state)
        weights = sorted(w for _, w in ens.members)
        assert weights == pytest.approx([0.3, 0.7], abs=1e-9)


class TestApplyCollision:
    def test_strict_member_replacement(self, two_packets, grid):
        a, b = two_packets
        ens = ensemble_of((a, 0.5), (b, 0.5))
        scattered = gaussian_packet(grid, -60.0, 15.0, 0.3)
        out = apply_collision(ens, CollisionDelta(a, scattered, 0.5), strict=True)
        assert isinstance(out, Ensemble)
        assert sum(w for _, w in out.members) == pytest.approx(1.0, abs=1e-12)
        assert presence_density(out).min() >= 0.0

    def test_strict_partial_weight(self, two_packets, grid):
        a, b = two_packets
        ens = ensemble_of((a, 0.5), (b, 0.5))
        scattered = gaussian_packet(grid, -60.0, 15.0, 0.3)
        out = apply_collision(ens, CollisionDelta(a, scattered, 0.2), strict=True)
        weights = sorted(w for _, w in out.members)
        assert weights == pytest.approx([0.2, 0.3, 0.5], abs=1e-12)

    def test_strict_non_member_raises(self, two_packets, grid):
        a, b = two_packets
        ens = ensemble_of((a, 0.5), (b, 0.5))
        outsider = gaussian_packet(grid, 0.0, 15.0, 0.0)
        scattered = gaussian_packet(grid, 60.0, 15.0, 0.1)
        with pytest.raises(MemberNotFound):
            apply_collision(ens, CollisionDelta(outsider, scattered, 0.25),
                            strict=True)

    def test_blind_non_member_goes_negative(self, two_packets, grid):
        a, b = two_packets
        ens = ensemble_of((a, 0.5), (b, 0.5))
        outsider = gaussian_packet(grid, 0.0, 15.0, 0.0)
        scattered = gaussian_packet(grid, 60.0, 15.0, 0.1)
        blind = apply_collision(ens, CollisionDelta(outsider, scattered, 0.25),
                                strict=False)
        assert isinstance(blind, SignedEnsemble)
        assert presence_density(blind).min() < -1e-6

    def test_null_collision_keeps_density(self, two_packets, grid):
        a, b = two_packets
        ens = ensemble_of((a, 0.5), (b, 0.5))
        out = apply_collision(ens, CollisionDelta(a, a, 0.5), strict=True)
        assert np.abs(presence_density(out) - presence_density(ens)).max() < 1e-15

    def test_grid_mismatch_rejected(self, two_packets):
        from wigcol import Grid
        a, b = two_packets
        ens = ensemble_of((a, 0.5), (b, 0.5))
        other = Grid(nx=1024, dx=0.4, x0=-204.8)
        foreign = gaussian_packet(other, 0.0, 15.0, 0.0)
        with pytest.raises(ValueError):
            apply_collision(ens, CollisionDelta(foreign, foreign, 0.1), True)


class TestEnergyBookkeeping:
    def test_apply_then_measure(self, two_packets, grid, free):
        a, b = two_packets
        ens = ensemble_of((a, 0.5), (b, 0.5))
        scattered = gaussian_packet(grid, -60.0, 15.0, 0.35)
        delta = CollisionDelta(a, scattered, 0.5)
        e_before = ensemble_energy(ens, free, M_EFF)
        de = delta_energy(delta, free, M_EFF)
        out = apply_collision(ens, delta, strict=True)
        assert ensemble_energy(out, free, M_EFF) == pytest.approx(
            e_before + de, abs=1e-12)

    def test_blind_bookkeeping_also_exact(self, two_packets, grid, free):
        a, b = two_packets
        ens = ensemble_of((a, 0.5), (b, 0.5))
        outsider = gaussian_packet(grid, 0.0, 15.0, 0.0)
        scattered = gaussian_packet(grid, 60.0, 15.0, 0.1)
        delta = CollisionDelta(outsider, scattered, 0.25)
        blind = apply_collision(ens, delta, strict=False)
        assert ensemble_energy(blind, free, M_EFF) == pytest.approx(
            ensemble_energy(ens, free, M_EFF) + delta_energy(delta, free, M_EFF),
            abs=1e-12)

    def test_null_delta_zero_energy(self, two_packets, free):
        a, _ = two_packets
        assert delta_energy(CollisionDelta(a, a, 0.5), free, M_EFF) == 0.0

    def test_energy_exchange_delta(self, free_basis, free):
        # delta built from the spectral shift carries +dE * weight (2%)
        psi = gaussian_packet(free_basis.grid, -150.0, 25.0, 0.1573239)
        scattered = energy_exchange(psi, free_basis, 0.073)
        delta = CollisionDelta(psi, scattered, 0.5)
        de = delta_energy(delta, free, M_EFF)
        assert de == pytest.approx(0.5 * 0.073, rel=0.02)

    def test_momentum_exchange_in_well_misses(self, grid):
        profile = double_barrier(grid, 12.0, 0.3, 16.0)
        basis = diagonalize(profile, M_EFF)
        idx = well_states(basis, -8.0, 8.0)
        p1 = WaveFunction(grid, basis.modes[:, idx[0]].astype(complex)).normalized()
        spacing = basis.energies[idx[1]] - basis.energies[idx[0]]
        delta = CollisionDelta(p1, momentum_exchange(p1, 0.164), 1.0)
        de = delta_energy(delta, profile, M_EFF)
        assert abs(de - spacing) > 0.2 * spacing


class TestWignerLinearityChain:
    def test_collision_commutes_with_transform(self, two_packets, grid):
        a, b = two_packets
        ens = ensemble_of((a, 0.5), (b, 0.5))
        scattered = gaussian_packet(grid, -60.0, 15.0, 0.3)
        delta = CollisionDelta(a, scattered, 0.5)
        out = apply_collision(ens, delta, strict=True)
        w_after = wigner_of_ensemble(out)
        from wigcol.wigner import wigner_transform
        w_expected = (wigner_of_ensemble(ens).w
                      - 0.5 * wigner_transform(a).w
                      + 0.5 * wigner_transform(scattered).w)
        assert np.abs(w_after.w - w_expected).max() < 1e-9
