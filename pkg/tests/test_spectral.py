import numpy as np
import pytest

from wigcol import (HBAR, M_EFF, Grid, WaveFunction, double_barrier,
                    free_space, gaussian_packet, inner, norm2)
from wigcol.collisions import free_dispersion_kick
from wigcol.potentials import PotentialProfile
from wigcol.spectral import (EnergySpectrumCoeffs, diagonalize,
                             energy_spectrum_density, find_resonances,
                             hopping, mean_energy_quadrature, project,
                             synthesize, transmission_coefficient, well_states)


def box_levels(n, length, mass):
    """Analytic particle-in-a-box spectrum (oracle)."""
    return HBAR**2 * np.pi**2 * np.arange(1, n + 1) ** 2 / (2 * mass * length**2)


class TestDiagonalize:
    def test_box_spectrum_oracle(self):
        grid = Grid(nx=512, dx=0.2, x0=0.0)
        basis = diagonalize(free_space(grid), M_EFF)
        # Dirichlet walls sit one cell outside the grid
        length = (grid.nx + 1) * grid.dx
        expected = box_levels(10, length, M_EFF)
        assert np.allclose(basis.energies[:10], expected, rtol=5e-3)

    def test_constant_shift(self, grid):
        c = 0.123
        base = diagonalize(free_space(grid), M_EFF)
        shifted = diagonalize(PotentialProfile(grid, np.full(grid.nx, c)), M_EFF)
        assert np.allclose(shifted.energies, base.energies + c, atol=1e-12)

    def test_orthonormality(self, grid):
        basis = diagonalize(free_space(grid), M_EFF)
        sub = basis.modes[:, :40]
        gram = sub.T @ sub * grid.dx
        assert np.abs(gram - np.eye(40)).max() < 1e-9

    def test_eigen_residual(self, pinned_basis, pinned_barrier):
        t = hopping(pinned_basis.grid, M_EFF)
        for n in (0, 5, 40, 1000, pinned_basis.size - 1):
            v = pinned_basis.modes[:, n]
            hv = (2 * t + pinned_barrier.v) * v
            hv[:-1] -= t * v[1:]
            hv[1:] -= t * v[:-1]
            residual = np.linalg.norm(hv - pinned_basis.energies[n] * v)
            residual /= np.linalg.norm(v)
            assert residual < 1e-8

    def test_well_levels_near_paper_resonances(self, pinned_basis):
        idx = well_states(pinned_basis, -8.0, 8.0)
        energies = pinned_basis.energies[idx]
        assert abs(energies[0] - 0.023) < 3e-3
        assert abs(energies[1] - 0.096) < 5e-3

    def test_too_large_grid_rejected(self):
        grid = Grid(nx=32768, dx=0.05, x0=0.0)
        with pytest.raises(ValueError):
            diagonalize(free_space(grid), M_EFF)


class TestProjectSynthesize:
    def test_eigenstate_is_unit_vector(self, free_basis):
        psi = WaveFunction(free_basis.grid, free_basis.modes[:, 5].astype(complex))
        coeffs = project(psi, free_basis).coeffs
        assert abs(coeffs[5] - 1.0) < 1e-9
        others = np.delete(np.abs(coeffs), 5)
        assert others.max() < 1e-9

    def test_superposition_weights(self, free_basis):
        amp = (free_basis.modes[:, 1] + free_basis.modes[:, 2]) / np.sqrt(2)
        psi = WaveFunction(free_basis.grid, amp.astype(complex))
        coeffs = project(psi, free_basis).coeffs
        assert abs(coeffs[1]) ** 2 == pytest.approx(0.5, abs=1e-10)
        assert abs(coeffs[2]) ** 2 == pytest.approx(0.5, abs=1e-10)

    def test_random_state_parseval(self, free_basis, rng):
        grid = free_basis.grid
        amp = rng.normal(size=grid.nx) + 1j * rng.normal(size=grid.nx)
        psi = WaveFunction(grid, amp).normalized()
        coeffs = project(psi, free_basis).coeffs
        assert np.sum(np.abs(coeffs) ** 2) == pytest.approx(1.0, abs=1e-9)

    def test_completeness_round_trip(self, free_basis):
        psi = gaussian_packet(free_basis.grid, -80.0, 20.0, 0.2)
        back = synthesize(project(psi, free_basis))
        assert norm2(WaveFunction(psi.grid, back.amp - psi.amp)) < 1e-18

    def test_inner_product_preserved(self, free_basis):
        a = gaussian_packet(free_basis.grid, -80.0, 20.0, 0.2)
        b = gaussian_packet(free_basis.grid, -60.0, 25.0, 0.18)
        ca = project(a, free_basis).coeffs
        cb = project(b, free_basis).coeffs
        direct = inner(a, b)
        viaspec = np.sum(np.conj(ca) * cb)
        assert abs(direct - viaspec) < 1e-9

    def test_grid_mismatch_rejected(self, free_basis):
        other = Grid(nx=1024, dx=0.4, x0=-204.8)
        psi = gaussian_packet(other, -20.0, 12.0, 0.2)
        with pytest.raises(ValueError):
            project(psi, free_basis)


class TestSpectrumDensity:
    def test_eigenstate_single_spike(self, free_basis):
        psi = WaveFunction(free_basis.grid, free_basis.modes[:, 7].astype(complex))
        _, density = energy_spectrum_density(psi, free_basis)
        assert density[7] == pytest.approx(1.0, abs=1e-9)
        assert np.delete(density, 7).max() < 1e-12

    def test_gaussian_peaks_at_mean_energy(self, free_basis):
        k0 = 0.3214153   # <E> = 0.096 eV
        psi = gaussian_packet(free_basis.grid, -100.0, 25.0, k0)
        energies, density = energy_spectrum_density(psi, free_basis)
        peak = energies[np.argmax(density)]
        spacing = np.diff(energies)[np.argmax(density)]
        assert abs(peak - 0.096) < spacing + 1e-4

    def test_energy_exchange_moves_peak(self, free_basis):
        # free-space emission from 0.096 to 0.023 eV
        psi = gaussian_packet(free_basis.grid, -100.0, 25.0, 0.3214153)
        shifted = free_dispersion_kick(psi, -0.073, M_EFF)
        energies, density = energy_spectrum_density(shifted, free_basis)
        peak = energies[np.argmax(density)]
        assert abs(peak - 0.023) < 2e-3


class TestTransmission:
    def test_free_space_is_one(self, grid):
        profile = free_space(grid)
        for e in (0.01, 0.1, 0.3):
            assert transmission_coefficient(e, profile, M_EFF) == pytest.approx(1.0)

    def test_single_barrier_matches_analytic(self, fine_grid):
        # rectangular barrier rendered 10 cells wide = 2.0 nm
        v = np.zeros(fine_grid.nx)
        sel = (fine_grid.x >= -1.0) & (fine_grid.x < 1.0)
        assert sel.sum() == 10
        v[sel] = 0.3
        profile = PotentialProfile(fine_grid, v)
        e, v0, width = 0.15, 0.3, 2.0
        kappa = np.sqrt(2 * M_EFF * (v0 - e)) / HBAR
        analytic = 1.0 / (1.0 + v0**2 * np.sinh(kappa * width) ** 2
                          / (4 * e * (v0 - e)))
        numeric = transmission_coefficient(e, profile, M_EFF)
        assert numeric < 1.0
        assert numeric == pytest.approx(analytic, rel=1e-10)

    def test_rejects_nonpositive_energy(self, paper_barrier):
        with pytest.raises(ValueError):
            transmission_coefficient(0.0, paper_barrier, M_EFF)

    def test_double_barrier_peaks_at_resonances(self, paper_barrier):
        t_at = lambda e: transmission_coefficient(e, paper_barrier, M_EFF)
        for e_res in (0.0228, 0.0932):
            assert t_at(e_res) > t_at(e_res - 0.004)
            assert t_at(e_res) > t_at(e_res + 0.004)
            assert t_at(e_res) > 0.9


class TestFindResonances:
    def test_paper_values(self, paper_barrier):
        found = find_resonances(paper_barrier, M_EFF, 0.005, 0.25)
        assert len(found) >= 2
        assert abs(found[0] - 0.023) <= 3e-3
        assert abs(found[1] - 0.096) <= 5e-3

    def test_free_space_empty(self, grid):
        assert find_resonances(free_space(grid), M_EFF, 0.005, 0.25,
                               scan_points=200) == []

    def test_wider_well_has_more_resonances(self, fine_grid):
        wide = double_barrier(fine_grid, 2.0, 0.3, 32.0)
        found = find_resonances(wide, M_EFF, 0.005, 0.25, scan_points=600)
        assert len(found) > 2

    def test_empty_range_rejected(self, paper_barrier):
        with pytest.raises(ValueError):
            find_resonances(paper_barrier, M_EFF, 0.2, 0.1)


def test_quadrature_energy_additivity(grid):
    psi = gaussian_packet(grid, -100.0, 25.0, 0.2)
    base = mean_energy_quadrature(psi, free_space(grid), M_EFF)
    c = 0.05
    shifted = mean_energy_quadrature(
        psi, PotentialProfile(grid, np.full(grid.nx, c)), M_EFF)
    assert shifted == pytest.approx(base + c, abs=1e-12)
