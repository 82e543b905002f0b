"""1D electron-photon collision models with Wigner-function diagnostics.

The package simulates a single electron in a 1D device (free space or a
resonant-tunneling double barrier), driven either by the exact two-mode
electron-photon coupling or by two approximate collision models (energy
exchange vs momentum exchange), and provides the phase-space diagnostics
needed to check complete positivity and energy conservation.
"""

from .collisions import (ENERGY, MOMENTUM, CollisionSchedule, Sample,
                         apply_exchange, energy_exchange, free_dispersion_kick,
                         momentum_exchange, run_collision)
from .core import (HBAR, M0, M_EFF, Grid, WaveFunction, default_grid,
                   energy_to_wavevector, fidelity, gaussian_packet, inner,
                   mean_position, mean_wavevector, momentum_density, norm2)
from .ensembles import (CollisionDelta, Ensemble, MemberNotFound,
                        SignedEnsemble, apply_collision, delta_energy,
                        ensemble_energy, ensemble_of, from_coupled_state,
                        presence_density)
from .potentials import PotentialProfile, double_barrier, free_space
from .propagate import (CoupledState, EdgeAbortError, ExactModelConfig,
                        coupled_total_energy, electron_energy, evolve,
                        make_coupled_stepper, make_stepper, step_coupled,
                        step_single, time_reverse)
from .scenarios import (ConfigError, ScenarioConfig, count_well_maxima,
                        energy_trace_comparison, load_summary, parse_config,
                        prepare_well_state, run_scenario, transition_window)
from .spectral import (EnergyBasis, EnergySpectrumCoeffs, diagonalize,
                       energy_spectrum_density, find_resonances,
                       mean_energy_quadrature, project, synthesize,
                       transmission_coefficient, well_states)
from .wigner import (KGrid, WignerFunction, check_energy_condition,
                     check_positivity, mean_energy, momentum_marginal,
                     position_marginal, purity, read_wigner,
                     reconstruct_pure_state, wigner_of_ensemble,
                     wigner_transform, write_wigner, write_wigner_csv)

__version__ = "0.1.0"
