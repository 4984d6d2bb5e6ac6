"""omqm: a numerical laboratory for the exact map between linear irreversible
thermodynamics and the quantum harmonic oscillator.

The thermodynamic side is the mean-reverting Gaussian relaxation process of
one extensive coordinate; the quantum side is the harmonic oscillator. The
two are related by the Wick rotation tau = i t together with the parameter
dictionary omega = s/R and m*omega/hbar = s/(2 k_B). Every identity of that
map -- stationary and conditional densities, path-integral composition,
extremal-action paths, the propagator correspondence, and the 3D
isoentropic-sphere reduction -- is implemented in closed form and verified
numerically by the experiment runner and the test suite.
"""

__version__ = "0.1.0"

from .closed_form import (ComplexAmplitude, Gate, conditional_density, euclidean_propagator,
                          feynman_propagator, ground_state_density, stationary_density,
                          transition_density, wick_identity_residual)
from .dynamics import (EntropyState, entropy_production_rate, extremal_onegate_exponent,
                       extremal_path, quadratic_entropy, relaxation_flux, thermo_force)
from .errors import (CausticError, ConfigError, CoverageError, DomainError, GridError,
                     NormalizationError, NumericError, OmqmError, OrderingError,
                     StepSizeError)
from .multidim import (State3D, isoentropic_value, mech_lagrangian_3d, onshell_sphere_radius,
                       onshell_state, sample_onshell_sphere, thermo_lagrangian_3d)
from .params import (PhysicalConstants, QuantumParams, ThermoParams, to_quantum, to_thermo,
                     wick_time)
from .pathint import (ActionValue, GridKernel, GridSpec, compose_kernel, default_grid,
                      exact_grid_kernel, euler_short_time_density, minimize_action,
                      minimize_action_descent, minimum_action_exponent, om_action,
                      propagate_onegate)
from .quanta import (QuantaInput, SecondLawReport, compton_wavelength, entropy_increase,
                     second_law_quantum, time_from_temperature)
from .stochastic import (EnsembleStats, Histogram, Path, TransitionCheck,
                         empirical_transition_check, ensemble_stationary_stats,
                         noise_amplitude, simulate_ou)
