"""Two quantum emitters coupled by a waveguide whose left- and right-moving
fields travel at different speeds.

The package follows the single-excitation amplitudes (c1, c2) of the pair,
the intensity they radiate into the waveguide, and the stationary
directionality of the emitted light.  Internal units: gamma = 1 sets time,
the emitter separation d sets length, so positions are x/d and delays are
T_LR = d/v_LR.
"""

from .core import (
    InitialState,
    SystemConfig,
    build_system,
    build_system_from_phases,
    delta_phi,
    make_initial_state,
    wrap_angle,
)
from .directionality import (
    DirectionalityReport,
    FisherReport,
    OptimalParameters,
    PhasePoint,
    bell_state_chi,
    chi_weak_coupling,
    emission_probabilities,
    fisher_information,
    optimal_parameters,
    probabilities_by_quadrature,
    spectral_integrals,
    sweep_chi,
)
from .dynamics import (
    AmplitudeTrace,
    DecayClassification,
    PoleSet,
    classify_collective,
    compute_poles,
    compute_trace,
    dde_integrate,
    decay_rate_trace,
    nonretarded_amplitudes,
    pole_sum_amplitudes,
    series_amplitudes,
)
from .errors import DegeneracyError, NumericalError, ValidationError
from .field import SpacetimeGrid, directional_energy, intensity_at, intensity_grid
from .lambertw import lambert_w
from .presets import PRESETS, get_preset

__version__ = "0.1.0"

__all__ = [
    "AmplitudeTrace",
    "DecayClassification",
    "DegeneracyError",
    "DirectionalityReport",
    "FisherReport",
    "InitialState",
    "NumericalError",
    "OptimalParameters",
    "PhasePoint",
    "PoleSet",
    "PRESETS",
    "SpacetimeGrid",
    "SystemConfig",
    "ValidationError",
    "bell_state_chi",
    "build_system",
    "build_system_from_phases",
    "chi_weak_coupling",
    "classify_collective",
    "compute_poles",
    "compute_trace",
    "dde_integrate",
    "decay_rate_trace",
    "delta_phi",
    "directional_energy",
    "emission_probabilities",
    "fisher_information",
    "get_preset",
    "intensity_at",
    "intensity_grid",
    "lambert_w",
    "make_initial_state",
    "nonretarded_amplitudes",
    "optimal_parameters",
    "pole_sum_amplitudes",
    "probabilities_by_quadrature",
    "series_amplitudes",
    "spectral_integrals",
    "sweep_chi",
    "wrap_angle",
    "__version__",
]
