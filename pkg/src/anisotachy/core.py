"""System and initial-state definitions.

Internal units: gamma sets the rate scale (gamma = 1 recommended), times are
measured in 1/gamma.  A system is fully specified by the decay rate gamma, the
waveguide coupling fraction beta, the two one-way propagation delays T_L, T_R
between the emitters, and the corresponding resonant propagation phases
phi_L, phi_R.  Configs may be built either from physical velocities
(T = d/v, phi = omega0*T) or from explicit delays and phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

TWO_PI = 2.0 * math.pi


def wrap_angle(x: float) -> float:
    """Reduce an angle to the interval (-pi, pi]."""
    return x - TWO_PI * math.ceil((x - math.pi) / TWO_PI)


@dataclass(frozen=True)
class SystemConfig:
    """Two emitters on a 1-D waveguide with direction-dependent velocities.

    T_L (T_R) is the time a left-going (right-going) photon takes to travel
    between the emitters; phi_L (phi_R) the phase it picks up at resonance.
    The velocity fields are optional provenance: they are set when the config
    was built from (omega0, d, v, v_L, v_R) and None when delays/phases were
    given directly.
    """

    gamma: float
    beta: float
    T_L: float
    T_R: float
    phi_L: float
    phi_R: float
    omega0: float | None = None
    d: float | None = None
    v: float | None = None
    v_L: float | None = None
    v_R: float | None = None

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValidationError(f"gamma must be positive, got {self.gamma}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValidationError(f"beta must lie in [0, 1], got {self.beta}")
        if self.T_L < 0 or self.T_R < 0:
            raise ValidationError(
                f"delays must be non-negative, got T_L={self.T_L}, T_R={self.T_R}"
            )

    @property
    def T(self) -> float:
        """Mean one-way propagation delay."""
        return 0.5 * (self.T_L + self.T_R)

    @property
    def phi(self) -> float:
        """Mean one-way propagation phase (not wrapped)."""
        return 0.5 * (self.phi_L + self.phi_R)


@dataclass(frozen=True)
class InitialState:
    """Single-excitation atomic state c1(0) = cos(theta) e^{i phi_A1},
    c2(0) = sin(theta) e^{i phi_A2}."""

    theta: float
    phi_A1: float = 0.0
    phi_A2: float = 0.0

    @property
    def c1_0(self) -> complex:
        return math.cos(self.theta) * complex(math.cos(self.phi_A1), math.sin(self.phi_A1))

    @property
    def c2_0(self) -> complex:
        return math.sin(self.theta) * complex(math.cos(self.phi_A2), math.sin(self.phi_A2))


def build_system(
    gamma: float,
    beta: float,
    omega0: float,
    d: float,
    v: float,
    v_L: float,
    v_R: float,
) -> SystemConfig:
    """Build a config from physical parameters.

    Parameters
    ----------
    gamma : total spontaneous emission rate (sets the unit system).
    beta : fraction of emission entering the guided modes, in [0, 1].
    omega0 : emitter resonance frequency (units of gamma).
    d : emitter separation.
    v : reference propagation speed (carried as provenance; the delays use
        the directional speeds only).
    v_L, v_R : left-/right-going propagation speeds.

    Delays are T_{L,R} = d / v_{L,R} and phases phi_{L,R} = omega0 * T_{L,R}.
    """
    if v_L <= 0 or v_R <= 0 or v <= 0:
        raise ValidationError("propagation speeds must be positive")
    if d < 0:
        raise ValidationError(f"separation d must be non-negative, got {d}")
    if omega0 < 0:
        raise ValidationError(f"omega0 must be non-negative, got {omega0}")
    T_L = d / v_L
    T_R = d / v_R
    return SystemConfig(
        gamma=gamma,
        beta=beta,
        T_L=T_L,
        T_R=T_R,
        phi_L=omega0 * T_L,
        phi_R=omega0 * T_R,
        omega0=omega0,
        d=d,
        v=v,
        v_L=v_L,
        v_R=v_R,
    )


def build_system_from_phases(
    gamma: float,
    beta: float,
    T_L: float,
    T_R: float,
    phi_L: float,
    phi_R: float,
) -> SystemConfig:
    """Build a config from explicit delays and propagation phases.

    Use this to pin exact phases (e.g. phi_L = pi, phi_R = 2*pi) that a
    velocity-derived construction would only approximate mod 2*pi.
    """
    return SystemConfig(gamma=gamma, beta=beta, T_L=T_L, T_R=T_R, phi_L=phi_L, phi_R=phi_R)


def make_initial_state(theta: float, phi_A1: float = 0.0, phi_A2: float = 0.0) -> InitialState:
    """Normalized single-excitation state; angles are taken as given (they wrap)."""
    return InitialState(theta=theta, phi_A1=phi_A1, phi_A2=phi_A2)


def delta_phi(state: InitialState, config: SystemConfig) -> float:
    """Difference between the relative atomic and propagation phases,
    (phi_A1 - phi_A2) + (phi_R - phi_L)/2, reduced to (-pi, pi]."""
    return wrap_angle((state.phi_A1 - state.phi_A2) + 0.5 * (config.phi_R - config.phi_L))
