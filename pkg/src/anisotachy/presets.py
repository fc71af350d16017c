"""Bundled reference configurations.

``fig2``
    Maximally coupled (beta = 1), strongly retarded pair with the propagation
    phases pinned exactly to phi_L = pi, phi_R = 2*pi and delays from the
    velocity ratios v_L/v = 0.988, v_R/v = 0.788 at gamma*d/v = 1.  Prepared
    in the symmetric state theta = pi/4.  Exact phases are pinned directly
    (rather than derived from omega0/v) so that tests are not hostage to
    mod-2*pi arithmetic.

``cqed``
    Representative superconducting-circuit values: omega0/2pi = 5 GHz,
    gamma/2pi = 10 MHz, beta = 0.95, d = 1.6 cm, v_L/c = 0.0033,
    v_R/c = 0.0026.  In internal units (gamma = d = 1) the reference speed is
    v = gamma*d, i.e. v/c = 2*pi*10 MHz * 1.6 cm / c = 3.35337e-3, giving
    omega0 = 500 and v_L, v_R as fractions of v.
"""

from __future__ import annotations

import math

from .core import InitialState, SystemConfig, build_system, build_system_from_phases, make_initial_state
from .errors import ValidationError

_V_OVER_C = 2.0 * math.pi * 10e6 * 0.016 / 2.99792458e8  # = 3.35337e-3


def fig2_preset() -> tuple[SystemConfig, InitialState]:
    config = build_system_from_phases(
        gamma=1.0,
        beta=1.0,
        T_L=1.0 / 0.988,
        T_R=1.0 / 0.788,
        phi_L=math.pi,
        phi_R=2.0 * math.pi,
    )
    return config, make_initial_state(math.pi / 4.0)


def cqed_preset() -> tuple[SystemConfig, InitialState]:
    config = build_system(
        gamma=1.0,
        beta=0.95,
        omega0=500.0,
        d=1.0,
        v=1.0,
        v_L=0.0033 / _V_OVER_C,
        v_R=0.0026 / _V_OVER_C,
    )
    return config, make_initial_state(math.pi / 4.0)


PRESETS = {
    "fig2": (fig2_preset, "beta = 1 retarded pair, phases pinned to (pi, 2*pi), symmetric state"),
    "cqed": (cqed_preset, "representative circuit-QED hardware values"),
}


def get_preset(name: str) -> tuple[SystemConfig, InitialState]:
    try:
        builder, _ = PRESETS[name]
    except KeyError:
        raise ValidationError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None
    return builder()


def describe_presets() -> str:
    lines = []
    for name, (builder, blurb) in PRESETS.items():
        config, state = builder()
        lines.append(f"{name}: {blurb}")
        lines.append(
            f"  gamma = {config.gamma:g}, beta = {config.beta:g}, "
            f"T_L = {config.T_L:.6f}, T_R = {config.T_R:.6f}, "
            f"phi_L = {config.phi_L:.6f}, phi_R = {config.phi_R:.6f}"
        )
        lines.append(
            f"  state: theta = {state.theta:.6f}, phi_A1 = {state.phi_A1:g}, "
            f"phi_A2 = {state.phi_A2:g}"
        )
        if name == "cqed":
            lines.append(
                "  physical: omega0/2pi = 5 GHz, gamma/2pi = 10 MHz, beta = 0.95, "
                "d = 1.6 cm, v_L/c = 0.0033, v_R/c = 0.0026"
            )
            lines.append(f"  (v = gamma*d, v/c = {_V_OVER_C:.6g})")
    return "\n".join(lines)
