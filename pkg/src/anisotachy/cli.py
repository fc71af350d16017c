"""Command-line front end.

Subcommands
-----------
decay      amplitude/population/rate traces as CSV
intensity  waveguide intensity on a space-time grid as CSV
sweep      directional emission over the (theta, delta_phi) plane as CSV
optimize   best directionality parameters for a given beta
fisher     Fisher-information scan over a phase parameter as CSV
presets    list bundled configurations

The system is specified by exactly one source: ``--preset``, ``--config
FILE`` (flat ``key = value`` text), or inline flags (either the delay/phase
set ``--t-l --t-r --phi-l --phi-r`` or the velocity set ``--omega0 --d --v
--v-l --v-r``, each together with ``--gamma --beta``).  State flags
(``--theta --phi-a1 --phi-a2``) are not a config source and may override a
preset's initial state.

All CSV floats are written with ``repr`` (shortest round-trip form), NaN as
``nan``, and undefined chi as an empty field.  Exit status: 0 on success, 1
on numerical failure, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from . import dynamics
from .core import InitialState, SystemConfig, build_system, build_system_from_phases, make_initial_state
from .directionality import (
    PhasePoint,
    VALIDITY_NOTE,
    fisher_information,
    optimal_parameters,
    sweep_chi,
)
from .errors import NumericalError, ValidationError
from .field import intensity_grid
from .presets import PRESETS, describe_presets, get_preset

_PHASE_KEYS = ("t_l", "t_r", "phi_l", "phi_r")
_VELOCITY_KEYS = ("omega0", "d", "v", "v_l", "v_r")
_STATE_KEYS = ("theta", "phi_a1", "phi_a2")
_CONFIG_FILE_KEYS = frozenset(("gamma", "beta") + _PHASE_KEYS + _VELOCITY_KEYS + _STATE_KEYS)


def _fmt(value) -> str:
    if value is None:
        return ""
    x = float(value)
    if math.isnan(x):
        return "nan"
    return repr(x)


def _parse_config_file(path: str) -> dict[str, float]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path!r}: {exc}") from exc
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, rhs = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        if key not in _CONFIG_FILE_KEYS:
            raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ValidationError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = float(rhs.strip())
        except ValueError:
            raise ValidationError(f"{path}:{lineno}: bad number {rhs.strip()!r}") from None
    return values


def _build_from_mapping(values: dict[str, float], origin: str) -> SystemConfig:
    has_phase = [k for k in _PHASE_KEYS if k in values]
    has_vel = [k for k in _VELOCITY_KEYS if k in values]
    if has_phase and has_vel:
        raise ValidationError(
            f"{origin}: mixes delay/phase keys {has_phase} with velocity keys {has_vel}"
        )
    if "gamma" not in values or "beta" not in values:
        raise ValidationError(f"{origin}: gamma and beta are required")
    if has_vel:
        missing = [k for k in _VELOCITY_KEYS if k not in values]
        if missing:
            raise ValidationError(f"{origin}: velocity form is missing {missing}")
        return build_system(
            gamma=values["gamma"],
            beta=values["beta"],
            omega0=values["omega0"],
            d=values["d"],
            v=values["v"],
            v_L=values["v_l"],
            v_R=values["v_r"],
        )
    missing = [k for k in _PHASE_KEYS if k not in values]
    if missing:
        raise ValidationError(f"{origin}: delay/phase form is missing {missing}")
    return build_system_from_phases(
        gamma=values["gamma"],
        beta=values["beta"],
        T_L=values["t_l"],
        T_R=values["t_r"],
        phi_L=values["phi_l"],
        phi_R=values["phi_r"],
    )


def _resolve_system(args, *, require: bool = True):
    """Return (config, state) from exactly one of preset / file / inline flags."""
    inline = {
        k: getattr(args, k)
        for k in ("gamma", "beta") + _PHASE_KEYS + _VELOCITY_KEYS
        if getattr(args, k, None) is not None
    }
    sources = []
    if getattr(args, "preset", None) is not None:
        sources.append("--preset")
    if getattr(args, "config", None) is not None:
        sources.append("--config")
    if inline:
        sources.append("inline flags")
    if len(sources) > 1:
        raise ValidationError(f"conflicting configuration sources: {' and '.join(sources)}")

    config = state = None
    if args.preset is not None:
        config, state = get_preset(args.preset)
    elif args.config is not None:
        values = _parse_config_file(args.config)
        config = _build_from_mapping(values, args.config)
        state = make_initial_state(
            theta=values.get("theta", math.pi / 4.0),
            phi_A1=values.get("phi_a1", 0.0),
            phi_A2=values.get("phi_a2", 0.0),
        )
    elif inline:
        config = _build_from_mapping(inline, "command line")
    elif require:
        raise ValidationError(
            "no system given; use --preset, --config, or inline flags (see --help)"
        )

    theta = getattr(args, "theta", None)
    phi_a1 = getattr(args, "phi_a1", None)
    phi_a2 = getattr(args, "phi_a2", None)
    if state is None or theta is not None or phi_a1 is not None or phi_a2 is not None:
        base = state if state is not None else make_initial_state(math.pi / 4.0)
        state = make_initial_state(
            theta=theta if theta is not None else base.theta,
            phi_A1=phi_a1 if phi_a1 is not None else base.phi_A1,
            phi_A2=phi_a2 if phi_a2 is not None else base.phi_A2,
        )
    return config, state


def _write_csv(path: str, header: list[str], rows) -> int:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            count = 0
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
                count += 1
    except OSError as exc:
        raise NumericalError(f"cannot write {path!r}: {exc}") from exc
    return count


def _cmd_decay(args) -> int:
    config, state = _resolve_system(args)
    trace = dynamics.compute_trace(
        config,
        state,
        t_max=args.t_max,
        dt=args.dt,
        solver=args.solver,
        n_poles=args.n_poles,
    )
    if trace.dt * config.gamma <= 0.01 + 1e-12:
        rate1, rate2 = dynamics.decay_rate_trace(trace)
    else:
        print(
            f"note: dt too coarse for rate extraction (gamma*dt = {trace.dt * config.gamma:.3g} "
            "> 0.01); rate columns are nan"
        )
        rate1 = rate2 = np.full(trace.times.shape, np.nan)
    pop1 = np.abs(trace.c1) ** 2
    pop2 = np.abs(trace.c2) ** 2
    rows = zip(
        trace.times,
        trace.c1.real,
        trace.c1.imag,
        trace.c2.real,
        trace.c2.imag,
        pop1,
        pop2,
        rate1,
        rate2,
    )
    n = _write_csv(
        args.out,
        ["t", "re_c1", "im_c1", "re_c2", "im_c2", "pop1", "pop2", "rate1", "rate2"],
        rows,
    )
    print(f"decay: {n} rows ({args.solver}, t_max = {args.t_max:g}, dt = {args.dt:g}) -> {args.out}")
    return 0


def _cmd_intensity(args) -> int:
    config, state = _resolve_system(args)
    amplitude_fn = None
    if args.solver == "dde":
        if config.T <= 0.0:
            raise ValidationError("--solver dde needs nonzero delays")
        dt = min(config.T_L, config.T_R) / 64.0
        trace = dynamics.dde_integrate(config, state, t_max=args.t_max, dt=dt)

        def amplitude_fn(times):
            c1 = np.interp(times, trace.times, trace.c1.real) + 1j * np.interp(
                times, trace.times, trace.c1.imag
            )
            c2 = np.interp(times, trace.times, trace.c2.real) + 1j * np.interp(
                times, trace.times, trace.c2.imag
            )
            return c1, c2

    grid = intensity_grid(
        config,
        state,
        x_range=(args.x_min, args.x_max),
        t_range=(args.t_min, args.t_max),
        nx=args.nx,
        nt=args.nt,
        amplitude_fn=amplitude_fn,
    )
    rows = (
        (grid.x[i], grid.t[j], grid.intensity[i, j])
        for i in range(args.nx)
        for j in range(args.nt)
    )
    n = _write_csv(args.out, ["x", "t", "intensity"], rows)
    print(
        f"intensity: {n} rows on {args.nx} x {args.nt} grid, "
        f"x in [{args.x_min:g}, {args.x_max:g}], t in [{args.t_min:g}, {args.t_max:g}] -> {args.out}"
    )
    return 0


def _cmd_sweep(args) -> int:
    sources = [
        name
        for name, given in (
            ("--preset", args.preset is not None),
            ("--config", args.config is not None),
            ("--beta", args.beta is not None),
        )
        if given
    ]
    if len(sources) > 1:
        raise ValidationError(f"conflicting configuration sources: {' and '.join(sources)}")
    if not sources:
        raise ValidationError("sweep needs --beta, --preset, or --config")
    if args.beta is not None:
        beta = args.beta
        phi = args.phi if args.phi is not None else math.pi / 2.0
    else:
        if args.preset is not None:
            config, _ = get_preset(args.preset)
        else:
            config = _build_from_mapping(_parse_config_file(args.config), args.config)
        beta = config.beta
        phi = args.phi if args.phi is not None else config.phi
        if config.gamma * config.T > 0.1:
            print(f"note: {VALIDITY_NOTE}; this system has gamma*T = {config.gamma * config.T:.3g}")
    thetas = np.linspace(0.0, math.pi / 2.0, args.n_theta)
    dphis = np.linspace(-math.pi, math.pi, args.n_dphi)
    result = sweep_chi(thetas, dphis, beta=beta, phi=phi)
    chi = result["chi"]

    def rows():
        for i in range(args.n_theta):
            for j in range(args.n_dphi):
                c = chi[i, j]
                yield (
                    thetas[i],
                    dphis[j],
                    result["p_r"][i, j],
                    result["p_l"][i, j],
                    result["p_tot"][i, j],
                    None if math.isnan(c) else c,
                )

    n = _write_csv(args.out, ["theta", "delta_phi", "p_r", "p_l", "p_tot", "chi"], rows())
    finite = chi[np.isfinite(chi)]
    peak = float(np.max(np.abs(finite))) if finite.size else float("nan")
    print(
        f"sweep: {n} rows, beta = {beta:g}, phi = {phi:g}, "
        f"max |chi| = {peak:.6f} -> {args.out}"
    )
    return 0


def _cmd_optimize(args) -> int:
    opt = optimal_parameters(args.beta, n_grid=args.n_grid)
    print(f"beta           = {args.beta:g}")
    print(f"theta_star     = {opt.theta_star!r}")
    print(f"delta_phi_star = {opt.delta_phi_star!r}")
    print(f"phi_star       = {opt.phi_star!r}")
    print(f"chi_star       = {opt.chi_star!r}")
    print(
        f"grid argmax    = (theta = {opt.grid_theta!r}, delta_phi = {opt.grid_delta_phi!r}), "
        f"|chi| = {opt.grid_chi_abs!r}"
    )
    if args.out is not None:
        _write_csv(
            args.out,
            [
                "theta_star",
                "delta_phi_star",
                "phi_star",
                "chi_star",
                "grid_theta",
                "grid_delta_phi",
                "grid_chi_abs",
            ],
            [
                (
                    opt.theta_star,
                    opt.delta_phi_star,
                    opt.phi_star,
                    opt.chi_star,
                    opt.grid_theta,
                    opt.grid_delta_phi,
                    opt.grid_chi_abs,
                )
            ],
        )
        print(f"wrote {args.out}")
    return 0


def _cmd_fisher(args) -> int:
    if args.preset is not None:
        config, state = get_preset(args.preset)
        theta = state.theta if args.theta is None else args.theta
        base = PhasePoint(
            theta=theta,
            phi_A1=state.phi_A1,
            phi_A2=state.phi_A2,
            phi_L=config.phi_L,
            phi_R=config.phi_R,
            beta=config.beta,
        )
    else:
        theta = args.theta if args.theta is not None else math.pi / 4.0
        dphi = args.delta_phi if args.delta_phi is not None else 0.0
        phi = args.phi if args.phi is not None else math.pi / 2.0
        base = PhasePoint(
            theta=theta, phi_A1=dphi, phi_A2=0.0, phi_L=phi, phi_R=phi, beta=args.beta
        )
    if args.scan_max <= args.scan_min:
        raise ValidationError("--scan-max must exceed --scan-min")
    values = np.linspace(args.scan_min, args.scan_max, args.n)

    def scanned_point(varphi: float) -> PhasePoint:
        if args.which == "phi":
            return PhasePoint(
                theta=base.theta,
                phi_A1=base.phi_A1,
                phi_A2=base.phi_A2,
                phi_L=varphi + (base.phi_L - base.phi),
                phi_R=varphi + (base.phi_R - base.phi),
                beta=base.beta,
            )
        if args.which == "delta_phi":
            return PhasePoint(
                theta=base.theta,
                phi_A1=varphi + base.phi_A2,
                phi_A2=base.phi_A2,
                phi_L=base.phi_L,
                phi_R=base.phi_R,
                beta=base.beta,
            )
        slot = {"phi_A1": "phi_A1", "phi_A2": "phi_A2", "phi_L": "phi_L", "phi_R": "phi_R"}[
            args.which
        ]
        kwargs = {
            "theta": base.theta,
            "phi_A1": base.phi_A1,
            "phi_A2": base.phi_A2,
            "phi_L": base.phi_L,
            "phi_R": base.phi_R,
            "beta": base.beta,
        }
        kwargs[slot] = varphi
        return PhasePoint(**kwargs)

    def rows():
        for varphi in values:
            report = fisher_information(scanned_point(float(varphi)), which_phase=args.which)
            yield varphi, report.F_D, report.F_ND, report.difference

    n = _write_csv(args.out, ["varphi", "F_D", "F_ND", "diff"], rows())
    print(
        f"fisher: {n} points, which = {args.which}, beta = {base.beta:g}, "
        f"scan [{args.scan_min:g}, {args.scan_max:g}] -> {args.out}"
    )
    return 0


def _cmd_presets(args) -> int:
    print(describe_presets())
    return 0


def _add_system_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("system (exactly one source)")
    group.add_argument("--preset", choices=sorted(PRESETS), help="bundled configuration")
    group.add_argument("--config", metavar="FILE", help="flat key = value file")
    group.add_argument("--gamma", type=float, help="decay rate")
    group.add_argument("--beta", type=float, help="waveguide coupling fraction in [0, 1]")
    group.add_argument("--t-l", type=float, help="leftward delay (with --t-r --phi-l --phi-r)")
    group.add_argument("--t-r", type=float, help="rightward delay")
    group.add_argument("--phi-l", type=float, help="leftward propagation phase")
    group.add_argument("--phi-r", type=float, help="rightward propagation phase")
    group.add_argument("--omega0", type=float, help="transition frequency (velocity form)")
    group.add_argument("--d", type=float, help="emitter separation (velocity form)")
    group.add_argument("--v", type=float, help="reference speed (velocity form)")
    group.add_argument("--v-l", type=float, help="leftward speed (velocity form)")
    group.add_argument("--v-r", type=float, help="rightward speed (velocity form)")


def _add_state_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("initial state (overrides preset)")
    group.add_argument("--theta", type=float, help="superposition angle in [0, pi/2]")
    group.add_argument("--phi-a1", type=float, help="phase of the first amplitude")
    group.add_argument("--phi-a2", type=float, help="phase of the second amplitude")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anisotachy",
        description="two emitters coupled by a waveguide with direction-dependent field velocities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decay", help="amplitude/population/rate traces as CSV")
    _add_system_flags(p)
    _add_state_flags(p)
    p.add_argument("--t-max", type=float, default=6.0, help="final time (default 6)")
    p.add_argument("--dt", type=float, default=0.001, help="output step (default 0.001)")
    p.add_argument(
        "--solver",
        choices=("series", "dde", "pole_sum", "nonretarded"),
        default="series",
    )
    p.add_argument("--n-poles", type=int, default=50, help="pole pairs for --solver pole_sum")
    p.add_argument("-o", "--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_decay)

    p = sub.add_parser("intensity", help="waveguide intensity on a space-time grid as CSV")
    _add_system_flags(p)
    _add_state_flags(p)
    p.add_argument("--x-min", type=float, default=-4.0)
    p.add_argument("--x-max", type=float, default=4.0)
    p.add_argument("--nx", type=int, default=401)
    p.add_argument("--t-min", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=4.0)
    p.add_argument("--nt", type=int, default=401)
    p.add_argument("--solver", choices=("series", "dde"), default="series")
    p.add_argument("-o", "--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_intensity)

    p = sub.add_parser("sweep", help="directional emission over (theta, delta_phi) as CSV")
    group = p.add_argument_group("system (exactly one source)")
    group.add_argument("--preset", choices=sorted(PRESETS), help="bundled configuration")
    group.add_argument("--config", metavar="FILE", help="flat key = value file")
    group.add_argument("--beta", type=float, help="waveguide coupling fraction in [0, 1]")
    p.add_argument("--phi", type=float, help="mean propagation phase (default pi/2)")
    p.add_argument("--n-theta", type=int, default=401)
    p.add_argument("--n-dphi", type=int, default=401)
    p.add_argument("-o", "--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("optimize", help="best directionality parameters for a given beta")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--n-grid", type=int, default=401)
    p.add_argument("-o", "--out", help="optional one-row CSV")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("fisher", help="Fisher-information scan over a phase parameter as CSV")
    p.add_argument("--preset", choices=sorted(PRESETS), help="take the base point from a preset")
    p.add_argument("--theta", type=float, help="base angle (default pi/4)")
    p.add_argument("--delta-phi", type=float, help="base relative phase (default 0)")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--phi", type=float, help="base mean propagation phase (default pi/2)")
    p.add_argument(
        "--which",
        choices=("phi", "delta_phi", "phi_A1", "phi_A2", "phi_L", "phi_R"),
        default="phi",
        help="parameter scanned and estimated",
    )
    p.add_argument("--n", type=int, default=101)
    p.add_argument("--scan-min", type=float, default=0.15)
    p.add_argument("--scan-max", type=float, default=math.pi - 0.15)
    p.add_argument("-o", "--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_fisher)

    p = sub.add_parser("presets", help="list bundled configurations")
    p.set_defaults(func=_cmd_presets)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
