"""Atomic amplitude dynamics: exact series, delay-ODE integration, pole sum.

The two excitation amplitudes obey linear delay equations

    dc1/dt = -(gamma/2) * [c1(t) + beta * e^{i phi_L} * c2(t - T_L) * H(t - T_L)]
    dc2/dt = -(gamma/2) * [c2(t) + beta * e^{i phi_R} * c1(t - T_R) * H(t - T_R)]

with H the step function.  Three independent solvers are provided (an exact
truncating series, an RK4 method-of-steps integrator, and a Lambert-W pole
expansion), plus the zero-delay closed form.  They cross-validate each other
in the test suite.
"""

from __future__ import annotations

import bisect
import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .core import InitialState, SystemConfig
from .errors import DegeneracyError, NumericalError, ValidationError
from .lambertw import lambert_w

__all__ = [
    "AmplitudeTrace",
    "PoleSet",
    "DecayClassification",
    "series_amplitudes",
    "dde_integrate",
    "compute_poles",
    "pole_sum_amplitudes",
    "nonretarded_amplitudes",
    "decay_rate_trace",
    "classify_collective",
    "compute_trace",
]

_NORM_SLACK = 1e-9
# a truncated residue expansion rings near t = 0 (measured overshoot ~0.17 and
# |dc(0)| ~ 0.35 regardless of N); it is only trustworthy past gamma*t ~ 0.5
_POLE_SUM_SLACK = 0.25
_POLE_SUM_INIT_TOL = 0.5


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class AmplitudeTrace:
    """Sampled amplitudes on a uniform time grid starting at t = 0."""

    times: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    config: SystemConfig
    state: InitialState
    method: str

    def __post_init__(self):
        object.__setattr__(self, "times", _freeze(np.asarray(self.times, dtype=float)))
        object.__setattr__(self, "c1", _freeze(np.asarray(self.c1, dtype=complex)))
        object.__setattr__(self, "c2", _freeze(np.asarray(self.c2, dtype=complex)))
        t = self.times
        if t.ndim != 1 or t.size < 2 or self.c1.shape != t.shape or self.c2.shape != t.shape:
            raise ValidationError("trace arrays must be 1-D and of equal length >= 2")
        if abs(t[0]) > 1e-12:
            raise ValidationError(f"trace must start at t = 0, got {t[0]}")
        dts = np.diff(t)
        if dts[0] <= 0 or not np.allclose(dts, dts[0], rtol=1e-9, atol=1e-12):
            raise ValidationError("trace time grid must be uniform and increasing")
        slack = _POLE_SUM_SLACK if self.method == "pole_sum" else _NORM_SLACK
        norm = np.abs(self.c1) ** 2 + np.abs(self.c2) ** 2
        if norm.max() > 1.0 + slack:
            raise NumericalError(
                f"excitation exceeds unity by {norm.max() - 1.0:.3e} (method={self.method})"
            )
        init_tol = _POLE_SUM_INIT_TOL if self.method == "pole_sum" else 1e-12
        err0 = max(abs(self.c1[0] - self.state.c1_0), abs(self.c2[0] - self.state.c2_0))
        if err0 > init_tol:
            raise NumericalError(
                f"trace does not reproduce the initial state: |dc(0)| = {err0:.3e} "
                f"(method={self.method})"
            )

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])


def _series_core(config, state, t):
    """Vectorized evaluation of the exact delayed series on t >= 0."""
    gamma, beta = config.gamma, config.beta
    T, phi = config.T, config.phi
    c1_0, c2_0 = state.c1_0, state.c2_0
    c1 = np.zeros(t.shape, dtype=complex)
    c2 = np.zeros(t.shape, dtype=complex)
    # n = 0 even term: plain independent decay, for every solver path
    c1 += c1_0 * np.exp(-0.5 * gamma * t)
    c2 += c2_0 * np.exp(-0.5 * gamma * t)
    b = 0.5 * beta * gamma
    if b == 0.0 or t.size == 0:
        return c1, c2
    t_top = float(t.max())
    # Step functions truncate exactly at n <= t/(2T); for gamma*T -> 0 that bound
    # explodes, but terms with k far above k_peak = b*t are < e^-60 of the peak,
    # so a soft cutoff keeps the sum exact to double precision.
    n_exact = int(math.floor(t_top / (2.0 * T)))
    k_peak = b * t_top
    n_soft = int(math.ceil(0.5 * (k_peak + 12.0 * math.sqrt(k_peak) + 60.0)))
    log_b = math.log(b)
    for n in range(1, min(n_exact, n_soft) + 1):
        k = 2 * n
        tau = t - 2.0 * n * T
        m = tau > 0
        if not m.any():
            break
        mag = np.exp(k * (log_b + np.log(tau[m])) - gammaln(k + 1) - 0.5 * gamma * tau[m])
        ph = cmath.exp(1j * 2.0 * n * phi)
        c1[m] += c1_0 * ph * mag
        c2[m] += c2_0 * ph * mag
    for n in range(0, min(n_exact, n_soft) + 1):
        k = 2 * n + 1
        base = cmath.exp(1j * 2.0 * n * phi)
        tau = t - 2.0 * n * T - config.T_L
        m = tau > 0
        any_left = m.any()
        if any_left:
            mag = np.exp(k * (log_b + np.log(tau[m])) - gammaln(k + 1) - 0.5 * gamma * tau[m])
            c1[m] -= c2_0 * base * cmath.exp(1j * config.phi_L) * mag
        tau = t - 2.0 * n * T - config.T_R
        m = tau > 0
        if m.any():
            mag = np.exp(k * (log_b + np.log(tau[m])) - gammaln(k + 1) - 0.5 * gamma * tau[m])
            c2[m] -= c1_0 * base * cmath.exp(1j * config.phi_R) * mag
        elif not any_left:
            break
    return c1, c2


def series_amplitudes(config: SystemConfig, state: InitialState, t):
    """Exact amplitudes from the delayed interference series.

    Each term carries step functions H(t - 2nT) / H(t - 2nT - T_{L,R}), so the
    sum is finite and exact, not asymptotic.  Terms are evaluated in
    log-magnitude form to stay finite for large gamma*t.

    Parameters
    ----------
    config : SystemConfig with T > 0 (use nonretarded_amplitudes at T = 0).
    state : InitialState.
    t : scalar or array of times >= 0.

    Returns
    -------
    (c1, c2) matching the shape of t.
    """
    if config.T <= 0:
        raise ValidationError("series requires T > 0; use nonretarded_amplitudes for T = 0")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if (t_arr < 0).any():
        raise ValidationError("times must be non-negative")
    c1, c2 = _series_core(config, state, t_arr)
    if np.isscalar(t) or np.ndim(t) == 0:
        return complex(c1[0]), complex(c2[0])
    return c1, c2


def _hermite_eval(t, t0, t1, y0, y1, f0, f1):
    h = t1 - t0
    s = (t - t0) / h
    s2 = s * s
    s3 = s2 * s
    return (
        (2 * s3 - 3 * s2 + 1) * y0
        + (s3 - 2 * s2 + s) * h * f0
        + (-2 * s3 + 3 * s2) * y1
        + (s3 - s2) * h * f1
    )


def dde_integrate(
    config: SystemConfig, state: InitialState, t_max: float, dt: float
) -> AmplitudeTrace:
    """Method-of-steps RK4 integration of the delay equations.

    Integration nodes are the uniform dt-grid merged with every onset line
    2nT, 2nT + T_L, 2nT + T_R up to t_max, so no step straddles a kink of the
    solution.  Delayed values are read from the stored history by cubic
    Hermite interpolation; the delayed history for t < 0 never enters because
    the step-function factors are off there.

    dt must satisfy dt <= min(T_L, T_R)/8 so that every delayed stage lies in
    already-completed history.  The returned samples sit on the same uniform
    grid ``arange(0, t_max + dt/2, dt)`` that the other solvers use.
    """
    if t_max <= 0:
        raise ValidationError(f"t_max must be positive, got {t_max}")
    if dt <= 0:
        raise ValidationError(f"dt must be positive, got {dt}")
    min_T = min(config.T_L, config.T_R)
    if min_T <= 0:
        raise ValidationError("zero delay: use nonretarded_amplitudes instead of the DDE path")
    if dt > min_T / 8.0 + 1e-15:
        raise ValidationError(
            f"dt = {dt} too large: need dt <= min(T_L, T_R)/8 = {min_T / 8.0:.6g}"
        )

    # same grid formula as compute_trace so solver outputs line up sample-for-sample
    uniform = np.arange(0.0, t_max + 0.5 * dt, dt)
    t_end = float(uniform[-1])
    breaks = []
    two_T = 2.0 * config.T
    m = 0
    while True:
        base = m * two_T
        candidates = [base, base + config.T_L, base + config.T_R] if m > 0 else [
            base + config.T_L,
            base + config.T_R,
        ]
        added = False
        for c in candidates:
            if c < t_end:
                breaks.append(c)
                added = True
        if not added and base >= t_end:
            break
        m += 1
    nodes = np.unique(np.concatenate([uniform, np.asarray(breaks)]))
    # drop near-duplicate nodes (a break can collide with a grid point)
    keep = np.concatenate([[True], np.diff(nodes) > 1e-12 * max(1.0, t_end)])
    nodes = nodes[keep]

    g2 = 0.5 * config.gamma
    coupL = config.beta * cmath.exp(1j * config.phi_L)
    coupR = config.beta * cmath.exp(1j * config.phi_R)
    T_L, T_R = config.T_L, config.T_R

    rec_t0: list[float] = []
    rec = []  # (t0, t1, y0, y1, f0, f1)

    def history(tq: float) -> np.ndarray:
        i = bisect.bisect_right(rec_t0, tq) - 1
        if i < 0:
            i = 0
        t0, t1, y0, y1, f0, f1 = rec[i]
        return _hermite_eval(tq, t0, t1, y0, y1, f0, f1)

    def rhs(tq: float, y: np.ndarray, on_L: bool, on_R: bool) -> np.ndarray:
        d1 = y[0]
        d2 = y[1]
        if on_L:
            d1 = d1 + coupL * history(tq - T_L)[1]
        if on_R:
            d2 = d2 + coupR * history(tq - T_R)[0]
        return np.array([-g2 * d1, -g2 * d2])

    y = np.array([state.c1_0, state.c2_0], dtype=complex)
    for a, b_node in zip(nodes[:-1], nodes[1:]):
        h = b_node - a
        mid = a + 0.5 * h
        on_L = mid > T_L
        on_R = mid > T_R
        f0 = rhs(a, y, on_L, on_R)
        k2 = rhs(mid, y + 0.5 * h * f0, on_L, on_R)
        k3 = rhs(mid, y + 0.5 * h * k2, on_L, on_R)
        k4 = rhs(b_node, y + h * k3, on_L, on_R)
        y_new = y + (h / 6.0) * (f0 + 2.0 * k2 + 2.0 * k3 + k4)
        f1 = rhs(b_node, y_new, on_L, on_R)  # left-limit derivative at the node
        rec_t0.append(a)
        rec.append((a, b_node, y, y_new, f0, f1))
        y = y_new

    c1 = np.empty(uniform.shape, dtype=complex)
    c2 = np.empty(uniform.shape, dtype=complex)
    c1[0], c2[0] = state.c1_0, state.c2_0
    for i, tq in enumerate(uniform[1:], start=1):
        val = history(min(tq, nodes[-1]))
        c1[i], c2[i] = val[0], val[1]
    return AmplitudeTrace(uniform, c1, c2, config, state, method="dde")


@dataclass(frozen=True)
class PoleSet:
    """Laplace-plane poles s_n = -gamma_n and their residues.

    Families '+'/'-' correspond to the two square roots of the characteristic
    equation; within each family the branch index n of the Lambert W selects
    the pole.  Residues carry the initial state.
    """

    n: np.ndarray
    s_plus: np.ndarray
    s_minus: np.ndarray
    alpha1_plus: np.ndarray
    alpha1_minus: np.ndarray
    alpha2_plus: np.ndarray
    alpha2_minus: np.ndarray
    config: SystemConfig
    state: InitialState
    N: int

    def __post_init__(self):
        for name in ("n", "s_plus", "s_minus", "alpha1_plus", "alpha1_minus",
                     "alpha2_plus", "alpha2_minus"):
            object.__setattr__(self, name, _freeze(getattr(self, name)))

    @property
    def gamma_plus(self) -> np.ndarray:
        return -self.s_plus

    @property
    def gamma_minus(self) -> np.ndarray:
        return -self.s_minus

    def tail_estimate(self, t: float) -> float:
        """Magnitude of the outermost retained terms at time t — a proxy for
        the truncation error of the residue sum."""
        est = 0.0
        for alpha, s in (
            (self.alpha1_plus, self.s_plus),
            (self.alpha2_plus, self.s_plus),
            (self.alpha1_minus, self.s_minus),
            (self.alpha2_minus, self.s_minus),
        ):
            for idx in (0, -1):
                est += abs(alpha[idx]) * math.exp(min(s[idx].real * t, 0.0))
        return est


def compute_poles(config: SystemConfig, state: InitialState, N: int = 50) -> PoleSet:
    """Locate the 2(2N+1) poles and residues of the amplitude Laplace transform.

    The pole condition factorizes into w e^w = -/+ X with
    X = (beta*gamma*T/2) e^{gamma*T/2} e^{i*phi}, solved per Lambert-W branch.

    Raises DegeneracyError when a residue denominator 1 + W vanishes
    (coalescing roots at the branch point).
    """
    if config.T <= 0:
        raise ValidationError("pole expansion requires T > 0")
    if config.beta <= 0:
        raise ValidationError("pole expansion requires beta > 0 (poles collapse at beta = 0)")
    if N < 1:
        raise ValidationError(f"N must be >= 1, got {N}")
    gamma, T = config.gamma, config.T
    X = 0.5 * config.beta * gamma * T * cmath.exp(0.5 * gamma * T) * cmath.exp(1j * config.phi)
    ns = np.arange(-N, N + 1)
    s_p = np.empty(ns.size, dtype=complex)
    s_m = np.empty(ns.size, dtype=complex)
    a1p = np.empty(ns.size, dtype=complex)
    a1m = np.empty(ns.size, dtype=complex)
    a2p = np.empty(ns.size, dtype=complex)
    a2m = np.empty(ns.size, dtype=complex)
    c1_0, c2_0 = state.c1_0, state.c2_0
    half_dphi = 0.5 * (config.phi_L - config.phi_R)
    half_dT = 0.5 * (config.T_L - config.T_R)
    res_tol = 1e-9 * max(1.0, abs(X))
    for i, n in enumerate(ns):
        for sign, s_arr, a1_arr, a2_arr in ((+1, s_p, a1p, a2p), (-1, s_m, a1m, a2m)):
            w = lambert_w(int(n), -sign * X)
            if abs(w * cmath.exp(w) + sign * X) > res_tol:
                raise NumericalError(f"pole condition residual too large at n={n}, family {sign:+d}")
            if abs(1.0 + w) < 1e-12:
                raise DegeneracyError(
                    f"degenerate residue denominator 1 + W = {1.0 + w:.3e} at n={n}, "
                    f"family {sign:+d} (coalescing poles)"
                )
            s = -0.5 * gamma + w / T
            gn = -s
            cross = cmath.exp(1j * half_dphi) * cmath.exp(half_dT * gn)
            s_arr[i] = s
            a1_arr[i] = 0.5 * (c1_0 + sign * c2_0 * cross) / (1.0 + w)
            a2_arr[i] = 0.5 * (c2_0 + sign * c1_0 / cross) / (1.0 + w)
    return PoleSet(ns, s_p, s_m, a1p, a1m, a2p, a2m, config, state, N)


def pole_sum_amplitudes(poles: PoleSet, t):
    """Amplitudes from the truncated residue expansion c_m(t) = sum alpha e^{s t}.

    Convergence is slow near t = 0 (the expansion resolves the onset kinks
    only in the large-N limit) and fast after a few round trips; the returned
    values are raw truncated sums, see PoleSet.tail_estimate.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if (t_arr < 0).any():
        raise ValidationError("times must be non-negative")
    Ep = np.exp(np.multiply.outer(t_arr, poles.s_plus))
    Em = np.exp(np.multiply.outer(t_arr, poles.s_minus))
    c1 = Ep @ poles.alpha1_plus + Em @ poles.alpha1_minus
    c2 = Ep @ poles.alpha2_plus + Em @ poles.alpha2_minus
    if np.isscalar(t) or np.ndim(t) == 0:
        return complex(c1[0]), complex(c2[0])
    return c1, c2


def nonretarded_amplitudes(config: SystemConfig, state: InitialState, t):
    """Zero-delay closed form (propagation phases kept, delays dropped).

    c1 = [c1(0) cosh(a) - c2(0) e^{i(phi_L - phi)} sinh(a)] e^{-gamma t/2},
    a = beta*gamma*t*e^{i phi}/2, and symmetrically for c2.  Evaluated as
    (e^{a - gamma t/2} +/- e^{-a - gamma t/2})/2: both exponents have
    non-positive real part for beta <= 1, so nothing overflows.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if (t_arr < 0).any():
        raise ValidationError("times must be non-negative")
    gamma = config.gamma
    a = 0.5 * config.beta * gamma * t_arr * cmath.exp(1j * config.phi)
    c = 0.5 * gamma * t_arr
    e_plus = np.exp(a - c)
    e_minus = np.exp(-a - c)
    cosh_term = 0.5 * (e_plus + e_minus)
    sinh_term = 0.5 * (e_plus - e_minus)
    c1 = state.c1_0 * cosh_term - state.c2_0 * cmath.exp(1j * (config.phi_L - config.phi)) * sinh_term
    c2 = state.c2_0 * cosh_term - state.c1_0 * cmath.exp(1j * (config.phi_R - config.phi)) * sinh_term
    if np.isscalar(t) or np.ndim(t) == 0:
        return complex(c1[0]), complex(c2[0])
    return c1, c2


def decay_rate_trace(trace: AmplitudeTrace):
    """Instantaneous rates Gamma_i(t) = -d ln |c_i|^2 / dt by central differences.

    Requires a dense grid (gamma*dt <= 0.01).  Samples where the population is
    below 1e-12 (or whose difference stencil touches one) come back as NaN.
    """
    dt = trace.dt
    if dt * trace.config.gamma > 0.01 + 1e-12:
        raise ValidationError(
            f"trace too coarse for rates: gamma*dt = {dt * trace.config.gamma:.3g} > 0.01"
        )
    rates = []
    for c in (trace.c1, trace.c2):
        pop = np.abs(c) ** 2
        ok = pop > 1e-12
        logp = np.full(pop.shape, np.nan)
        logp[ok] = np.log(pop[ok])
        r = np.full(pop.shape, np.nan)
        r[1:-1] = -(logp[2:] - logp[:-2]) / (2.0 * dt)
        r[0] = -(logp[1] - logp[0]) / dt
        r[-1] = -(logp[-1] - logp[-2]) / dt
        rates.append(r)
    return rates[0], rates[1]


@dataclass(frozen=True)
class DecayClassification:
    """Per-atom super/sub-radiance verdict for one initial state."""

    labels: tuple
    onsets: tuple
    eval_times: tuple
    rates_at_eval: tuple
    times: np.ndarray = field(repr=False)
    rate1: np.ndarray = field(repr=False)
    rate2: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "times", _freeze(self.times))
        object.__setattr__(self, "rate1", _freeze(self.rate1))
        object.__setattr__(self, "rate2", _freeze(self.rate2))


# rates exactly at the onsets are discontinuous; sample a little after
_CLASSIFY_OFFSET = 0.1
_CLASSIFY_BAND = 0.05


def classify_collective(config: SystemConfig, states) -> list[DecayClassification]:
    """Label each atom superradiant/subradiant/independent for each state.

    The instantaneous rate of atom 1 (2) is evaluated at T_L (T_R) + 0.1/gamma
    — just after the other atom's field arrives — and compared against gamma
    with a +/-5% tolerance band.  Rates inside the band give the label
    "independent" along with a warning, since the collective effect is then
    too weak to call.
    """
    if config.T <= 0:
        raise ValidationError("classification needs nonzero propagation delays")
    gamma = config.gamma
    dt = 0.002 / gamma
    t_end = max(config.T_L, config.T_R) + 0.5 / gamma
    times = np.arange(0.0, t_end + 0.5 * dt, dt)
    out = []
    for st in states:
        c1, c2 = series_amplitudes(config, st, times)
        trace = AmplitudeTrace(times, c1, c2, config, st, method="series")
        r1, r2 = decay_rate_trace(trace)
        evals = (config.T_L + _CLASSIFY_OFFSET / gamma, config.T_R + _CLASSIFY_OFFSET / gamma)
        rates = []
        labels = []
        for atom, (r, t_eval) in enumerate(zip((r1, r2), evals), start=1):
            idx = int(round(t_eval / dt))
            val = float(r[idx])
            rates.append(val)
            if not math.isfinite(val) or abs(val - gamma) <= _CLASSIFY_BAND * gamma:
                warnings.warn(
                    f"atom {atom}: rate {val:.4g} within the tolerance band around gamma; "
                    "labeling independent"
                )
                labels.append("independent")
            elif val > gamma:
                labels.append("superradiant")
            else:
                labels.append("subradiant")
        out.append(
            DecayClassification(
                labels=tuple(labels),
                onsets=(config.T_L, config.T_R),
                eval_times=evals,
                rates_at_eval=tuple(rates),
                times=times,
                rate1=r1,
                rate2=r2,
            )
        )
    return out


def compute_trace(
    config: SystemConfig,
    state: InitialState,
    t_max: float,
    dt: float,
    solver: str = "series",
    n_poles: int = 50,
) -> AmplitudeTrace:
    """Uniform-grid trace via the chosen solver: series | dde | pole_sum | nonretarded."""
    if t_max <= 0:
        raise ValidationError(f"t_max must be positive, got {t_max}")
    if dt <= 0 or dt > t_max:
        raise ValidationError(f"need 0 < dt <= t_max, got dt={dt}")
    if solver == "dde":
        return dde_integrate(config, state, t_max, dt)
    times = np.arange(0.0, t_max + 0.5 * dt, dt)
    if solver == "series":
        c1, c2 = series_amplitudes(config, state, times)
    elif solver == "pole_sum":
        poles = compute_poles(config, state, n_poles)
        c1, c2 = pole_sum_amplitudes(poles, times)
    elif solver == "nonretarded":
        c1, c2 = nonretarded_amplitudes(config, state, times)
    else:
        raise ValidationError(f"unknown solver {solver!r}")
    return AmplitudeTrace(times, c1, c2, config, state, method=solver)
