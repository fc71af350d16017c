"""Multi-branch complex Lambert W.

Solves w * exp(w) = z for the branch-n root, by Halley iteration from a
branch-aware seed.  Conventions follow the standard branch layout (principal
log bands; counterclockwise continuity on the cuts), so values agree with
other common implementations.
"""

from __future__ import annotations

import cmath
import math

from .errors import NumericalError, ValidationError

_E = math.e
_STEP_TOL = 1e-13
_RESIDUAL_TOL = 1e-12
_MAX_ITER = 64
# radius around the branch point -1/e where the square-root series seed is used
_BP_RADIUS = 0.3


def _seed(n: int, z: complex) -> complex:
    near_bp = abs(z + 1.0 / _E) < _BP_RADIUS
    if near_bp and (n == 0 or n == -1 or n == 1):
        # two sheets meet at z = -1/e: w = -1 +/- p with p -> 0
        p = cmath.sqrt(2.0 * (_E * z + 1.0))
        if n == 0:
            pass  # +p sheet
        elif n == -1 and z.imag >= 0.0:
            p = -p  # -p sheet is branch -1 on and above the real axis
        elif n == 1 and z.imag < 0.0:
            p = -p  # ... and branch +1 below it
        else:
            return _asymptotic_seed(n, z)
        return -1.0 + p - p * p / 3.0 + (11.0 / 72.0) * p**3

    if n == 0:
        if abs(z) <= 3.0:
            # Pade-type rational fit, good start anywhere in the moderate disk
            num = z * (60.0 + 114.0 * z + 17.0 * z * z)
            den = 60.0 + 174.0 * z + 101.0 * z * z
            if den != 0:
                return num / den
        return _asymptotic_seed(0, z)

    if n == -1 and z.imag == 0.0 and -1.0 / _E < z.real < 0.0:
        # real branch: W_-1 in [-1/e, 0) is real; keep the seed on the axis
        lz = math.log(-z.real)
        return complex(lz - math.log(-lz), 0.0)

    return _asymptotic_seed(n, z)


def _asymptotic_seed(n: int, z: complex) -> complex:
    L = cmath.log(z) + 2j * math.pi * n
    return L - cmath.log(L)


def lambert_w(n: int, z: complex) -> complex:
    """Branch-n Lambert W of z.

    Parameters
    ----------
    n : branch index (any integer).
    z : complex argument.

    Raises
    ------
    ValidationError
        for z = 0 on a branch other than 0 (W diverges there).
    NumericalError
        if the iteration fails to reach |w e^w - z| <= 1e-12 * max(1, |z|).
    """
    z = complex(z)
    if z == 0:
        if n == 0:
            return 0.0 + 0.0j
        raise ValidationError(f"W_{n}(0) diverges; only the principal branch is finite at 0")

    w = _seed(n, z)
    tol_res = _RESIDUAL_TOL * max(1.0, abs(z))
    for _ in range(_MAX_ITER):
        ew = cmath.exp(w)
        f = w * ew - z
        if abs(f) <= 0.25 * tol_res:
            return w
        # Halley step: quadratic correction of Newton via f''/2f'
        wp1 = w + 1.0
        denom = ew * wp1 - f * (w + 2.0) / (2.0 * wp1) if wp1 != 0 else ew * wp1
        if denom == 0:
            raise NumericalError(f"degenerate Halley denominator at w={w} for W_{n}({z})")
        dw = f / denom
        w -= dw
        if abs(dw) <= _STEP_TOL * max(1.0, abs(w)):
            break

    residual = abs(w * cmath.exp(w) - z)
    if residual > tol_res:
        raise NumericalError(
            f"lambert_w failed for branch {n}, z={z}: residual {residual:.3e} "
            f"exceeds {tol_res:.3e}"
        )
    return w
