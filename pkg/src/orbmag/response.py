"""Response function, retarded Green's functions, pole analysis, causality.

The velocity response function in rotating coordinates xi = x + i*y is
alpha(omega) = 1/(-omega^2 - i*omega*gamma + omega*omega_c + omega_0^2).
Its poles lie in the lower half plane for every valid parameter set, which
makes G(t) retarded; check_causality verifies that numerically.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import SingularInput, WrongFamily
from .params import Params, gamma_bar

# Below this, (e^{g+ t} - e^{g- t})/(g+ - g-) loses too many digits and the
# double-root limit form takes over.
_DEGENERACY_RTOL = 1e-8


@dataclass(frozen=True)
class ConfinedRoots:
    """Exponents of the confined Green's function.

    gamma_plus carries the + branch of the principal square root; every
    downstream formula is symmetric under swapping the two. near_degenerate
    marks root separations below 1e-8 relative, where the difference
    quotient form of G must be replaced by its double-root limit.
    """

    gamma_plus: complex
    gamma_minus: complex
    near_degenerate: bool


@dataclass(frozen=True)
class CausalityReport:
    """Residuals of the numerically inverted response function.

    max_residual_causal: max |G_numeric - G_closed| over sampled t > 0.
    max_residual_acausal: max |G_numeric| over sampled t < 0.
    Both shrink as omega_max grows (truncation-tail ~ 1/omega_max).
    """

    max_residual_causal: float
    max_residual_acausal: float
    omega_max: float
    n: int


def response_function(p: Params, omega: float) -> complex:
    """alpha(omega) = 1/(-omega^2 - i*omega*gamma + omega*omega_c + omega_0^2).

    Raises SingularInput when the denominator magnitude is below 1e-30
    (reachable only at omega = 0 for the free family).
    """
    omega = float(omega)
    denom = complex(-omega * omega + omega * p.omega_c + p.omega_0 ** 2,
                    -omega * p.gamma)
    if abs(denom) < 1e-30:
        raise SingularInput(
            f"response function pole at omega={omega!r}; evaluate by limit")
    return 1.0 / denom


def green_free(p: Params, t: float) -> complex:
    """Retarded Green's function without a trap: (1 - e^{-gb*t})/gb,
    gb = gamma + i*omega_c. Exactly 0 for t <= 0."""
    if p.omega_0 != 0.0:
        raise WrongFamily("green_free requires omega_0 = 0; "
                          "use green_confined")
    if t <= 0.0:
        return 0.0 + 0.0j
    gb = gamma_bar(p)
    return (1.0 - cmath.exp(-gb * t)) / gb


def poles_confined(p: Params) -> ConfinedRoots:
    """Both exponents gamma_pm = (-gb pm sqrt(gb^2 - 4*omega_0^2))/2.

    The smaller-magnitude root is recomputed as omega_0^2 / (larger root)
    so that tiny omega_0 does not lose it to cancellation; the labels still
    record which root carries the + branch of the square root.
    """
    if p.omega_0 <= 0.0:
        raise WrongFamily("poles_confined requires omega_0 > 0")
    gb = gamma_bar(p)
    s = cmath.sqrt(gb * gb - 4.0 * p.omega_0 ** 2)
    r_plus = 0.5 * (-gb + s)
    r_minus = 0.5 * (-gb - s)
    w0sq = p.omega_0 ** 2
    if abs(r_plus) < abs(r_minus):
        r_plus = w0sq / r_minus
    else:
        r_minus = w0sq / r_plus
    near = abs(r_plus - r_minus) < _DEGENERACY_RTOL * abs(gb)
    return ConfinedRoots(gamma_plus=r_plus, gamma_minus=r_minus,
                         near_degenerate=near)


def green_confined(p: Params, t: float) -> complex:
    """Retarded Green's function with a trap:
    (e^{g+ t} - e^{g- t})/(g+ - g-), or its double-root limit
    t*e^{-gb*t/2} when the roots nearly coincide. Exactly 0 for t <= 0."""
    if p.omega_0 == 0.0:
        raise WrongFamily("green_confined requires omega_0 > 0; "
                          "use green_free")
    if t <= 0.0:
        return 0.0 + 0.0j
    roots = poles_confined(p)
    if roots.near_degenerate:
        return t * cmath.exp(-0.5 * gamma_bar(p) * t)
    return ((cmath.exp(roots.gamma_plus * t) - cmath.exp(roots.gamma_minus * t))
            / (roots.gamma_plus - roots.gamma_minus))


def _green_closed(p: Params, t: float) -> complex:
    if p.omega_0 == 0.0:
        return green_free(p, t)
    return green_confined(p, t)


def check_causality(p: Params, omega_max: float = 500.0,
                    n: int = 65536) -> CausalityReport:
    """Invert alpha(omega) numerically and compare against the closed G(t).

    The contour is shifted up by eps = 10*d_omega (alpha is analytic in the
    upper half plane, so the shift is harmless and kills the wrap-around of
    the truncated transform); the inverse carries the compensating e^{eps*t}.
    Samples t in +-[0.05, 2]; for t > 0 reports the max deviation from the
    closed form, for t < 0 the max magnitude (must be ~0: retardation).
    """
    omega_max = float(omega_max)
    n = int(n)
    w = np.linspace(-omega_max, omega_max, n)
    dw = w[1] - w[0]
    eps = 10.0 * dw
    z = w + 1j * eps
    alpha = 1.0 / (-z * z - 1j * z * p.gamma + z * p.omega_c + p.omega_0 ** 2)
    t_pos = np.linspace(0.05, 2.0, 40)
    t_all = np.concatenate([-t_pos, t_pos])
    # trapezoid over omega for each t; uniform grid so the rule is a plain
    # weighted sum with half-weight endpoints
    phase = np.exp(-1j * np.outer(t_all, w))
    wts = np.full(n, dw)
    wts[0] *= 0.5
    wts[-1] *= 0.5
    g_num = (phase * (alpha * wts)).sum(axis=1) / (2.0 * np.pi)
    g_num *= np.exp(eps * t_all)
    g_closed = np.array([_green_closed(p, float(t)) for t in t_all])
    resid = np.abs(g_num - g_closed)
    neg = resid[: len(t_pos)]  # closed form is 0 there, so resid = |G_num|
    pos = resid[len(t_pos):]
    return CausalityReport(max_residual_causal=float(pos.max()),
                           max_residual_acausal=float(neg.max()),
                           omega_max=omega_max, n=n)
